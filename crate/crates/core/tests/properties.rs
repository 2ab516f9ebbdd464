//! Property tests for the polynomial arithmetic and the partition-of-unity
//! machinery: ring axioms on sampled values, shift composition, the
//! finite-difference derivative oracle, serialization round-trips, the
//! coefficient/sampling equivalence, factorization reconstruction, and the
//! smoothness cap.

use num_complex::Complex64;
use proptest::prelude::*;

use pouwin::constructions::{
    build_inductive, build_n2, build_p1, dual_coeffs_window, same_support_dual_pair,
    sine_power_dual_pair, sine_squared_base,
};
use pouwin::pou::{
    coefficient_pou_check, factorize, sampled_pou_check, sine_factor, smoothness_order, Window,
};
use pouwin::TrigPoly;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// An arbitrary complex polynomial with small period and band.
fn arb_poly() -> impl Strategy<Value = TrigPoly> {
    (
        1u64..=6,
        prop::collection::vec((-8i64..=8, -2.0f64..2.0, -2.0f64..2.0), 1..6),
    )
        .prop_map(|(period, entries)| {
            TrigPoly::new(period, entries.into_iter().map(|(k, re, im)| (k, c(re, im))))
                .unwrap()
        })
}

/// A real-on-reals polynomial: random real mean plus conjugate-symmetric
/// coefficient pairs.
fn arb_real_poly() -> impl Strategy<Value = TrigPoly> {
    (
        1u64..=6,
        -2.0f64..2.0,
        prop::collection::vec((1i64..=8, -2.0f64..2.0, -2.0f64..2.0), 0..5),
    )
        .prop_map(|(period, mean, entries)| {
            let mut coeffs = vec![(0i64, c(mean, 0.0))];
            for (k, re, im) in entries {
                coeffs.push((k, c(re, im)));
                coeffs.push((-k, c(re, -im)));
            }
            TrigPoly::new(period, coeffs).unwrap()
        })
}

proptest! {
    #[test]
    fn product_evaluates_pointwise(p in arb_poly(), q in arb_poly(), x in -5.0f64..5.0) {
        let prod = p.mul(&q);
        let lhs = prod.evaluate(x);
        let rhs = p.evaluate(x) * q.evaluate(x);
        let scale = 1.0 + p.evaluate(x).norm() * q.evaluate(x).norm();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn sum_evaluates_pointwise(p in arb_poly(), q in arb_poly(), x in -5.0f64..5.0) {
        let lhs = p.add(&q).evaluate(x);
        let rhs = p.evaluate(x) + q.evaluate(x);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn shifts_compose(p in arb_poly(), m in -6i64..=6, n in -6i64..=6) {
        let twice = p.shift_integer(m).shift_integer(n);
        let once = p.shift_integer(m + n);
        for (k, v) in once.coeffs() {
            prop_assert!((twice.coeff(k) - v).norm() <= 1e-12);
        }
        for (k, v) in twice.coeffs() {
            prop_assert!((once.coeff(k) - v).norm() <= 1e-12);
        }
    }

    #[test]
    fn rescale_preserves_evaluation(p in arb_poly(), factor in 1u64..=5) {
        let target = p.period() * factor;
        let q = p.rescale_period(target).unwrap();
        for i in 0..50 {
            let x = -4.0 + 0.17 * i as f64;
            prop_assert!((q.evaluate(x) - p.evaluate(x)).norm() <= 1e-12);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact(p in arb_poly()) {
        let json = serde_json::to_string(&p).unwrap();
        let back: TrigPoly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn derivative_matches_finite_differences(p in arb_real_poly(), j in 0u32..=4, x0 in -2.0f64..2.0) {
        let t = p.period() as f64;
        let h = 1e-4 * t;
        let exact = p.derivative_at(j, x0);
        let fd = central_difference(&p, j, x0, h);
        // scale-aware bound: 1e-4 relative against the natural derivative
        // magnitude, plus the roundoff floor of the stencil itself
        let coeff_sum: f64 = p.coeffs().map(|(_, v)| v.norm()).sum();
        let natural = coeff_sum
            * (std::f64::consts::TAU * p.band() as f64 / t).powi(j as i32);
        let roundoff = 32.0 * 2f64.powi(j as i32) * coeff_sum * f64::EPSILON / h.powi(j as i32);
        let tol = 1e-4 * (1.0 + natural) + roundoff;
        prop_assert!(
            (fd - exact).norm() <= tol,
            "j={} fd={} exact={} tol={:.3e}", j, fd, exact, tol
        );
    }

    /// Both directions of the coefficient ⟺ sampled-partition-of-unity
    /// equivalence, on exact and perturbed random polynomials.
    #[test]
    fn pou_checks_agree(
        n in 2u64..=5,
        entries in prop::collection::vec((1i64..=8, -1.0f64..1.0, -1.0f64..1.0), 0..5),
        perturb in prop::option::of((0.9f64..1.5, prop::bool::ANY)),
    ) {
        let mut coeffs = vec![(0i64, c(1.0 / n as f64, 0.0))];
        for (k, re, im) in entries {
            if k % n as i64 == 0 {
                continue;
            }
            coeffs.push((k, c(re, im)));
            coeffs.push((-k, c(re, -im)));
        }
        if let Some((delta, hit_mean)) = perturb {
            if hit_mean {
                coeffs.push((0, c(delta * 1e-3, 0.0)));
            } else {
                coeffs.push((n as i64, c(delta, 0.0)));
                coeffs.push((-(n as i64), c(delta, 0.0)));
            }
        }
        let p = TrigPoly::new(n, coeffs).unwrap();
        let by_coeffs = coefficient_pou_check(&p, n, 1e-9).unwrap();
        let residual = sampled_pou_check(&Window::new(p, n).unwrap(), 400);
        prop_assert_eq!(by_coeffs, residual <= 1e-9, "residual {}", residual);
    }
}

fn binom(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc
}

/// j-th order central difference with step h.
fn central_difference(p: &TrigPoly, j: u32, x0: f64, h: f64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for i in 0..=j {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let offset = j as f64 / 2.0 - i as f64;
        acc += p.evaluate(x0 + offset * h) * (sign * binom(j, i));
    }
    acc / h.powi(j as i32)
}

/// The constructed partition-of-unity family used by the deterministic
/// invariants below.
fn pou_family() -> Vec<(TrigPoly, u64)> {
    let q = sine_squared_base(2);
    let mut family = vec![(q.clone(), 2)];
    for l in 2..=4 {
        family.push((build_n2(&q, l).unwrap(), 2));
    }
    for n in [3u64, 4, 5] {
        let p1 = build_p1(n).unwrap();
        let p2 = build_inductive(&p1, n).unwrap();
        family.push((p1, n));
        family.push((p2, n));
    }
    family
}

#[test]
fn factorization_reconstructs_every_family_member() {
    for (p, n) in pou_family() {
        let w = Window::new(p.clone(), n).unwrap();
        let order = smoothness_order(&w).unwrap().order;
        assert!(order >= 2);
        let max_p = (0..50)
            .map(|i| p.evaluate(n as f64 * i as f64 / 50.0).norm())
            .fold(0.0, f64::max);
        for l in 1..=order {
            let cofactor = factorize(&p, n, l).unwrap();
            let rebased = p.rescale_period(p.period().max(n)).unwrap_or_else(|_| p.clone());
            // band contract: indices of A_L within [-K, K-L]
            let (kmin, kmax) = rebased.index_range().unwrap();
            let k_band = kmin.abs().max(kmax.abs());
            let (alo, ahi) = cofactor.index_range().unwrap();
            assert!(alo >= -k_band && ahi <= k_band - l as i64, "band contract");

            let reconstructed = sine_factor(n).pow(l).mul(&cofactor);
            for i in 0..50 {
                let x = n as f64 * i as f64 / 50.0;
                let diff = (reconstructed.evaluate(x) - p.evaluate(x)).norm();
                assert!(
                    diff <= 1e-9 * max_p.max(1e-30),
                    "reconstruction residual {diff:.3e} for N={n}, L={l}"
                );
            }
        }
    }
}

#[test]
fn smoothness_respects_vandermonde_cap() {
    for (p, n) in pou_family() {
        let report = smoothness_order(&Window::new(p, n).unwrap()).unwrap();
        assert!(
            report.order <= report.cap,
            "order {} above cap {} for N = {n}",
            report.order,
            report.cap
        );
    }
}

#[test]
fn smoothness_order_is_scale_invariant() {
    for (p, n) in pou_family() {
        let base = smoothness_order(&Window::new(p.clone(), n).unwrap())
            .unwrap()
            .order;
        for s in [0.5, 2.0, -2.0, 10.0, 1e-3, 1e3] {
            let scaled = smoothness_order(&Window::new(p.scale_real(s), n).unwrap())
                .unwrap()
                .order;
            assert_eq!(scaled, base, "scale {s} changed the order at N = {n}");
        }
    }
}

#[test]
fn dual_window_map_is_affine_in_the_coefficients() {
    let g = Window::new(build_n2(&sine_squared_base(2), 2).unwrap(), 2).unwrap();
    let b = 0.25;
    let a1 = [0.25, 0.25, 0.25];
    let a2 = [0.1, 0.25, 0.4];
    let mid = [0.175, 0.25, 0.325];
    let h1 = dual_coeffs_window(&g, b, &a1).unwrap();
    let h2 = dual_coeffs_window(&g, b, &a2).unwrap();
    let hm = dual_coeffs_window(&g, b, &mid).unwrap();
    assert_eq!(h1.pieces().len(), hm.pieces().len());
    for ((p1, p2), pm) in h1
        .pieces()
        .iter()
        .zip(h2.pieces())
        .zip(hm.pieces())
    {
        assert_eq!((p1.lo, p1.len), (pm.lo, pm.len));
        for (k, v) in pm.poly.coeffs() {
            let avg = (p1.poly.coeff(k) + p2.poly.coeff(k)) / 2.0;
            assert!((avg - v).norm() <= 1e-13);
        }
    }
}

#[test]
fn sine_power_pairs_periodize_products_to_b() {
    for (n, l1, l2) in [(3u64, 1u32, 1u32), (4, 1, 2), (5, 2, 2), (6, 2, 3)] {
        let b = 1.0 / n as f64;
        let pair = sine_power_dual_pair(n, l1, l2, b).unwrap();
        let g = pair.g.single_piece().unwrap();
        let h = pair.h.single_piece().unwrap();
        let product = Window::new(g.poly.mul(&h.poly), n).unwrap();
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            let sum = product.periodization(x);
            assert!(
                (sum - c(b, 0.0)).norm() <= 1e-12,
                "periodized product off b at N={n}, x={x}"
            );
        }
    }
}

#[test]
fn same_support_products_periodize_to_b() {
    for (l1, l2, b) in [(1u32, 1u32, 0.5), (2, 2, 0.5), (1, 2, 0.25)] {
        let pair = same_support_dual_pair(l1, l2, b).unwrap();
        let g = pair.g.single_piece().unwrap();
        let h = pair.h.single_piece().unwrap();
        let product = Window::new(g.poly.mul(&h.poly), 2).unwrap();
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            assert!((product.periodization(x) - c(b, 0.0)).norm() <= 1e-12);
        }
    }
}
