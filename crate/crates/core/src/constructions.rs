//! The window families: the binomial construction on `[0,2]`, the seed and
//! inductive step for `N >= 3`, sine-power windows, and the dual/tight
//! Gabor pair formulas built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pou::{coefficient_pou_check, sampled_pou_check, Window, DEFAULT_POU_TOL};
use crate::trigpoly::TrigPoly;

/// Largest power accepted by the constructions; keeps every binomial
/// coefficient (up to `C(31, 15)`) exact in 64-bit integers.
pub const MAX_POWER: u32 = 15;

/// Grid used when a construction has to verify a partition-of-unity
/// precondition by sampling.
const PRECHECK_GRID: usize = 1000;

/// A candidate dual pair of Gabor windows `(g, h)` with modulation step `b`
/// and translation step fixed at 1.
///
/// Invariants expected by the verification routines: both windows are
/// real-valued on ℝ and `b > 0`. Dual windows built from translate sums
/// (`dual_coeffs_window`) carry an offset support such as `[-N+1, 2N-1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPair {
    pub g: Window,
    pub h: Window,
    pub b: f64,
}

/// Exact binomial coefficient; callers keep `n <= 2 * MAX_POWER + 1`.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

fn check_power(l: u32, context: &'static str) -> Result<()> {
    if l == 0 || l > MAX_POWER {
        return Err(Error::PowerOutOfRange {
            l,
            max: MAX_POWER,
            context,
        });
    }
    Ok(())
}

/// `sin²(πx/N)` as the period-`N` polynomial `{-1: -1/4, 0: 1/2, 1: -1/4}`.
pub fn sine_squared_base(n: u64) -> TrigPoly {
    assert!(n >= 1);
    TrigPoly::new(
        n,
        [
            (-1, Complex64::new(-0.25, 0.0)),
            (0, Complex64::new(0.5, 0.0)),
            (1, Complex64::new(-0.25, 0.0)),
        ],
    )
    .expect("positive period")
}

/// `sin^L(πx/N)` in the period-`2N` basis, via the binomial expansion of
/// `((w - w⁻¹)/2i)^L` with `w = e^{πix/N}`. Indices run over
/// `{-L, -L+2, ..., L}`.
pub fn sine_power_poly(n: u64, l: u32) -> TrigPoly {
    assert!(n >= 1 && l >= 1 && l <= MAX_POWER);
    let mag = 2f64.powi(-(l as i32));
    // (2i)^{-L} = 2^{-L} · i^{-L}
    let inv_2i = match l % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, -mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, mag),
    };
    TrigPoly::new(
        2 * n,
        (0..=l).map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = inv_2i * sign * binomial(l as u64, j as u64) as f64;
            ((l as i64) - 2 * j as i64, coeff)
        }),
    )
    .expect("positive period")
}

/// The binomial construction on `[0, 2]`:
/// `P = Q^L(x) · Σ_{k=0}^{L-1} C(2L-1, k) Q^{L-1-k}(x) Q^k(x+1)`.
///
/// `Q` must be pointwise 2-periodic, real on ℝ, and satisfy the coefficient
/// partition-of-unity condition for `N = 2`. The result again satisfies the
/// partition of unity on `[0, 2]`, and when `Q·χ_[0,2]` is `C¹` the cut-off
/// of the result is `C^{2L-1}`. That smoothness hypothesis on `Q` is not
/// enforced here; rougher seeds still yield valid partitions of unity.
pub fn build_n2(q: &TrigPoly, l: u32) -> Result<TrigPoly> {
    check_power(l, "binomial construction requires 1 <= L")?;
    q.require_real_on_reals()?;
    if !coefficient_pou_check(q, 2, DEFAULT_POU_TOL)? {
        let residual = sampled_pou_check(&Window::new(q.clone(), 2)?, PRECHECK_GRID);
        return Err(Error::PartitionOfUnityViolated {
            residual,
            tolerance: DEFAULT_POU_TOL,
        });
    }

    let shifted = q.shift_integer(1);
    let mut bracket = TrigPoly::zero(q.period())?;
    for k in 0..l {
        let weight = binomial(2 * l as u64 - 1, k as u64) as f64;
        let term = q.pow(l - 1 - k).mul(&shifted.pow(k)).scale_real(weight);
        bracket = bracket.add(&term);
    }
    Ok(q.pow(l).mul(&bracket))
}

/// The normalized seed polynomial for `N >= 3`:
/// `P₁(x) = c · Π_{k=0}^{K} sin²(π(x-k)/N)` with
/// `c⁻¹ = Σ_{n=K+1}^{N-1} Π_{k=0}^{K} sin²(π(n-k)/N)` and `K = N/2`
/// (even `N`) or `(N-1)/2` (odd `N`). Vanishes at the integers `0..=K` and
/// its cut-off to `[0, N]` is a `C¹` partition of unity.
pub fn build_p1(n: u64) -> Result<TrigPoly> {
    if n < 3 {
        return Err(Error::SupportTooShort { n, min: 3 });
    }
    let k_max = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
    let base = sine_squared_base(n);
    let mut product = base.clone();
    for k in 1..=k_max {
        product = product.mul(&base.shift_integer(-(k as i64)));
    }
    let norm: f64 = (k_max + 1..n)
        .map(|m| product.evaluate(m as f64).re)
        .sum();
    Ok(product.scale_real(1.0 / norm))
}

/// One induction step that preserves the partition of unity and raises the
/// attainable smoothness by two orders:
///
/// - even `N`: `P(x) · (P(x) + 2 Σ_{n=1}^{K-1} P(x+n) + P(x+K))`
/// - odd `N`:  `P(x) · (P(x) + 2 Σ_{n=1}^{K} P(x+n))`
pub fn build_inductive(p_prev: &TrigPoly, n: u64) -> Result<TrigPoly> {
    if n < 3 {
        return Err(Error::SupportTooShort { n, min: 3 });
    }
    if !p_prev.is_pointwise_periodic(n) {
        let index = p_prev
            .coeffs()
            .map(|(k, _)| k)
            .find(|&k| (k as i128 * n as i128) % p_prev.period() as i128 != 0)
            .unwrap_or(0);
        return Err(Error::NotPeriodic {
            period: p_prev.period(),
            n,
            index,
        });
    }
    p_prev.require_real_on_reals()?;
    let residual = sampled_pou_check(&Window::new(p_prev.clone(), n)?, PRECHECK_GRID);
    if residual > DEFAULT_POU_TOL {
        return Err(Error::PartitionOfUnityViolated {
            residual,
            tolerance: DEFAULT_POU_TOL,
        });
    }

    let k_max = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
    let mut bracket = p_prev.clone();
    if n % 2 == 0 {
        for j in 1..k_max {
            bracket = bracket.add(&p_prev.shift_integer(j as i64).scale_real(2.0));
        }
        bracket = bracket.add(&p_prev.shift_integer(k_max as i64));
    } else {
        for j in 1..=k_max {
            bracket = bracket.add(&p_prev.shift_integer(j as i64).scale_real(2.0));
        }
    }
    Ok(p_prev.mul(&bracket))
}

/// The window `amplitude · sin^L(πx/N) · χ_[0,N]`, carried on the
/// period-`2N` basis.
pub fn sine_power(n: u64, l: u32, amplitude: f64) -> Result<Window> {
    check_power(l, "sine power requires 1 <= L")?;
    if !(amplitude > 0.0) {
        return Err(Error::NonpositiveAmplitude { amplitude });
    }
    if n == 0 {
        return Err(Error::InvalidPeriod);
    }
    Window::new(sine_power_poly(n, l).scale_real(amplitude), n)
}

/// Builds the dual window `h(x) = Σ_{n=-N+1}^{N-1} a_n g(x+n)` for a window
/// `g` supported on `[0, N]` whose translates form a partition of unity.
///
/// Requirements: `0 < b <= 1/(2N-1)`, `a` holds the `2N-1` coefficients
/// indexed `n = -N+1..N-1` in ascending order, `a_0 = b`, and
/// `a_n + a_{-n} = 2b` for `n = 1..N-1`. The resulting window has support
/// inside `[-N+1, 2N-1]` and `(g, h, b)` satisfies the duality conditions.
pub fn dual_coeffs_window(g: &Window, b: f64, a: &[f64]) -> Result<Window> {
    let piece = g.single_piece().ok_or(Error::MultiPieceWindow {
        pieces: g.pieces().len(),
    })?;
    let n = piece.len;
    let expected_len = (2 * n - 1) as usize;
    if a.len() != expected_len {
        return Err(Error::DualCoefficients {
            detail: format!(
                "need {expected_len} coefficients for N = {n} (indices -{}..{}), got {}",
                n - 1,
                n - 1,
                a.len()
            ),
        });
    }
    let b_max = 1.0 / (2 * n - 1) as f64;
    if !(b > 0.0 && b <= b_max) {
        return Err(Error::ModulationStep {
            b,
            required: format!("0 < b <= 1/(2N-1) = {b_max}"),
        });
    }
    let residual = sampled_pou_check(g, PRECHECK_GRID);
    if residual > DEFAULT_POU_TOL {
        return Err(Error::PartitionOfUnityViolated {
            residual,
            tolerance: DEFAULT_POU_TOL,
        });
    }
    let center = (n - 1) as usize;
    if (a[center] - b).abs() > 1e-12 {
        return Err(Error::DualCoefficients {
            detail: format!("a_0 = {} must equal b = {b}", a[center]),
        });
    }
    for j in 1..n as usize {
        let sum = a[center + j] + a[center - j];
        if (sum - 2.0 * b).abs() > 1e-12 {
            return Err(Error::DualCoefficients {
                detail: format!(
                    "a_{j} + a_-{j} = {sum} must equal 2b = {}",
                    2.0 * b
                ),
            });
        }
    }

    let mut pieces = Vec::new();
    for (idx, &an) in a.iter().enumerate() {
        if an == 0.0 {
            continue;
        }
        let shift = idx as i64 - center as i64;
        pieces.extend(g.translate(shift).scale(an).pieces().to_vec());
    }
    Window::from_pieces(pieces)
}

/// A dual pair on `[0, 2]` with no support growth:
/// `g = sin^{2L₁}(πx/2)·χ` and
/// `h = b·sin^{2L₂}(πx/2)·(Σ_{k=0}^{L₁+L₂-1} C(2L₁+2L₂-1, k) Q^{L₁+L₂-1-k}(x) Q^k(x+1))·χ`
/// with `Q = sin²(πx/2)`, valid for `0 < b <= 1/2`.
pub fn same_support_dual_pair(l1: u32, l2: u32, b: f64) -> Result<DualPair> {
    check_power(l1, "same-support pair requires 1 <= L1")?;
    check_power(l2, "same-support pair requires 1 <= L2")?;
    check_power(l1 + l2, "same-support pair requires L1 + L2")?;
    if !(b > 0.0 && b <= 0.5) {
        return Err(Error::ModulationStep {
            b,
            required: "0 < b <= 1/2".to_string(),
        });
    }
    let q = sine_squared_base(2);
    let shifted = q.shift_integer(1);
    let l = l1 + l2;
    let mut bracket = TrigPoly::zero(2)?;
    for k in 0..l {
        let weight = binomial(2 * l as u64 - 1, k as u64) as f64;
        bracket = bracket.add(&q.pow(l - 1 - k).mul(&shifted.pow(k)).scale_real(weight));
    }
    let g = Window::new(q.pow(l1), 2)?;
    let h = Window::new(q.pow(l2).mul(&bracket).scale_real(b), 2)?;
    Ok(DualPair { g, h, b })
}

/// The even sine-power dual pair on `[0, N]`:
/// `g = sin^{2L₁}(πx/N)·χ` and
/// `h = (b·4^{L₁+L₂} / (N·C(2(L₁+L₂), L₁+L₂))) · sin^{2L₂}(πx/N)·χ`,
/// valid for `1 <= L₁+L₂ <= N-1` and `0 < b <= 1/N`.
pub fn sine_power_dual_pair(n: u64, l1: u32, l2: u32, b: f64) -> Result<DualPair> {
    check_power(l1, "sine-power pair requires 1 <= L1")?;
    check_power(l2, "sine-power pair requires 1 <= L2")?;
    let l = l1 + l2;
    if l as u64 > n - 1 {
        return Err(Error::PowerOutOfRange {
            l,
            max: (n - 1).min(u32::MAX as u64) as u32,
            context: "sine-power dual pair requires 1 <= L1 + L2 <= N-1",
        });
    }
    let b_max = 1.0 / n as f64;
    if !(b > 0.0 && b <= b_max) {
        return Err(Error::ModulationStep {
            b,
            required: format!("0 < b <= 1/N = {b_max}"),
        });
    }
    let base = sine_squared_base(n);
    let amplitude = b * 4f64.powi(l as i32) / (n as f64 * binomial(2 * l as u64, l as u64) as f64);
    let g = Window::new(base.pow(l1), n)?;
    let h = Window::new(base.pow(l2).scale_real(amplitude), n)?;
    Ok(DualPair { g, h, b })
}

/// The tight-frame generator
/// `g = sqrt(b·4^L / (N·C(2L, L))) · sin^L(πx/N) · χ_[0,N]` for
/// `1 <= L <= N-1` and `0 < b <= 1/N`. Its squared translates periodize to
/// the constant `b`, so the painless frame bounds are `A = B = 1`.
pub fn tight_window(n: u64, l: u32, b: f64) -> Result<Window> {
    if n == 0 {
        return Err(Error::InvalidPeriod);
    }
    if l == 0 || l as u64 > n - 1 {
        return Err(Error::PowerOutOfRange {
            l,
            max: (n - 1).min(u32::MAX as u64) as u32,
            context: "tight window requires 1 <= L <= N-1",
        });
    }
    check_power(l, "tight window requires L")?;
    let b_max = 1.0 / n as f64;
    if !(b > 0.0 && b <= b_max) {
        return Err(Error::ModulationStep {
            b,
            required: format!("0 < b <= 1/N = {b_max}"),
        });
    }
    let amplitude =
        (b * 4f64.powi(l as i32) / (n as f64 * binomial(2 * l as u64, l as u64) as f64)).sqrt();
    sine_power(n, l, amplitude)
}
