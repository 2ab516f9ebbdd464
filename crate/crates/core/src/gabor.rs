//! Verification of the duality conditions for candidate Gabor window
//! pairs, painless frame-bound estimation, desk-scale analysis/synthesis,
//! and the probe showing that no dual pair of cut-off periodic windows
//! exists once the modulation step exceeds `1/N`.
//!
//! With translation step 1 and modulation step `b`, the pair `(g, h)`
//! generates dual frames iff for every integer shift `n`
//!
//! ```text
//! Σ_k conj(g(x + n/b + k)) · h(x + k) = b·δ_{n,0}   for a.e. x.
//! ```
//!
//! For compactly supported windows each sum is finite and the `n ≠ 0`
//! conditions hold automatically once `b` is small enough, which reduces
//! duality to a scaled partition-of-unity identity for the product `g·h`.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constructions::DualPair;
use crate::error::{Error, Result};
use crate::pou::Window;
use crate::trigpoly::TrigPoly;

/// Per-shift residuals of the duality conditions on a sample grid.
///
/// `shift_residuals[i] = (n, max_x |Σ_k conj(g(x+n/b+k)) h(x+k) - b·δ_{n,0}|)`.
/// The grid is offset by half a step so that it avoids integers and the
/// points `n/b mod 1`, where the almost-everywhere identity may differ from
/// the closed-interval endpoint convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub b: f64,
    pub grid_points: usize,
    pub n_range: (i64, i64),
    pub shift_residuals: Vec<(i64, f64)>,
}

impl DualityReport {
    pub fn residual(&self, n: i64) -> Option<f64> {
        self.shift_residuals
            .iter()
            .find(|&&(m, _)| m == n)
            .map(|&(_, r)| r)
    }

    pub fn max_residual(&self) -> f64 {
        self.shift_residuals
            .iter()
            .map(|&(_, r)| r)
            .fold(0.0, f64::max)
    }

    /// Largest residual among the `n ≠ 0` conditions.
    pub fn off_diagonal_max(&self) -> f64 {
        self.shift_residuals
            .iter()
            .filter(|&&(n, _)| n != 0)
            .map(|&(_, r)| r)
            .fold(0.0, f64::max)
    }

    pub fn is_dual(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Painless-case frame bound estimates `A <= B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
    pub grid_points: usize,
}

/// Evaluates the duality conditions for every `|n| <= n_max` (extended
/// automatically so all shifts with possible support overlap are covered)
/// and reports the per-shift residuals. The pair is dual when all residuals
/// are below the caller's tolerance.
pub fn duality_residual(pair: &DualPair, grid_points: usize, n_max: i64) -> Result<DualityReport> {
    if !(pair.b > 0.0) {
        return Err(Error::ModulationStep {
            b: pair.b,
            required: "b > 0".to_string(),
        });
    }
    assert!(grid_points >= 16, "need at least 16 grid points");

    let b = pair.b;
    let (g_lo, g_hi) = pair.g.support();
    let (h_lo, h_hi) = pair.h.support();
    let span_total = ((g_hi - g_lo) + (h_hi - h_lo)) as f64;
    let n_reach = n_max.max((b * span_total).ceil() as i64);

    let mut shift_residuals = Vec::with_capacity((2 * n_reach + 1) as usize);
    for n in -n_reach..=n_reach {
        let target = if n == 0 { b } else { 0.0 };
        let shift = n as f64 / b;
        let mut worst = 0.0f64;
        for j in 0..grid_points {
            let x = (j as f64 + 0.5) / grid_points as f64;
            let mut sum = Complex64::ZERO;
            for k in h_lo..h_hi {
                let xh = x + k as f64;
                let xg = xh + shift;
                if xg < g_lo as f64 || xg >= g_hi as f64 {
                    continue;
                }
                sum += pair.g.evaluate_halfopen(xg).conj() * pair.h.evaluate_halfopen(xh);
            }
            worst = worst.max((sum - Complex64::new(target, 0.0)).norm());
        }
        shift_residuals.push((n, worst));
    }

    Ok(DualityReport {
        b,
        grid_points,
        n_range: (-n_reach, n_reach),
        shift_residuals,
    })
}

/// Painless frame bounds for a window with support length `N` and
/// `b <= 1/N`: the frame operator is multiplication by
/// `(1/b) Σ_n |g(x+n)|²`, so `A` and `B` are the grid infimum and supremum
/// of that periodization. Outside `b <= 1/N` the formula is invalid and the
/// call is rejected (this is not a statement about the frame property).
pub fn painless_frame_bounds(g: &Window, b: f64, grid_points: usize) -> Result<FrameBounds> {
    assert!(grid_points >= 2, "need at least 2 grid points");
    let span = g.span();
    let b_max = 1.0 / span as f64;
    if !(b > 0.0 && b <= b_max) {
        return Err(Error::ModulationStep {
            b,
            required: format!("0 < b <= 1/N = {b_max} for support length N = {span}"),
        });
    }
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for j in 0..grid_points {
        let x = j as f64 / grid_points as f64;
        let s = g.periodization_sq(x) / b;
        lower = lower.min(s);
        upper = upper.max(s);
    }
    Ok(FrameBounds {
        lower,
        upper,
        grid_points,
    })
}

/// A uniform sample grid `x_i = start + i·step`, `i = 0..len`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    /// Grid covering `[start, stop]` with the given resolution.
    pub fn from_range(start: f64, stop: f64, points_per_unit: u32) -> Self {
        assert!(stop >= start && points_per_unit > 0);
        let step = 1.0 / points_per_unit as f64;
        let len = ((stop - start) * points_per_unit as f64).round() as usize + 1;
        Grid { start, step, len }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }
}

/// A signal sampled on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.len).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Trapezoid-rule L² norm over the grid.
    pub fn l2_norm(&self) -> f64 {
        trapezoid(self.grid.step, self.values.len(), |j| {
            self.values[j].norm_sqr()
        })
        .sqrt()
    }

    /// `‖self - reference‖₂ / ‖reference‖₂` on a shared grid.
    pub fn relative_l2_error(&self, reference: &Self) -> f64 {
        assert_eq!(self.grid, reference.grid, "grids must match");
        let diff = trapezoid(self.grid.step, self.values.len(), |j| {
            (self.values[j] - reference.values[j]).norm_sqr()
        })
        .sqrt();
        diff / reference.l2_norm()
    }
}

fn trapezoid(step: f64, len: usize, f: impl Fn(usize) -> f64) -> f64 {
    if len < 2 {
        return 0.0;
    }
    let mut acc = 0.5 * (f(0) + f(len - 1));
    for j in 1..len - 1 {
        acc += f(j);
    }
    acc * step
}

/// Gabor coefficients `c[m, n] = ⟨f, E_{mb} T_n g⟩` over the rectangle
/// `|m| <= m_max`, `n_lo <= n <= n_hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub b: f64,
    pub m_max: i64,
    pub n_lo: i64,
    pub n_hi: i64,
    values: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn new(b: f64, m_max: i64, n_lo: i64, n_hi: i64) -> Self {
        assert!(b > 0.0 && m_max >= 0 && n_hi >= n_lo);
        let len = (2 * m_max + 1) as usize * (n_hi - n_lo + 1) as usize;
        Self {
            b,
            m_max,
            n_lo,
            n_hi,
            values: vec![Complex64::ZERO; len],
        }
    }

    fn index(&self, m: i64, n: i64) -> usize {
        assert!(m.abs() <= self.m_max && n >= self.n_lo && n <= self.n_hi);
        let cols = (self.n_hi - self.n_lo + 1) as usize;
        (m + self.m_max) as usize * cols + (n - self.n_lo) as usize
    }

    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        self.values[self.index(m, n)]
    }

    pub fn set(&mut self, m: i64, n: i64, value: Complex64) {
        let idx = self.index(m, n);
        self.values[idx] = value;
    }

    /// Copy of the table keeping only `|m| <= m_max`.
    pub fn truncated(&self, m_max: i64) -> Self {
        assert!(m_max >= 0 && m_max <= self.m_max);
        let mut out = Self::new(self.b, m_max, self.n_lo, self.n_hi);
        for m in -m_max..=m_max {
            for n in self.n_lo..=self.n_hi {
                out.set(m, n, self.get(m, n));
            }
        }
        out
    }

    /// CSV rows `m,n,re,im` at full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,re,im\n");
        for m in -self.m_max..=self.m_max {
            for n in self.n_lo..=self.n_hi {
                let c = self.get(m, n);
                writeln!(out, "{m},{n},{:.16e},{:.16e}", c.re, c.im).unwrap();
            }
        }
        out
    }
}

/// Computes `c[m, n] = ∫ f(x)·conj(g(x-n))·e^{-2πimbx} dx` by composite
/// trapezoid quadrature on the signal's own grid, for all `|m| <= m_max`
/// and `n` in `n_range`. Translates with no support overlap contribute
/// zero coefficients.
///
/// The caller is responsible for a grid fine enough that the quadrature
/// error is below the intended tolerance; the default of 2048 points per
/// unit length keeps it under 1e-6 for smooth windows.
pub fn analysis(
    f: &SampledSignal,
    g: &Window,
    b: f64,
    m_max: i64,
    n_range: RangeInclusive<i64>,
) -> CoefficientTable {
    assert!(b > 0.0 && m_max >= 0);
    let (n_lo, n_hi) = (*n_range.start(), *n_range.end());
    let mut table = CoefficientTable::new(b, m_max, n_lo, n_hi);
    let (g_lo, g_hi) = g.support();
    let grid = &f.grid;

    for n in n_lo..=n_hi {
        // sample range overlapping supp g(·-n)
        let lo = (g_lo as f64 + n as f64 - grid.start) / grid.step;
        let hi = (g_hi as f64 + n as f64 - grid.start) / grid.step;
        let j_lo = (lo - 1e-9).ceil().max(0.0) as usize;
        let j_hi = ((hi + 1e-9).floor() as i64).min(grid.len as i64 - 1);
        if j_hi < j_lo as i64 + 1 {
            continue;
        }
        let j_hi = j_hi as usize;

        let windowed: Vec<Complex64> = (j_lo..=j_hi)
            .map(|j| {
                let x = grid.x(j);
                let weight = if j == j_lo || j == j_hi { 0.5 } else { 1.0 };
                f.values[j] * g.evaluate(x - n as f64).conj() * (weight * grid.step)
            })
            .collect();

        let x0 = grid.x(j_lo);
        for m in -m_max..=m_max {
            let ratio = Complex64::from_polar(1.0, -TAU * m as f64 * b * grid.step);
            let mut phase = Complex64::from_polar(1.0, -TAU * m as f64 * b * x0);
            let mut acc = Complex64::ZERO;
            for value in &windowed {
                acc += value * phase;
                phase *= ratio;
            }
            table.set(m, n, acc);
        }
    }
    table
}

/// Evaluates `Σ_{m,n} c[m,n]·e^{2πimbx}·h(x-n)` on the given grid.
pub fn synthesis(table: &CoefficientTable, h: &Window, grid: &Grid) -> SampledSignal {
    let (h_lo, h_hi) = h.support();
    let values = (0..grid.len)
        .map(|i| {
            let x = grid.x(i);
            let ratio = Complex64::from_polar(1.0, TAU * table.b * x);
            let base = Complex64::from_polar(1.0, -TAU * table.b * x * table.m_max as f64);
            let mut acc = Complex64::ZERO;
            for n in table.n_lo..=table.n_hi {
                let y = x - n as f64;
                if y < h_lo as f64 || y > h_hi as f64 {
                    continue;
                }
                let hv = h.evaluate(y);
                if hv == Complex64::ZERO {
                    continue;
                }
                let mut phase = base;
                let mut inner = Complex64::ZERO;
                for m in -table.m_max..=table.m_max {
                    inner += table.get(m, n) * phase;
                    phase *= ratio;
                }
                acc += hv * inner;
            }
            acc
        })
        .collect();
    SampledSignal {
        grid: grid.clone(),
        values,
    }
}

/// Witnesses that two `N`-periodic windows cannot be dual at an
/// over-critical modulation step `1/N < b < 1`.
///
/// For the unique `n` with `n <= 1/b < n+1`, duality would force
/// `Σ_{j=0}^{N-n-1} G(x+j)·H(x+j+1/b) = 0` on `(0, n+1-1/b)`; the probe
/// returns the maximum modulus of that sum over the interval. A strictly
/// positive residual certifies the pair is not dual. Zero windows give a
/// degenerate residual of 0; the underlying statement assumes both
/// windows are nonzero.
pub fn necessity_probe(
    g: &TrigPoly,
    h: &TrigPoly,
    n: u64,
    b: f64,
    grid_points: usize,
) -> Result<f64> {
    assert!(grid_points >= 1);
    if n == 0 {
        return Err(Error::InvalidPeriod);
    }
    let b_lo = 1.0 / n as f64;
    if !(b > b_lo && b < 1.0) {
        return Err(Error::ModulationStep {
            b,
            required: format!("1/N < b < 1 with N = {n}"),
        });
    }
    for poly in [g, h] {
        if !poly.is_pointwise_periodic(n) {
            let index = poly
                .coeffs()
                .map(|(k, _)| k)
                .find(|&k| (k as i128 * n as i128) % poly.period() as i128 != 0)
                .unwrap_or(0);
            return Err(Error::NotPeriodic {
                period: poly.period(),
                n,
                index,
            });
        }
        poly.require_real_on_reals()?;
    }

    let inv_b = 1.0 / b;
    let shift_n = inv_b.floor() as i64; // unique n with n <= 1/b < n+1
    let width = (shift_n + 1) as f64 - inv_b;
    let last_j = n as i64 - shift_n - 1;

    let mut max_residual = 0.0f64;
    for i in 0..grid_points {
        let x = width * (i as f64 + 0.5) / grid_points as f64;
        let sum: Complex64 = (0..=last_j)
            .map(|j| g.evaluate(x + j as f64) * h.evaluate(x + j as f64 + inv_b))
            .sum();
        max_residual = max_residual.max(sum.norm());
    }
    Ok(max_residual)
}
