//! Partition-of-unity verification and smoothness classification for
//! windows cut from periodic trigonometric polynomials.
//!
//! A window is a trigonometric polynomial restricted to a finite interval.
//! Its integer translates form a partition of unity exactly when the
//! polynomial's coefficients satisfy `c_0 = 1/N` and `c_k = 0` for the other
//! indices in `Nℤ` (in the period-N basis); [`coefficient_pou_check`] tests
//! this algebraically and [`sampled_pou_check`] tests the same identity on a
//! sample grid. The smoothness of the cut-off window is governed by how many
//! derivative orders of the polynomial vanish at the support endpoints,
//! equivalently by how many factors `e^{πix/N} sin(πx/N)` divide it;
//! [`smoothness_order`] measures the former and [`factorize`] extracts the
//! cofactor certifying the latter.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::TrigPoly;

/// Default residual tolerance for partition-of-unity preconditions.
pub const DEFAULT_POU_TOL: f64 = 1e-9;

/// Base factor of the scale-aware derivative-vanishing threshold:
/// `|D^j P(x0)| <= DERIV_VANISH_BASE * (1 + max|c_k| * (2π·band/T)^j)`
/// counts as zero.
pub const DERIV_VANISH_BASE: f64 = 1e-8;

/// Relative tolerance on the remainder of each exact Laurent division in
/// [`factorize`].
pub const FACTOR_REMAINDER_REL: f64 = 1e-9;

/// One polynomial piece of a window: `poly · χ_[lo, lo+len]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowPiece {
    pub poly: TrigPoly,
    pub lo: i64,
    pub len: u64,
}

impl WindowPiece {
    fn hi(&self) -> i64 {
        self.lo + self.len as i64
    }

    fn contains_closed(&self, x: f64) -> bool {
        x >= self.lo as f64 && x <= self.hi() as f64
    }

    fn contains_halfopen(&self, x: f64) -> bool {
        x >= self.lo as f64 && x < self.hi() as f64
    }

    fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::SupportTooShort {
                n: self.len,
                min: 1,
            });
        }
        let n = self.len;
        if self.poly.is_pointwise_periodic(n) || self.poly.is_pointwise_periodic(2 * n) {
            Ok(())
        } else {
            Err(Error::WindowPeriodMismatch {
                period: self.poly.period(),
                n,
                two_n: 2 * n,
            })
        }
    }
}

/// A compactly supported window, stored as one or more polynomial pieces.
///
/// The common case is a single piece `P · χ_[0,N]`. Dual windows of the form
/// `h(x) = Σ_n a_n g(x+n)` keep one piece per translate; the pieces may
/// overlap and the window value is the sum of all active pieces.
///
/// Evaluation convention: [`Window::evaluate`] uses closed support intervals
/// (the value at a support endpoint includes that piece). This is a
/// measure-zero choice; periodization sums use half-open intervals instead
/// so that no integer point is counted twice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WindowRepr", into = "WindowRepr")]
pub struct Window {
    pieces: Vec<WindowPiece>,
}

impl Window {
    /// Single-piece window `poly · χ_[0, support_len]`. The polynomial must
    /// be pointwise `N`- or `2N`-periodic for `N = support_len`.
    pub fn new(poly: TrigPoly, support_len: u64) -> Result<Self> {
        Self::from_pieces(vec![WindowPiece {
            poly,
            lo: 0,
            len: support_len,
        }])
    }

    pub fn from_pieces(mut pieces: Vec<WindowPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::SupportTooShort { n: 0, min: 1 });
        }
        for piece in &pieces {
            piece.validate()?;
        }
        pieces.sort_by_key(|p| (p.lo, p.len));
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[WindowPiece] {
        &self.pieces
    }

    /// The unique piece, if the window has exactly one.
    pub fn single_piece(&self) -> Option<&WindowPiece> {
        match self.pieces.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }

    /// Support hull `[lo, hi]` over all pieces.
    pub fn support(&self) -> (i64, i64) {
        let lo = self.pieces.iter().map(|p| p.lo).min().unwrap();
        let hi = self.pieces.iter().map(|p| p.hi()).max().unwrap();
        (lo, hi)
    }

    /// Length of the support hull.
    pub fn span(&self) -> u64 {
        let (lo, hi) = self.support();
        (hi - lo) as u64
    }

    /// `x ↦ w(x + n)` as a new window.
    pub fn translate(&self, n: i64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| WindowPiece {
                    poly: p.poly.shift_integer(n),
                    lo: p.lo - n,
                    len: p.len,
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| WindowPiece {
                    poly: p.poly.scale_real(s),
                    lo: p.lo,
                    len: p.len,
                })
                .collect(),
        }
    }

    /// Window value with closed support intervals.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.pieces
            .iter()
            .filter(|p| p.contains_closed(x))
            .map(|p| p.poly.evaluate(x))
            .sum()
    }

    /// Window value with half-open support intervals `[lo, hi)`; used by
    /// periodization sums so integer grid points are counted once.
    pub fn evaluate_halfopen(&self, x: f64) -> Complex64 {
        self.pieces
            .iter()
            .filter(|p| p.contains_halfopen(x))
            .map(|p| p.poly.evaluate(x))
            .sum()
    }

    /// `Σ_n w(x+n)` over all translates with support overlap, for `x` in
    /// `[0, 1)`.
    pub fn periodization(&self, x: f64) -> Complex64 {
        let (lo, hi) = self.support();
        (lo..hi)
            .map(|n| self.evaluate_halfopen(x + n as f64))
            .sum()
    }

    /// `Σ_n |w(x+n)|²` for `x` in `[0, 1)`.
    pub fn periodization_sq(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        (lo..hi)
            .map(|n| self.evaluate_halfopen(x + n as f64).norm_sqr())
            .sum()
    }

    /// Largest conjugate-symmetry defect over all pieces.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.poly.conjugate_asymmetry())
            .fold(0.0, f64::max)
    }
}

/// Wire formats. A single-piece window is
/// `{"period": T, "coeffs": [...], "support": [lo, hi]}`; a multi-piece
/// window wraps its pieces: `{"support": [lo, hi], "pieces": [...]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WindowRepr {
    Multi {
        support: (i64, i64),
        pieces: Vec<PieceRepr>,
    },
    Single(PieceRepr),
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    #[serde(flatten)]
    poly: TrigPoly,
    support: (i64, i64),
}

impl From<WindowPiece> for PieceRepr {
    fn from(p: WindowPiece) -> Self {
        PieceRepr {
            support: (p.lo, p.hi()),
            poly: p.poly,
        }
    }
}

impl TryFrom<PieceRepr> for WindowPiece {
    type Error = Error;

    fn try_from(r: PieceRepr) -> Result<Self> {
        let (lo, hi) = r.support;
        if hi <= lo {
            return Err(Error::SupportTooShort { n: 0, min: 1 });
        }
        Ok(WindowPiece {
            poly: r.poly,
            lo,
            len: (hi - lo) as u64,
        })
    }
}

impl From<Window> for WindowRepr {
    fn from(w: Window) -> Self {
        if w.pieces.len() == 1 {
            WindowRepr::Single(w.pieces.into_iter().next().unwrap().into())
        } else {
            WindowRepr::Multi {
                support: w.support(),
                pieces: w.pieces.into_iter().map(Into::into).collect(),
            }
        }
    }
}

impl TryFrom<WindowRepr> for Window {
    type Error = Error;

    fn try_from(r: WindowRepr) -> Result<Self> {
        match r {
            WindowRepr::Single(p) => Window::from_pieces(vec![p.try_into()?]),
            WindowRepr::Multi { pieces, .. } => Window::from_pieces(
                pieces
                    .into_iter()
                    .map(TryInto::try_into)
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

/// Smoothness classification of a cut-off window: the window is `C^{L-1}`
/// on ℝ but not `C^L`, where `L` is [`SmoothnessReport::order`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    /// The largest `L` such that `D^j P` vanishes at both support endpoints
    /// for all `j < L`. `L = 0` means the window is discontinuous at an
    /// endpoint.
    #[serde(rename = "order_L")]
    pub order: u32,
    /// Upper bound `2K` on the attainable order: `K` is the band limit in
    /// the period-N basis when the polynomial is N-periodic, otherwise the
    /// band in its own basis. No nonzero band-K polynomial can vanish to
    /// order `2K + 1` at a point (Vandermonde argument), so the scan stops
    /// there.
    pub cap: u32,
    /// Band limit used for the cap.
    pub band: i64,
    /// Rows `(j, |D^j P(lo)|, |D^j P(hi)|)` for `j = 0..=order`.
    pub endpoint_derivatives: Vec<(u32, f64, f64)>,
}

/// Checks the coefficient characterization of the partition of unity: in
/// the period-`n` basis, `c_0 = 1/n` and `c_k = 0` for every other index in
/// `nℤ`, all within `tol`.
///
/// Errors when the polynomial is not pointwise `n`-periodic (as opposed to
/// returning `false`, which means "periodic but not a partition of unity").
pub fn coefficient_pou_check(p: &TrigPoly, n: u64, tol: f64) -> Result<bool> {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    if n == 0 {
        return Err(Error::InvalidPeriod);
    }
    let t = p.period() as i128;
    let mut c0 = Complex64::ZERO;
    for (k, c) in p.coeffs() {
        let kn = k as i128 * n as i128;
        if kn % t != 0 {
            return Err(Error::NotPeriodic {
                period: p.period(),
                n,
                index: k,
            });
        }
        let m = (kn / t) as i64;
        if m == 0 {
            c0 = c;
        } else if m.rem_euclid(n as i64) == 0 && c.norm() > tol {
            return Ok(false);
        }
    }
    Ok((c0 - Complex64::new(1.0 / n as f64, 0.0)).norm() <= tol)
}

/// Maximum over a uniform grid on `[0, 1)` of `|Σ_n w(x+n) - 1|`. The
/// caller compares the residual against its own tolerance.
pub fn sampled_pou_check(w: &Window, grid_points: usize) -> f64 {
    assert!(grid_points >= 2, "need at least 2 grid points");
    let one = Complex64::new(1.0, 0.0);
    (0..grid_points)
        .map(|j| {
            let x = j as f64 / grid_points as f64;
            (w.periodization(x) - one).norm()
        })
        .fold(0.0, f64::max)
}

fn derivative_threshold(max_mag: f64, band: i64, period: u64, j: u32) -> f64 {
    DERIV_VANISH_BASE * (1.0 + max_mag * (TAU * band as f64 / period as f64).powi(j as i32))
}

/// Classifies the smoothness of a single-piece window by scanning how many
/// derivative orders of the polynomial vanish at both support endpoints.
///
/// For an `N`-periodic polynomial the two endpoint conditions coincide; for
/// `2N`-periodic polynomials (odd sine powers) they are independent and both
/// are required. The scan is capped at `2·band` since a nonzero polynomial
/// cannot vanish deeper (see [`SmoothnessReport::cap`]).
pub fn smoothness_order(w: &Window) -> Result<SmoothnessReport> {
    let piece = w.single_piece().ok_or(Error::MultiPieceWindow {
        pieces: w.pieces().len(),
    })?;
    piece.poly.require_real_on_reals()?;

    let p = &piece.poly;
    let n = piece.len;
    let x0 = piece.lo as f64;
    let x1 = piece.hi() as f64;

    let band = if p.is_pointwise_periodic(n) {
        // band limit K in the period-N basis
        p.coeffs()
            .map(|(k, _)| (k as i128 * n as i128 / p.period() as i128).unsigned_abs() as i64)
            .max()
            .unwrap_or(0)
    } else {
        p.band()
    };
    let cap = 2 * band as u32;
    let max_mag = p.max_coeff_magnitude();

    let mut order = cap;
    let mut endpoint_derivatives = Vec::new();
    for j in 0..=cap {
        let d0 = p.derivative_at(j, x0).norm();
        let d1 = p.derivative_at(j, x1).norm();
        endpoint_derivatives.push((j, d0, d1));
        let threshold = derivative_threshold(max_mag, p.band(), p.period(), j);
        if d0 > threshold || d1 > threshold {
            order = j;
            break;
        }
    }

    Ok(SmoothnessReport {
        order,
        cap,
        band,
        endpoint_derivatives,
    })
}

/// The polynomial `(z - 1)/(2i)` in the period-`n` basis, equal to
/// `e^{πix/n} sin(πx/n)` pointwise. [`factorize`] divides by powers of this
/// factor.
pub fn sine_factor(n: u64) -> TrigPoly {
    TrigPoly::new(
        n,
        [
            (0, Complex64::new(0.0, 0.5)),
            (1, Complex64::new(0.0, -0.5)),
        ],
    )
    .expect("positive period")
}

/// Extracts the cofactor `A_L` with
/// `P(x) = (e^{πix/N} sin(πx/N))^L · A_L(x)`, by `L` successive exact
/// Laurent divisions by `(z - 1)` in the `z = e^{2πix/N}` basis. Each
/// division is exact precisely when the dividend's coefficients sum to
/// zero, i.e. when the corresponding derivative order vanishes at the
/// endpoints; a remainder above tolerance is reported as an error.
///
/// If `P` has indices in `[-K, K]`, the cofactor has indices in
/// `[-K, K-L]`.
pub fn factorize(p: &TrigPoly, n: u64, l: u32) -> Result<TrigPoly> {
    if n == 0 {
        return Err(Error::InvalidPeriod);
    }
    // rebase onto the period-n index lattice
    let t = p.period() as i128;
    let mut rebased: Vec<(i64, Complex64)> = Vec::with_capacity(p.num_terms());
    for (k, c) in p.coeffs() {
        let kn = k as i128 * n as i128;
        if kn % t != 0 {
            return Err(Error::NotPeriodic {
                period: p.period(),
                n,
                index: k,
            });
        }
        rebased.push(((kn / t) as i64, c));
    }
    if rebased.is_empty() {
        return TrigPoly::zero(n);
    }

    let kmin = rebased.iter().map(|&(k, _)| k).min().unwrap();
    let kmax = rebased.iter().map(|&(k, _)| k).max().unwrap();
    let mut dense = vec![Complex64::ZERO; (kmax - kmin + 1) as usize];
    for (k, c) in rebased {
        dense[(k - kmin) as usize] += c;
    }

    for step in 1..=l {
        let max_mag = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tolerance = FACTOR_REMAINDER_REL * (1.0 + max_mag);
        let d = dense.len() - 1;
        if d == 0 {
            // constant dividend: quotient is zero, remainder the constant
            let remainder = dense[0].norm();
            if remainder > tolerance {
                return Err(Error::FactorizationRemainder {
                    step,
                    remainder,
                    tolerance,
                });
            }
            dense = vec![Complex64::ZERO];
            continue;
        }
        // synthetic division by (z - 1)
        let mut quotient = vec![Complex64::ZERO; d];
        quotient[d - 1] = dense[d];
        for j in (1..d).rev() {
            quotient[j - 1] = dense[j] + quotient[j];
        }
        let remainder = (dense[0] + quotient[0]).norm();
        if remainder > tolerance {
            return Err(Error::FactorizationRemainder {
                step,
                remainder,
                tolerance,
            });
        }
        dense = quotient;
    }

    // multiply by (2i)^L
    let mag = 2f64.powi(l as i32);
    let scale = match l % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, -mag),
    };
    TrigPoly::new(
        n,
        dense
            .into_iter()
            .enumerate()
            .map(|(j, c)| (kmin + j as i64, c * scale)),
    )
}
