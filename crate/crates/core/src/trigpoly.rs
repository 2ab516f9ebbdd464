//! Arithmetic on trigonometric polynomials with finitely supported Laurent
//! coefficients and an explicit integer period.
//!
//! A [`TrigPoly`] represents `x ↦ Σ_k c_k · e^{2πikx/T}` for an integer
//! period `T >= 1` and finitely many nonzero complex coefficients `c_k`.
//! All values are immutable; every operation is a pure function, so values
//! can be shared freely across threads.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients with magnitude below `DUST_RELATIVE * max(1, max |c_k|)` are
/// dropped after arithmetic so supports stay finite and deterministic.
pub const DUST_RELATIVE: f64 = 1e-13;

/// A T-periodic trigonometric polynomial `Σ_k c_k e^{2πikx/T}` with finite
/// Laurent support. Indices may be negative; absent indices are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyRepr", into = "TrigPolyRepr")]
pub struct TrigPoly {
    period: u64,
    coeffs: BTreeMap<i64, Complex64>,
}

/// Wire format: `{"period": T, "coeffs": [[k, re, im], ...]}` with indices
/// sorted ascending. Round-trips are bit-exact for finite doubles.
#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    period: u64,
    coeffs: Vec<(i64, f64, f64)>,
}

impl From<TrigPoly> for TrigPolyRepr {
    fn from(p: TrigPoly) -> Self {
        TrigPolyRepr {
            period: p.period,
            coeffs: p.coeffs.iter().map(|(&k, c)| (k, c.re, c.im)).collect(),
        }
    }
}

impl TryFrom<TrigPolyRepr> for TrigPoly {
    type Error = Error;

    fn try_from(r: TrigPolyRepr) -> Result<Self> {
        TrigPoly::new(
            r.period,
            r.coeffs.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))),
        )
    }
}

impl TrigPoly {
    /// Builds a polynomial from `(index, coefficient)` pairs. Duplicate
    /// indices are summed; dust is pruned.
    pub fn new(period: u64, coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidPeriod);
        }
        let mut map: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (k, c) in coeffs {
            *map.entry(k).or_insert(Complex64::ZERO) += c;
        }
        Ok(Self { period, coeffs: map }.pruned())
    }

    /// The zero polynomial with the given period.
    pub fn zero(period: u64) -> Result<Self> {
        Self::new(period, std::iter::empty())
    }

    /// A constant polynomial; constants are period-free, so period 1 is used.
    pub fn constant(value: Complex64) -> Self {
        Self::new(1, [(0, value)]).expect("period 1 is valid")
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// The coefficient at index `k` (zero when absent).
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(Complex64::ZERO)
    }

    /// Stored `(index, coefficient)` pairs in ascending index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest stored index, if any.
    pub fn index_range(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.keys().next()?;
        let hi = self.coeffs.keys().next_back()?;
        Some((*lo, *hi))
    }

    /// Band limit `max |k|` over the support (0 for the zero polynomial).
    pub fn band(&self) -> i64 {
        self.index_range()
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .unwrap_or(0)
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn pruned(mut self) -> Self {
        let threshold = DUST_RELATIVE * self.max_coeff_magnitude().max(1.0);
        self.coeffs.retain(|_, c| c.norm() >= threshold);
        self
    }

    /// True when every stored index has an integer frequency multiple of
    /// `1/p`, i.e. the polynomial is pointwise `p`-periodic.
    pub fn is_pointwise_periodic(&self, p: u64) -> bool {
        self.coeffs
            .keys()
            .all(|&k| (k as i128 * p as i128) % self.period as i128 == 0)
    }

    /// Re-expresses the polynomial with period `target`, which must be a
    /// positive integer multiple of the current period. Index `k` maps to
    /// `k * target/period`; pointwise values are unchanged.
    pub fn rescale_period(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.period != 0 {
            return Err(Error::PeriodNotMultiple {
                period: self.period,
                target,
            });
        }
        let factor = (target / self.period) as i64;
        Ok(Self {
            period: target,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k * factor, c)).collect(),
        })
    }

    /// The smallest integer period dividing the current one that represents
    /// the same function. Never applied implicitly by arithmetic.
    pub fn minimal_period(&self) -> Self {
        let g = self
            .coeffs
            .keys()
            .fold(self.period, |acc, &k| gcd(acc, k.unsigned_abs()));
        Self {
            period: self.period / g,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k / g as i64, c))
                .collect(),
        }
    }

    /// Rebase onto the least common multiple of the two periods.
    fn common_period(&self, other: &Self) -> (Self, Self) {
        if self.period == other.period {
            return (self.clone(), other.clone());
        }
        let l = lcm(self.period, other.period);
        (
            self.rescale_period(l).expect("lcm is a multiple"),
            other.rescale_period(l).expect("lcm is a multiple"),
        )
    }

    /// Coefficient-wise sum after rebasing to the lcm period.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common_period(other);
        let mut coeffs = a.coeffs;
        for (k, c) in b.coeffs {
            *coeffs.entry(k).or_insert(Complex64::ZERO) += c;
        }
        Self {
            period: a.period,
            coeffs,
        }
        .pruned()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Cauchy convolution of coefficient sequences; pointwise this is the
    /// product of the two functions.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common_period(other);
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&ka, &ca) in &a.coeffs {
            for (&kb, &cb) in &b.coeffs {
                *coeffs.entry(ka + kb).or_insert(Complex64::ZERO) += ca * cb;
            }
        }
        Self {
            period: a.period,
            coeffs,
        }
        .pruned()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            period: self.period,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
        .pruned()
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self^exp` by repeated multiplication; `exp = 0` gives the constant 1
    /// carried on the same period.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self {
            period: self.period,
            coeffs: BTreeMap::from([(0, Complex64::ONE)]),
        };
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Returns `x ↦ P(x + n)`: coefficient `k` picks up `e^{2πikn/T}`.
    /// Quarter-turn phases are applied exactly so sign flips do not
    /// accumulate rounding dust.
    pub fn shift_integer(&self, n: i64) -> Self {
        Self {
            period: self.period,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k, c * unit_phase(k as i128 * n as i128, self.period)))
                .collect(),
        }
        .pruned()
    }

    /// `Σ_k c_k e^{2πikx/T}`, evaluated with one `sin`/`cos` pair and
    /// incremental powers across the index range.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let Some((kmin, kmax)) = self.index_range() else {
            return Complex64::ZERO;
        };
        let theta = TAU * x / self.period as f64;
        let z = Complex64::from_polar(1.0, theta);
        let mut zp = Complex64::from_polar(1.0, theta * kmin as f64);
        let mut acc = Complex64::ZERO;
        for k in kmin..=kmax {
            if let Some(&c) = self.coeffs.get(&k) {
                acc += c * zp;
            }
            zp *= z;
        }
        acc
    }

    /// Exact analytic derivative of the finite sum:
    /// `D^j P(x0) = Σ_k c_k (2πik/T)^j e^{2πikx0/T}`.
    pub fn derivative_at(&self, j: u32, x0: f64) -> Complex64 {
        let t = self.period as f64;
        self.coeffs
            .iter()
            .map(|(&k, &c)| {
                let factor = Complex64::new(0.0, TAU * k as f64 / t).powu(j);
                c * factor * Complex64::from_polar(1.0, TAU * k as f64 * x0 / t)
            })
            .sum()
    }

    /// True iff `|c_{-k} - conj(c_k)| <= tol` for every index, the
    /// conjugate-symmetry condition for a real-valued restriction to ℝ.
    pub fn is_real_on_reals(&self, tol: f64) -> bool {
        self.conjugate_asymmetry() <= tol
    }

    /// Largest conjugate-symmetry defect `max_k |c_{-k} - conj(c_k)|`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| (self.coeff(-k) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Errors unless the conjugate-symmetry defect is small relative to the
    /// coefficient scale.
    pub(crate) fn require_real_on_reals(&self) -> Result<()> {
        let defect = self.conjugate_asymmetry();
        if defect <= 1e-9 * (1.0 + self.max_coeff_magnitude()) {
            Ok(())
        } else {
            Err(Error::NotRealOnReals {
                max_asymmetry: defect,
            })
        }
    }
}

/// `e^{2πi·num/den}` with exact values at quarter turns.
fn unit_phase(num: i128, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i128) as u64;
    if r == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * r == den {
        Complex64::new(-1.0, 0.0)
    } else if 4 * r == den {
        Complex64::new(0.0, 1.0)
    } else if 4 * r == 3 * den {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, TAU * r as f64 / den as f64)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::add(self, rhs)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::sub(self, rhs)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::mul(self, rhs)
    }
}
