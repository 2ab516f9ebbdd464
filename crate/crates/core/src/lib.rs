//! Construction and verification of trigonometric-polynomial windows whose
//! integer translates form smooth partitions of unity, and of the dual and
//! tight Gabor frame pairs they generate.
//!
//! The crate is organized around five concerns:
//!
//! - [`trigpoly`]: exact Laurent-coefficient arithmetic on periodic
//!   trigonometric polynomials;
//! - [`pou`]: partition-of-unity checks, window smoothness classification,
//!   and the sine-factor extraction that certifies smoothness;
//! - [`constructions`]: the window families (binomial windows on `[0,2]`,
//!   the inductive family for `N >= 3`, sine powers, and dual/tight pairs);
//! - [`gabor`]: duality-condition residuals, painless frame bounds,
//!   analysis/synthesis at desk scale, and the over-critical probe;
//! - [`export`]: CSV evaluation dumps for plotting.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads.

pub mod constructions;
mod error;
pub mod export;
pub mod gabor;
pub mod pou;
pub mod trigpoly;

pub use constructions::DualPair;
pub use error::{Error, Result};
pub use gabor::{CoefficientTable, DualityReport, FrameBounds, Grid, SampledSignal};
pub use num_complex::Complex64;
pub use pou::{SmoothnessReport, Window};
pub use trigpoly::TrigPoly;
