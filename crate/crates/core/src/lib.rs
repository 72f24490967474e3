//! Gaussian-integer character sums and the counting problems built on them:
//! `p + m² + n² = N` restricted to sectors, `t²F(u,v) = x² + y²` on
//! Châtelet surfaces, and the matching sums over `ℤ[√2]` and `ℚ(√−14)`.
//!
//! Exact quantities use machine integers and `Ratio<u64>`; real-valued ones
//! are generic over [`Real`] with `f64` aliases below.

pub mod chatelet;
pub mod error;
pub mod gaussian;
pub mod linnik;
pub mod numtheory;
mod par;
pub mod quadfields;
pub mod quartic;
pub mod scalar;

use num_complex::Complex;
use num_rational::Ratio;

pub use error::{Error, Result};
pub use gaussian::GaussianInt;
pub use numtheory::{Factorization, PrimeTables};
pub use quartic::QuarticForm;
pub use scalar::Real;

pub type CharSumValue = Complex<f64>;
pub type Rational = Ratio<u64>;

pub type SectorQuery64 = linnik::SectorQuery<f64>;
pub type CountReport64 = linnik::CountReport<f64>;
pub type EtTerms64 = linnik::EtTerms<f64>;
pub type Region64 = chatelet::Region<f64>;
pub type Sector64 = chatelet::Sector<f64>;
pub type SSums64 = chatelet::SSums<f64>;
pub type Lt2Terms64 = chatelet::Lt2Terms<f64>;
