//! Numerical library for the finite bivariate I-Konhauser biorthogonal
//! polynomial pair, the associated bivariate Mittag-Leffler functions, and
//! the Riemann-Liouville fractional-calculus and transform operators built
//! on them, together with a verification harness that numerically certifies
//! the closed-form identities the families satisfy.

pub mod calculus;
pub mod error;
pub mod gamma;
pub mod harness;
pub mod hyper;
pub mod ml;
pub mod num;
pub mod poly;
pub mod quad;
pub mod transforms;

pub use error::{Error, Result};
pub use hyper::SeriesPolicy;
pub use num::SignedLog;
pub use quad::QuadratureConfig;
