//! Exact Padé approximation laboratory.
//!
//! Everything algebraic is computed over the Gaussian rationals and checked
//! by exact equality. Floating point appears only in the least-squares
//! fitting inside [`approx`] (whose output is then verified exactly) and in
//! [`roots`], which reports pole locations.

pub mod approx;
pub mod error;
pub mod gap;
pub mod linalg;
pub mod pade;
pub mod poles;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod universal;

pub use error::{Error, Result};
pub use pade::{hankel_det, pade, pade_via_jacobi, pade_via_system, PadeResult, PadeStatus};
pub use poly::{Polynomial, RationalFunction};
pub use scalar::{GaussianRational, GR};
pub use series::PowerSeries;
