//! Numerical building blocks shared by every physics module.
//!
//! Everything here is a pure function of its inputs.

mod diff;
mod lsq;
mod quadrature;
mod special;

pub use diff::finite_diff_gradient;
pub use lsq::{least_squares_fit, FitOptions, FitResult};
pub use quadrature::integrate_adaptive;
pub use special::{erf, erfc};
