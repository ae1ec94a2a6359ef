//! Tunneling-Hamiltonian model of charge-density-wave depinning.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: error function, adaptive quadrature, finite differences and
//!   a damped Gauss–Newton least-squares solver.
//! * [`potential`]: extended sine-Gordon potentials, gap energy, topological
//!   charge and the Bogomol'nyi bound diagnostic.
//! * [`wavefunctional`]: kink–antikink profiles, the thin-wall box and its
//!   Fourier transform, normalized Gaussian wavefunctionals.
//! * [`tunneling`]: analytic matrix-element magnitudes and a single-mode
//!   quadrature oracle.
//! * [`transport`]: pair geometry as a function of field, soliton-pair and
//!   Zener current laws.
//! * [`fitting`]: least-squares comparison of the two current laws.
//! * [`verify`]: named oracle checks used by the `verify` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fitting;
pub mod numerics;
pub mod potential;
pub mod transport;
pub mod tunneling;
pub mod verify;
pub mod wavefunctional;

pub use error::{Error, Result};
pub use fitting::{
    compare_series, fit_sge_to_series, fit_sge_to_zener, ComparisonMetrics, FreeParam,
};
pub use numerics::{
    erf, erfc, finite_diff_gradient, integrate_adaptive, least_squares_fit, FitOptions, FitResult,
};
pub use potential::{BoundReport, FieldProfile, PotentialParams};
pub use transport::{CurrentModel, CurveSeries, SgeConvention, TransportParams};
pub use tunneling::{Channel, MatrixElementInputs};
pub use wavefunctional::{KinkPairProfile, WavefunctionalSpec};
