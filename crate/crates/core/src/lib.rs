//! Verification toolkit for the Swanson model with and without a
//! minimal-length deformation.
//!
//! * [`algebra`]: exact normal-ordered differential operators in momentum
//!   space, adjoints and metric conjugations.
//! * [`model`]: parameters, Hamiltonians in their various rewritings, and
//!   metric operators.
//! * [`discretize`]: finite-difference matrices on momentum grids, weighted
//!   adjoints, similarity transforms and eigenvalues.
//! * [`verify`]: residual checks and the suite that bundles them.

pub mod algebra;
pub mod discretize;
pub mod error;
pub mod model;
pub mod par;
pub mod verify;

pub use algebra::{CoeffFn, DiffOp, Measure, Poly};
pub use error::{AlgebraError, DiscretizeError, ModelError, VerifyError};
pub use model::{MetricFamily, MetricSpec, ModelParams, MomentumRepCoeffs};
