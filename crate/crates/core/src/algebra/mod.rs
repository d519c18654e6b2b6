//! Exact algebra of momentum-space differential operators.

mod coeff;
mod diffop;
mod poly;

pub use coeff::{deformation_factor, CoeffFn};
pub use diffop::{Comparison, DiffOp, Measure, DEFAULT_TOL, PRUNE_EPS};
pub use poly::Poly;
