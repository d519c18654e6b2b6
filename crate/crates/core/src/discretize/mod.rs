//! Finite-difference images of momentum-space operators.

mod banded;
mod eigen;
mod grid;
mod matrix;

pub use eigen::{eigs, self_adjoint_defect, EigenKind, Spectrum, SELF_ADJOINT_TOL};
pub use grid::{Grid, GridSummary};
pub use matrix::{
    assemble_matrix, assemble_matrix_with, derivative_matrix, gaussian_state, metric_diagonal,
    metric_log_diagonal, similarity_transform, similarity_transform_with, weighted_adjoint,
    weighted_inner, weighted_norm, MatrixOp, METRIC_LOG_LIMIT,
};
