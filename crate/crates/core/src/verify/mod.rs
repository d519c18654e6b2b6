//! Residual checks for the identities of the model and the suite that runs
//! them.

pub mod checks;
pub mod convergence;
pub mod draws;
mod report;
pub mod suite;

pub use checks::{
    check_adjoint, check_bf_discrepancy, check_deformed_position, check_expansion,
    check_hermitian_case, check_ladder_commutator, check_metric_limit, check_momentum_form,
    check_numeric_residual, check_pseudo_symbolic, check_spectrum, default_probes, ProbeSpec,
    SpectrumCheck, SpectrumOutcome,
};
pub use convergence::{convergence_study, ConvergenceStudy, GridSpec, StudyTarget};
pub use report::{CheckResult, Report, SpectrumRecord};
pub use suite::{identity_fuzz, run_suite, run_suite_with, NumericConfig};
