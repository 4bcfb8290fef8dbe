//! Manufactured problems, error measures, refinement studies and timing
//! comparisons.

mod metrics;
mod problem;
mod speedup;
mod study;

pub use metrics::{discrete_l2, error_vs_true, two_mesh_error};
pub use problem::{InitialVariant, Problem, SourceBuilder, PROBLEM_NAMES};
pub use speedup::{speedup_study, SpeedupReport, SpeedupRow};
pub use study::{
    convergence_study, observed_orders, rows_from, two_mesh_study, Axis, ConvergenceReport, Measure, Probe, ReportRow, StudySpec,
};
