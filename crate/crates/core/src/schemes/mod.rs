//! Time-stepping drivers: the full collocation scheme, the ADI schemes with
//! direct or exponential-sum history, and their fourth-order variants.

mod config;
mod residual;
mod run;
mod solver;
mod stability;

pub use config::{gamma_n, SchemeConfig, SchemeKind, Source, SpaceFn, SpaceTimeFn, TimeFn};
pub use residual::{equivalent_system, oracle_step, residual_check};
pub use run::{run, RunOptions, RunOutput};
pub use solver::{init_dofs, History, Solver, StepState, BOUNDARY_TOL};
pub use stability::{energy, stability_functional, stability_initial_bound};

#[cfg(test)]
mod tests;
