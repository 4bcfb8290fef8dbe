use std::time::Instant;

use crate::error::{Error, Result};
use crate::qsc::DofGrid;

use super::config::{SchemeConfig, SchemeKind};
use super::solver::Solver;

/// What to keep from a run besides the final level.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Stop after this level instead of the final one.
    pub stop_level: Option<usize>,
    /// Levels whose DOFs are copied out; level 0 is `c^0`.
    pub snapshot_levels: Vec<usize>,
    /// Keep every level `c^0..c^n`.
    pub keep_trajectory: bool,
}

impl RunOptions {
    pub fn trajectory() -> Self {
        Self {
            keep_trajectory: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub kind: SchemeKind,
    pub level: usize,
    pub final_dofs: DofGrid,
    pub snapshots: Vec<(usize, DofGrid)>,
    pub trajectory: Option<Vec<DofGrid>>,
    /// Wall time of each level, index `n - 1`.
    pub step_seconds: Vec<f64>,
    /// Wall time of the whole time loop.
    pub loop_seconds: f64,
    /// Part of `loop_seconds` spent on history terms.
    pub history_seconds: f64,
    /// Exponentials per DOF, zero for direct kinds.
    pub esa_terms: usize,
    pub esa_updates: u64,
    /// `f64` values held for the history at the end of the run.
    pub history_memory_len: usize,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn snapshot(&self, level: usize) -> Option<&DofGrid> {
        self.snapshots.iter().find(|(l, _)| *l == level).map(|(_, c)| c)
    }
}

/// Advances levels `1..=N` (or up to `stop_level`).
pub fn run(cfg: &SchemeConfig, opts: &RunOptions) -> Result<RunOutput> {
    let last = opts.stop_level.unwrap_or(cfg.time.levels());
    if last > cfg.time.levels() {
        return Err(Error::Config(format!(
            "stop level {last} exceeds the {} time levels",
            cfg.time.levels()
        )));
    }
    if let Some(&bad) = opts.snapshot_levels.iter().find(|&&l| l > last) {
        return Err(Error::Config(format!("snapshot level {bad} is after the last level {last}")));
    }
    let mut solver = Solver::new(cfg)?;
    let mut warnings: Vec<String> = cfg.time.warnings().to_vec();
    if cfg.order.has_increasing_segment() {
        warnings.push(format!(
            "order {} increases somewhere; the second-order stability argument assumes a non-increasing order",
            cfg.order.label()
        ));
    }
    let mut snapshots = Vec::new();
    let mut trajectory = opts.keep_trajectory.then(Vec::new);
    let mut record = |level: usize, c: &DofGrid| {
        if opts.snapshot_levels.contains(&level) {
            snapshots.push((level, c.clone()));
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(c.clone());
        }
    };
    record(0, &solver.state().current);
    let mut step_seconds = Vec::with_capacity(last);
    let loop_clock = Instant::now();
    for _ in 0..last {
        let clock = Instant::now();
        solver.step()?;
        step_seconds.push(clock.elapsed().as_secs_f64());
        record(solver.level(), &solver.state().current);
    }
    let loop_seconds = loop_clock.elapsed().as_secs_f64();
    log::debug!(
        "{} finished {last} levels in {loop_seconds:.3} s (history {:.3} s)",
        cfg.kind.label(),
        solver.history_seconds()
    );
    Ok(RunOutput {
        kind: cfg.kind,
        level: solver.level(),
        snapshots,
        trajectory,
        step_seconds,
        loop_seconds,
        history_seconds: solver.history_seconds(),
        esa_terms: solver.esa().map_or(0, |q| q.len()),
        esa_updates: solver.esa_updates(),
        history_memory_len: solver.history_memory_len(),
        warnings,
        final_dofs: solver.into_state().current,
    })
}
