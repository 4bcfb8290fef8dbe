use crate::error::{Error, Result};
use crate::fractional_time::VariableOrder;
use crate::qsc::SpaceGrid;
use crate::schemes::{run, RunOptions, RunOutput, SchemeConfig, SchemeKind};

use super::problem::Problem;

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRow {
    pub levels: usize,
    /// Best time-loop wall seconds of the direct and fast ADI schemes.
    pub direct_seconds: f64,
    pub fast_seconds: f64,
    /// `fast_seconds / direct_seconds`.
    pub ratio: f64,
    pub direct_history_seconds: f64,
    pub fast_history_seconds: f64,
    pub esa_terms: usize,
    /// Max-norm DOF difference of the two final levels.
    pub max_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupReport {
    pub cells: usize,
    pub eps: f64,
    pub rows: Vec<SpeedupRow>,
}

impl SpeedupReport {
    /// Wall-time ratio of consecutive rows for the direct scheme.
    pub fn direct_growth(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[1].direct_seconds / w[0].direct_seconds).collect()
    }

    pub fn fast_growth(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[1].fast_seconds / w[0].fast_seconds).collect()
    }

    pub fn final_ratio(&self) -> Option<f64> {
        self.rows.last().map(|r| r.ratio)
    }
}

fn best_of(cfg: &SchemeConfig, repeats: usize) -> Result<RunOutput> {
    let mut best: Option<RunOutput> = None;
    for _ in 0..repeats.max(1) {
        let out = run(cfg, &RunOptions::default())?;
        if best.as_ref().is_none_or(|b| out.loop_seconds < b.loop_seconds) {
            best = Some(out);
        }
    }
    Ok(best.expect("at least one repeat"))
}

/// Times ADI-QSC-L1⁺ against ADI-QSC-FL1⁺ for each `N` on an `m × m` mesh,
/// keeping the best of `repeats` runs.
pub fn speedup_study(problem: &Problem, order: &VariableOrder, levels: &[usize], m: usize, eps: f64, repeats: usize) -> Result<SpeedupReport> {
    if levels.is_empty() || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("speedup study needs a nonempty increasing list of N".into()));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &n in levels {
        let space = SpaceGrid::unit_square(m)?;
        let direct_cfg = problem.config(SchemeKind::AdiQscL1p, order, n, space)?.with_eps(eps);
        let fast_cfg = direct_cfg.clone().with_kind(SchemeKind::AdiQscFl1p);
        let direct = best_of(&direct_cfg, repeats)?;
        let fast = best_of(&fast_cfg, repeats)?;
        log::info!(
            "N = {n}: direct {:.3} s, fast {:.3} s ({} exponentials)",
            direct.loop_seconds,
            fast.loop_seconds,
            fast.esa_terms
        );
        rows.push(SpeedupRow {
            levels: n,
            direct_seconds: direct.loop_seconds,
            fast_seconds: fast.loop_seconds,
            ratio: fast.loop_seconds / direct.loop_seconds,
            direct_history_seconds: direct.history_seconds,
            fast_history_seconds: fast.history_seconds,
            esa_terms: fast.esa_terms,
            max_diff: direct.final_dofs.max_diff(&fast.final_dofs),
        });
    }
    Ok(SpeedupReport { cells: m, eps, rows })
}
