use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::{convergence_study, error_vs_true, rows_from, speedup_study, Axis, ConvergenceReport, Measure, StudySpec};
use crate::linalg::SPARSE_DOF_LIMIT;
use crate::properties::{properties_suite, PropertyContext};
use crate::qsc::{eval_at_collocation, SpaceGrid, MIN_CELLS_PERTURBED};
use crate::schemes::{run, RunOptions, SchemeKind};

use super::config::{Command, Format, MeasureKind, RunConfig};
use super::report::{format_g, render_report, speedup_table, table};

/// Result of one command: the report body and the threshold verdict.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    /// Human-readable threshold messages, printed to stderr.
    pub notes: Vec<String>,
    pub threshold_failed: bool,
}

/// Runs the command of a validated configuration.
pub fn execute(cfg: &RunConfig) -> Result<CommandOutput> {
    match cfg.command {
        Command::Solve => solve(cfg),
        Command::Convergence => convergence(cfg),
        Command::Compare => compare(cfg),
        Command::Properties => properties(cfg),
        Command::Bench => bench(cfg),
    }
}

fn space(cfg: &RunConfig) -> Result<SpaceGrid> {
    SpaceGrid::new(0.0, 1.0, 0.0, 1.0, cfg.mx[0], cfg.my[0])
}

fn solve(cfg: &RunConfig) -> Result<CommandOutput> {
    let (problem, order) = (cfg.problem()?, cfg.order()?);
    let grid = space(cfg)?;
    let n = cfg.levels[0];
    let scheme = problem.config(cfg.scheme, &order, n, grid.clone())?.with_eps(cfg.epsilon);
    let out = run(&scheme, &RunOptions::default())?;
    for w in &out.warnings {
        log::warn!("{w}");
    }
    let err = match problem.exact {
        Some(_) => error_vs_true(&grid, &out.final_dofs, &problem, problem.horizon)?,
        None => f64::NAN,
    };
    if let Some(path) = &cfg.solution {
        let u = eval_at_collocation(&grid, &out.final_dofs)?;
        let mut s = String::from("x,y,u\n");
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let _ = writeln!(s, "{},{},{}", format_g(grid.xi_x(i), 17), format_g(grid.xi_y(j), 17), format_g(u[(i, j)], 17));
            }
        }
        std::fs::write(path, s)?;
    }
    let report = ConvergenceReport {
        axis: Axis::Time,
        kind: cfg.scheme,
        order_label: order.label(),
        problem: problem.name.to_string(),
        fixed: cfg.mx[0],
        probe: crate::experiments::Probe::Final,
        rows: rows_from(&[(n, scheme.time.tau(), err, out.loop_seconds)]),
    };
    Ok(CommandOutput {
        body: render_report(&report, cfg.format, cfg.timing)?,
        ..Default::default()
    })
}

fn convergence(cfg: &RunConfig) -> Result<CommandOutput> {
    let (problem, order) = (cfg.problem()?, cfg.order()?);
    let (refinements, fixed) = match cfg.axis {
        Axis::Time => (cfg.levels.clone(), cfg.mx[0]),
        Axis::Space => (cfg.mx.clone(), cfg.levels[0]),
    };
    let spec = StudySpec {
        kind: cfg.scheme,
        axis: cfg.axis,
        refinements,
        fixed,
        measure: match cfg.measure {
            MeasureKind::Exact => Measure::Exact,
            MeasureKind::TwoMesh => Measure::TwoMesh(cfg.probe),
        },
        eps: cfg.epsilon,
    };
    let report = convergence_study(&problem, &order, &spec)?;
    let mut out = CommandOutput {
        body: render_report(&report, cfg.format, cfg.timing)?,
        ..Default::default()
    };
    if cfg.assert {
        let (lo, hi) = cfg.order_band(cfg.scheme);
        for (row, o) in report.rows.iter().filter_map(|r| r.order.map(|o| (r, o))) {
            if !(lo..=hi).contains(&o) {
                out.threshold_failed = true;
                let axis = if cfg.axis == Axis::Time { "N" } else { "Mx" };
                out.notes.push(format!("order {o:.3} at {axis} = {} outside [{lo}, {hi}]", row.level));
            }
        }
    }
    Ok(out)
}

/// Schemes `compare` runs when none are listed.
fn admissible(grid: &SpaceGrid) -> Vec<SchemeKind> {
    SchemeKind::ALL
        .into_iter()
        .filter(|k| !k.is_optimal() || grid.mx.min(grid.my) >= MIN_CELLS_PERTURBED)
        .filter(|k| k.is_adi() || grid.dof_count() <= SPARSE_DOF_LIMIT)
        .collect()
}

fn compare(cfg: &RunConfig) -> Result<CommandOutput> {
    let (problem, order) = (cfg.problem()?, cfg.order()?);
    let grid = space(cfg)?;
    let kinds = if cfg.schemes.is_empty() { admissible(&grid) } else { cfg.schemes.clone() };
    let digits = if cfg.format == Format::Csv { 17 } else { 6 };
    let mut rows = Vec::new();
    let mut first = None;
    for kind in kinds {
        let scheme = problem.config(kind, &order, cfg.levels[0], grid.clone())?.with_eps(cfg.epsilon);
        let out = run(&scheme, &RunOptions::default())?;
        let err = match problem.exact {
            Some(_) => format_g(error_vs_true(&grid, &out.final_dofs, &problem, problem.horizon)?, digits),
            None => String::new(),
        };
        let reference = first.get_or_insert_with(|| out.final_dofs.clone());
        rows.push(vec![
            kind.key().to_string(),
            err,
            format_g(reference.max_diff(&out.final_dofs), digits),
            if cfg.timing { format_g(out.loop_seconds, digits) } else { String::new() },
        ]);
    }
    Ok(CommandOutput {
        body: table(&["scheme", "err_l2", "max_dof_diff", "seconds"], &rows, cfg.format),
        ..Default::default()
    })
}

fn properties(cfg: &RunConfig) -> Result<CommandOutput> {
    let summary = properties_suite(&PropertyContext::default(), cfg.filter.as_deref());
    if summary.results.is_empty() {
        return Err(Error::Config(format!(
            "filter `{}` selects no property checks",
            cfg.filter.as_deref().unwrap_or_default()
        )));
    }
    let failed = !summary.all_passed();
    Ok(CommandOutput {
        body: format!("{summary}\n"),
        notes: summary.failures().map(|r| format!("{}::{} failed", r.suite, r.name)).collect(),
        threshold_failed: failed,
    })
}

/// Largest `N` and mesh for which the fast scheme must win clearly.
const BENCH_MIN_LEVELS: usize = 1 << 11;
const BENCH_MAX_CELLS: usize = 1 << 5;
const BENCH_MAX_RATIO: f64 = 0.7;

fn bench(cfg: &RunConfig) -> Result<CommandOutput> {
    let (problem, order) = (cfg.problem()?, cfg.order()?);
    let m = cfg.mx[0];
    let report = speedup_study(&problem, &order, &cfg.levels, m, cfg.epsilon, cfg.repeats)?;
    let mut out = CommandOutput {
        body: speedup_table(&report, cfg.format),
        ..Default::default()
    };
    let last = report.rows.last().expect("nonempty level list");
    if last.levels >= BENCH_MIN_LEVELS && m <= BENCH_MAX_CELLS && last.ratio >= BENCH_MAX_RATIO {
        out.threshold_failed = true;
        out.notes.push(format!(
            "fast/direct time ratio {:.3} at N = {} is not below {BENCH_MAX_RATIO}",
            last.ratio, last.levels
        ));
    }
    Ok(out)
}
