use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fractional_time::VariableOrder;
use crate::qsc::{DofGrid, SpaceGrid};
use crate::schemes::{run, RunOptions, SchemeKind};

use super::metrics::{error_vs_true, two_mesh_error};
use super::problem::Problem;

/// Which discretization parameter a study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Time,
    Space,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Time => "time",
            Self::Space => "space",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(Self::Time),
            "space" => Ok(Self::Space),
            _ => Err(Error::Config(format!("axis must be `time` or `space`, got `{s}`"))),
        }
    }
}

/// Where a two-mesh estimate compares the `N`-step and `2N`-step runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    Final,
    /// A physical time, which must be a node of every grid involved.
    Time(f64),
    /// Level `k` of the coarse run against level `2k` of the fine run; the
    /// time `kτ` shrinks with `τ`.
    Level(usize),
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Final => f.write_str("final time"),
            Self::Time(t) => write!(f, "t = {t}"),
            Self::Level(k) => write!(f, "coarse level {k}"),
        }
    }
}

/// How the error of one run is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    /// Against the exact solution at the final time.
    Exact,
    /// The run with `N` steps against the run with `2N` steps on the same mesh.
    TwoMesh(Probe),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Refinement parameter: `N` on the time axis, `M` on the space axis.
    pub level: usize,
    /// `τ` or `Δx`.
    pub step: f64,
    pub err: f64,
    /// `log2(err_prev / err) / log2(step_prev / step)`; `None` on the first row.
    pub order: Option<f64>,
    /// Time-loop wall seconds of the run (both runs for two-mesh rows).
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub axis: Axis,
    pub kind: SchemeKind,
    pub order_label: String,
    pub problem: String,
    /// `M` on the time axis, `N` on the space axis.
    pub fixed: usize,
    /// Where the errors are measured.
    pub probe: Probe,
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    /// Observed orders of rows `2..`.
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.err).collect()
    }
}

/// Pairwise orders `log2(e_{k-1}/e_k) / log2(h_{k-1}/h_k)`.
pub fn observed_orders(steps: &[f64], errs: &[f64]) -> Vec<f64> {
    steps
        .windows(2)
        .zip(errs.windows(2))
        .map(|(h, e)| (e[0] / e[1]).log2() / (h[0] / h[1]).log2())
        .collect()
}

/// Report rows from `(level, step, err, seconds)` tuples.
pub fn rows_from(entries: &[(usize, f64, f64, f64)]) -> Vec<ReportRow> {
    let steps: Vec<f64> = entries.iter().map(|e| e.1).collect();
    let errs: Vec<f64> = entries.iter().map(|e| e.2).collect();
    let orders = observed_orders(&steps, &errs);
    entries
        .iter()
        .enumerate()
        .map(|(k, &(level, step, err, seconds))| ReportRow {
            level,
            step,
            err,
            order: k.checked_sub(1).map(|j| orders[j]),
            seconds,
        })
        .collect()
}

/// A refinement study of one scheme.
#[derive(Debug, Clone)]
pub struct StudySpec {
    pub kind: SchemeKind,
    pub axis: Axis,
    /// `N` values (time axis) or `M` values (space axis), increasing.
    pub refinements: Vec<usize>,
    /// `M` on the time axis, `N` on the space axis.
    pub fixed: usize,
    pub measure: Measure,
    pub eps: f64,
}

/// Snapshots of one run at the requested levels, with its wall time.
struct Sampled {
    at: BTreeMap<usize, DofGrid>,
    seconds: f64,
}

fn sampled_run(problem: &Problem, spec: &StudySpec, order: &VariableOrder, n: usize, m: usize, levels: &[usize]) -> Result<Sampled> {
    let space = SpaceGrid::unit_square(m)?;
    let cfg = problem.config(spec.kind, order, n, space)?.with_eps(spec.eps);
    let out = run(
        &cfg,
        &RunOptions {
            stop_level: levels.iter().copied().max(),
            snapshot_levels: levels.to_vec(),
            ..Default::default()
        },
    )?;
    for w in &out.warnings {
        log::warn!("{w}");
    }
    Ok(Sampled {
        at: out.snapshots.into_iter().collect(),
        seconds: out.loop_seconds,
    })
}

/// Level of physical time `t` on a grid of `n` steps over `[0, horizon]`.
fn level_at(horizon: f64, n: usize, t: f64) -> Result<usize> {
    let x = t / horizon * n as f64;
    let l = x.round();
    if (x - l).abs() > 1e-9 || l < 0.0 || l > n as f64 {
        return Err(Error::Config(format!("t = {t} is not a node of the grid with {n} steps")));
    }
    Ok(l as usize)
}

/// Runs every refinement of `spec` and tabulates errors and orders.
pub fn convergence_study(problem: &Problem, order: &VariableOrder, spec: &StudySpec) -> Result<ConvergenceReport> {
    if spec.refinements.len() < 2 {
        return Err(Error::Config("a convergence study needs at least two refinements".into()));
    }
    if spec.refinements.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("refinements must be strictly increasing".into()));
    }
    let horizon = problem.horizon;
    let mut entries = Vec::with_capacity(spec.refinements.len());
    match (spec.axis, spec.measure) {
        (Axis::Space, Measure::TwoMesh(_)) => {
            return Err(Error::Config("two-mesh estimates refine time only".into()));
        }
        (Axis::Space, Measure::Exact) => {
            for &m in &spec.refinements {
                let space = SpaceGrid::unit_square(m)?;
                let s = sampled_run(problem, spec, order, spec.fixed, m, &[spec.fixed])?;
                let err = error_vs_true(&space, &s.at[&spec.fixed], problem, horizon)?;
                log::info!("{} M = {m}: err {err:.3e} ({:.2} s)", spec.kind.label(), s.seconds);
                entries.push((m, space.dx, err, s.seconds));
            }
        }
        (Axis::Time, Measure::Exact) => {
            let space = SpaceGrid::unit_square(spec.fixed)?;
            for &n in &spec.refinements {
                let s = sampled_run(problem, spec, order, n, spec.fixed, &[n])?;
                let err = error_vs_true(&space, &s.at[&n], problem, horizon)?;
                log::info!("{} N = {n}: err {err:.3e} ({:.2} s)", spec.kind.label(), s.seconds);
                entries.push((n, horizon / n as f64, err, s.seconds));
            }
        }
        (Axis::Time, Measure::TwoMesh(probe)) => {
            return two_mesh_study(problem, order, spec, &[probe]).map(|mut r| r.remove(0));
        }
    }
    Ok(ConvergenceReport {
        axis: spec.axis,
        kind: spec.kind,
        order_label: order.label(),
        problem: problem.name.to_string(),
        fixed: spec.fixed,
        probe: Probe::Final,
        rows: rows_from(&entries),
    })
}

/// Level probed by `probe` on a grid of `n` steps; `fine` selects the `2N` run.
fn probe_level(probe: Probe, horizon: f64, n: usize, fine: bool) -> Result<usize> {
    match probe {
        Probe::Final => Ok(n),
        Probe::Time(t) => level_at(horizon, n, t),
        Probe::Level(k) => {
            let coarse = n / if fine { 2 } else { 1 };
            if k == 0 || k > coarse {
                return Err(Error::Config(format!("coarse level {k} is outside 1..={coarse}")));
            }
            Ok(if fine { 2 * k } else { k })
        }
    }
}

/// Two-mesh time study evaluated at several probes from the same runs.
pub fn two_mesh_study(problem: &Problem, order: &VariableOrder, spec: &StudySpec, probes: &[Probe]) -> Result<Vec<ConvergenceReport>> {
    if spec.refinements.len() < 2 || spec.refinements.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("a convergence study needs at least two increasing refinements".into()));
    }
    if spec.axis != Axis::Time || probes.is_empty() {
        return Err(Error::Config("two-mesh estimates refine time only, at one or more probes".into()));
    }
    let horizon = problem.horizon;
    let space = SpaceGrid::unit_square(spec.fixed)?;
    // A run with `k` steps serves as the coarse run of `k` and the fine run
    // of `k / 2`; it records the levels of both roles.
    let roles = |k: usize, fine: bool| probes.iter().map(|&p| probe_level(p, horizon, k, fine)).collect::<Result<Vec<_>>>();
    let levels_of = |k: usize| -> Result<Vec<usize>> {
        let mut v = roles(k, true)?;
        if spec.refinements.contains(&k) {
            v.extend(roles(k, false)?);
        }
        Ok(v)
    };
    let mut entries = vec![Vec::with_capacity(spec.refinements.len()); probes.len()];
    // N and 2N runs; a fine run is reused when the next coarse N matches.
    let mut cache: BTreeMap<usize, Sampled> = BTreeMap::new();
    for &n in &spec.refinements {
        let mut seconds = 0.0;
        for k in [n, 2 * n] {
            if !cache.contains_key(&k) {
                let s = sampled_run(problem, spec, order, k, spec.fixed, &levels_of(k)?)?;
                cache.insert(k, s);
            }
            seconds += cache[&k].seconds;
        }
        let (lc, lf) = (roles(n, false)?, roles(2 * n, true)?);
        for (slot, (a, b)) in entries.iter_mut().zip(lc.iter().zip(&lf)) {
            let err = two_mesh_error(&space, &cache[&n].at[a], &cache[&(2 * n)].at[b])?;
            log::info!("{} N = {n}: two-mesh err {err:.3e} at level {a}", spec.kind.label());
            slot.push((n, horizon / n as f64, err, seconds));
        }
        cache.retain(|&k, _| k >= 2 * n);
    }
    Ok(probes
        .iter()
        .zip(entries)
        .map(|(&probe, e)| ConvergenceReport {
            axis: Axis::Time,
            kind: spec.kind,
            order_label: order.label(),
            problem: problem.name.to_string(),
            fixed: spec.fixed,
            probe,
            rows: rows_from(&e),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_arithmetic() {
        let o = observed_orders(&[0.1, 0.05], &[1e-2, 2.5e-3]);
        assert!((o[0] - 2.0).abs() < 1e-12);
        let rows = rows_from(&[(16, 0.1, 1e-2, 0.0), (32, 0.05, 2.5e-3, 0.0)]);
        assert_eq!(rows[0].order, None);
        assert!((rows[1].order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn node_lookup() {
        assert_eq!(level_at(1.0, 512, 1.0 / 64.0).unwrap(), 8);
        assert!(level_at(1.0, 32, 1.0 / 64.0).is_err());
        assert_eq!(probe_level(Probe::Level(1), 1.0, 16, false).unwrap(), 1);
        assert_eq!(probe_level(Probe::Level(1), 1.0, 32, true).unwrap(), 2);
        assert_eq!(probe_level(Probe::Final, 1.0, 32, true).unwrap(), 32);
        assert!(probe_level(Probe::Level(0), 1.0, 32, true).is_err());
    }

    #[test]
    fn study_validates_refinements() {
        let p = Problem::example61(crate::experiments::InitialVariant::Paper);
        let order = VariableOrder::preset(crate::fractional_time::OrderPreset::A1, 1.0).unwrap();
        let spec = StudySpec {
            kind: SchemeKind::AdiQscL1p,
            axis: Axis::Time,
            refinements: vec![8],
            fixed: 6,
            measure: Measure::TwoMesh(Probe::Final),
            eps: 1e-12,
        };
        assert!(convergence_study(&p, &order, &spec).is_err());
        let spec = StudySpec { refinements: vec![8, 16], ..spec };
        let r = convergence_study(&p, &order, &spec).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows[1].order.unwrap() > 1.0);
    }
}
