use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::experiments::{InitialVariant, Problem};
use crate::fractional_time::{OrderPreset, TimeGrid, VariableOrder};
use crate::qsc::{QscOperators, SpaceGrid};
use crate::schemes::{
    oracle_step, residual_check, run, stability_functional, stability_initial_bound, RunOptions, SchemeConfig,
    SchemeKind, Source,
};

use super::{Outcome, Property, PropertyContext};

const SCHEMES: &str = "schemes";
const EXPERIMENTS: &str = "experiments";

pub(super) fn properties() -> Vec<Property> {
    vec![
        Property::new(SCHEMES, "boundary_identity", boundary_identity),
        Property::new(SCHEMES, "stability_bound", stability_bound),
        Property::new(SCHEMES, "equivalent_single_equation", equivalent_single_equation),
        Property::new(SCHEMES, "fast_matches_direct_adi", fast_matches_direct_adi),
        Property::new(SCHEMES, "thread_count_invariance", thread_count_invariance),
        Property::new(EXPERIMENTS, "example62_data_consistent", example62_data_consistent),
    ]
}

fn example62(kind: SchemeKind, m: usize, n: usize) -> Result<SchemeConfig> {
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    Problem::example62(InitialVariant::Corrected).config(kind, &order, n, SpaceGrid::unit_square(m)?)
}

/// `(θxθy c^n)|∂Λ = 0` after every level of every scheme.
fn boundary_identity(_: &PropertyContext) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for kind in SchemeKind::ALL {
        let cfg = example62(kind, 8, 6)?;
        let ops = QscOperators::new(&cfg.space, false)?;
        let traj = run(&cfg, &RunOptions::trajectory())?.trajectory.unwrap_or_default();
        for c in &traj[1..] {
            worst = worst.max(ops.theta_theta(c).ring_max_abs());
        }
    }
    Ok(Outcome::at_most("max boundary value", worst, 1e-10))
}

/// With `f = 0` and a non-increasing order the discrete energy stays within
/// ten times its initial bound.
fn stability_bound(_: &PropertyContext) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [4, 64] {
        for kappa in [0.1, 1.0, 10.0] {
            let cfg = SchemeConfig::new(
                SchemeKind::QscL1p,
                kappa,
                VariableOrder::preset(OrderPreset::A0, 1.0)?,
                TimeGrid::new(1.0, n)?,
                SpaceGrid::unit_square(8)?,
                Source::Zero,
                Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin() + x * y * (1.0 - x) * (1.0 - y)),
            );
            let tau = cfg.time.tau();
            let ops = QscOperators::new(&cfg.space, false)?;
            let traj = run(&cfg, &RunOptions::trajectory())?.trajectory.unwrap_or_default();
            let bound = stability_initial_bound(&cfg.space, &ops, &traj[0], tau, kappa)?;
            for c in &traj[1..] {
                worst = worst.max(stability_functional(&cfg.space, &ops, c, tau, kappa)? / bound);
            }
        }
    }
    Ok(Outcome::at_most("max energy / initial bound", worst, 10.0))
}

/// Each ADI kind solves its assembled single-equation form.
fn equivalent_single_equation(_: &PropertyContext) -> Result<Outcome> {
    let (mut res, mut diff): (f64, f64) = (0.0, 0.0);
    for kind in SchemeKind::ALL {
        let cfg = example62(kind, 7, 4)?;
        let traj = run(&cfg, &RunOptions::trajectory())?.trajectory.unwrap_or_default();
        res = res.max(residual_check(&traj, &cfg)?);
        for n in 1..traj.len() {
            diff = diff.max(oracle_step(&cfg, &traj, n)?.max_diff(&traj[n]));
        }
    }
    Ok(Outcome::new(
        res <= 1e-11 && diff <= 1e-10,
        format!("residual {res:.3e} (bound 1e-11), oracle deviation {diff:.3e} (bound 1e-10)"),
    ))
}

/// Fast and direct ADI solutions within `1e3 ε`.
fn fast_matches_direct_adi(_: &PropertyContext) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (direct, fast) in [
        (SchemeKind::AdiQscL1p, SchemeKind::AdiQscFl1p),
        (SchemeKind::OptAdiQscL1p, SchemeKind::OptAdiQscFl1p),
    ] {
        let cfg = example62(direct, 12, 128)?;
        let a = run(&cfg, &RunOptions::default())?;
        let b = run(&cfg.clone().with_kind(fast), &RunOptions::default())?;
        worst = worst.max(a.final_dofs.max_diff(&b.final_dofs));
    }
    Ok(Outcome::at_most("max DOF difference", worst, 1e3 * crate::esa::DEFAULT_EPS))
}

/// Identical results on pools of 1, 2 and 4 workers.
fn thread_count_invariance(ctx: &PropertyContext) -> Result<Outcome> {
    let m = 8 + ctx.rng(21).random_range(0..4);
    let mut detail = Vec::new();
    let mut ok = true;
    for kind in [SchemeKind::AdiQscFl1p, SchemeKind::OptAdiQscFl1p, SchemeKind::QscL1p] {
        let cfg = example62(kind, m, 24)?;
        let outs = [1, 2, 4]
            .into_iter()
            .map(|threads| {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
                pool.install(|| run(&cfg, &RunOptions::default())).map(|o| o.final_dofs)
            })
            .collect::<Result<Vec<_>>>()?;
        let same = outs.windows(2).all(|w| w[0].as_slice() == w[1].as_slice());
        ok &= same;
        detail.push(format!("{kind}: {}", if same { "bitwise equal" } else { "differs" }));
    }
    Ok(Outcome::new(ok, detail.join(", ")))
}

/// The printed source matches the printed solution.
fn example62_data_consistent(ctx: &PropertyContext) -> Result<Outcome> {
    let p = Problem::example62(InitialVariant::Corrected);
    let mut rng = ctx.rng(22);
    let pts: Vec<(f64, f64, f64)> = (0..100)
        .map(|_| (rng.random_range(0.05..0.95), rng.random_range(0.05..0.95), rng.random_range(0.05..1.0)))
        .collect();
    let mut worst: f64 = 0.0;
    for preset in [OrderPreset::A1, OrderPreset::A2] {
        worst = worst.max(p.consistency_defect(&VariableOrder::preset(preset, 1.0)?, &pts)?);
    }
    Ok(Outcome::at_most("max PDE defect", worst, 1e-5))
}
