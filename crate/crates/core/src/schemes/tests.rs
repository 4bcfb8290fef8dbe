use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::fractional_time::{OrderPreset, TimeGrid, VariableOrder};
use crate::qsc::SpaceGrid;

fn smooth_config(kind: SchemeKind, m: usize, levels: usize) -> SchemeConfig {
    let order = VariableOrder::preset(OrderPreset::A1, 1.0).unwrap();
    let src = Source::Separable {
        time: Arc::new(|t: f64| 1.0 + 3.0 * t * t),
        space: Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin()),
    };
    SchemeConfig::new(
        kind,
        1.0,
        order,
        TimeGrid::new(1.0, levels).unwrap(),
        SpaceGrid::unit_square(m).unwrap(),
        src,
        Arc::new(|x: f64, y: f64| x.sin() * y.sin() + x * y),
    )
}

#[test]
fn zero_data_stays_zero() {
    for kind in SchemeKind::ALL {
        let mut cfg = smooth_config(kind, 6, 5);
        cfg.source = Source::Zero;
        cfg.initial = Arc::new(|_, _| 0.0);
        let out = run(&cfg, &RunOptions::default()).unwrap();
        assert_eq!(out.level, 5);
        assert_eq!(out.final_dofs.max_abs(), 0.0, "{kind}");
    }
}

#[test]
fn zero_levels_return_initial_dofs() {
    let mut cfg = smooth_config(SchemeKind::AdiQscL1p, 6, 4);
    cfg.initial = Arc::new(|_, _| 1.0);
    let out = run(&cfg, &RunOptions { stop_level: Some(0), ..Default::default() }).unwrap();
    assert_eq!(out.level, 0);
    assert!(out.final_dofs.as_slice().iter().all(|&c| (c - 1.0).abs() < 1e-14));
}

#[test]
fn every_kind_matches_its_assembled_equation() {
    for kind in SchemeKind::ALL {
        let cfg = smooth_config(kind, 7, 4);
        let out = run(&cfg, &RunOptions::trajectory()).unwrap();
        let traj = out.trajectory.unwrap();
        assert_eq!(traj.len(), 5);
        let res = residual_check(&traj, &cfg).unwrap();
        assert!(res <= 1e-11, "{kind}: residual {res:e}");
        for n in 1..=4 {
            let oracle = oracle_step(&cfg, &traj, n).unwrap();
            let d = oracle.max_diff(&traj[n]);
            assert!(d <= 1e-10, "{kind} level {n}: {d:e}");
        }
    }
}

#[test]
fn corrupted_dof_is_detected() {
    let cfg = smooth_config(SchemeKind::AdiQscL1p, 7, 3);
    let mut traj = run(&cfg, &RunOptions::trajectory()).unwrap().trajectory.unwrap();
    traj[2].as_mut_slice()[20] += 1e-3;
    assert!(residual_check(&traj, &cfg).unwrap() > 1e-6);
}

#[test]
fn boundary_identity_holds_after_every_level() {
    for kind in SchemeKind::ALL {
        let cfg = smooth_config(kind, 8, 6);
        let ops = crate::qsc::QscOperators::new(&cfg.space, false).unwrap();
        let traj = run(&cfg, &RunOptions::trajectory()).unwrap().trajectory.unwrap();
        for c in &traj[1..] {
            assert!(ops.theta_theta(c).ring_max_abs() <= 1e-12, "{kind}");
        }
    }
}

#[test]
fn fast_history_tracks_direct_history() {
    for (direct, fast) in [
        (SchemeKind::AdiQscL1p, SchemeKind::AdiQscFl1p),
        (SchemeKind::OptAdiQscL1p, SchemeKind::OptAdiQscFl1p),
    ] {
        let cfg = smooth_config(direct, 32, 256);
        let a = run(&cfg, &RunOptions::default()).unwrap();
        let b = run(&cfg.clone().with_kind(fast), &RunOptions::default()).unwrap();
        let d = a.final_dofs.max_diff(&b.final_dofs);
        assert!(d <= 1e-9, "{fast}: {d:e}");
        assert!(b.esa_terms > 0 && b.esa_updates > 0);
    }
}

#[test]
fn step_ops_reject_wrong_kind_or_level() {
    let cfg = smooth_config(SchemeKind::AdiQscL1p, 6, 4);
    let mut s = Solver::new(&cfg).unwrap();
    assert!(s.step_full().is_err());
    assert!(s.step_adi_general().is_err());
    s.step_adi_first().unwrap();
    assert!(s.step_adi_first().is_err());
    s.step_adi_general().unwrap();
    assert!(s.step_adi_fast().is_err());
}

#[test]
fn configuration_errors() {
    let cfg = smooth_config(SchemeKind::OptAdiQscL1p, 5, 4);
    assert!(matches!(Solver::new(&cfg), Err(crate::Error::Config(_))));
    let cfg = smooth_config(SchemeKind::QscL1p, 200, 2);
    assert!(matches!(Solver::new(&cfg), Err(crate::Error::Config(_))));
    let mut cfg = smooth_config(SchemeKind::AdiQscL1p, 6, 2);
    cfg.kappa = 0.0;
    assert!(cfg.validate().is_err());
}

#[test]
fn init_dofs_interpolates() {
    let mut cfg = smooth_config(SchemeKind::AdiQscL1p, 16, 2);
    let c0 = init_dofs(&cfg).unwrap();
    let ops = crate::qsc::QscOperators::new(&cfg.space, false).unwrap();
    let u = cfg.space.sample(|x, y| x.sin() * y.sin() + x * y);
    assert!(ops.theta_theta(&c0).max_diff(&u) <= 1e-12);
    cfg.initial = Arc::new(|_, _| 0.0);
    assert_eq!(init_dofs(&cfg).unwrap().max_abs(), 0.0);
}

#[test]
fn stability_functional_stays_bounded() {
    for tau_exp in [2, 6] {
        for kappa in [0.1, 1.0, 10.0] {
            let n = 1usize << tau_exp;
            let order = VariableOrder::preset(OrderPreset::A0, 1.0).unwrap();
            let cfg = SchemeConfig::new(
                SchemeKind::QscL1p,
                kappa,
                order,
                TimeGrid::new(1.0, n).unwrap(),
                SpaceGrid::unit_square(8).unwrap(),
                Source::Zero,
                Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin()),
            );
            let tau = cfg.time.tau();
            let ops = crate::qsc::QscOperators::new(&cfg.space, false).unwrap();
            let traj = run(&cfg, &RunOptions::trajectory()).unwrap().trajectory.unwrap();
            let bound = stability_initial_bound(&cfg.space, &ops, &traj[0], tau, kappa).unwrap();
            for c in &traj[1..] {
                let e = stability_functional(&cfg.space, &ops, c, tau, kappa).unwrap();
                assert!(e <= 10.0 * bound, "tau 2^-{tau_exp} kappa {kappa}: {e} vs {bound}");
            }
        }
    }
}
