//! Each ADI level solves the assembled single-equation form of the scheme:
//! compares against a sparse direct solve of that form on a 7 × 7 mesh.

use vo_tfmid::experiments::{InitialVariant, Problem};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::qsc::SpaceGrid;
use vo_tfmid::schemes::{oracle_step, residual_check, run, RunOptions, SchemeKind};

fn main() -> vo_tfmid::Result<()> {
    let problem = Problem::example62(InitialVariant::Corrected);
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    for kind in SchemeKind::ALL {
        let cfg = problem.config(kind, &order, 4, SpaceGrid::unit_square(7)?)?;
        let traj = run(&cfg, &RunOptions::trajectory())?.trajectory.unwrap_or_default();
        let mut diff: f64 = 0.0;
        for n in 1..traj.len() {
            diff = diff.max(oracle_step(&cfg, &traj, n)?.max_diff(&traj[n]));
        }
        println!("{kind:>18}: oracle deviation {diff:.2e}, residual {:.2e}", residual_check(&traj, &cfg)?);
    }
    Ok(())
}
