//! Solves the smooth test problem once and prints the final-time L2 error.
//!
//! `cargo run --release --example solve_example62 -- [scheme] [N] [M]`

use vo_tfmid::experiments::{error_vs_true, InitialVariant, Problem};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::qsc::SpaceGrid;
use vo_tfmid::schemes::{run, RunOptions, SchemeKind};

fn main() -> vo_tfmid::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: SchemeKind = args.next().as_deref().unwrap_or("adi_qsc_fl1p").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(128);
    let m: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);

    let problem = Problem::example62(InitialVariant::Corrected);
    let order = VariableOrder::preset(OrderPreset::A1, problem.horizon)?;
    let grid = SpaceGrid::unit_square(m)?;
    let cfg = problem.config(kind, &order, n, grid.clone())?;
    let out = run(&cfg, &RunOptions::default())?;
    let err = error_vs_true(&grid, &out.final_dofs, &problem, problem.horizon)?;
    println!("{kind}  N = {n}  M = {m}");
    println!("err_l2 = {err:.6e}  loop = {:.3} s  history = {:.3} s", out.loop_seconds, out.history_seconds);
    Ok(())
}
