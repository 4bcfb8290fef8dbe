//! The exponential-sum history reproduces the direct L1⁺ history to the
//! requested tolerance while holding `O(R)` values per unknown.

use vo_tfmid::experiments::{InitialVariant, Problem};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::qsc::SpaceGrid;
use vo_tfmid::schemes::{run, RunOptions, SchemeKind};

fn main() -> vo_tfmid::Result<()> {
    let problem = Problem::example62(InitialVariant::Corrected);
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    let cfg = problem.config(SchemeKind::AdiQscL1p, &order, 256, SpaceGrid::unit_square(32)?)?;
    let direct = run(&cfg, &RunOptions::default())?;
    for eps in [1e-6, 1e-9, 1e-12] {
        let fast = run(&cfg.clone().with_kind(SchemeKind::AdiQscFl1p).with_eps(eps), &RunOptions::default())?;
        println!(
            "eps = {eps:.0e}  R = {}  max DOF difference = {:.3e}",
            fast.esa_terms,
            direct.final_dofs.max_diff(&fast.final_dofs)
        );
    }
    Ok(())
}
