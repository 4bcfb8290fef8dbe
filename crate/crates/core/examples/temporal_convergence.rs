//! Second-order temporal convergence for the two printed order functions.

use vo_tfmid::experiments::{convergence_study, Axis, InitialVariant, Measure, Problem, StudySpec};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::schemes::SchemeKind;

fn main() -> vo_tfmid::Result<()> {
    let problem = Problem::example62(InitialVariant::Corrected);
    for preset in [OrderPreset::A1, OrderPreset::A2] {
        let spec = StudySpec {
            kind: SchemeKind::AdiQscFl1p,
            axis: Axis::Time,
            refinements: vec![16, 32, 64],
            fixed: 128,
            measure: Measure::Exact,
            eps: vo_tfmid::esa::DEFAULT_EPS,
        };
        let report = convergence_study(&problem, &VariableOrder::preset(preset, 1.0)?, &spec)?;
        println!("α = {}", preset.name());
        for row in &report.rows {
            let order = row.order.map_or_else(|| "-".into(), |o| format!("{o:.2}"));
            println!("  τ = {:.6}  err = {:.4e}  order = {order}", row.step, row.err);
        }
    }
    Ok(())
}
