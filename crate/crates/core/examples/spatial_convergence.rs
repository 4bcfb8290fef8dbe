//! Second-order spatial convergence of ADI-QSC-L1⁺ and fourth order of its
//! optimal variant at a fine time step.

use vo_tfmid::experiments::{convergence_study, Axis, InitialVariant, Measure, Problem, StudySpec};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::schemes::SchemeKind;

fn main() -> vo_tfmid::Result<()> {
    let problem = Problem::example62(InitialVariant::Corrected);
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    for (kind, n) in [(SchemeKind::AdiQscL1p, 1 << 10), (SchemeKind::OptAdiQscFl1p, 1 << 12)] {
        let spec = StudySpec {
            kind,
            axis: Axis::Space,
            refinements: vec![8, 16, 32],
            fixed: n,
            measure: Measure::Exact,
            eps: vo_tfmid::esa::DEFAULT_EPS,
        };
        let report = convergence_study(&problem, &order, &spec)?;
        println!("{kind}, N = {n}");
        for row in &report.rows {
            let order = row.order.map_or_else(|| "-".into(), |o| format!("{o:.2}"));
            println!("  M = {:>3}  err = {:.4e}  order = {order}", row.level, row.err);
        }
    }
    Ok(())
}
