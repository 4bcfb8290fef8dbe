//! Reduced accuracy near `t = 0` for orders with `α(0) > 0` on a problem with
//! a weakly singular solution, estimated by two-mesh differences.

use vo_tfmid::experiments::{two_mesh_study, Axis, InitialVariant, Measure, Probe, Problem, StudySpec};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};
use vo_tfmid::schemes::SchemeKind;

fn main() -> vo_tfmid::Result<()> {
    let problem = Problem::example61(InitialVariant::Corrected);
    for preset in [OrderPreset::A0, OrderPreset::A1, OrderPreset::A3] {
        let spec = StudySpec {
            kind: SchemeKind::AdiQscL1p,
            axis: Axis::Time,
            refinements: vec![1 << 8, 1 << 9, 1 << 10],
            fixed: 16,
            measure: Measure::TwoMesh(Probe::Level(1)),
            eps: vo_tfmid::esa::DEFAULT_EPS,
        };
        let order = VariableOrder::preset(preset, 1.0)?;
        let [first, last] = &two_mesh_study(&problem, &order, &spec, &[Probe::Level(1), Probe::Final])?[..] else {
            unreachable!("one report per probe");
        };
        let fmt = |o: Vec<f64>| o.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>().join(", ");
        println!("α = {}: first step orders {}; final time orders {}", preset.name(), fmt(first.orders()), fmt(last.orders()));
    }
    Ok(())
}
