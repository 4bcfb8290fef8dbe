//! Wall time of the direct and fast ADI schemes as `N` doubles.

use vo_tfmid::experiments::{speedup_study, InitialVariant, Problem};
use vo_tfmid::fractional_time::{OrderPreset, VariableOrder};

fn main() -> vo_tfmid::Result<()> {
    let levels: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let levels = if levels.is_empty() { vec![256, 512, 1024] } else { levels };
    let problem = Problem::example62(InitialVariant::Corrected);
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    let report = speedup_study(&problem, &order, &levels, 16, vo_tfmid::esa::DEFAULT_EPS, 1)?;
    println!("{:>6} {:>10} {:>10} {:>7}", "N", "direct s", "fast s", "ratio");
    for r in &report.rows {
        println!("{:>6} {:>10.4} {:>10.4} {:>7.3}", r.levels, r.direct_seconds, r.fast_seconds, r.ratio);
    }
    Ok(())
}
