use rand::Rng;

use crate::error::Result;
use crate::esa::{esa_params, history_push, history_sum_fast, EsaHistoryState};
use crate::fractional_time::oracle::caputo_cell_average_oracle;
use crate::fractional_time::{
    coeff_quadrature_oracle, history_sum_direct, l1plus_row, midpoint_orders, L1PlusRow, OrderPreset, TimeGrid,
    VariableOrder,
};
use crate::schemes::{run, RunOptions, SchemeConfig, SchemeKind, Source};
use crate::special::gamma;

use super::{Outcome, Property, PropertyContext};

const TIME: &str = "fractional_time";
const ESA: &str = "esa_fast";

pub(super) fn properties() -> Vec<Property> {
    vec![
        Property::new(TIME, "weight_monotonicity", weight_monotonicity),
        Property::new(TIME, "weight_tail_bound", weight_tail_bound),
        Property::new(TIME, "weights_match_quadrature", weights_match_quadrature),
        Property::new(TIME, "running_b_sum_bounded", running_b_sum_bounded),
        Property::new(TIME, "linear_history_is_exact", linear_history_is_exact),
        Property::new(ESA, "kernel_error_bound", kernel_error_bound),
        Property::new(ESA, "history_memory", history_memory),
        Property::new(ESA, "fast_matches_direct_scalar", fast_matches_direct_scalar),
        Property::new(ESA, "work_doubling", work_doubling),
    ]
}

fn row(ctx: &PropertyContext, n: usize, tau: f64, alpha: f64) -> L1PlusRow {
    L1PlusRow::from_coeffs(n, tau, alpha, ctx.coeff.as_ref())
}

/// b-row strictly decreasing and positive, a-row decreasing from index 2.
fn weight_monotonicity(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(1);
    for _ in 0..1000 {
        let n = rng.random_range(1..=64);
        let tau = 1.0 - rng.random_range(0.0..1.0);
        let alpha = rng.random_range(0.05..=0.95);
        let r = row(ctx, n, tau, alpha);
        let a_ok = r.a.iter().all(|&v| v > 0.0) && r.a[1.min(n - 1)..].windows(2).all(|w| w[0] > w[1]);
        let b_ok = r.b.iter().all(|&v| v > 0.0) && r.b.windows(2).all(|w| w[0] > w[1]);
        if !(a_ok && b_ok) {
            return Ok(Outcome::new(false, format!("violated at n = {n}, tau = {tau:.4}, alpha = {alpha:.4}")));
        }
    }
    Ok(Outcome::new(true, "1000 random rows positive and decreasing"))
}

/// `a_n >= (n τ)^{-α} / Γ(1 - α)` for `n >= 2`.
fn weight_tail_bound(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(2);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(2..=64);
        let tau = 1.0 - rng.random_range(0.0..1.0);
        let alpha = rng.random_range(0.05..=0.95);
        let bound = (n as f64 * tau).powf(-alpha) / gamma(1.0 - alpha);
        worst = worst.min((ctx.coeff)(n, tau, alpha) / bound);
    }
    Ok(Outcome::new(worst >= 1.0 - 1e-12, format!("min a_n / bound {worst:.6}")))
}

fn weights_match_quadrature(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..40 {
        let j = rng.random_range(1..=64);
        let tau = rng.random_range(1e-3..=1.0);
        let alpha = rng.random_range(0.05..=0.95);
        let exact = coeff_quadrature_oracle(j, tau, alpha, 1e-12)?;
        worst = worst.max(((ctx.coeff)(j, tau, alpha) - exact).abs() / exact.abs());
    }
    Ok(Outcome::at_most("max relative deviation", worst, 1e-9))
}

/// `Σ_k b_k^{(k)}` over one horizon settles as the grid is refined.
fn running_b_sum_bounded(ctx: &PropertyContext) -> Result<Outcome> {
    let order = VariableOrder::preset(OrderPreset::A1, 1.0)?;
    let mut sums = Vec::new();
    for p in 4..=10 {
        let grid = TimeGrid::new(1.0, 1 << p)?;
        let tau = grid.tau();
        let mids = midpoint_orders(&order, &grid)?;
        let s: f64 = mids
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let k = i + 1;
                let ak = (ctx.coeff)(k, tau, a);
                if k == 1 {
                    1.0 + tau * ak
                } else {
                    tau * ak
                }
            })
            .sum();
        sums.push(s);
    }
    let (prev, last) = (sums[sums.len() - 2], sums[sums.len() - 1]);
    let change = (last - prev).abs() / prev;
    Ok(Outcome::new(
        change < 0.05 && sums.iter().all(|s| s.is_finite()),
        format!("sums {:.4} .. {:.4}, last change {:.2}%", sums[0], last, 100.0 * change),
    ))
}

/// Piecewise-linear interpolation is exact for `v = c t`.
fn linear_history_is_exact(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..12 {
        let n = rng.random_range(1..=40);
        let tau = rng.random_range(0.01..=0.1);
        let alpha = rng.random_range(0.1..=0.9);
        let c = rng.random_range(-2.0..=2.0);
        let values: Vec<f64> = (0..=n).map(|k| c * k as f64 * tau).collect();
        let got = history_sum_direct(&values, &row(ctx, n, tau, alpha))?;
        let t1 = n as f64 * tau;
        let want = caputo_cell_average_oracle(|_| c, alpha, t1 - tau, t1, 1e-12)?;
        worst = worst.max((got - want).abs() / want.abs().max(1e-300));
    }
    Ok(Outcome::at_most("max relative deviation", worst, 1e-10))
}

/// Relative error of the exponential sum over `x ∈ [τ/T, 1]` and the order range.
fn kernel_error_bound(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(6);
    let cases = [(0.3, 0.8, 1e-12, 256.0), (0.05, 0.95, 1e-12, 1024.0), (0.45, 0.45, 1e-8, 64.0), (0.2, 0.9, 1e-6, 4096.0)];
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for &(lo, hi, eps, steps) in &cases {
        let q = esa_params(lo, hi, eps, 1.0, 1.0 / steps)?;
        let ln_x0 = (1.0 / steps).ln();
        for _ in 0..2600 {
            let x = (ln_x0 * rng.random_range(0.0..=1.0)).exp();
            let alpha = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            let want = x.powf(-alpha);
            worst = worst.max((q.kernel(alpha, x)? - want).abs() / want / eps);
            samples += 1;
        }
    }
    Ok(Outcome::new(worst <= 1.0, format!("{samples} samples, max error / eps {worst:.3}")))
}

/// The fast history holds `(R + 2)` values per DOF regardless of `N`.
fn history_memory(_: &PropertyContext) -> Result<Outcome> {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [64, 512] {
        let cfg = SchemeConfig::new(
            SchemeKind::AdiQscFl1p,
            1.0,
            VariableOrder::preset(OrderPreset::A1, 1.0)?,
            TimeGrid::new(1.0, n)?,
            crate::qsc::SpaceGrid::unit_square(6)?,
            Source::Zero,
            std::sync::Arc::new(|x: f64, y: f64| x * (1.0 - x) * y * (1.0 - y)),
        );
        let out = run(&cfg, &RunOptions::default())?;
        let dofs = cfg.space.dof_count();
        ok &= out.history_memory_len == (out.esa_terms + 2) * dofs;
        detail.push(format!("N = {n}: {} values, R = {}", out.history_memory_len, out.esa_terms));
    }
    Ok(Outcome::new(ok, detail.join("; ")))
}

fn fast_matches_direct_scalar(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(8);
    let mut worst: f64 = 0.0;
    for n in [64usize, 300, 1024] {
        let tau = 1.0 / n as f64;
        let alpha = rng.random_range(0.1..=0.9);
        let (a, w, s) = (rng.random_range(-1.0..=1.0), rng.random_range(1.0..=6.0), rng.random_range(-1.0..=1.0));
        let v: Vec<f64> = (0..=n)
            .map(|k| {
                let t = k as f64 * tau;
                a * (w * t).sin() + s * t * t + (-t).exp()
            })
            .collect();
        let q = esa_params(alpha, alpha, 1e-12, 1.0, tau)?;
        let mut state = EsaHistoryState::new(&q, &v[..1]);
        let mut scale: f64 = 0.0;
        let mut err: f64 = 0.0;
        for lvl in 3..=n {
            state.push_value(&q, &v[lvl - 2..=lvl - 2])?;
            let r = l1plus_row(lvl, tau, alpha)?;
            let direct = history_sum_direct(&v[..=lvl], &r)?;
            let fast = history_sum_fast(
                &state,
                &q,
                r.a(1),
                r.a(2),
                &v[lvl - 2..=lvl - 2],
                &v[lvl - 1..=lvl - 1],
                &v[lvl..=lvl],
                alpha,
            )?[0];
            err = err.max((fast - direct).abs());
            scale = scale.max(direct.abs());
        }
        worst = worst.max(err / scale);
    }
    Ok(Outcome::at_most("max relative deviation", worst, 1e-9))
}

/// Exponential updates of the fast history when `N` doubles.
fn work_doubling(_: &PropertyContext) -> Result<Outcome> {
    let updates = |n: usize| -> Result<u64> {
        let tau = 1.0 / n as f64;
        let q = esa_params(0.3, 0.8, 1e-12, 1.0, tau)?;
        let mut s = EsaHistoryState::new(&q, &[0.0]);
        for k in 3..=n {
            history_push(&mut s, &q, &[(k as f64 * tau).sin()])?;
        }
        Ok(s.updates())
    };
    let mut ratios = Vec::new();
    for p in [9, 10, 11] {
        ratios.push(updates(1 << (p + 1))? as f64 / updates(1 << p)? as f64);
    }
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Ok(Outcome::new(
        worst <= 2.6,
        format!("doubling ratios {}", ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")),
    ))
}
