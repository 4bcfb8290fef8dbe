//! Quadrature oracles for the kernel integrals.
//!
//! Every kernel integral `∫ (t - s)^{-α} g(s) ds` is rewritten with
//! `t - s = y^p`, `p = 1 / (1 - α)`, which turns the weakly singular
//! integrand into the smooth `p g(t - y^p)`. The remaining one-dimensional
//! integrals use double-exponential quadrature.

use quadrature::double_exponential::integrate;

use crate::error::{Error, Result};
use crate::special::gamma;

/// Smallest accepted oracle tolerance.
pub const MIN_TOL: f64 = 1e-12;

fn checked(label: &str, out: quadrature::Output, tol: f64, scale: f64) -> Result<f64> {
    if !out.integral.is_finite() || out.error_estimate > tol * scale.max(1e-300) {
        return Err(Error::Oracle(format!(
            "{label}: estimate {:e} exceeds tolerance {tol:e}",
            out.error_estimate
        )));
    }
    Ok(out.integral)
}

/// `∫_{d_lo}^{d_hi} d^{-α} dd` through the substitution `d = y^p`.
fn power_integral(d_lo: f64, d_hi: f64, alpha: f64, tol: f64) -> Result<f64> {
    if d_hi <= d_lo {
        return Ok(0.0);
    }
    let p = 1.0 / (1.0 - alpha);
    let (y_lo, y_hi) = (d_lo.powf(1.0 - alpha), d_hi.powf(1.0 - alpha));
    let f = |y: f64| p * y.powf(-p * alpha) * y.powf(p - 1.0);
    let out = integrate(f, y_lo, y_hi, 0.1 * tol * (y_hi - y_lo) * p);
    checked("inner kernel integral", out, tol, (y_hi - y_lo) * p)
}

/// L1⁺ weight `a_j` from the defining double integral
/// `(1/τ²) ∫_{t_{n-1}}^{t_n} ∫_{t_{k-1}}^{min(t, t_k)} ω_{1-α}(t - s) ds dt`
/// with `j = n - k + 1`.
pub fn coeff_quadrature_oracle(j: usize, tau: f64, alpha: f64, tol: f64) -> Result<f64> {
    if tol < MIN_TOL {
        return Err(Error::Usage(format!("oracle tolerance {tol:e} below {MIN_TOL:e}")));
    }
    if j == 0 || !(tau > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("invalid (j, tau, alpha) = ({j}, {tau}, {alpha})")));
    }
    let shift = j as f64 - 1.0;
    let inner_failed = std::cell::Cell::new(None);
    let f = |u: f64| {
        let d_hi = u + shift;
        let d_lo = (u + shift - 1.0).max(0.0);
        match power_integral(d_lo, d_hi, alpha, 0.1 * tol) {
            Ok(v) => v,
            Err(e) => {
                inner_failed.set(Some(e.to_string()));
                0.0
            }
        }
    };
    let out = integrate(f, 0.0, 1.0, 0.5 * tol);
    if let Some(msg) = inner_failed.take() {
        return Err(Error::Oracle(msg));
    }
    let scaled = checked("outer kernel integral", out, tol, out.integral.abs())?;
    Ok(tau.powf(-alpha) / gamma(1.0 - alpha) * scaled)
}

/// Caputo derivative `∫_0^t ω_{1-α}(t - s) v'(s) ds` of a function given by
/// its derivative.
pub fn caputo_oracle<F>(v_prime: F, alpha: f64, t: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if t <= 0.0 {
        return Ok(0.0);
    }
    let p = 1.0 / (1.0 - alpha);
    let y_hi = t.powf(1.0 - alpha);
    let out = integrate(|y| p * v_prime(t - y.powf(p)), 0.0, y_hi, 0.1 * tol);
    let val = checked("Caputo integral", out, tol, out.integral.abs().max(1.0))?;
    Ok(val / gamma(1.0 - alpha))
}

/// Cell average `(1/τ) ∫_{t0}^{t1} D^α v(t) dt` of the Caputo derivative
/// with the order frozen at `alpha`.
pub fn caputo_cell_average_oracle<F>(v_prime: F, alpha: f64, t0: f64, t1: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let failed = std::cell::Cell::new(None);
    let out = integrate(
        |t| match caputo_oracle(&v_prime, alpha, t, 0.1 * tol) {
            Ok(v) => v,
            Err(e) => {
                failed.set(Some(e.to_string()));
                0.0
            }
        },
        t0,
        t1,
        0.5 * tol * (t1 - t0),
    );
    if let Some(msg) = failed.take() {
        return Err(Error::Oracle(msg));
    }
    let val = checked("Caputo cell average", out, tol, (t1 - t0) * out.integral.abs().max(1.0))?;
    Ok(val / (t1 - t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional_time::l1plus::l1plus_coeff;

    #[test]
    fn oracle_agrees_with_closed_form() {
        for &(j, tau, alpha) in &[(1, 1.0, 0.5), (5, 0.25, 0.7), (2, 1.0, 0.5), (3, 0.5, 0.4)] {
            let q = coeff_quadrature_oracle(j, tau, alpha, 1e-10).unwrap();
            let c = l1plus_coeff(j, tau, alpha);
            assert!((q - c).abs() <= 1e-10 * c, "j={j}: {q} vs {c}");
        }
        let q = coeff_quadrature_oracle(4, 0.5, 1e-6, 1e-10).unwrap();
        assert!((q - 1.0).abs() < 1e-5);
        assert!(matches!(coeff_quadrature_oracle(1, 1.0, 0.5, 1e-13), Err(Error::Usage(_))));
    }

    #[test]
    fn caputo_of_cubic() {
        let alpha = 0.35;
        let t = 0.7_f64;
        let exact = 6.0 / gamma(4.0 - alpha) * t.powf(3.0 - alpha);
        let q = caputo_oracle(|s| 3.0 * s * s, alpha, t, 1e-12).unwrap();
        assert!((q - exact).abs() < 1e-11 * exact);
    }
}
