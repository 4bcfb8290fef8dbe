use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, gamma_lower_regularized, gamma_upper_regularized, ln_gamma, one_minus_exp_neg};

/// Default target accuracy of the exponential sum.
pub const DEFAULT_EPS: f64 = 1e-12;

/// How the index range `N̲ .. N̄` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// The closed-form bounds only.
    Printed,
    /// Closed-form bounds, widened until both truncated tails of the
    /// exponential sum are below `ε/4` relative to `x^{-α}`.
    ///
    /// For orders below one the closed-form upper bound leaves a relative
    /// tail near `ε^{α_* sqrt(e)}` at `x = τ/T`.
    #[default]
    Safeguarded,
}

/// Exponential-sum approximation `x^{-α} ≈ Σ_r ϖ_r(α) e^{-λ_r x}` on
/// `x ∈ [τ/T, 1]`, `α ∈ [α_*, α^*]`, with `λ_r = e^{r h}`,
/// `r = N̲+1 ..= N̄`.
#[derive(Debug, Clone)]
pub struct EsaQuadrature {
    pub eps: f64,
    pub h: f64,
    pub n_lower: i64,
    pub n_upper: i64,
    pub horizon: f64,
    pub tau: f64,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    /// Closed-form `(N̲, N̄)` before any widening.
    pub printed_bounds: (i64, i64),
    pub truncation: Truncation,
    lambda: Vec<f64>,
    decay: Vec<f64>,
    gain: Vec<f64>,
    bcoef: Vec<f64>,
}

/// [`esa_params_with`] under the default [`Truncation::Safeguarded`] rule.
pub fn esa_params(alpha_lower: f64, alpha_upper: f64, eps: f64, horizon: f64, tau: f64) -> Result<EsaQuadrature> {
    esa_params_with(alpha_lower, alpha_upper, eps, horizon, tau, Truncation::default())
}

pub fn esa_params_with(
    alpha_lower: f64,
    alpha_upper: f64,
    eps: f64,
    horizon: f64,
    tau: f64,
    truncation: Truncation,
) -> Result<EsaQuadrature> {
    if !(alpha_lower > 0.0 && alpha_lower <= alpha_upper && alpha_upper < 1.0) {
        return Err(Error::Domain(format!(
            "order bounds ({alpha_lower}, {alpha_upper}) must satisfy 0 < lower <= upper < 1"
        )));
    }
    // a few ulps of slack so that eps = exp(-1) itself is accepted
    let cap = (-1.0f64).exp() * (1.0 + 4.0 * f64::EPSILON);
    if !(eps > 0.0 && eps <= cap) {
        return Err(Error::Domain(format!("ESA accuracy {eps:e} must lie in (0, 1/e]")));
    }
    if !(tau > 0.0 && tau < horizon) {
        return Err(Error::Config(format!("ESA needs 0 < tau < T, got tau = {tau}, T = {horizon}")));
    }
    let h = 2.0 * PI / (3.0f64.ln() + alpha_upper * (1.0 / 1.0f64.cos()).ln() + (1.0 / eps).ln());
    let n_lower = ((1.0 / h) * (1.0 / alpha_lower) * (eps.ln() + ln_gamma(1.0 + alpha_upper))).ceil() as i64;
    let n_upper = ((1.0 / h)
        * ((horizon / tau).ln() + (1.0 / eps).ln().max(f64::MIN_POSITIVE).ln() + alpha_lower.ln() + 0.5))
        .floor() as i64;
    if n_lower >= n_upper {
        return Err(Error::Config(format!(
            "ESA index range is empty (N_lower = {n_lower}, N_upper = {n_upper}): mesh too coarse or eps too loose"
        )));
    }
    let x = tau / horizon;
    let printed_bounds = (n_lower, n_upper);
    let (mut n_lower, mut n_upper) = printed_bounds;
    if truncation == Truncation::Safeguarded {
        let alphas = [alpha_lower, 0.5 * (alpha_lower + alpha_upper), alpha_upper];
        let target = 0.25 * eps;
        let upper_tail = |n: i64| {
            let z = (n as f64 * h).exp() * x;
            alphas.iter().map(|&a| gamma_upper_regularized(a, z)).fold(0.0, f64::max)
        };
        while upper_tail(n_upper) > target {
            n_upper += 1;
        }
        let lower_tail = |n: i64| {
            let z = ((n + 1) as f64 * h).exp();
            alphas.iter().map(|&a| gamma_lower_regularized(a, z)).fold(0.0, f64::max)
        };
        while lower_tail(n_lower) > target {
            n_lower -= 1;
        }
    }
    let lambda: Vec<f64> = (n_lower + 1..=n_upper).map(|r| (r as f64 * h).exp()).collect();
    let mut decay = Vec::with_capacity(lambda.len());
    let mut gain = Vec::with_capacity(lambda.len());
    let mut bcoef = Vec::with_capacity(lambda.len());
    for &l in &lambda {
        let z = l * x;
        decay.push((-z).exp());
        gain.push(one_minus_exp_neg(z) / z);
        bcoef.push(b_integral(l, tau, horizon));
    }
    Ok(EsaQuadrature {
        eps,
        h,
        n_lower,
        n_upper,
        horizon,
        tau,
        alpha_lower,
        alpha_upper,
        printed_bounds,
        truncation,
        lambda,
        decay,
        gain,
        bcoef,
    })
}

impl EsaQuadrature {
    /// Number of exponentials `N̄ - N̲`.
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// `e^{-λ_r τ/T}`.
    pub fn decay(&self) -> &[f64] {
        &self.decay
    }

    /// `(T/(λ_r τ)) (1 - e^{-λ_r τ/T})`.
    pub fn gain(&self) -> &[f64] {
        &self.gain
    }

    /// `b^{(r)} = ∫_{t_{n-1}}^{t_n} e^{-λ_r (t - t_{n-2})/T} dt`, level independent.
    pub fn b_coeffs(&self) -> &[f64] {
        &self.bcoef
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        let slack = 1e-12;
        if alpha < self.alpha_lower - slack || alpha > self.alpha_upper + slack {
            return Err(Error::Domain(format!(
                "order {alpha} outside the ESA construction bounds [{}, {}]",
                self.alpha_lower, self.alpha_upper
            )));
        }
        Ok(())
    }

    /// Quadrature weights into `out`, avoiding an allocation per level.
    pub fn weights_into(&self, alpha: f64, out: &mut Vec<f64>) -> Result<()> {
        self.check_alpha(alpha)?;
        let g = gamma(alpha);
        out.clear();
        out.extend((self.n_lower + 1..=self.n_upper).map(|r| self.h * (alpha * r as f64 * self.h).exp() / g));
        Ok(())
    }

    /// Per-level factors `T^{-α}/(τ Γ(1-α)) ϖ_r b_r` multiplying `V_r`.
    pub fn history_coefficients(&self, alpha: f64) -> Result<Vec<f64>> {
        let mut w = Vec::new();
        self.weights_into(alpha, &mut w)?;
        let scale = self.horizon.powf(-alpha) / (self.tau * gamma(1.0 - alpha));
        Ok(w.iter().zip(&self.bcoef).map(|(w, b)| scale * w * b).collect())
    }

    /// `Σ_r ϖ_r e^{-λ_r x}`.
    pub fn kernel(&self, alpha: f64, x: f64) -> Result<f64> {
        let w = esa_weights(self, alpha)?;
        Ok(w.iter().zip(&self.lambda).map(|(w, l)| w * (-l * x).exp()).sum())
    }
}

/// `(T/λ)(e^{-λτ/T} - e^{-2λτ/T})` written as `(T/λ) e^{-z} (1 - e^{-z})`.
pub fn b_integral(lambda: f64, tau: f64, horizon: f64) -> f64 {
    let z = lambda * tau / horizon;
    horizon / lambda * (-z).exp() * one_minus_exp_neg(z)
}

/// `ϖ_r = h e^{α r h} / Γ(α)` for `r = N̲+1 ..= N̄`.
pub fn esa_weights(q: &EsaQuadrature, alpha: f64) -> Result<Vec<f64>> {
    let mut w = Vec::with_capacity(q.len());
    q.weights_into(alpha, &mut w)?;
    Ok(w)
}

/// `b^{(n,r)}` for exponent index `r ∈ N̲+1 ..= N̄`.
pub fn esa_b_coeff(n: usize, r: i64, q: &EsaQuadrature) -> Result<f64> {
    if n < 3 {
        return Err(Error::Usage(format!("ESA history starts at level 3, got {n}")));
    }
    if r <= q.n_lower || r > q.n_upper {
        return Err(Error::Usage(format!("exponent index {r} outside {}..={}", q.n_lower + 1, q.n_upper)));
    }
    Ok(q.bcoef[(r - q.n_lower - 1) as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_by_formula() {
        let q = esa_params_with(0.4, 0.9, 1e-8, 1.0, 1.0 / 1024.0, Truncation::Printed).unwrap();
        let h = 2.0 * PI / (3f64.ln() + 0.9 * (1.0 / 1f64.cos()).ln() + (1e8f64).ln());
        assert!((q.h - h).abs() < 1e-15);
        let lo = ((1.0 / h) / 0.4 * ((1e-8f64).ln() + ln_gamma(1.9))).ceil() as i64;
        let hi = ((1.0 / h) * (1024f64.ln() + (1e8f64).ln().ln() + 0.4f64.ln() + 0.5)).floor() as i64;
        assert_eq!((q.n_lower, q.n_upper), (lo, hi));
        assert_eq!(q.len() as i64, hi - lo);
        assert!(q.lambdas().windows(2).all(|w| w[1] > w[0] && w[0] > 0.0));

        let s = esa_params(0.4, 0.9, 1e-8, 1.0, 1.0 / 1024.0).unwrap();
        assert_eq!(s.printed_bounds, (lo, hi));
        assert!(s.n_lower <= lo && s.n_upper >= hi);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(esa_params(0.4, 0.9, 0.5, 1.0, 0.01), Err(Error::Domain(_))));
        assert!(esa_params(0.4, 0.9, (-1.0f64).exp(), 1.0, 0.01).is_ok());
        assert!(matches!(esa_params(0.4, 0.9, 1e-8, 1.0, 1.0), Err(Error::Config(_))));
        assert!(matches!(esa_params(0.4, 0.9, 1e-8, 1.0, 2.0), Err(Error::Config(_))));
    }

    #[test]
    fn weights_identity_and_unit_point() {
        let q = esa_params(0.4, 0.9, 1e-10, 1.0, 1.0 / 256.0).unwrap();
        for alpha in [0.4, 0.55, 0.9] {
            let w = esa_weights(&q, alpha).unwrap();
            for (k, wr) in w.iter().enumerate() {
                let r = q.n_lower + 1 + k as i64;
                let want = (alpha * r as f64 * q.h).exp();
                assert!((wr * gamma(alpha) / q.h - want).abs() <= 1e-13 * want);
            }
            let k1 = q.kernel(alpha, 1.0).unwrap();
            assert!((k1 - 1.0).abs() <= 1e-10, "alpha {alpha}: {k1}");
        }
        assert!(matches!(esa_weights(&q, 0.95), Err(Error::Domain(_))));
    }

    #[test]
    fn b_coeff_limits() {
        let q = esa_params(0.3, 0.8, 1e-12, 1.0, 1.0 / 64.0).unwrap();
        let b0 = esa_b_coeff(3, q.n_lower + 1, &q).unwrap();
        assert!((b0 - q.tau).abs() < 1e-6 * q.tau);
        assert!((b_integral(1e-12, 0.1, 1.0) - 0.1).abs() < 1e-13);
        let (tau, t) = (0.01, 2.0);
        let l = t / tau;
        let want = t / l * ((-1f64).exp() - (-2f64).exp());
        assert!((b_integral(l, tau, t) - want).abs() < 1e-16);
        assert!(esa_b_coeff(2, q.n_upper, &q).is_err());
        assert!(esa_b_coeff(3, q.n_lower, &q).is_err());
    }
}
