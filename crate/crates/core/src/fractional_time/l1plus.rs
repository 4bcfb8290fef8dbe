use crate::error::{Error, Result};
use crate::special::gamma;

/// `ω_{1-β}(t) = t^{-β} / Γ(1-β)`.
pub fn kernel_omega(beta: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel is singular at t = {t}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("kernel exponent {beta} outside (0, 1)")));
    }
    Ok(t.powf(-beta) / gamma(1.0 - beta))
}

/// Closed-form L1⁺ weight `a_j` for step `tau` and midpoint order `alpha`.
pub fn l1plus_coeff(j: usize, tau: f64, alpha: f64) -> f64 {
    debug_assert!(j >= 1 && tau > 0.0 && alpha > 0.0 && alpha < 1.0);
    let a1 = tau.powf(-alpha) / gamma(3.0 - alpha);
    if j == 1 {
        return a1;
    }
    let e = 2.0 - alpha;
    let jf = j as f64;
    let lower = if j == 2 { 0.0 } else { (jf - 2.0).powf(e) };
    a1 * (jf.powf(e) - 2.0 * (jf - 1.0).powf(e) + lower)
}

/// Signature of a weight generator `(j, tau, alpha) -> a_j`.
pub type CoeffFn = dyn Fn(usize, f64, f64) -> f64 + Sync;

/// The L1⁺ weights of one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct L1PlusRow {
    pub level: usize,
    pub alpha: f64,
    pub tau: f64,
    /// `a[j - 1] = a_j` for `j = 1..=level`.
    pub a: Vec<f64>,
    /// `b[0] = 1 + tau a_1`, `b[j - 1] = tau a_j` for `j >= 2`.
    pub b: Vec<f64>,
    pub warnings: Vec<String>,
}

impl L1PlusRow {
    /// Builds a row from an arbitrary weight generator without checking it.
    pub fn from_coeffs(level: usize, tau: f64, alpha: f64, coeff: &CoeffFn) -> Self {
        let a: Vec<f64> = (1..=level).map(|j| coeff(j, tau, alpha)).collect();
        let b = a
            .iter()
            .enumerate()
            .map(|(i, &aj)| if i == 0 { 1.0 + tau * aj } else { tau * aj })
            .collect();
        let mut warnings = Vec::new();
        if tau > 1.0 {
            warnings.push(format!("time step {tau} exceeds 1; b-weights need not decrease"));
        }
        Self {
            level,
            alpha,
            tau,
            a,
            b,
            warnings,
        }
    }

    #[inline]
    pub fn a1(&self) -> f64 {
        self.a[0]
    }

    /// `a_j`, 1-based.
    #[inline]
    pub fn a(&self, j: usize) -> f64 {
        self.a[j - 1]
    }

    /// `b_j`, 1-based.
    #[inline]
    pub fn b(&self, j: usize) -> f64 {
        self.b[j - 1]
    }

    /// Checks positivity and monotonicity of the weights and the lower tail
    /// bound `a_n >= (n tau)^{-alpha} / Γ(1 - alpha)`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.level;
        if self.a.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Internal(format!("non-positive L1+ weight at level {n}")));
        }
        if let Some(k) = (1..n.saturating_sub(1)).find(|&k| self.a[k] <= self.a[k + 1]) {
            return Err(Error::Internal(format!(
                "a_{} <= a_{} at level {n}: weights must decrease from index 2",
                k + 1,
                k + 2
            )));
        }
        if self.tau <= 1.0 {
            if let Some(k) = (0..n.saturating_sub(1)).find(|&k| self.b[k] <= self.b[k + 1]) {
                return Err(Error::Internal(format!(
                    "b_{} <= b_{} at level {n} with tau <= 1",
                    k + 1,
                    k + 2
                )));
            }
        }
        if n >= 2 {
            let bound = (n as f64 * self.tau).powf(-self.alpha) / gamma(1.0 - self.alpha);
            if self.a[n - 1] < bound * (1.0 - 1e-12) {
                return Err(Error::Internal(format!(
                    "a_{n} = {} below the tail bound {bound}",
                    self.a[n - 1]
                )));
            }
        }
        Ok(())
    }
}

/// Weights of level `n` with checked invariants.
pub fn l1plus_row(n: usize, tau: f64, alpha: f64) -> Result<L1PlusRow> {
    if n == 0 {
        return Err(Error::Usage("L1+ rows start at level 1".into()));
    }
    if !(tau > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("invalid (tau, alpha) = ({tau}, {alpha})")));
    }
    let row = L1PlusRow::from_coeffs(n, tau, alpha, &l1plus_coeff);
    row.check_invariants()?;
    Ok(row)
}

/// `Σ_{k=1}^{n} a_{n-k+1} (v^k - v^{k-1})` for a scalar sequence `v^0..v^n`.
pub fn history_sum_direct(values: &[f64], row: &L1PlusRow) -> Result<f64> {
    let n = row.level;
    if values.len() != n + 1 {
        return Err(Error::Usage(format!(
            "history of length {} does not match level {n}",
            values.len()
        )));
    }
    Ok((1..=n)
        .map(|k| row.a(n - k + 1) * (values[k] - values[k - 1]))
        .sum())
}

/// Elementwise [`history_sum_direct`] over equally sized fields `v^0..v^n`.
pub fn history_sum_direct_fields(values: &[&[f64]], row: &L1PlusRow) -> Result<Vec<f64>> {
    let n = row.level;
    if values.len() != n + 1 {
        return Err(Error::Usage(format!(
            "history of length {} does not match level {n}",
            values.len()
        )));
    }
    let m = values[0].len();
    if values.iter().any(|v| v.len() != m) {
        return Err(Error::Usage("history fields differ in size".into()));
    }
    let mut out = vec![0.0; m];
    for k in 1..=n {
        let w = row.a(n - k + 1);
        for ((o, &cur), &prev) in out.iter_mut().zip(values[k]).zip(values[k - 1]) {
            *o += w * (cur - prev);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn kernel_values() {
        let v = kernel_omega(0.5, 1.0).unwrap();
        assert!(rel(v, 1.0 / std::f64::consts::PI.sqrt()) < 1e-15);
        assert!(rel(kernel_omega(0.3, 0.25).unwrap(), 1.167682554347580117698255) < 1e-14);
        assert!((kernel_omega(1e-9, 2.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(kernel_omega(0.5, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_weights() {
        assert!(rel(l1plus_coeff(1, 1.0, 0.5), 0.7522527780636750492641059) < 1e-14);
        assert!(rel(l1plus_coeff(2, 1.0, 0.5), 0.6231866060136241838181671) < 1e-14);
        assert!(rel(l1plus_coeff(5, 0.25, 0.7), 0.3363890038183178204006644) < 1e-13);
        assert!(rel(l1plus_coeff(3, 0.5, 0.4), 0.6799371964500670548090573) < 1e-13);
        for j in 2..10 {
            assert!((l1plus_coeff(j, 0.5, 1e-10) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rows() {
        let r = l1plus_row(1, 1.0, 0.5).unwrap();
        assert_eq!(r.a.len(), 1);
        assert!((r.b[0] - (1.0 + 0.7522527780636750)).abs() < 1e-14);

        let r = l1plus_row(3, 0.5, 0.4).unwrap();
        assert!(r.b.windows(2).all(|w| w[0] > w[1]) && r.b[2] > 0.0);

        let r = l1plus_row(2, 2.0, 0.9).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn direct_history_sums() {
        let r = l1plus_row(4, 0.25, 0.6).unwrap();
        assert_eq!(history_sum_direct(&[3.0; 5], &r).unwrap(), 0.0);
        let r1 = l1plus_row(1, 1.0, 0.5).unwrap();
        assert_eq!(history_sum_direct(&[0.0, 1.0], &r1).unwrap(), r1.a1());
        assert!(matches!(history_sum_direct(&[0.0; 3], &r1), Err(Error::Usage(_))));

        let f0 = [0.0, 1.0];
        let f1 = [1.0, 1.0];
        let f = history_sum_direct_fields(&[&f0, &f1], &r1).unwrap();
        assert_eq!(f, vec![r1.a1(), 0.0]);
    }

    #[test]
    fn corrupted_weights_fail_invariants() {
        let flip = |j: usize, tau: f64, a: f64| {
            let v = l1plus_coeff(j, tau, a);
            if j == 2 { -v } else { v }
        };
        let row = L1PlusRow::from_coeffs(5, 0.1, 0.5, &flip);
        assert!(matches!(row.check_invariants(), Err(Error::Internal(_))));
    }
}
