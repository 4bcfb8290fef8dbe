use rayon::prelude::*;

use crate::error::{Error, Result};

use super::quadrature::EsaQuadrature;

/// Streaming history fields `V^{(n,r)}` for every DOF and exponent.
///
/// `v` is DOF-major: the `R = N̄ - N̲` values of one DOF are contiguous.
#[derive(Debug, Clone)]
pub struct EsaHistoryState {
    level: usize,
    dofs: usize,
    rank: usize,
    v: Vec<f64>,
    /// Last value pushed, `v^{n-2}` once the state sits at level `n`.
    snapshot: Vec<f64>,
    updates: u64,
}

impl EsaHistoryState {
    /// State at level 2, where every `V^{(2,r)}` vanishes; `initial` is `v^0`.
    pub fn new(q: &EsaQuadrature, initial: &[f64]) -> Self {
        let dofs = initial.len();
        Self {
            level: 2,
            dofs,
            rank: q.len(),
            v: vec![0.0; dofs * q.len()],
            snapshot: initial.to_vec(),
            updates: 0,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dofs(&self) -> usize {
        self.dofs
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `V_r` of one DOF.
    pub fn fields(&self, dof: usize) -> &[f64] {
        &self.v[dof * self.rank..(dof + 1) * self.rank]
    }

    /// Stored `f64` count: `R` history values plus one snapshot per DOF.
    pub fn memory_len(&self) -> usize {
        self.v.len() + self.snapshot.len()
    }

    /// Exponential updates performed so far.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn is_finite(&self) -> bool {
        self.v.iter().all(|x| x.is_finite())
    }

    /// Advances to the next level with the newest value `v^{n-2}`; the
    /// difference to the stored snapshot drives the recurrence.
    pub fn push_value(&mut self, q: &EsaQuadrature, value: &[f64]) -> Result<()> {
        if value.len() != self.dofs {
            return Err(Error::Usage(format!("value of length {} for {} DOFs", value.len(), self.dofs)));
        }
        let delta: Vec<f64> = value.iter().zip(&self.snapshot).map(|(a, b)| a - b).collect();
        history_push(self, q, &delta)?;
        self.snapshot.copy_from_slice(value);
        Ok(())
    }

    /// Writes `Σ_r coef_r V_r` per DOF into `out` with a fixed summation order.
    pub fn weighted_sum(&self, coef: &[f64], out: &mut [f64]) -> Result<()> {
        if coef.len() != self.rank || out.len() != self.dofs {
            return Err(Error::Usage("weighted sum shape mismatch".into()));
        }
        out.par_iter_mut()
            .zip(self.v.par_chunks(self.rank.max(1)))
            .for_each(|(o, vr)| *o = vr.iter().zip(coef).map(|(v, c)| v * c).sum());
        Ok(())
    }
}

/// `V_r ← e^{-λ_r τ/T} V_r + (T/(λ_r τ))(1 - e^{-λ_r τ/T}) δ` for every DOF.
pub fn history_push(state: &mut EsaHistoryState, q: &EsaQuadrature, delta: &[f64]) -> Result<()> {
    if delta.len() != state.dofs {
        return Err(Error::Usage(format!("delta of length {} for {} DOFs", delta.len(), state.dofs)));
    }
    if q.len() != state.rank {
        return Err(Error::Usage("quadrature does not match the history state".into()));
    }
    let (decay, gain) = (q.decay(), q.gain());
    state
        .v
        .par_chunks_mut(state.rank.max(1))
        .zip(delta.par_iter())
        .for_each(|(vr, &d)| {
            for ((v, e), g) in vr.iter_mut().zip(decay).zip(gain) {
                *v = e * *v + g * d;
            }
        });
    state.level += 1;
    state.updates += (state.rank * state.dofs) as u64;
    Ok(())
}

/// Fast L1⁺ value `a_1 (v^n - v^{n-1}) + a_2 (v^{n-1} - v^{n-2}) +
/// T^{-α}/(τ Γ(1-α)) Σ_r ϖ_r b_r V_r`, elementwise; the state must sit at
/// level `n >= 3`.
#[allow(clippy::too_many_arguments)]
pub fn history_sum_fast(
    state: &EsaHistoryState,
    q: &EsaQuadrature,
    a1: f64,
    a2: f64,
    v_nm2: &[f64],
    v_nm1: &[f64],
    v_n: &[f64],
    alpha: f64,
) -> Result<Vec<f64>> {
    if state.level < 3 {
        return Err(Error::Usage(format!("fast history needs level >= 3, state is at {}", state.level)));
    }
    let m = state.dofs;
    if v_nm2.len() != m || v_nm1.len() != m || v_n.len() != m {
        return Err(Error::Usage("recent values do not match the history state".into()));
    }
    let coef = q.history_coefficients(alpha)?;
    let mut out = vec![0.0; m];
    state.weighted_sum(&coef, &mut out)?;
    for k in 0..m {
        out[k] += a1 * (v_n[k] - v_nm1[k]) + a2 * (v_nm1[k] - v_nm2[k]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::esa::esa_params;
    use crate::fractional_time::{history_sum_direct, l1plus_row};

    #[test]
    fn zero_state_recurrence() {
        let q = esa_params(0.3, 0.8, 1e-10, 1.0, 1.0 / 32.0).unwrap();
        let mut s = EsaHistoryState::new(&q, &[0.0, 0.0]);
        assert!(s.fields(0).iter().all(|&v| v == 0.0));
        history_push(&mut s, &q, &[0.0, 2.0]).unwrap();
        for (k, g) in q.gain().iter().enumerate() {
            assert_eq!(s.fields(1)[k], 2.0 * g);
            assert_eq!(s.fields(0)[k], 0.0);
        }
        assert_eq!(s.level(), 3);
        assert_eq!(s.memory_len(), 2 * q.len() + 2);
        assert!(history_push(&mut s, &q, &[1.0]).is_err());
    }

    #[test]
    fn recurrence_matches_piecewise_integral() {
        let (t, n) = (1.0, 20usize);
        let tau = t / n as f64;
        let q = esa_params(0.3, 0.8, 1e-12, t, tau).unwrap();
        let vals: Vec<f64> = (0..=n).map(|k| ((k as f64) * tau * 3.0).sin()).collect();
        let mut s = EsaHistoryState::new(&q, &vals[..1]);
        let top = 9;
        for k in 1..=top - 2 {
            s.push_value(&q, &vals[k..=k]).unwrap();
        }
        assert_eq!(s.level(), top);
        // ∫_0^{t_{n-2}} ∂Πv e^{-λ (t_{n-2} - s)/T} ds, cell by cell
        for (r, &l) in q.lambdas().iter().enumerate().step_by(37) {
            let end = (top - 2) as f64 * tau;
            let mut want = 0.0;
            for k in 1..=top - 2 {
                let slope = (vals[k] - vals[k - 1]) / tau;
                let (a, b) = ((k - 1) as f64 * tau, k as f64 * tau);
                want += slope * t / l * (-l * (end - b) / t).exp() * -(-l * (b - a) / t).exp_m1();
            }
            let got = s.fields(0)[r];
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "r={r}: {got} vs {want}");
        }
    }

    #[test]
    fn fast_matches_direct_on_smooth_sequence() {
        let (t, n) = (1.0, 256usize);
        let tau = t / n as f64;
        let alpha = 0.6;
        let q = esa_params(alpha, alpha, 1e-12, t, tau).unwrap();
        let v: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powi(2)).collect();
        let mut s = EsaHistoryState::new(&q, &v[..1]);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for lvl in 3..=n {
            s.push_value(&q, &v[lvl - 2..=lvl - 2]).unwrap();
            let row = l1plus_row(lvl, tau, alpha).unwrap();
            let direct = history_sum_direct(&v[..=lvl], &row).unwrap();
            let fast = history_sum_fast(&s, &q, row.a(1), row.a(2), &v[lvl - 2..=lvl - 2], &v[lvl - 1..=lvl - 1], &v[lvl..=lvl], alpha)
                .unwrap()[0];
            worst = worst.max((fast - direct).abs());
            scale = scale.max(direct.abs());
        }
        assert!(worst <= 1e-10 * scale, "worst {worst:e} scale {scale:e}");
    }
}
