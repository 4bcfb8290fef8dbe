use crate::error::{Error, Result};

use super::order::VariableOrder;

/// Uniform partition of `[0, T]` into `N` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    levels: usize,
    tau: f64,
    warnings: Vec<String>,
}

impl TimeGrid {
    pub fn new(horizon: f64, levels: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        if levels == 0 {
            return Err(Error::Config("time level count N must be positive".into()));
        }
        let tau = horizon / levels as f64;
        let mut warnings = Vec::new();
        if tau > 1.0 {
            let msg = format!("time step {tau} exceeds 1; monotonicity of the b-weights is not guaranteed");
            log::warn!("{msg}");
            warnings.push(msg);
        }
        Ok(Self {
            horizon,
            levels,
            tau,
            warnings,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `t_n = n τ`; the last node is pinned to `T`.
    #[inline]
    pub fn node(&self, n: usize) -> f64 {
        if n == self.levels {
            self.horizon
        } else {
            n as f64 * self.tau
        }
    }

    /// `t_{n-1/2}` for `n >= 1`.
    #[inline]
    pub fn midpoint(&self, n: usize) -> f64 {
        (n as f64 - 0.5) * self.tau
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.levels).map(|n| self.node(n)).collect()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Level index whose node equals `t` up to rounding, if any.
    pub fn level_of(&self, t: f64) -> Option<usize> {
        let n = (t / self.tau).round();
        if n < 0.0 || n > self.levels as f64 {
            return None;
        }
        let n = n as usize;
        ((self.node(n) - t).abs() <= 1e-12 * self.horizon.max(1.0)).then_some(n)
    }
}

/// `α̃_n = α(t_{n-1/2})` for `n = 1..=N`, returned at index `n - 1`.
pub fn midpoint_orders(order: &VariableOrder, grid: &TimeGrid) -> Result<Vec<f64>> {
    (1..=grid.levels())
        .map(|n| {
            let a = order.eval(grid.midpoint(n));
            if a > 0.0 && a < 1.0 {
                Ok(a)
            } else {
                Err(Error::Config(format!("midpoint order α̃_{n} = {a} lies outside (0, 1)")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional_time::OrderPreset;

    #[test]
    fn nodes_hit_horizon_exactly() {
        let g = TimeGrid::new(1.0, 3).unwrap();
        assert_eq!(g.node(3), 1.0);
        let nodes = g.nodes();
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(g.warnings().is_empty());
        assert_eq!(g.level_of(2.0 / 3.0), Some(2));
        assert_eq!(g.level_of(0.5), None);
    }

    #[test]
    fn coarse_step_records_warning() {
        let g = TimeGrid::new(4.0, 2).unwrap();
        assert_eq!(g.warnings().len(), 1);
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn midpoint_orders_of_presets() {
        let g = TimeGrid::new(1.0, 2).unwrap();
        let a0 = VariableOrder::preset(OrderPreset::A0, 1.0).unwrap();
        let m = midpoint_orders(&a0, &g).unwrap();
        assert!((m[0] - 0.375).abs() < 1e-15 && (m[1] - 0.225).abs() < 1e-15);

        let c = VariableOrder::constant(0.5, 1.0).unwrap();
        let g8 = TimeGrid::new(1.0, 8).unwrap();
        assert!(midpoint_orders(&c, &g8).unwrap().iter().all(|&a| a == 0.5));

        let a3 = VariableOrder::preset(OrderPreset::A3, 1.0).unwrap();
        let g4 = TimeGrid::new(1.0, 4).unwrap();
        let m = midpoint_orders(&a3, &g4).unwrap();
        for (got, want) in m.iter().zip([0.521875, 0.453125, 0.453125, 0.521875]) {
            assert!((got - want).abs() < 1e-15);
        }
    }
}
