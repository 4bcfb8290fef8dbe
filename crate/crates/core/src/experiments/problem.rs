use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fractional_time::oracle::caputo_oracle;
use crate::fractional_time::{OrderPreset, TimeGrid, VariableOrder};
use crate::qsc::SpaceGrid;
use crate::schemes::{SchemeConfig, SchemeKind, Source, SpaceFn, SpaceTimeFn};
use crate::special::gamma;

/// Initial data of the examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialVariant {
    /// `sin x sin y`, as printed; it does not vanish on `x = 1` or `y = 1`.
    Paper,
    /// `sin πx sin πy`, compatible with the boundary condition.
    Corrected,
}

impl InitialVariant {
    fn function(self) -> SpaceFn {
        match self {
            Self::Paper => Arc::new(|x: f64, y: f64| x.sin() * y.sin()),
            Self::Corrected => Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin()),
        }
    }
}

/// Builds the right-hand side for a given order function and `κ`.
pub type SourceBuilder = Arc<dyn Fn(&VariableOrder, f64) -> Source + Send + Sync>;

/// A model problem on the unit square with homogeneous Dirichlet data.
#[derive(Clone)]
pub struct Problem {
    pub name: &'static str,
    pub kappa: f64,
    pub horizon: f64,
    pub initial: SpaceFn,
    pub source: SourceBuilder,
    pub exact: Option<SpaceTimeFn>,
    /// Orders swept by the reference studies.
    pub presets: Vec<OrderPreset>,
    /// Known inconsistencies of the data.
    pub notes: Vec<String>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("kappa", &self.kappa)
            .field("horizon", &self.horizon)
            .field("exact", &self.exact.is_some())
            .field("presets", &self.presets)
            .finish()
    }
}

/// Problem names accepted by [`Problem::from_name`].
pub const PROBLEM_NAMES: [&str; 4] = ["example61", "example61_corrected", "example62_paper", "example62_corrected"];

impl Problem {
    /// `f = 0` with unknown exact solution.
    pub fn example61(variant: InitialVariant) -> Self {
        let (name, notes) = match variant {
            InitialVariant::Paper => (
                "example61",
                vec!["u0 = sin x sin y does not vanish on the boundary x = 1 or y = 1".to_string()],
            ),
            InitialVariant::Corrected => ("example61_corrected", Vec::new()),
        };
        Self {
            name,
            kappa: 1.0,
            horizon: 1.0,
            initial: variant.function(),
            source: Arc::new(|_: &VariableOrder, _: f64| Source::Zero),
            exact: None,
            presets: vec![OrderPreset::A0, OrderPreset::A1, OrderPreset::A3],
            notes,
        }
    }

    /// `u = (1 + t^3) sin πx sin πy` with the matching source.
    pub fn example62(variant: InitialVariant) -> Self {
        let initial = variant.function();
        let source: SourceBuilder = Arc::new(|order: &VariableOrder, kappa: f64| {
            let order = order.clone();
            Source::Separable {
                time: Arc::new(move |t: f64| {
                    let a = order.eval(t);
                    3.0 * t * t + 6.0 / gamma(4.0 - a) * t.powf(3.0 - a) + 2.0 * PI * PI * kappa * (1.0 + t.powi(3))
                }),
                space: Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin()),
            }
        });
        let (name, notes) = match variant {
            InitialVariant::Paper => (
                "example62_paper",
                vec!["u0 = sin x sin y differs from u(x, y, 0) = sin πx sin πy".to_string()],
            ),
            InitialVariant::Corrected => ("example62_corrected", Vec::new()),
        };
        Self {
            name,
            kappa: 1.0,
            horizon: 1.0,
            initial,
            source,
            exact: Some(Arc::new(|x: f64, y: f64, t: f64| (1.0 + t.powi(3)) * (PI * x).sin() * (PI * y).sin())),
            presets: vec![OrderPreset::A1, OrderPreset::A2],
            notes,
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "example61" | "example61_paper" => Ok(Self::example61(InitialVariant::Paper)),
            "example61_corrected" => Ok(Self::example61(InitialVariant::Corrected)),
            "example62_paper" => Ok(Self::example62(InitialVariant::Paper)),
            "example62_corrected" | "example62" => Ok(Self::example62(InitialVariant::Corrected)),
            _ => Err(Error::Config(format!(
                "unknown problem `{name}`; expected one of {}",
                PROBLEM_NAMES.join(", ")
            ))),
        }
    }

    /// The same problem with another diffusion coefficient; the source
    /// follows `κ`, so a known exact solution stays exact.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn source_for(&self, order: &VariableOrder) -> Source {
        (self.source)(order, self.kappa)
    }

    pub fn exact_at(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        let u = self
            .exact
            .as_ref()
            .ok_or_else(|| Error::Usage(format!("{} has no exact solution", self.name)))?;
        Ok(u(x, y, t))
    }

    /// Scheme configuration of this problem with `levels` steps on `space`.
    pub fn config(&self, kind: SchemeKind, order: &VariableOrder, levels: usize, space: SpaceGrid) -> Result<SchemeConfig> {
        let time = TimeGrid::new(self.horizon, levels)?;
        Ok(SchemeConfig::new(
            kind,
            self.kappa,
            order.clone(),
            time,
            space,
            self.source_for(order),
            self.initial.clone(),
        ))
    }

    /// Largest defect of `u_t + D^{α(t)} u - κ Δu - f` over `points`, with
    /// derivatives from central differences and the Caputo term from
    /// quadrature.
    pub fn consistency_defect(&self, order: &VariableOrder, points: &[(f64, f64, f64)]) -> Result<f64> {
        let u = self
            .exact
            .clone()
            .ok_or_else(|| Error::Usage(format!("{} has no exact solution", self.name)))?;
        let src = self.source_for(order);
        let (ht, hx) = (1e-5, 1e-4);
        let mut worst: f64 = 0.0;
        for &(x, y, t) in points {
            let du = |s: f64| (u(x, y, s + ht) - u(x, y, s - ht)) / (2.0 * ht);
            let ut = du(t);
            let caputo = caputo_oracle(du, order.eval(t), t, 1e-10)?;
            let lap = (u(x + hx, y, t) - 2.0 * u(x, y, t) + u(x - hx, y, t)) / (hx * hx)
                + (u(x, y + hx, t) - 2.0 * u(x, y, t) + u(x, y - hx, t)) / (hx * hx);
            let defect = ut + caputo - self.kappa * lap - src.eval(x, y, t);
            worst = worst.max(defect.abs());
        }
        Ok(worst)
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example62_values() {
        let p = Problem::example62(InitialVariant::Corrected);
        assert!((p.exact_at(0.5, 0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let order = VariableOrder::preset(OrderPreset::A1, 1.0).unwrap();
        let f = p.source_for(&order);
        let (x, y) = (0.3, 0.7);
        let want = 2.0 * PI * PI * (PI * x).sin() * (PI * y).sin();
        assert!((f.eval(x, y, 0.0) - want).abs() < 1e-13);
        let paper = Problem::example62(InitialVariant::Paper);
        assert!(((paper.initial)(1.0, 1.0) - 1f64.sin().powi(2)).abs() < 1e-15);
        assert!(!paper.notes.is_empty());
    }

    #[test]
    fn example61_values() {
        let p = Problem::example61(InitialVariant::Paper);
        let order = VariableOrder::preset(OrderPreset::A0, 1.0).unwrap();
        assert!(p.source_for(&order).is_zero());
        assert!(((p.initial)(PI / 2.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((p.initial)(1.0, 0.5).abs() > 0.1);
        assert!(p.exact_at(0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn example62_data_is_consistent() {
        let p = Problem::example62(InitialVariant::Corrected);
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let pts: Vec<(f64, f64, f64)> = (0..100)
            .map(|_| (rng.random_range(0.05..0.95), rng.random_range(0.05..0.95), rng.random_range(0.05..1.0)))
            .collect();
        for preset in [OrderPreset::A1, OrderPreset::A2] {
            let order = VariableOrder::preset(preset, 1.0).unwrap();
            let d = p.consistency_defect(&order, &pts).unwrap();
            assert!(d <= 1e-5, "{preset:?}: {d:e}");
        }
        let stiff = p.with_kappa(0.25).with_horizon(2.0);
        let pts: Vec<_> = pts.iter().map(|&(x, y, t)| (x, y, 2.0 * t)).collect();
        let order = VariableOrder::affine(0.7, -0.2, 2.0).unwrap();
        assert!(stiff.consistency_defect(&order, &pts).unwrap() <= 1e-5);
    }

    #[test]
    fn names_resolve() {
        for n in PROBLEM_NAMES {
            assert_eq!(Problem::from_name(n).unwrap().name, n);
        }
        assert!(Problem::from_name("example63").is_err());
    }
}
