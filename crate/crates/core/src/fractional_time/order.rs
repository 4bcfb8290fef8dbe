use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of uniform samples used to bracket the order on `[0, T]`.
pub const BOUND_SAMPLES: usize = 100_000;

/// The four reference order functions used by the numerical examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderPreset {
    /// `0.45 - 0.3 t`
    A0,
    /// `0.4 + 0.5 (1 - t) - sin(2π (1 - t)) / (4π)`
    A1,
    /// `0.8 - 0.5 (1 - t)`
    A2,
    /// `|3 (t - 0.5)^2 - 0.2| + 0.3`
    A3,
}

impl OrderPreset {
    pub const ALL: [OrderPreset; 4] = [Self::A0, Self::A1, Self::A2, Self::A3];

    pub fn eval(self, t: f64) -> f64 {
        match self {
            Self::A0 => 0.45 - 0.3 * t,
            Self::A1 => 0.4 + 0.5 * (1.0 - t) - (2.0 * PI * (1.0 - t)).sin() / (4.0 * PI),
            Self::A2 => 0.8 - 0.5 * (1.0 - t),
            Self::A3 => (3.0 * (t - 0.5).powi(2) - 0.2).abs() + 0.3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A0 => "a0",
            Self::A1 => "a1",
            Self::A2 => "a2",
            Self::A3 => "a3",
        }
    }
}

impl std::str::FromStr for OrderPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a0" => Ok(Self::A0),
            "a1" => Ok(Self::A1),
            "a2" => Ok(Self::A2),
            "a3" => Ok(Self::A3),
            other => Err(Error::Config(format!("unknown order preset `{other}`"))),
        }
    }
}

/// How the fractional order is evaluated.
#[derive(Clone)]
pub enum OrderKind {
    Preset(OrderPreset),
    /// `α(t) = p + q t`
    Affine { p: f64, q: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl OrderKind {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Preset(p) => p.eval(t),
            Self::Affine { p, q } => p + q * t,
            Self::Custom(f) => f(t),
        }
    }
}

impl fmt::Debug for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Preset(p) => write!(f, "Preset({})", p.name()),
            Self::Affine { p, q } => write!(f, "Affine({p}, {q})"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// A variable fractional order `α(t)` on `[0, T]` with cached bounds.
#[derive(Debug, Clone)]
pub struct VariableOrder {
    kind: OrderKind,
    horizon: f64,
    lower: f64,
    upper: f64,
    at_zero: f64,
    increasing: bool,
}

impl VariableOrder {
    /// Builds the order function and brackets it by dense sampling.
    ///
    /// Fails unless `0 < α_* ≤ α(t) ≤ α^* < 1` on every sample. A positive
    /// finite-difference slope is reported once through `log::warn!`; the
    /// solvers still accept such orders.
    pub fn new(kind: OrderKind, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        let mut increasing = false;
        let mut prev = kind.eval(0.0);
        for k in 0..=BOUND_SAMPLES {
            let t = if k == BOUND_SAMPLES {
                horizon
            } else {
                horizon * k as f64 / BOUND_SAMPLES as f64
            };
            let a = kind.eval(t);
            if !a.is_finite() || a <= 0.0 || a >= 1.0 {
                return Err(Error::Config(format!(
                    "fractional order α({t}) = {a} lies outside (0, 1)"
                )));
            }
            lower = lower.min(a);
            upper = upper.max(a);
            if k > 0 && a > prev + 1e-14 {
                increasing = true;
            }
            prev = a;
        }
        if increasing {
            log::warn!(
                "fractional order {kind:?} increases somewhere on [0, {horizon}]; \
                 the stability analysis assumes a non-increasing order"
            );
        }
        let at_zero = kind.eval(0.0);
        Ok(Self {
            kind,
            horizon,
            lower,
            upper,
            at_zero,
            increasing,
        })
    }

    pub fn preset(preset: OrderPreset, horizon: f64) -> Result<Self> {
        Self::new(OrderKind::Preset(preset), horizon)
    }

    pub fn affine(p: f64, q: f64, horizon: f64) -> Result<Self> {
        Self::new(OrderKind::Affine { p, q }, horizon)
    }

    pub fn constant(alpha: f64, horizon: f64) -> Result<Self> {
        Self::affine(alpha, 0.0, horizon)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Sampled infimum `α_*`.
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Sampled supremum `α^*`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn at_zero(&self) -> f64 {
        self.at_zero
    }

    /// True when some sampled slope of α is positive.
    pub fn has_increasing_segment(&self) -> bool {
        self.increasing
    }

    /// Predicted temporal order `min(3 - α^* - α(0), 2)`.
    pub fn predicted_temporal_order(&self) -> f64 {
        (3.0 - self.upper - self.at_zero).min(2.0)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            OrderKind::Preset(p) => p.name().to_string(),
            OrderKind::Affine { p, q } => format!("affine:{p},{q}"),
            OrderKind::Custom(_) => "custom".to_string(),
        }
    }
}
