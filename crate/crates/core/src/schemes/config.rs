use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::esa::{esa_params_with, EsaQuadrature, Truncation, DEFAULT_EPS};
use crate::fractional_time::{midpoint_orders, TimeGrid, VariableOrder};
use crate::linalg::SPARSE_DOF_LIMIT;
use crate::qsc::{Grid2, SpaceGrid, MIN_CELLS_PERTURBED};

/// The five time-stepping schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Full 2D collocation system per level.
    QscL1p,
    AdiQscL1p,
    /// ADI with exponential-sum history from level 3 on.
    AdiQscFl1p,
    /// ADI with the fourth-order perturbation `η + P_S`.
    OptAdiQscL1p,
    OptAdiQscFl1p,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        Self::QscL1p,
        Self::AdiQscL1p,
        Self::AdiQscFl1p,
        Self::OptAdiQscL1p,
        Self::OptAdiQscFl1p,
    ];

    pub fn is_adi(self) -> bool {
        self != Self::QscL1p
    }

    pub fn is_fast(self) -> bool {
        matches!(self, Self::AdiQscFl1p | Self::OptAdiQscFl1p)
    }

    pub fn is_optimal(self) -> bool {
        matches!(self, Self::OptAdiQscL1p | Self::OptAdiQscFl1p)
    }

    /// Configuration-file name.
    pub fn key(self) -> &'static str {
        match self {
            Self::QscL1p => "qsc_l1p",
            Self::AdiQscL1p => "adi_qsc_l1p",
            Self::AdiQscFl1p => "adi_qsc_fl1p",
            Self::OptAdiQscL1p => "opt_adi_qsc_l1p",
            Self::OptAdiQscFl1p => "opt_adi_qsc_fl1p",
        }
    }

    /// Human-readable name.
    pub fn label(self) -> &'static str {
        match self {
            Self::QscL1p => "QSC-L1+",
            Self::AdiQscL1p => "ADI-QSC-L1+",
            Self::AdiQscFl1p => "ADI-QSC-FL1+",
            Self::OptAdiQscL1p => "optimal ADI-QSC-L1+",
            Self::OptAdiQscFl1p => "optimal ADI-QSC-FL1+",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

pub type SpaceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Right-hand side `f(x, y, t)`.
#[derive(Clone)]
pub enum Source {
    Zero,
    /// `f = time(t) * space(x, y)`; the spatial factor is sampled once.
    Separable { time: TimeFn, space: SpaceFn },
    General(SpaceTimeFn),
}

impl Source {
    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Separable { time, space } => time(t) * space(x, y),
            Self::General(f) => f(x, y, t),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "Source::Zero",
            Self::Separable { .. } => "Source::Separable",
            Self::General(_) => "Source::General",
        })
    }
}

/// Samples of a source on the collocation points, reused across levels.
#[derive(Clone)]
pub(crate) enum SourceSampler {
    Zero,
    Separable { time: TimeFn, space: Grid2 },
    General(SpaceTimeFn),
}

impl SourceSampler {
    pub(crate) fn new(src: &Source, grid: &SpaceGrid) -> Self {
        match src {
            Source::Zero => Self::Zero,
            Source::Separable { time, space } => Self::Separable {
                time: time.clone(),
                space: grid.sample(|x, y| space(x, y)),
            },
            Source::General(f) => Self::General(f.clone()),
        }
    }

    /// `f(·, ·, t)` at every collocation point.
    pub(crate) fn at(&self, grid: &SpaceGrid, t: f64) -> Grid2 {
        match self {
            Self::Zero => grid.zeros(),
            Self::Separable { time, space } => {
                let mut g = space.clone();
                g.scale(time(t));
                g
            }
            Self::General(f) => grid.sample(|x, y| f(x, y, t)),
        }
    }
}

/// Everything needed to run one scheme.
#[derive(Clone)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub kappa: f64,
    pub order: VariableOrder,
    pub time: TimeGrid,
    pub space: SpaceGrid,
    /// ESA accuracy; used by the fast kinds only.
    pub eps: f64,
    pub truncation: Truncation,
    pub source: Source,
    pub initial: SpaceFn,
}

impl fmt::Debug for SchemeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeConfig")
            .field("kind", &self.kind)
            .field("kappa", &self.kappa)
            .field("order", &self.order.label())
            .field("levels", &self.time.levels())
            .field("mx", &self.space.mx)
            .field("my", &self.space.my)
            .field("eps", &self.eps)
            .finish()
    }
}

impl SchemeConfig {
    pub fn new(
        kind: SchemeKind,
        kappa: f64,
        order: VariableOrder,
        time: TimeGrid,
        space: SpaceGrid,
        source: Source,
        initial: SpaceFn,
    ) -> Self {
        Self {
            kind,
            kappa,
            order,
            time,
            space,
            eps: DEFAULT_EPS,
            truncation: Truncation::default(),
            source,
            initial,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_kind(mut self, kind: SchemeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::Config(format!("diffusion coefficient kappa must be positive, got {}", self.kappa)));
        }
        if self.kind.is_optimal() && (self.space.mx < MIN_CELLS_PERTURBED || self.space.my < MIN_CELLS_PERTURBED) {
            return Err(Error::Config(format!(
                "{} needs Mx, My >= {MIN_CELLS_PERTURBED}, got Mx = {}, My = {}",
                self.kind.label(),
                self.space.mx,
                self.space.my
            )));
        }
        if self.kind == SchemeKind::QscL1p && self.space.dof_count() > SPARSE_DOF_LIMIT {
            return Err(Error::Config(format!(
                "{} DOFs exceed the {SPARSE_DOF_LIMIT}-DOF limit of the full QSC-L1+ solver; use an ADI scheme",
                self.space.dof_count()
            )));
        }
        if (self.horizon() - self.order.horizon()).abs() > 1e-12 * self.horizon() {
            return Err(Error::Config("order function and time grid use different horizons".into()));
        }
        if self.kind.is_fast() && self.time.levels() >= 3 {
            self.esa()?;
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.time.horizon()
    }

    /// Midpoint orders `α̃_n`, index `n - 1`.
    pub fn midpoint_orders(&self) -> Result<Vec<f64>> {
        midpoint_orders(&self.order, &self.time)
    }

    /// Exponential sum for the fast kinds, bracketing every midpoint order.
    pub fn esa(&self) -> Result<EsaQuadrature> {
        let mids = self.midpoint_orders()?;
        let lo = mids.iter().copied().fold(self.order.lower(), f64::min);
        let hi = mids.iter().copied().fold(self.order.upper(), f64::max);
        esa_params_with(lo, hi, self.eps, self.horizon(), self.time.tau(), self.truncation)
    }
}

/// `γ_n = τ κ / (2 (1 + τ a_1))`.
pub fn gamma_n(tau: f64, kappa: f64, a1: f64) -> f64 {
    tau * kappa / (2.0 * (1.0 + tau * a1))
}
