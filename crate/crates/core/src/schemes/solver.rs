use std::time::Instant;

use crate::error::{Error, Result};
use crate::esa::{EsaHistoryState, EsaQuadrature};
use crate::fractional_time::{l1plus_coeff, l1plus_row, L1PlusRow};
use crate::linalg::{BandMatrix, BandedLu, LineSolver};
use crate::qsc::{assemble_with, interpolate_dofs, DofGrid, Grid2, OperatorSpec, QscOperators};

use super::config::{gamma_n, SchemeConfig, SchemeKind, SourceSampler};

/// Relative tolerance of the boundary identity `(θxθy c)|∂Λ = 0`.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// `c^0`: spline interpolant of the initial function.
pub fn init_dofs(cfg: &SchemeConfig) -> Result<DofGrid> {
    interpolate_dofs(&cfg.space, &cfg.space.sample(|x, y| (cfg.initial)(x, y)))
}

/// Past increments needed by the history term.
#[derive(Debug, Clone)]
pub enum History {
    /// `d^k = θxθy (c^k - c^{k-1})` for every completed level `k`.
    Direct(Vec<Grid2>),
    /// Newest increment `d^{n-1}` and the exponential-sum fields, created at
    /// level 2 from `c^0`.
    Fast { last_diff: Option<Grid2>, esa: EsaHistoryState },
}

/// Solution state after level `level`.
#[derive(Debug, Clone)]
pub struct StepState {
    pub level: usize,
    /// `c^n`.
    pub current: DofGrid,
    /// `c^{n-1}`; `None` at level 0.
    pub previous: Option<DofGrid>,
    /// `θxθy c^n`.
    pub theta_theta: Grid2,
    pub history: History,
    /// `γ_n` of the last level, zero at level 0.
    pub gamma: f64,
    /// `a_1, a_2` of the last level; full rows are rebuilt per level.
    pub a1: f64,
    pub a2: f64,
}

/// Time stepper for one configuration.
pub struct Solver {
    cfg: SchemeConfig,
    ops: QscOperators,
    alphas: Vec<f64>,
    esa: Option<EsaQuadrature>,
    source: SourceSampler,
    full_cache: Option<(u64, BandedLu)>,
    state: StepState,
    history_seconds: f64,
}

impl Solver {
    pub fn new(cfg: &SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let ops = QscOperators::new(&cfg.space, cfg.kind.is_optimal())?;
        let alphas = cfg.midpoint_orders()?;
        let esa = if cfg.kind.is_fast() && cfg.time.levels() >= 3 {
            Some(cfg.esa()?)
        } else {
            None
        };
        let c0 = init_dofs(cfg)?;
        let tt = ops.theta_theta(&c0);
        let history = match &esa {
            Some(q) => History::Fast {
                last_diff: None,
                esa: EsaHistoryState::new(q, c0.as_slice()),
            },
            None => History::Direct(Vec::new()),
        };
        Ok(Self {
            source: SourceSampler::new(&cfg.source, &cfg.space),
            cfg: cfg.clone(),
            ops,
            alphas,
            esa,
            full_cache: None,
            state: StepState {
                level: 0,
                current: c0,
                previous: None,
                theta_theta: tt,
                history,
                gamma: 0.0,
                a1: 0.0,
                a2: 0.0,
            },
            history_seconds: 0.0,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn operators(&self) -> &QscOperators {
        &self.ops
    }

    pub fn state(&self) -> &StepState {
        &self.state
    }

    pub fn level(&self) -> usize {
        self.state.level
    }

    pub fn esa(&self) -> Option<&EsaQuadrature> {
        self.esa.as_ref()
    }

    /// Wall time spent forming history terms.
    pub fn history_seconds(&self) -> f64 {
        self.history_seconds
    }

    /// `f64` values held for the history term.
    pub fn history_memory_len(&self) -> usize {
        match &self.state.history {
            History::Direct(d) => d.iter().map(|g| g.as_slice().len()).sum(),
            History::Fast { esa, last_diff } => {
                esa.memory_len() + last_diff.as_ref().map_or(0, |d| d.as_slice().len())
            }
        }
    }

    /// Exponential updates performed by the fast history.
    pub fn esa_updates(&self) -> u64 {
        match &self.state.history {
            History::Fast { esa, .. } => esa.updates(),
            History::Direct(_) => 0,
        }
    }

    pub fn into_state(self) -> StepState {
        self.state
    }

    /// Advances one level with the configured kind.
    pub fn step(&mut self) -> Result<()> {
        let n = self.state.level + 1;
        let res = match self.cfg.kind {
            SchemeKind::QscL1p => self.step_full(),
            SchemeKind::OptAdiQscL1p | SchemeKind::OptAdiQscFl1p => self.step_optimal(),
            SchemeKind::AdiQscFl1p if n >= 3 => self.step_adi_fast(),
            SchemeKind::AdiQscL1p | SchemeKind::AdiQscFl1p if n == 1 => self.step_adi_first(),
            _ => self.step_adi_general(),
        };
        res.map_err(|e| match e {
            e @ Error::Step { .. } => e,
            e => Error::Step { level: n, source: Box::new(e) },
        })
    }

    /// Full 2D collocation solve of one level.
    pub fn step_full(&mut self) -> Result<()> {
        self.expect_kind(self.cfg.kind == SchemeKind::QscL1p, "step_full")?;
        let n = self.begin_level()?;
        let tau = self.cfg.time.tau();
        let half = tau * self.cfg.kappa / 2.0;
        let row = self.row(n)?;
        let b1 = row.b(1);
        let a2 = second_coeff(&row);
        let hist = self.history_term(n, Some(&row), a2)?;

        let c_prev = &self.state.current;
        let mut rhs = self.state.theta_theta.clone();
        rhs.scale(b1);
        rhs.axpy(half, &self.ops.mixed(c_prev));
        rhs.axpy(-tau, &hist);
        rhs.axpy(tau, &self.source.at(&self.cfg.space, self.cfg.time.midpoint(n)));
        rhs.set_ring(0.0);

        let key = b1.to_bits();
        if self.full_cache.as_ref().is_none_or(|(k, _)| *k != key) {
            let spec = OperatorSpec {
                tt: b1,
                ht: -half,
                th: -half,
                hh: 0.0,
                perturbed: false,
                dirichlet_rows: true,
            };
            let lu = assemble_with(&self.ops, &spec)?.factor()?;
            self.full_cache = Some((key, lu));
        }
        let lu = &self.full_cache.as_ref().expect("factor cached above").1;
        let mut c = rhs.into_vec();
        lu.solve_in_place(&mut c)?;
        let (nx, ny) = self.state.current.shape();
        let c = Grid2::from_vec(nx, ny, c)?;
        self.finish_level(n, c, 0.0, row.a1(), a2)
    }

    /// Level 1 of the ADI kinds.
    pub fn step_adi_first(&mut self) -> Result<()> {
        self.expect_kind(self.cfg.kind.is_adi() && !self.cfg.kind.is_optimal(), "step_adi_first")?;
        self.expect_level(1, 1, "step_adi_first")?;
        self.adi_level(false)
    }

    /// Levels `n >= 2` of ADI-QSC-L1⁺, and level 2 of ADI-QSC-FL1⁺.
    pub fn step_adi_general(&mut self) -> Result<()> {
        let kind = self.cfg.kind;
        self.expect_kind(kind == SchemeKind::AdiQscL1p || kind == SchemeKind::AdiQscFl1p, "step_adi_general")?;
        let max = if kind.is_fast() { 2 } else { usize::MAX };
        self.expect_level(2, max, "step_adi_general")?;
        self.adi_level(false)
    }

    /// Levels `n >= 3` of ADI-QSC-FL1⁺.
    pub fn step_adi_fast(&mut self) -> Result<()> {
        self.expect_kind(self.cfg.kind == SchemeKind::AdiQscFl1p, "step_adi_fast")?;
        self.expect_level(3, usize::MAX, "step_adi_fast")?;
        self.adi_level(true)
    }

    /// Any level of the optimal kinds; levels `n >= 3` of the fast variant
    /// use the exponential-sum history.
    pub fn step_optimal(&mut self) -> Result<()> {
        self.expect_kind(self.cfg.kind.is_optimal(), "step_optimal")?;
        let n = self.state.level + 1;
        self.adi_level(self.cfg.kind.is_fast() && n >= 3)
    }

    fn expect_kind(&self, ok: bool, op: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("{op} does not apply to {}", self.cfg.kind.label())))
        }
    }

    fn expect_level(&self, lo: usize, hi: usize, op: &str) -> Result<()> {
        let n = self.state.level + 1;
        if n < lo || n > hi {
            return Err(Error::Usage(format!("{op} cannot compute level {n}")));
        }
        Ok(())
    }

    fn begin_level(&self) -> Result<usize> {
        let n = self.state.level + 1;
        if n > self.cfg.time.levels() {
            return Err(Error::Usage(format!("level {n} is past the final level {}", self.cfg.time.levels())));
        }
        Ok(n)
    }

    fn row(&self, n: usize) -> Result<L1PlusRow> {
        l1plus_row(n, self.cfg.time.tau(), self.alphas[n - 1])
    }

    /// `Σ_{k=1}^{n-1} a_{n-k+1} d^k`, or its exponential-sum counterpart.
    /// `row` is required by the direct history only.
    fn history_term(&mut self, n: usize, row: Option<&L1PlusRow>, a2: f64) -> Result<Grid2> {
        let clock = Instant::now();
        let mut hist = self.cfg.space.zeros();
        let StepState { history, previous, .. } = &mut self.state;
        match history {
            History::Direct(diffs) => {
                let row = row.ok_or_else(|| Error::Internal("direct history needs the full L1+ row".into()))?;
                for (k, d) in diffs.iter().enumerate() {
                    hist.axpy(row.a(n - k), d);
                }
            }
            History::Fast { last_diff, esa } => {
                if let Some(d) = last_diff.as_ref() {
                    hist.axpy(a2, d);
                }
                if n >= 3 {
                    let q = self.esa.as_ref().expect("fast kinds carry a quadrature");
                    let c_nm2 = previous.as_ref().expect("c^{n-2} exists from level 3 on");
                    esa.push_value(q, c_nm2.as_slice())?;
                    let coef = q.history_coefficients(self.alphas[n - 1])?;
                    let mut w = self.cfg.space.zeros();
                    esa.weighted_sum(&coef, w.as_mut_slice())?;
                    hist.axpy(1.0, &self.ops.theta_theta(&w));
                }
            }
        }
        self.history_seconds += clock.elapsed().as_secs_f64();
        Ok(hist)
    }

    /// One two-sweep level; `fast` selects the exponential-sum history.
    fn adi_level(&mut self, fast: bool) -> Result<()> {
        let n = self.begin_level()?;
        let tau = self.cfg.time.tau();
        let kappa = self.cfg.kappa;
        let alpha = self.alphas[n - 1];
        let (row, a1, a2) = if fast {
            let a1 = l1plus_coeff(1, tau, alpha);
            let a2 = l1plus_coeff(2, tau, alpha);
            (None, a1, a2)
        } else {
            let row = self.row(n)?;
            let (a1, a2) = (row.a1(), second_coeff(&row));
            (Some(row), a1, a2)
        };
        let gamma = gamma_n(tau, kappa, a1);
        let hist = self.history_term(n, row.as_ref(), a2)?;

        let c_prev = &self.state.current;
        let p = match &self.state.previous {
            None => c_prev.clone(),
            Some(c_nm2) => {
                let mut p = c_prev.clone();
                p.scale(2.0);
                p.axpy(-1.0, c_nm2);
                p
            }
        };
        let mut rhs = self.state.theta_theta.clone();
        rhs.axpy(gamma, &self.ops.mixed(c_prev));
        rhs.axpy(gamma * gamma, &self.ops.hh(&p));
        let g = 2.0 * gamma / kappa;
        rhs.axpy(-g, &hist);
        rhs.axpy(g, &self.source.at(&self.cfg.space, self.cfg.time.midpoint(n)));
        rhs.set_ring(0.0);

        let lx = line_operator(&self.ops.theta_x, &self.ops.h_x, gamma)?;
        let ly = line_operator(&self.ops.theta_y, &self.ops.h_y, gamma)?;
        let ny = rhs.ny();
        lx.solve_columns(rhs.as_mut_slice(), ny)?;
        ly.solve_rows(rhs.as_mut_slice())?;

        self.finish_level(n, rhs, gamma, a1, a2)
    }

    fn finish_level(&mut self, n: usize, c: DofGrid, gamma: f64, a1: f64, a2: f64) -> Result<()> {
        if !c.is_finite() {
            return Err(Error::Internal("non-finite spline coefficients".into()));
        }
        let tt = self.ops.theta_theta(&c);
        let ring = tt.ring_max_abs();
        if ring > BOUNDARY_TOL * tt.max_abs().max(1.0) {
            return Err(Error::Internal(format!("boundary identity violated by {ring:e}")));
        }
        let diff = tt.sub(&self.state.theta_theta);
        let st = &mut self.state;
        let prev = std::mem::replace(&mut st.current, c);
        st.previous = Some(prev);
        match &mut st.history {
            History::Direct(diffs) => diffs.push(diff),
            History::Fast { last_diff, .. } => *last_diff = Some(diff),
        }
        st.theta_theta = tt;
        st.level = n;
        st.gamma = gamma;
        st.a1 = a1;
        st.a2 = a2;
        Ok(())
    }
}

/// `a_2`, or zero on level 1 where the row has a single weight.
fn second_coeff(row: &L1PlusRow) -> f64 {
    if row.level >= 2 {
        row.a(2)
    } else {
        0.0
    }
}

/// Factor of `θ - γ H` along one axis.
fn line_operator(theta: &BandMatrix, h: &BandMatrix, gamma: f64) -> Result<LineSolver> {
    LineSolver::new(&BandMatrix::combine(&[(1.0, theta), (-gamma, h)])?)
}
