use crate::error::{Error, Result};
use crate::esa::EsaHistoryState;
use crate::fractional_time::{l1plus_coeff, l1plus_row};
use crate::linalg::{sparse_solve, SparseOperator2D};
use crate::qsc::{assemble_with, DofGrid, Grid2, OperatorSpec, QscOperators};

use super::config::{SchemeConfig, SourceSampler};

/// Single-equation form of one level: `lhs c^n = rhs` with
/// `lhs = b_1 θθ - (τκ/2)(Hθ + θH) + hh HH` and `θθ` rows on `∂Λ`.
struct LevelEquation {
    b1: f64,
    half: f64,
    hh: f64,
    rhs: Grid2,
}

/// Rebuilds the defining equations of levels `1..=last` from `c^0..c^{last-1}`.
struct Replay<'a> {
    cfg: &'a SchemeConfig,
    ops: QscOperators,
    alphas: Vec<f64>,
    source: SourceSampler,
}

impl<'a> Replay<'a> {
    fn new(cfg: &'a SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            ops: QscOperators::new(&cfg.space, cfg.kind.is_optimal())?,
            alphas: cfg.midpoint_orders()?,
            source: SourceSampler::new(&cfg.source, &cfg.space),
            cfg,
        })
    }

    fn for_each_level<F>(&self, traj: &[DofGrid], last: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, &LevelEquation) -> Result<()>,
    {
        if last == 0 || traj.len() < last {
            return Err(Error::Usage(format!("level {last} needs {last} earlier levels, got {}", traj.len())));
        }
        for c in traj {
            c.check_shape(&self.cfg.space)?;
        }
        let cfg = self.cfg;
        let (tau, kappa) = (cfg.time.tau(), cfg.kappa);
        let fast = cfg.kind.is_fast();
        let q = if fast && last >= 3 { Some(cfg.esa()?) } else { None };
        let mut esa = q.as_ref().map(|q| EsaHistoryState::new(q, traj[0].as_slice()));
        let tts: Vec<Grid2> = traj[..last].iter().map(|c| self.ops.theta_theta(c)).collect();
        let diffs: Vec<Grid2> = tts.windows(2).map(|w| w[1].sub(&w[0])).collect();

        for n in 1..=last {
            let alpha = self.alphas[n - 1];
            let mut hist = cfg.space.zeros();
            let a1 = if fast && n >= 3 {
                let (q, st) = (q.as_ref().expect("built for n >= 3"), esa.as_mut().expect("built for n >= 3"));
                st.push_value(q, traj[n - 2].as_slice())?;
                let mut w = cfg.space.zeros();
                st.weighted_sum(&q.history_coefficients(alpha)?, w.as_mut_slice())?;
                hist.axpy(1.0, &self.ops.theta_theta(&w));
                hist.axpy(l1plus_coeff(2, tau, alpha), &diffs[n - 2]);
                l1plus_coeff(1, tau, alpha)
            } else {
                let row = l1plus_row(n, tau, alpha)?;
                for k in 1..n {
                    hist.axpy(row.a(n - k + 1), &diffs[k - 1]);
                }
                row.a1()
            };
            let b1 = 1.0 + tau * a1;
            let half = tau * kappa / 2.0;
            let hh = if cfg.kind.is_adi() { half * half / b1 } else { 0.0 };

            let c_prev = &traj[n - 1];
            let mut rhs = tts[n - 1].clone();
            rhs.scale(b1);
            rhs.axpy(half, &self.ops.mixed(c_prev));
            if hh != 0.0 {
                let mut p = c_prev.clone();
                if n >= 2 {
                    p.scale(2.0);
                    p.axpy(-1.0, &traj[n - 2]);
                }
                rhs.axpy(hh, &self.ops.hh(&p));
            }
            rhs.axpy(-tau, &hist);
            rhs.axpy(tau, &self.source.at(&cfg.space, cfg.time.midpoint(n)));
            rhs.set_ring(0.0);
            visit(n, &LevelEquation { b1, half, hh, rhs })?;
        }
        Ok(())
    }
}

/// Largest defect of the scheme's defining equations over all levels of
/// `trajectory` (levels `0..=n`), scaled by `1 / b_1` per level.
pub fn residual_check(trajectory: &[DofGrid], cfg: &SchemeConfig) -> Result<f64> {
    if trajectory.len() < 2 {
        return Ok(0.0);
    }
    let replay = Replay::new(cfg)?;
    let ops = &replay.ops;
    let mut worst: f64 = 0.0;
    replay.for_each_level(trajectory, trajectory.len() - 1, |n, eq| {
        let c = &trajectory[n];
        let tt = ops.theta_theta(c);
        let mut lhs = tt.clone();
        lhs.scale(eq.b1);
        lhs.axpy(-eq.half, &ops.mixed(c));
        if eq.hh != 0.0 {
            lhs.axpy(eq.hh, &ops.hh(c));
        }
        let mut defect = lhs.sub(&eq.rhs);
        defect.scale(1.0 / eq.b1);
        let (nx, ny) = tt.shape();
        for i in 0..nx {
            for j in 0..ny {
                let v = if i == 0 || j == 0 || i + 1 == nx || j + 1 == ny {
                    tt[(i, j)]
                } else {
                    defect[(i, j)]
                };
                worst = worst.max(v.abs());
            }
        }
        Ok(())
    })?;
    Ok(worst)
}

/// Assembled single-equation system of `level`, built from `c^0..c^{level-1}`.
pub fn equivalent_system(cfg: &SchemeConfig, trajectory: &[DofGrid], level: usize) -> Result<(SparseOperator2D, Vec<f64>)> {
    let replay = Replay::new(cfg)?;
    let mut out = None;
    replay.for_each_level(trajectory, level, |n, eq| {
        if n == level {
            let spec = OperatorSpec {
                tt: eq.b1,
                ht: -eq.half,
                th: -eq.half,
                hh: eq.hh,
                perturbed: cfg.kind.is_optimal(),
                dirichlet_rows: true,
            };
            out = Some((assemble_with(&replay.ops, &spec)?, eq.rhs.as_slice().to_vec()));
        }
        Ok(())
    })?;
    out.ok_or_else(|| Error::Internal("level equation not visited".into()))
}

/// `c^level` from a direct sparse solve of the equivalent single equation.
pub fn oracle_step(cfg: &SchemeConfig, trajectory: &[DofGrid], level: usize) -> Result<DofGrid> {
    let (op, rhs) = equivalent_system(cfg, trajectory, level)?;
    let c = sparse_solve(&op, &rhs)?;
    Grid2::from_vec(cfg.space.nx(), cfg.space.ny(), c)
}
