use crate::error::Result;
use crate::linalg::{assemble_2d, KronTerm, SparseOperator2D};

use super::grid::SpaceGrid;
use super::ops::QscOperators;

/// Coefficients of a level operator
/// `tt θxθy + ht Hxθy + th θxHy + hh HxHy`, where `H = η` or `η + P_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub tt: f64,
    pub ht: f64,
    pub th: f64,
    pub hh: f64,
    pub perturbed: bool,
    /// Replace every `∂Λ` row by the corresponding `θxθy` row.
    pub dirichlet_rows: bool,
}

impl OperatorSpec {
    pub fn theta_theta() -> Self {
        Self {
            tt: 1.0,
            ht: 0.0,
            th: 0.0,
            hh: 0.0,
            perturbed: false,
            dirichlet_rows: false,
        }
    }
}

pub fn assemble_with(ops: &QscOperators, spec: &OperatorSpec) -> Result<SparseOperator2D> {
    let (hx, hy) = if spec.perturbed {
        (&ops.h_x, &ops.h_y)
    } else {
        (&ops.eta_x, &ops.eta_y)
    };
    let terms = [
        KronTerm::new(spec.tt, &ops.theta_x, &ops.theta_y),
        KronTerm::new(spec.ht, hx, &ops.theta_y),
        KronTerm::new(spec.th, &ops.theta_x, hy),
        KronTerm::new(spec.hh, hx, hy),
    ];
    let live: Vec<KronTerm<'_>> = terms.into_iter().filter(|t| t.coeff != 0.0).collect();
    let live = if live.is_empty() { vec![terms[0]] } else { live };
    let boundary = [KronTerm::new(1.0, &ops.theta_x, &ops.theta_y)];
    assemble_2d(&live, spec.dirichlet_rows.then_some(&boundary[..]))
}

/// Assembles a level operator on `grid`.
pub fn assemble_level_operator(grid: &SpaceGrid, spec: &OperatorSpec) -> Result<SparseOperator2D> {
    let ops = QscOperators::new(grid, spec.perturbed)?;
    assemble_with(&ops, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_theta_rows_sum_to_one() {
        let g = SpaceGrid::unit_square(3).unwrap();
        let op = assemble_level_operator(&g, &OperatorSpec::theta_theta()).unwrap();
        for r in 0..op.dim() {
            let s: f64 = op.row(r).map(|e| e.1).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbed_stencil_width() {
        let g = SpaceGrid::unit_square(8).unwrap();
        let spec = OperatorSpec {
            tt: 1.0,
            ht: -0.1,
            th: -0.1,
            hh: 0.01,
            perturbed: true,
            dirichlet_rows: true,
        };
        let op = assemble_level_operator(&g, &spec).unwrap();
        assert!(op.max_row_nnz() <= 81);
    }
}
