//! Quadratic spline collocation in space: meshes, the θ/η/ϑ operators, the
//! fourth-order perturbation, interpolation and discrete norms.
//!
//! Fields are stored row-major over `(i, j)`, boundary DOFs included, so a
//! mesh with `Mx x My` cells carries `(Mx + 2)(My + 2)` values.

mod assemble;
mod basis;
mod grid;
mod interp;
mod norms;
mod ops;

pub use assemble::{assemble_level_operator, assemble_with, OperatorSpec};
pub use basis::{basis_second_deriv, basis_value, eval_at_collocation, eval_spline, phi};
pub use grid::{DofGrid, Grid2, GridFunction, SpaceGrid};
pub use interp::{interpolate, interpolate_dofs, interpolation_error_xx};
pub use norms::{inner_product, l2_norm, seminorm_1x, seminorm_1y};
pub use ops::{
    apply_eta_x, apply_eta_y, apply_perturbation_x, apply_perturbation_y, apply_theta_x, apply_theta_y,
    apply_vartheta_x, apply_vartheta_y, apply_x, apply_xy, apply_y, eta_matrix, perturbation_matrix,
    theta_matrix, vartheta_matrix, QscOperators, MIN_CELLS_PERTURBED,
};
