//! Time grid, variable fractional order and the direct L1⁺ discretization
//! of the time-averaged variable-order Caputo derivative.

mod grid;
mod l1plus;
pub mod oracle;
mod order;

pub use grid::{midpoint_orders, TimeGrid};
pub use l1plus::{
    history_sum_direct, history_sum_direct_fields, kernel_omega, l1plus_coeff, l1plus_row, CoeffFn,
    L1PlusRow,
};
pub use oracle::coeff_quadrature_oracle;
pub use order::{OrderKind, OrderPreset, VariableOrder, BOUND_SAMPLES};
