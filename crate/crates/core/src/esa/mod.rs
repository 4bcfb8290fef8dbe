//! Exponential-sum compression of the fractional kernel and the streaming
//! fast evaluation of the L1⁺ history.

mod quadrature;
mod state;

pub use quadrature::{
    b_integral, esa_b_coeff, esa_params, esa_params_with, esa_weights, EsaQuadrature, Truncation, DEFAULT_EPS,
};
pub use state::{history_push, history_sum_fast, EsaHistoryState};
