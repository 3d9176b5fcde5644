//! Special functions used by the kernels.

mod erfc;
mod gamma;
mod partial_exp;

pub use erfc::{erfc_complex, erfc_real, erfcx_real, faddeeva, ln_erfc_real};
pub use gamma::{
    ln_lower_gamma, ln_regularized_gamma, log_gamma, regularized_gamma_p, regularized_gamma_q,
};
#[allow(unused_imports)]
pub(crate) use partial_exp::split_scaled_sum;
pub use partial_exp::{
    scaled_exp_sum, scaled_partial_exp, PartialExpKind, PartialExpValue, ScaledPartialExp,
    MAX_ORDER,
};

/// `sgn` with the convention `sgn(0) = 0`.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
