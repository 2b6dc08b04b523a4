//! Special functions: Gamma, Pochhammer, digamma, and the Gauss
//! hypergeometric function ₂F₁ on the whole cut plane.

mod gamma;
mod hyp2f1;
mod oracle;

pub use gamma::{beta, digamma, gamma, ln_gamma_abs, pochhammer, rgamma};
pub use hyp2f1::{
    gauss_at_one, hyp2f1, hyp2f1_derivative, hyp2f1_real, hyp2f1_with, pfaff_transform, Branch,
    BranchedValue, HypTriple, Regime,
};
pub use oracle::hyp2f1_oracle;

/// True when `x` is a non-positive integer (a pole of Γ).
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
