//! Fundamental solutions of `𝒯 = yΔₓ + ∂²/∂y²` relative to `(0, b)`, the
//! series they come from, and their multiplicative constants.

mod coefficients;
mod constants;
mod kernels;

pub use coefficients::{
    epd_coefficient, epd_coefficients, epd_coefficients_exact, epd_recurrence_exact, epd_recurrence_residuals,
    layer_coefficient, layer_coefficient_exact, phi_closed_form, phi_series_partial, EpdCoefficients,
};
pub use constants::{
    a_m, c_of_n, constant_identities, constants, gamma_identity_value, odd_bare_constant_gap, ConstantsRecord,
    IdentityResidual,
};
pub use kernels::{
    e_minus_radial, e_minus_xt, e_plus_radial, eval_e_minus, eval_e_plus, eval_f_minus, eval_f_plus,
    eval_tilde_e, f_minus_radial, f_plus_radial, singular_layers, tilde_e_elliptic, tilde_e_principal, tilde_e_radial, uv_factored, KernelSpec,
    LayerTerm, Parity,
};
