//! Explicit fundamental solutions of the generalized Tricomi operator
//! `T = y Δ_x + ∂²/∂y²` on `R^{n+1}`, together with the special-function,
//! distribution, and quadrature machinery needed to evaluate them and to
//! certify `T E = δ` numerically in weak form.
//!
//! Module map:
//!
//! - [`specfun`]: Gamma, Pochhammer, digamma and the Gauss function ₂F₁ with
//!   its transformation formulas and an Euler-integral oracle.
//! - [`quad`]: adaptive Gauss–Kronrod and fixed Gauss–Legendre rules.
//! - [`chi`]: the homogeneous distributions χ_q, smooth bump test functions,
//!   and surface delta layers.
//! - [`geometry`]: the hyperbolic change of variables, the cone function and
//!   the characteristic quadratic forms `u`, `v`.
//! - [`fundsol`]: coefficient engine and closed-form kernels for `n = 1`,
//!   `n` even and `n` odd.
//! - [`verify`]: weak-form residuals `⟨E, Tφ⟩ − φ(0, b)` and limit checks.

pub mod chi;
pub mod error;
pub mod fundsol;
pub mod geometry;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
