//! Numerical laboratory for Toeplitz determinants whose symbol has a single
//! Fisher-Hartwig jump singularity.
//!
//! The symbol family is `sigma(z) = (-z)^beta * tau(z)` on the unit circle,
//! with `beta` a complex jump exponent and `tau` a smooth nonvanishing factor
//! of winding number zero. The crate builds the finite Toeplitz matrices
//! `T_n[sigma] = (sigma_hat(i-j))`, computes their log-determinants by dense
//! elimination and by an O(n^2) Levinson-type recursion, evaluates the
//! first-order asymptotics
//!
//! ```text
//! D_n[sigma] ~ G[tau]^(n+1) * n^(-beta^2) * G(1+beta) G(1-beta) E[tau] * (tau_+(1)/tau_-(1))^beta
//! ```
//!
//! and verifies the supporting machinery: Wiener-Hopf factorization, the
//! Szego constants, coefficient asymptotics of the factor ratio, the
//! Wiener-Hopf kernel symbol, Jacobi's minor identity, corner-block scaling,
//! and the eigenvalue distribution of `T_n[sigma]`.
//!
//! Entry points:
//! - [`symbols::SymbolSpec`] describes a symbol (JSON-loadable).
//! - [`toeplitz`] builds matrices, determinants, inverses, eigenvalues.
//! - [`asymptotics`] evaluates predictions, oracles, sweeps and fits.
//! - [`spectra`] checks eigenvalue-distribution claims.
//! - [`acceptance`] runs the full verification suite.

pub mod acceptance;
pub mod asymptotics;
pub mod error;
pub mod numerics;
pub mod specfun;
pub mod spectra;
pub mod symbols;
pub mod szego;
pub mod toeplitz;

pub use error::{Error, Result};
pub use numerics::{Complex64, LogComplex, LogDet};
