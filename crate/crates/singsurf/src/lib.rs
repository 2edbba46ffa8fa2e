//! Singular-surface acoustics toolkit.
//!
//! Two model problems from 1-D acoustics in exponentially stratified gases are
//! covered end to end:
//!
//! * a **linear shock wave** in an isothermal atmosphere with Rayleigh
//!   dissipation, driven by a cosine signal at the ground (`shock_analytic`,
//!   `shock`), and
//! * **nonlinear acceleration waves** under an inhomogeneous
//!   Lighthill–Westervelt equation that shock up in finite time (`lwe`, `fds`).
//!
//! For both, closed-form singular-surface results (jump amplitudes, wave-front
//! kinematics, blow-up times) live in [`surface`], and the time stepping is
//! done by the Krylov subspace spectral (KSS) machinery in [`kss`]: matrix
//! functions of the discretized operator are approximated per sine-transform
//! frequency by two-point interpolation, which removes the CFL restriction.
//!
//! The `singsurf` binary exposes the experiments as CLI subcommands; see the
//! crate README.

pub mod cli;
pub mod error;
pub mod fds;
pub mod grid;
pub mod kss;
pub mod lift;
pub mod lwe;
pub mod quad;
pub mod shock;
pub mod shock_analytic;
pub mod specfun;
pub mod surface;

pub use error::Error;
