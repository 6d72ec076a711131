//! Coefficient verification and pseudospectral simulation for a highly
//! nonlinear shallow-water equation over a linear shear current.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeffs`] evaluates every model constant from the vorticity `A` and
//!   cross-checks the algebraic identities tying them together.
//! * [`spectral`] provides the periodic grid, spectral derivatives and the
//!   Helmholtz inverse `(1 - d²/dx²)^{-1}`.
//! * [`model_forms`] implements the local, rescaled and nonlocal forms of the
//!   equation as residual functionals and right-hand sides.
//! * [`solver`] integrates the nonlocal Cauchy problem with RK4 and records
//!   the diagnostics used by the wave-breaking monitor.
//! * [`besov`] computes Littlewood-Paley blocks and discrete Besov norms.
//! * [`output`] writes snapshots, diagnostics, manifests and plot scripts.

pub mod besov;
pub mod coeffs;
mod error;
pub mod model_forms;
pub mod oracles;
pub mod output;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
