//! Forward and half-inverse solvers for Sturm-Liouville eigenvalue problems
//! with one interior discontinuity.
//!
//! The crate covers the full chain: propagation of the dressed equation
//! through transmission conditions, eigenvalue enumeration, rebuilding the
//! characteristic function from a spectrum as an infinite product,
//! asymptotic parameter extraction, reconstruction of the left-half
//! characteristic pair by interpolation at sine-type zeros, a scattering
//! (Marchenko) solve for the left-half potential, and an independent
//! finite-difference oracle used for verification.

pub mod error;
pub mod numerics;
pub mod scalar;
pub mod sl;

pub use error::{Error, Result};
pub use sl::{
    bracket_average, BoundaryCoeffs, Engine, JumpParams, OdeTolerance, PotentialHalf, ProblemSpec,
    SolutionState,
};
