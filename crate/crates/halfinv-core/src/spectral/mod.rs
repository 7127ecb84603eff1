//! Eigenvalue enumeration, asymptotic parameter extraction, and the
//! infinite-product reconstruction of characteristic functions from a
//! spectrum.

mod asymptotics;
mod eigenvalues;
mod product;
mod recover;

pub use asymptotics::{extract_ab, gamma_sequence, recover_mean_and_a2, MidAsymptotics};
pub use eigenvalues::{find_eigenvalues, negative_eigenvalue_scan, ReferenceLattice};
pub use product::{build_product, PairingCase, ProductFn};
pub use recover::{recover_a1_d, recover_omegas, EntireEven, LeftJumpEstimate, OmegaEstimate};

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, first_nonincreasing};
use crate::sl::{Engine, OdeTolerance};
use serde::{Deserialize, Serialize};

/// Ordered sequence of square roots of eigenvalues, together with the
/// spectral shift already folded into them.
///
/// The stored values are the lambda_n of the (possibly shifted) problem:
/// eigenvalues of the original problem are `lambda_n^2 - shift`. A shift of
/// zero means the values are raw.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Spectrum {
    lambdas: Vec<f64>,
    shift: f64,
}

impl Spectrum {
    pub fn new(lambdas: Vec<f64>, shift: f64) -> Result<Self> {
        ensure_finite(&lambdas, "spectrum")?;
        if lambdas.is_empty() {
            return Err(Error::invalid("spectrum", "empty eigenvalue list"));
        }
        if lambdas.iter().any(|&l| l < 0.0) {
            return Err(Error::invalid("spectrum", "lambda entries must be >= 0"));
        }
        let mus: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
        if let Some(i) = first_nonincreasing(&mus) {
            return Err(Error::invalid(
                "spectrum",
                format!("eigenvalues not strictly increasing at index {i}"),
            ));
        }
        if !shift.is_finite() || shift < 0.0 {
            return Err(Error::invalid("spectrum", "shift must be finite and >= 0"));
        }
        Ok(Spectrum { lambdas, shift })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// lambda_n^2 of the shifted problem.
    pub fn mu(&self, n: usize) -> f64 {
        self.lambdas[n] * self.lambdas[n]
    }

    /// Eigenvalues of the original (unshifted) problem.
    pub fn mus_unshifted(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| l * l - self.shift).collect()
    }

    /// Fold an additional upward shift into the stored values.
    pub fn with_added_shift(&self, delta: f64) -> Result<Spectrum> {
        if delta < 0.0 {
            return Err(Error::invalid("spectrum", "shift increment must be >= 0"));
        }
        let lambdas = self
            .lambdas
            .iter()
            .map(|l| (l * l + delta).max(0.0).sqrt())
            .collect();
        Spectrum::new(lambdas, self.shift + delta)
    }

    /// Products over the spectrum require every root away from zero.
    pub fn require_nonzero(&self) -> Result<()> {
        if self.lambdas[0].abs() < 1e-12 {
            return Err(Error::hypothesis(
                "product construction requires lambda_0 != 0; shift the spectrum",
            ));
        }
        Ok(())
    }

    /// First `n` entries as a new spectrum.
    pub fn truncated(&self, n: usize) -> Result<Spectrum> {
        Spectrum::new(self.lambdas[..n.min(self.lambdas.len())].to_vec(), self.shift)
    }
}

/// Numerical options shared by the forward solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: OdeTolerance,
    pub engine: Engine,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: OdeTolerance::default(),
            engine: Engine::Magnus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_ordering_enforced() {
        assert!(Spectrum::new(vec![0.0, 1.0, 1.0], 0.0).is_err());
        assert!(Spectrum::new(vec![0.0, 1.0, 2.0], 0.0).is_ok());
        assert!(Spectrum::new(vec![], 0.0).is_err());
    }

    #[test]
    fn shift_bookkeeping_round_trips() {
        let s = Spectrum::new(vec![0.0, 1.0, 2.0], 0.0).unwrap();
        let t = s.with_added_shift(0.25).unwrap();
        assert_eq!(t.shift(), 0.25);
        let mus = t.mus_unshifted();
        assert!((mus[0] - 0.0).abs() < 1e-15);
        assert!((mus[1] - 1.0).abs() < 1e-15);
        assert!(t.require_nonzero().is_ok());
        assert!(s.require_nonzero().is_err());
    }
}
