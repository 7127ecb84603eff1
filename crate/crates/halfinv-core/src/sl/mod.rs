//! Domain types and the ODE engine: propagate solutions of
//! -y'' + q y = lambda^2 y across [0, 1/2], through an interior jump when
//! present, and combine endpoint data into characteristic functions.

mod ode;
mod propagate;
pub mod trig;

pub use ode::{Engine, OdeTolerance};
pub use propagate::{
    char_fn_left, char_fn_mid, char_fn_value, char_left_values, char_mid_values, propagate,
    propagate_initial, propagate_trajectory, propagate_with_dmu,
};

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, simpson_weights};
use serde::{Deserialize, Serialize};

pub const HALF: f64 = 0.5;

/// Real samples of a potential on a uniform grid over [0, 1/2], interpreted
/// by piecewise-linear interpolation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PotentialHalf {
    values: Vec<f64>,
    grid_step: f64,
}

impl PotentialHalf {
    pub fn new(values: Vec<f64>, grid_step: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("potential", "need at least two samples"));
        }
        ensure_finite(&values, "potential")?;
        if !(grid_step > 0.0) {
            return Err(Error::invalid("potential", "grid step must be positive"));
        }
        let span = grid_step * (values.len() - 1) as f64;
        if (span - HALF).abs() > 1e-12 {
            return Err(Error::invalid(
                "potential",
                format!("grid spans {span}, expected 1/2"),
            ));
        }
        Ok(PotentialHalf { values, grid_step })
    }

    /// Constant potential `c` on a default 129-point grid.
    pub fn constant(c: f64) -> Self {
        PotentialHalf::new(vec![c; 129], HALF / 128.0).unwrap()
    }

    /// Zero potential.
    pub fn zero() -> Self {
        PotentialHalf::constant(0.0)
    }

    /// Sample a function on a uniform grid with `n` cells over [0, 1/2].
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = HALF / n as f64;
        let values = (0..=n).map(|i| f(i as f64 * step)).collect();
        PotentialHalf::new(values, step)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Piecewise-linear value at `x` (clamped to [0, 1/2]).
    pub fn value_at(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, HALF);
        let u = x / self.grid_step;
        let i = (u.floor() as usize).min(self.values.len() - 2);
        let t = u - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Grid abscissae.
    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| i as f64 * self.grid_step)
    }

    /// Exact integral of the piecewise-linear interpolant over [0, upto].
    pub fn integral_to(&self, upto: f64) -> f64 {
        let upto = upto.clamp(0.0, HALF);
        let h = self.grid_step;
        let full = (upto / h).floor() as usize;
        let full = full.min(self.values.len() - 1);
        let mut acc = 0.0;
        for i in 0..full {
            acc += 0.5 * (self.values[i] + self.values[i + 1]) * h;
        }
        let x0 = full as f64 * h;
        if upto > x0 && full + 1 < self.values.len() {
            let t = (upto - x0) / h;
            let va = self.values[full];
            let vb = self.values[full + 1];
            let vm = va * (1.0 - t) + vb * t;
            acc += 0.5 * (va + vm) * (upto - x0);
        }
        acc
    }

    /// Shift the potential by a constant (returns a new sample set).
    pub fn shifted(&self, c: f64) -> Self {
        PotentialHalf {
            values: self.values.iter().map(|v| v + c).collect(),
            grid_step: self.grid_step,
        }
    }

    /// Resample onto `n` cells by piecewise-linear evaluation.
    pub fn resample(&self, n: usize) -> Self {
        PotentialHalf::from_fn(n, |x| self.value_at(x)).unwrap()
    }

    /// L2 norm over [0, 1/2] of the interpolant (exact per cell).
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid_step;
        let mut acc = 0.0;
        for w in self.values.windows(2) {
            let (a, b) = (w[0], w[1]);
            acc += h * (a * a + a * b + b * b) / 3.0;
        }
        acc.sqrt()
    }
}

/// Mean in the bracket sense: (1/2) * integral over [0, 1/2] of f.
/// Composite Simpson on the sample grid; exact for piecewise-linear data.
pub fn bracket_average(f: &PotentialHalf) -> f64 {
    let n = f.len() - 1;
    let w = simpson_weights(n, f.grid_step());
    let integral: f64 = w.iter().zip(f.values()).map(|(wi, vi)| wi * vi).sum();
    0.5 * integral
}

/// Interior discontinuity parameters: value jump a1, derivative mix a2,
/// position d in (0, 1/2].
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct JumpParams {
    pub a1: f64,
    pub a2: f64,
    pub d: f64,
}

impl JumpParams {
    pub fn new(a1: f64, a2: f64, d: f64) -> Result<Self> {
        if !(a1 > 0.0) || !a1.is_finite() {
            return Err(Error::invalid("jump", "a1 must be positive and finite"));
        }
        if !a2.is_finite() {
            return Err(Error::invalid("jump", "a2 must be finite"));
        }
        if !(d > 0.0 && d <= HALF) {
            return Err(Error::invalid("jump", "d must lie in (0, 1/2]"));
        }
        Ok(JumpParams { a1, a2, d })
    }

    /// Symmetric half-sum (a1 + 1/a1)/2; always >= 1.
    pub fn b1(&self) -> f64 {
        0.5 * (self.a1 + 1.0 / self.a1)
    }

    /// Antisymmetric half-difference (a1 - 1/a1)/2.
    pub fn b2(&self) -> f64 {
        0.5 * (self.a1 - 1.0 / self.a1)
    }

    /// True when the transmission conditions actually differ from continuity.
    /// The inverse pipelines require this; the forward solver does not.
    pub fn is_nontrivial(&self) -> bool {
        (self.a1 - 1.0).abs() + self.a2.abs() > 0.0
    }

    pub fn interior(&self) -> bool {
        self.d < HALF
    }
}

/// Boundary coefficients of y'(0) - h1 y(0) = 0 = y'(1) + h2 y(1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct BoundaryCoeffs {
    pub h1: f64,
    pub h2: f64,
}

impl BoundaryCoeffs {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if !h1.is_finite() || !h2.is_finite() {
            return Err(Error::invalid("boundary", "coefficients must be finite"));
        }
        Ok(BoundaryCoeffs { h1, h2 })
    }
}

/// Full problem: left and right half potentials (the right half is stored in
/// the reflected variable, q2(x) = q(1 - x)), boundary coefficients, and the
/// jump parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemSpec {
    pub q1: PotentialHalf,
    pub q2: PotentialHalf,
    pub boundary: BoundaryCoeffs,
    pub jump: JumpParams,
}

impl ProblemSpec {
    pub fn new(
        q1: PotentialHalf,
        q2: PotentialHalf,
        boundary: BoundaryCoeffs,
        jump: JumpParams,
    ) -> Result<Self> {
        Ok(ProblemSpec {
            q1,
            q2,
            boundary,
            jump,
        })
    }

    /// Jump parameters seen from the left propagation: present only when the
    /// discontinuity is interior to [0, 1/2).
    pub fn interior_jump(&self) -> Option<&JumpParams> {
        self.jump.interior().then_some(&self.jump)
    }

    /// Shift the whole problem by a constant: q -> q + c (both halves).
    pub fn shifted(&self, c: f64) -> Self {
        ProblemSpec {
            q1: self.q1.shifted(c),
            q2: self.q2.shifted(c),
            boundary: self.boundary,
            jump: self.jump,
        }
    }
}

/// Value and slope of a solution at a position in [0, 1/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionState {
    pub y: f64,
    pub dy: f64,
    pub x: f64,
}

impl SolutionState {
    pub fn new(y: f64, dy: f64, x: f64) -> Result<Self> {
        if !y.is_finite() || !dy.is_finite() || !x.is_finite() {
            return Err(Error::invalid("solution state", "non-finite component"));
        }
        Ok(SolutionState { y, dy, x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bracket_average_examples() {
        assert_eq!(bracket_average(&PotentialHalf::zero()), 0.0);
        assert_relative_eq!(bracket_average(&PotentialHalf::constant(1.0)), 0.25);
        let linear = PotentialHalf::from_fn(64, |x| x).unwrap();
        assert_relative_eq!(bracket_average(&linear), 0.0625, epsilon = 1e-14);
    }

    #[test]
    fn potential_invariants() {
        assert!(PotentialHalf::new(vec![0.0, 1.0], 0.3).is_err());
        assert!(PotentialHalf::new(vec![0.0], 0.5).is_err());
        assert!(PotentialHalf::new(vec![0.0, f64::NAN], 0.5).is_err());
        assert!(PotentialHalf::new(vec![0.0, 1.0], 0.5).is_ok());
    }

    #[test]
    fn potential_interpolation_and_integral() {
        let p = PotentialHalf::from_fn(4, |x| 2.0 * x).unwrap();
        assert_relative_eq!(p.value_at(0.31), 0.62, epsilon = 1e-14);
        assert_relative_eq!(p.integral_to(0.5), 0.25, epsilon = 1e-14);
        assert_relative_eq!(p.integral_to(0.2), 0.04, epsilon = 1e-14);
    }

    #[test]
    fn jump_params_validation() {
        assert!(JumpParams::new(-1.0, 0.0, 0.25).is_err());
        assert!(JumpParams::new(1.0, 0.0, 0.7).is_err());
        let j = JumpParams::new(2.0, 0.0, 0.25).unwrap();
        assert_relative_eq!(j.b1(), 1.25);
        assert_relative_eq!(j.b2(), 0.75);
        assert!(j.is_nontrivial());
        assert!(!JumpParams::new(1.0, 0.0, 0.5).unwrap().is_nontrivial());
    }

    #[test]
    fn l2_norm_of_constant() {
        let p = PotentialHalf::constant(2.0);
        assert_relative_eq!(p.l2_norm(), 2.0 * (0.5f64).sqrt(), epsilon = 1e-13);
    }
}
