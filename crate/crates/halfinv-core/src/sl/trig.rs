//! Even trigonometric helpers on the mu = lambda^2 plane.
//!
//! cos(w lambda) and sin(w lambda)/lambda are entire even functions of
//! lambda, hence well-defined functions of mu; evaluating them through mu
//! keeps every caller manifestly even and covers the imaginary axis
//! (mu < 0) with hyperbolic growth automatically.

use crate::scalar::Scalar;
use num_complex::Complex64;

/// cos(w lambda) as a function of mu = lambda^2.
pub fn cos_w(mu: f64, w: f64) -> f64 {
    f64::cosh_sinhc(-mu, w).0
}

/// sin(w lambda) / lambda as a function of mu = lambda^2.
pub fn sinc_w(mu: f64, w: f64) -> f64 {
    f64::cosh_sinhc(-mu, w).1
}

pub fn cos_w_c(mu: Complex64, w: f64) -> Complex64 {
    Complex64::cosh_sinhc(-mu, w).0
}

pub fn sinc_w_c(mu: Complex64, w: f64) -> Complex64 {
    Complex64::cosh_sinhc(-mu, w).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matches_direct_trig_for_positive_mu() {
        let (mu, w) = (7.3f64, 0.5);
        let l = mu.sqrt();
        assert_relative_eq!(cos_w(mu, w), (w * l).cos(), epsilon = 1e-14);
        assert_relative_eq!(sinc_w(mu, w), (w * l).sin() / l, epsilon = 1e-14);
    }

    #[test]
    fn hyperbolic_for_negative_mu() {
        let (mu, w) = (-16.0, 0.5);
        assert_relative_eq!(cos_w(mu, w), (2.0f64).cosh(), epsilon = 1e-13);
        assert_relative_eq!(sinc_w(mu, w), (2.0f64).sinh() / 4.0, epsilon = 1e-13);
    }

    #[test]
    fn series_limit_at_origin() {
        assert_relative_eq!(sinc_w(0.0, 0.5), 0.5);
        assert_relative_eq!(cos_w(0.0, 0.5), 1.0);
    }
}
