//! Scalar abstraction so the ODE engine can run on the real line (real
//! spectral parameter mu = lambda^2, covering both real and imaginary
//! lambda) and on complex mu with the same code.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn abs(self) -> f64;
    fn recip(self) -> Self;

    /// (cosh(sqrt(w2) t), sinh(sqrt(w2) t) / sqrt(w2)) as entire functions of
    /// w2; for negative real w2 these are cos / sinc of the frequency.
    fn cosh_sinhc(w2: Self, t: f64) -> (Self, Self);
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }

    fn cosh_sinhc(w2: Self, t: f64) -> (Self, Self) {
        let z = w2 * t * t;
        if z.abs() < 1e-8 {
            // cosh(sqrt(z)) and sinh(sqrt(z))/sqrt(z) by series in z
            let c = 1.0 + z / 2.0 + z * z / 24.0;
            let s = 1.0 + z / 6.0 + z * z / 120.0;
            (c, t * s)
        } else if w2 > 0.0 {
            let a = w2.sqrt();
            ((a * t).cosh(), (a * t).sinh() / a)
        } else {
            let w = (-w2).sqrt();
            ((w * t).cos(), (w * t).sin() / w)
        }
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn recip(self) -> Self {
        self.inv()
    }

    fn cosh_sinhc(w2: Self, t: f64) -> (Self, Self) {
        let z = w2 * (t * t);
        if z.norm() < 1e-8 {
            let c = Complex64::one() + z / 2.0 + z * z / 24.0;
            let s = Complex64::one() + z / 6.0 + z * z / 120.0;
            (c, s * t)
        } else {
            // Even functions of sqrt(w2); either branch of the root works.
            let a = w2.sqrt();
            let at = a * t;
            (at.cosh(), at.sinh() / a)
        }
    }
}
