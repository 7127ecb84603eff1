//! Integration kernels for y'' = (q(x) - mu) y on cells where q is linear.
//!
//! Two engines are provided. The default splits each grid cell into
//! sub-steps and applies the exact constant-coefficient propagator of the
//! midpoint value plus a first-order commutator-free (Magnus) correction for
//! the linear slope. Its local error decreases with frequency, so the cost
//! stays bounded as mu grows, and it is exact (to rounding) on cells where
//! the potential is constant. The classic adaptive Dormand-Prince 5(4)
//! integrator is kept as the independent cross-check and as the engine for
//! the variational system.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct OdeTolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        OdeTolerance {
            rtol: 1e-11,
            atol: 1e-11,
        }
    }
}

/// Selects the propagation kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Midpoint-exact propagator with Magnus slope correction (default).
    #[default]
    Magnus,
    /// Adaptive Dormand-Prince 5(4).
    Rk45,
}

/// Advance (y, y') across a cell of width `len`, where the potential is
/// `qa + slope * t` for cell-local t, splitting into enough sub-steps to
/// meet `tol_cell` (absolute, relative to a unit-scale solution).
pub fn magnus_cell<S: Scalar>(y: &mut [S; 2], qa: f64, slope: f64, mu: S, len: f64, tol_cell: f64) {
    let mut n = 1usize;
    if slope != 0.0 {
        let w2_mag = (S::from_f64(qa + 0.5 * slope * len) - mu).abs();
        let s2 = slope * slope;
        loop {
            let h = len / n as f64;
            let est_step = s2 * h.powi(4) * h.min(4.0 / (1.0 + w2_mag)) / 20.0;
            if est_step * n as f64 <= tol_cell || n >= 4096 {
                break;
            }
            n *= 2;
        }
    }
    let h = len / n as f64;
    for k in 0..n {
        let t_mid = (k as f64 + 0.5) * h;
        let qm = qa + slope * t_mid;
        let w2 = S::from_f64(qm) - mu;
        step_linear(y, w2, slope, h);
    }
}

/// One midpoint-exact + Magnus-corrected step of width `h` with constant
/// part `w2` and potential slope `slope` (deviation centred at the step
/// midpoint).
fn step_linear<S: Scalar>(y: &mut [S; 2], w2: S, slope: f64, h: f64) {
    let (c, t) = S::cosh_sinhc(w2, h);
    if slope != 0.0 {
        let (i1, i2, i3) = moment_integrals(w2, h);
        let a = i1 * slope;
        let b = i2 * slope;
        let g = i3 * slope;
        // exp of the traceless matrix [[-a, -b], [g, a]]; its square is
        // (a^2 - b g) I, so the exponential closes in cosh/sinhc form.
        let theta2 = a * a - b * g;
        let (ch, sh) = S::cosh_sinhc(theta2, 1.0);
        let u0 = (ch - sh * a) * y[0] - sh * b * y[1];
        let u1 = sh * g * y[0] + (ch + sh * a) * y[1];
        y[0] = u0;
        y[1] = u1;
    }
    let y0 = c * y[0] + t * y[1];
    let y1 = w2 * t * y[0] + c * y[1];
    y[0] = y0;
    y[1] = y1;
}

/// Centred first moments over [0, h] of (T C, T^2, C^2), where
/// C(t) = cosh(sqrt(w2) t) and T(t) = sinh(sqrt(w2) t)/sqrt(w2):
///   I1 = int (t - h/2) T C,  I2 = int (t - h/2) T^2,  I3 = int (t - h/2) C^2.
fn moment_integrals<S: Scalar>(w2: S, h: f64) -> (S, S, S) {
    let h2 = h * h;
    if w2.abs() * h2 < 1e-4 {
        let z = w2 * h2;
        let i1 = (S::from_f64(1.0 / 12.0) + z * (1.0 / 20.0) + z * z * (1.0 / 126.0)) * (h2 * h);
        let i2 = (S::from_f64(1.0 / 12.0) + z * (1.0 / 45.0)) * (h2 * h2);
        let i3 = (z * (1.0 / 12.0) + z * z * (1.0 / 45.0)) * h2;
        (i1, i2, i3)
    } else {
        // cosh(2 a h) and sinh(2 a h)/(2 a) via the doubled argument.
        let (c2, t2) = S::cosh_sinhc(w2 * 4.0, h);
        let inv_w2 = w2.recip();
        let q = (c2 - S::one()) * inv_w2;
        let i3 = t2 * (h / 4.0) - q * (1.0 / 8.0);
        let i2 = i3 * inv_w2;
        let i1 = ((c2 + S::one()) * h - t2 * 2.0) * inv_w2 * (1.0 / 8.0);
        (i1, i2, i3)
    }
}

/// Dormand-Prince 5(4) with standard step control on a fixed-size system.
pub fn rk45<S: Scalar, const N: usize>(
    f: &mut impl FnMut(f64, &[S; N]) -> [S; N],
    x0: f64,
    x1: f64,
    y: &mut [S; N],
    tol: OdeTolerance,
) -> Result<()> {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let span = x1 - x0;
    if span <= 0.0 {
        return Ok(());
    }
    let mut x = x0;
    let mut h = span.min(0.05);
    let hmin = 1e-14 * (1.0 + x1.abs());
    let mut k1 = f(x, y);
    while x < x1 {
        h = h.min(x1 - x);
        if h < hmin {
            return Err(Error::IntegrationFailure { x });
        }
        let add = |y: &[S; N], ks: &[(&[S; N], f64)]| -> [S; N] {
            let mut out = *y;
            for (k, c) in ks {
                for i in 0..N {
                    out[i] = out[i] + k[i] * (*c * h);
                }
            }
            out
        };
        let y2 = add(y, &[(&k1, A21)]);
        let k2 = f(x + 0.2 * h, &y2);
        let y3 = add(y, &[(&k1, A31), (&k2, A32)]);
        let k3 = f(x + 0.3 * h, &y3);
        let y4 = add(y, &[(&k1, A41), (&k2, A42), (&k3, A43)]);
        let k4 = f(x + 0.8 * h, &y4);
        let y5 = add(y, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]);
        let k5 = f(x + 8.0 / 9.0 * h, &y5);
        let y6 = add(
            y,
            &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)],
        );
        let k6 = f(x + h, &y6);
        let ynew = add(y, &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)]);
        let k7 = f(x + h, &ynew);

        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7;
            let scale = tol.atol + tol.rtol * y[i].abs().max(ynew[i].abs());
            let e_scaled = e.abs() * h / scale;
            if e_scaled.is_finite() {
                err = err.max(e_scaled);
            } else {
                err = f64::INFINITY;
            }
        }
        if err <= 1.0 {
            x += h;
            *y = ynew;
            k1 = k7;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn magnus_exact_on_constant_cell() {
        // q = 3 constant, mu = 28 -> omega^2 = 25
        let mut y = [1.0f64, 0.0];
        magnus_cell(&mut y, 3.0, 0.0, 28.0, 0.5, 1e-13);
        assert_relative_eq!(y[0], (5.0f64 * 0.5).cos(), epsilon = 1e-14);
        assert_relative_eq!(y[1], -5.0 * (5.0f64 * 0.5).sin(), epsilon = 1e-13);
    }

    #[test]
    fn magnus_matches_rk45_on_linear_cell() {
        // q(x) = 2 + 30 x over a wide cell, several frequencies
        for &mu in &[-50.0f64, 0.3, 7.0, 150.0, 4000.0, 250000.0] {
            let mut ym = [0.3f64, 1.7];
            magnus_cell(&mut ym, 2.0, 30.0, mu, 0.25, 1e-14);
            let mut yr = [0.3f64, 1.7];
            let mut rhs = |x: f64, y: &[f64; 2]| [y[1], (2.0 + 30.0 * x - mu) * y[0]];
            rk45(
                &mut rhs,
                0.0,
                0.25,
                &mut yr,
                OdeTolerance {
                    rtol: 1e-13,
                    atol: 1e-13,
                },
            )
            .unwrap();
            let scale = 1.0 + yr[0].abs().max(yr[1].abs());
            assert!(
                ((ym[0] - yr[0]).abs() + (ym[1] - yr[1]).abs()) / scale < 2e-10,
                "mu = {mu}: magnus {ym:?} vs rk45 {yr:?}"
            );
        }
    }

    #[test]
    fn magnus_complex_parameter_matches_real_negative_mu() {
        use num_complex::Complex64;
        let mu = -9.0f64;
        let mut yr = [1.0f64, 0.5];
        magnus_cell(&mut yr, 1.0, 12.0, mu, 0.25, 1e-14);
        let mut yc = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)];
        magnus_cell(&mut yc, 1.0, 12.0, Complex64::new(mu, 0.0), 0.25, 1e-14);
        assert_relative_eq!(yc[0].re, yr[0], epsilon = 1e-12);
        assert_relative_eq!(yc[1].re, yr[1], epsilon = 1e-12);
        assert!(yc[0].im.abs() < 1e-14);
    }

    #[test]
    fn rk45_reports_step_underflow() {
        let mut bad = |x: f64, y: &[f64; 2]| {
            let s = if x < 0.5 { 1.0 } else { f64::NAN };
            [y[1] * s, y[0]]
        };
        let mut y = [1.0, 0.0];
        let r = rk45(
            &mut bad,
            0.0,
            1.0,
            &mut y,
            OdeTolerance {
                rtol: 1e-12,
                atol: 1e-12,
            },
        );
        assert!(matches!(r, Err(Error::IntegrationFailure { .. })));
    }
}
