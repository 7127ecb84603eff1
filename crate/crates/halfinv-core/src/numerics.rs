//! Shared numerical utilities: root bracketing and refinement, limit
//! extrapolation, quadrature weights, finite differences, and a small dense
//! linear-algebra kit (LU with partial pivoting, one-norm condition
//! estimate, least squares).

use crate::error::{Error, Result};

/// Bisect a bracketed sign change of `f` down to interval width `tol`.
///
/// `fa` must have the opposite sign of `f(b)`. Returns the midpoint of the
/// final bracket.
pub fn bisect(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, fa0: f64, tol: f64) -> f64 {
    let mut fa = fa0;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break; // ulp limit
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bisection with a secant polish: cheap and robust for the simple,
/// well-separated zeros handled here.
pub fn refine_root(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, fa: f64, tol: f64) -> f64 {
    let x = bisect(f, a, b, fa, tol.max(1e-15 * (a.abs() + b.abs())));
    // One secant step around the bisection result to polish.
    let h = tol.max(1e-15 * (1.0 + x.abs()));
    let f1 = f(x - h);
    let f2 = f(x + h);
    let denom = f2 - f1;
    if denom != 0.0 {
        let step = -(f1 + f2) * 0.5 * (2.0 * h) / denom;
        if step.abs() <= 2.0 * h {
            return x + step;
        }
    }
    x
}

/// All sign changes of `f` on a uniform scan of [lo, hi] with `n` intervals,
/// each refined to width `tol`. A zero hit exactly on a scan point is kept.
pub fn scan_roots(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, n: usize, tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / n as f64;
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = lo + step * i as f64;
        let fb = f(xb);
        if fa == 0.0 {
            roots.push(xa);
        } else if fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(refine_root(f, xa, xb, fa, tol));
        }
        xa = xb;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(xa);
    }
    roots
}

/// Limit of a sequence of measurements `(t_i, e_i)` modelled as
/// `e(t) = L + sum_k c_k t^(-p_k)`; solves the small least-squares system and
/// reports the fit residual as a convergence gauge.
///
/// With `points.len() == exponents.len() + 1` this is plain extrapolation
/// (interpolatory, residual 0 up to rounding); extra points give an honest
/// residual.
pub fn fit_limit(points: &[(f64, f64)], exponents: &[f64]) -> (f64, f64) {
    let m = points.len();
    let k = exponents.len() + 1;
    assert!(m >= k, "need at least {} points", k);
    let mut a = vec![0.0; m * k];
    let mut b = vec![0.0; m];
    for (i, &(t, e)) in points.iter().enumerate() {
        a[i * k] = 1.0;
        for (j, &p) in exponents.iter().enumerate() {
            a[i * k + j + 1] = t.powf(-p);
        }
        b[i] = e;
    }
    let coef = lstsq(&a, &b, m, k);
    let mut res = 0.0f64;
    for i in 0..m {
        let mut pred = 0.0;
        for j in 0..k {
            pred += a[i * k + j] * coef[j];
        }
        res = res.max((pred - b[i]).abs());
    }
    (coef[0], res)
}

/// Classic three-point Richardson extrapolation with the decay order
/// estimated from the data. Points must be at geometrically spaced scales
/// (t, 2t, 4t). Falls back to the last value when the differences do not
/// contract. Returns (limit, residual_gauge, estimated_order).
pub fn richardson3(e1: f64, e2: f64, e3: f64) -> (f64, f64, f64) {
    let d1 = e1 - e2;
    let d2 = e2 - e3;
    if d2 == 0.0 {
        return (e3, 0.0, f64::INFINITY);
    }
    let ratio = d1 / d2;
    if ratio <= 1.0 {
        // No contraction: report the last value with the spread as gauge.
        return (e3, d1.abs().max(d2.abs()), 0.0);
    }
    let p = ratio.log2();
    let corr = d2 / (ratio - 1.0);
    (e3 - corr, corr.abs(), p)
}

/// Composite Simpson weights for `n + 1` uniform samples spaced `h`.
/// Odd interval counts end with a 3/8 panel, keeping O(h^4) accuracy.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 2);
    let mut w = vec![0.0; n + 1];
    let even_part = if n % 2 == 0 { n } else { n - 3 };
    if even_part >= 2 {
        w[0] += h / 3.0;
        w[even_part] += h / 3.0;
        for i in 1..even_part {
            w[i] += if i % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
        }
    }
    if n % 2 == 1 {
        let s = n - 3;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[n] += 3.0 * h / 8.0;
    }
    w
}

/// Five-point centred first derivative.
pub fn deriv5(f: &mut dyn FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Five-point centred second derivative.
pub fn deriv5_second(f: &mut dyn FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// Dense LU factorization with partial pivoting, row-major `n x n`.
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
    pub singular: bool,
}

impl Lu {
    pub fn factor(a: &[f64], n: usize) -> Lu {
        let mut lu = a.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut maxv = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let v = lu[i * n + k].abs();
                if v > maxv {
                    maxv = v;
                    p = i;
                }
            }
            if maxv == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let pivv = lu[k * n + k];
            for i in (k + 1)..n {
                let m = lu[i * n + k] / pivv;
                lu[i * n + k] = m;
                for j in (k + 1)..n {
                    lu[i * n + j] -= m * lu[k * n + j];
                }
            }
        }
        Lu {
            n,
            lu,
            piv,
            singular,
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solve with the transpose (needed by the condition estimator).
    pub fn solve_t(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[j * n + i] * x[j];
            }
            x[i] = s;
        }
        let mut out = vec![0.0; n];
        for (i, &p) in self.piv.iter().enumerate() {
            out[p] = x[i];
        }
        out
    }

    /// Hager-style one-norm estimate of the inverse.
    pub fn inv_norm1_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0f64;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = y.iter().map(|v| v.abs()).sum();
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_t(&xi);
            let (mut jmax, mut zmax) = (0usize, 0.0f64);
            for (j, &v) in z.iter().enumerate() {
                if v.abs() > zmax {
                    zmax = v.abs();
                    jmax = j;
                }
            }
            let zx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= zx {
                break;
            }
            x = vec![0.0; n];
            x[jmax] = 1.0;
        }
        est
    }
}

/// One-norm of a dense row-major matrix.
pub fn norm1(a: &[f64], n: usize) -> f64 {
    let mut best = 0.0f64;
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            s += a[i * n + j].abs();
        }
        best = best.max(s);
    }
    best
}

/// Least squares via normal equations (small, well-conditioned systems
/// only: regressor counts here are <= 4).
pub fn lstsq(a: &[f64], b: &[f64], m: usize, k: usize) -> Vec<f64> {
    let mut ata = vec![0.0; k * k];
    let mut atb = vec![0.0; k];
    for i in 0..m {
        for p in 0..k {
            atb[p] += a[i * k + p] * b[i];
            for q in 0..k {
                ata[p * k + q] += a[i * k + p] * a[i * k + q];
            }
        }
    }
    Lu::factor(&ata, k).solve(&atb)
}

/// Strictly increasing check with the index of the first violation.
pub fn first_nonincreasing(xs: &[f64]) -> Option<usize> {
    xs.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 1)
}

/// Median of a small sample (by copy).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Guard for audits: count sign changes of `f` sampled on a uniform grid.
pub fn count_sign_changes(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> usize {
    let step = (hi - lo) / n as f64;
    let mut count = 0;
    let mut fa = f(lo);
    for i in 1..=n {
        let fb = f(lo + step * i as f64);
        if fa != 0.0 && fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            count += 1;
        }
        if fb != 0.0 {
            fa = fb;
        }
    }
    count
}

/// Validate that every entry is finite.
pub fn ensure_finite(xs: &[f64], what: &'static str) -> Result<()> {
    if let Some(i) = xs.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(what, format!("non-finite entry at index {i}")));
    }
    Ok(())
}
