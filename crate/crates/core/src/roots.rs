//! Polynomial root helpers and a bracketing root finder.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Roots of the monic quadratic `x^2 + b x + c`.
///
/// Real roots come back in ascending order; a complex pair comes back with
/// the negative imaginary part first.
pub fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // avoids cancellation in the smaller-magnitude root
        let q = -0.5 * (b + b.signum() * sq);
        let (x1, x2) = if q == 0.0 {
            (0.0, 0.0)
        } else {
            (q, c / q)
        };
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, -im), Complex64::new(re, im)]
    }
}

/// Real roots of `a x^2 + b x + c`, ascending. Handles the linear and
/// constant cases.
pub fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    quadratic_roots(b / a, c / a)
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .collect()
}

/// Real roots of `a x^3 + b x^2 + c x + d`, ascending, each polished by a
/// couple of Newton steps. Falls back to [`quadratic_real_roots`] when
/// `a == 0`.
///
/// Three real roots use the trigonometric form; a single real root uses
/// Cardano's formula.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        return quadratic_real_roots(b, c, d);
    }
    let (b, c, d) = (b / a, c / a, d / a);
    // depressed cubic t^3 + p t + q with x = t - b/3
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if p == 0.0 && q == 0.0 {
        vec![-shift; 3]
    } else if disc < 0.0 {
        // p < 0 here
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * PI * f64::from(k) / 3.0).cos() - shift)
            .collect()
    } else {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        if disc == 0.0 {
            // double root
            vec![u + v - shift, -(u + v) / 2.0 - shift]
        } else {
            vec![u + v - shift]
        }
    };

    let f = |x: f64| ((x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + c;
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let slope = df(*x);
            if slope == 0.0 {
                break;
            }
            let next = *x - f(*x) / slope;
            if !next.is_finite() || f(next).abs() >= f(*x).abs() {
                break;
            }
            *x = next;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite
/// sign. Stops when the bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
