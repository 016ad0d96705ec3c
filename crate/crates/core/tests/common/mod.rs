//! Reference computations that avoid the library's analytic formulas: finite
//! differences of `step`, explicit quadratic roots, and bisection.
#![allow(dead_code)]

use plankton_dynamics::model::{step, ModelParams, PlanktonState};
use plankton_dynamics::ns_bifurcation::TaylorCoeffs;
use plankton_dynamics::stability::StabilityClass;

pub fn p(r: f64, c: f64, gamma: f64, h: u8) -> ModelParams {
    ModelParams::new(r, c, gamma, h).unwrap()
}

/// Map shifted so that `fp` sits at the origin.
fn shifted(params: &ModelParams, fp: PlanktonState, x: f64, y: f64) -> (f64, f64) {
    let s = step(params, PlanktonState::new(fp.u + x, fp.v + y));
    (s.u - fp.u, s.v - fp.v)
}

/// Central-difference Jacobian of `step`.
pub fn fd_jacobian(params: &ModelParams, s: PlanktonState, eps: f64) -> [[f64; 2]; 2] {
    let f = |du: f64, dv: f64| step(params, PlanktonState::new(s.u + du, s.v + dv));
    let (up, um) = (f(eps, 0.0), f(-eps, 0.0));
    let (vp, vm) = (f(0.0, eps), f(0.0, -eps));
    [
        [(up.u - um.u) / (2.0 * eps), (vp.u - vm.u) / (2.0 * eps)],
        [(up.v - um.v) / (2.0 * eps), (vp.v - vm.v) / (2.0 * eps)],
    ]
}

/// Taylor coefficients of the shifted map by central finite differences,
/// with the conventions `a20 = f_xx / 2`, `a11 = f_xy`, `a30 = f_xxx / 6`,
/// `a21 = f_xxy / 2`.
pub fn fd_taylor(params: &ModelParams, fp: PlanktonState) -> TaylorCoeffs {
    let h1 = 1e-6;
    let h2 = 1e-4;
    let h3 = 1e-3;
    let f = |x: f64, y: f64| shifted(params, fp, x, y);
    let comp = |k: usize, x: f64, y: f64| {
        let (a, b) = f(x, y);
        if k == 0 {
            a
        } else {
            b
        }
    };
    let mut out = [[0.0; 6]; 2];
    for (k, row) in out.iter_mut().enumerate() {
        let g = |x: f64, y: f64| comp(k, x, y);
        let dx = (g(h1, 0.0) - g(-h1, 0.0)) / (2.0 * h1);
        let dy = (g(0.0, h1) - g(0.0, -h1)) / (2.0 * h1);
        let dxx = (g(h2, 0.0) - 2.0 * g(0.0, 0.0) + g(-h2, 0.0)) / (h2 * h2);
        let dxy = (g(h2, h2) - g(h2, -h2) - g(-h2, h2) + g(-h2, -h2)) / (4.0 * h2 * h2);
        let dxxx = (g(2.0 * h3, 0.0) - 2.0 * g(h3, 0.0) + 2.0 * g(-h3, 0.0) - g(-2.0 * h3, 0.0)) / (2.0 * h3 * h3 * h3);
        let dxx_at = |y: f64| (g(h3, y) - 2.0 * g(0.0, y) + g(-h3, y)) / (h3 * h3);
        let dxxy = (dxx_at(h3) - dxx_at(-h3)) / (2.0 * h3);
        *row = [dx, dy, dxx / 2.0, dxy, dxxx / 6.0, dxxy / 2.0];
    }
    let [a, b] = out;
    TaylorCoeffs {
        a10: a[0],
        a01: a[1],
        a20: a[2],
        a11: a[3],
        a30: a[4],
        a21: a[5],
        b10: b[0],
        b01: b[1],
        b20: b[2],
        b11: b[3],
        b30: b[4],
        b21: b[5],
    }
}

/// Eigenvalue moduli of `[[a, b], [c, d]]` from the explicit quadratic formula.
pub fn moduli(j: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [((tr - s) / 2.0).abs(), ((tr + s) / 2.0).abs()]
    } else {
        let m = det.max(0.0).sqrt();
        [m, m]
    }
}

/// Classification straight from eigenvalue moduli, with an exclusion band
/// of width `band` around 1 reported as `None`.
pub fn classify_by_moduli(m: [f64; 2], band: f64) -> Option<StabilityClass> {
    if m.iter().any(|x| (x - 1.0).abs() <= band) {
        return None;
    }
    let inside = m.iter().filter(|x| **x < 1.0).count();
    Some(match inside {
        2 => StabilityClass::Attracting,
        0 => StabilityClass::Repelling,
        _ => StabilityClass::Saddle,
    })
}

/// Positive fixed point recomputed from its defining equations.
pub fn fixed_point_direct(params: &ModelParams) -> PlanktonState {
    let (r, c, g) = (params.r(), params.c(), params.gamma());
    let uh = r / (g - r * c);
    let u = if params.h() == 1 { uh } else { uh.sqrt() };
    let v = (1.0 - u) * (1.0 + c * uh) / (uh / u);
    PlanktonState::new(u, v)
}

/// Determinant of the finite-difference Jacobian at the positive point.
pub fn fd_q(r: f64, c: f64, gamma: f64, h: u8) -> f64 {
    let params = p(r, c, gamma, h);
    let j = fd_jacobian(&params, fixed_point_direct(&params), 1e-7);
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// First gamma above `r(1+c)` at which `q` crosses 1, by scanning then
/// bisecting on the finite-difference determinant.
pub fn gamma0_by_bisection(r: f64, c: f64, h: u8, gamma_max: f64) -> Option<f64> {
    let lo0 = r * (1.0 + c) * (1.0 + 1e-6) + 1e-9;
    let n = 20_000;
    let dg = (gamma_max - lo0) / n as f64;
    let f = |g: f64| fd_q(r, c, g, h) - 1.0;
    let mut a = lo0;
    let mut fa = f(a);
    for k in 1..=n {
        let b = lo0 + dg * k as f64;
        let fb = f(b);
        if fa < 0.0 && fb >= 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-13 {
                    break;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    None
}

/// Binary path for process-level CLI tests.
pub fn bin() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_plankton"))
}
