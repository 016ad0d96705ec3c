//! State-feedback stabilization of the positive fixed point.
//!
//! The controlled map adds `delta = -s1 (u - u*) - s2 (v - v*)` to the
//! `u`-equation. At the fixed point the controlled Jacobian has
//! characteristic polynomial `lambda^2 - (1 - s1 + a10) lambda + (a10 - s1 +
//! r h (1-u*)/D + b10 s2)`, and the stable gains form the open triangle cut
//! out by the lines where `lambda1 lambda2 = 1` (l1), `lambda = 1` (l2) and
//! `lambda = -1` (l3).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{step, ModelParams, PlanktonState};
use crate::roots::quadratic_roots;

/// Default margin below `|lambda| = 1` required for `is_stable`.
pub const MARGINAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ControlGains {
    pub s1: f64,
    pub s2: f64,
}

impl ControlGains {
    pub const fn new(s1: f64, s2: f64) -> Self {
        Self { s1, s2 }
    }
}

/// The line `a s1 + b s2 + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    pub fn eval(&self, g: ControlGains) -> f64 {
        self.a * g.s1 + self.b * g.s2 + self.c
    }

    /// Signed distance of `g` from the line.
    pub fn signed_distance(&self, g: ControlGains) -> f64 {
        self.eval(g) / self.a.hypot(self.b)
    }

    pub fn intersect(&self, other: &Line) -> Option<ControlGains> {
        let det = self.a * other.b - self.b * other.a;
        let scale = self.a.hypot(self.b) * other.a.hypot(other.b);
        if det.abs() <= 1e-14 * scale {
            return None;
        }
        Some(ControlGains {
            s1: (self.b * other.c - self.c * other.b) / det,
            s2: (self.c * other.a - self.a * other.c) / det,
        })
    }
}

/// Terms of the controlled characteristic polynomial that do not depend on the gains.
#[derive(Debug, Clone, Copy)]
struct LinearTerms {
    /// `(1-u)(2-h+2cu^h)/(1+cu^h)`
    a10: f64,
    /// `gamma h (1-u)/(1+cu^h)`
    b10: f64,
    /// `r h (1-u)/(1+cu^h)`
    f_one: f64,
}

impl LinearTerms {
    fn new(params: &ModelParams, fixed_point: PlanktonState) -> Self {
        let h = f64::from(params.h());
        let u = fixed_point.u;
        let uh = u.powi(i32::from(params.h()));
        let d = 1.0 + params.c() * uh;
        Self {
            a10: (1.0 - u) * (2.0 - h + 2.0 * params.c() * uh) / d,
            b10: params.gamma() * h * (1.0 - u) / d,
            f_one: params.r() * h * (1.0 - u) / d,
        }
    }

    fn trace(&self, g: ControlGains) -> f64 {
        1.0 - g.s1 + self.a10
    }

    fn det(&self, g: ControlGains) -> f64 {
        self.a10 - g.s1 + self.f_one + self.b10 * g.s2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlTriangle {
    /// `lambda1 lambda2 = 1`
    pub l1: Line,
    /// `lambda = 1`
    pub l2: Line,
    /// `lambda = -1`
    pub l3: Line,
    /// `[l1 ^ l2, l2 ^ l3, l1 ^ l3]`
    pub vertices: [ControlGains; 3],
}

impl ControlTriangle {
    pub fn centroid(&self) -> ControlGains {
        let [p, q, s] = self.vertices;
        ControlGains {
            s1: (p.s1 + q.s1 + s.s1) / 3.0,
            s2: (p.s2 + q.s2 + s.s2) / 3.0,
        }
    }

    /// Smallest signed distance of `g` to an edge, positive inside. Each
    /// line's inside is the side the centroid lies on.
    pub fn depth(&self, g: ControlGains) -> f64 {
        let centre = self.centroid();
        [self.l1, self.l2, self.l3]
            .iter()
            .map(|line| line.signed_distance(g) * line.eval(centre).signum())
            .fold(f64::INFINITY, f64::min)
    }

    /// Strict interior test.
    pub fn contains(&self, g: ControlGains) -> bool {
        self.depth(g) > 0.0
    }

    pub fn area(&self) -> f64 {
        let [p, q, s] = self.vertices;
        0.5 * ((q.s1 - p.s1) * (s.s2 - p.s2) - (s.s1 - p.s1) * (q.s2 - p.s2)).abs()
    }
}

/// One iterate of the controlled map.
pub fn controlled_step(
    params: &ModelParams,
    gains: ControlGains,
    fixed_point: PlanktonState,
    s: PlanktonState,
) -> PlanktonState {
    let delta = -gains.s1 * (s.u - fixed_point.u) - gains.s2 * (s.v - fixed_point.v);
    let next = step(params, s);
    PlanktonState {
        u: next.u + delta,
        v: next.v,
    }
}

/// `n` iterates of the controlled map from `s0` (`n + 1` states).
pub fn simulate_controlled(
    params: &ModelParams,
    gains: ControlGains,
    fixed_point: PlanktonState,
    s0: PlanktonState,
    n: usize,
) -> Vec<PlanktonState> {
    let mut states = Vec::with_capacity(n + 1);
    let mut s = s0;
    states.push(s);
    for _ in 0..n {
        s = controlled_step(params, gains, fixed_point, s);
        states.push(s);
        if !s.is_finite() {
            break;
        }
    }
    states
}

/// Lines of marginal stability and their pairwise intersections.
pub fn control_triangle(params: &ModelParams, fixed_point: PlanktonState) -> Result<ControlTriangle> {
    let t = LinearTerms::new(params, fixed_point);
    let q = t.a10 + t.f_one;
    let l1 = Line {
        a: 1.0,
        b: -t.b10,
        c: 1.0 - q,
    };
    let l2 = Line {
        a: 0.0,
        b: params.gamma(),
        c: params.r(),
    };
    let l3 = Line {
        a: 2.0,
        b: -t.b10,
        c: -2.0 - (2.0 * t.a10 + t.f_one),
    };
    let meet = |x: &Line, y: &Line, name: &str| {
        x.intersect(y)
            .ok_or_else(|| Error::Degenerate(format!("lines {name} are parallel")))
    };
    let vertices = [meet(&l1, &l2, "l1, l2")?, meet(&l2, &l3, "l2, l3")?, meet(&l1, &l3, "l1, l3")?];
    Ok(ControlTriangle { l1, l2, l3, vertices })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlVerdict {
    pub stable: bool,
    pub eigenvalues: [Complex64; 2],
}

/// Both roots of the controlled characteristic polynomial strictly inside the
/// unit circle, by at least [`MARGINAL_TOL`].
pub fn is_stable(params: &ModelParams, fixed_point: PlanktonState, gains: ControlGains) -> ControlVerdict {
    is_stable_with_tol(params, fixed_point, gains, MARGINAL_TOL)
}

pub fn is_stable_with_tol(
    params: &ModelParams,
    fixed_point: PlanktonState,
    gains: ControlGains,
    tol: f64,
) -> ControlVerdict {
    let t = LinearTerms::new(params, fixed_point);
    let eigenvalues = quadratic_roots(-t.trace(gains), t.det(gains));
    let radius = eigenvalues[0].norm().max(eigenvalues[1].norm());
    ControlVerdict {
        stable: radius < 1.0 - tol,
        eigenvalues,
    }
}

/// Evaluate `is_stable` on a regular `(s1, s2)` grid, row-major in `s2`.
pub fn stability_scan(
    params: &ModelParams,
    fixed_point: PlanktonState,
    s1_range: (f64, f64),
    s2_range: (f64, f64),
    points: usize,
) -> Vec<(ControlGains, bool)> {
    use rayon::prelude::*;
    let points = points.max(2);
    let at = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (points - 1) as f64;
    (0..points * points)
        .into_par_iter()
        .map(|k| {
            let g = ControlGains::new(at(s1_range.0, s1_range.1, k % points), at(s2_range.0, s2_range.1, k / points));
            (g, is_stable(params, fixed_point, g).stable)
        })
        .collect()
}
