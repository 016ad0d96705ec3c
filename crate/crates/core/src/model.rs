//! The discrete phytoplankton-zooplankton map
//!
//! ```text
//! u' = u(2 - u) - u^h v / (1 + c u^h)
//! v' = gamma u^h v / (1 + c u^h) + (1 - r) v
//! ```
//!
//! with `h = 1` (Holling type II) or `h = 2` (Holling type III). `gamma` is the
//! net gain of the predator (conversion minus toxin liberation); only the
//! difference enters the dynamics.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::quadratic_roots;

/// Parameter tuple `(r, c, gamma, h)` of one map instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    r: f64,
    c: f64,
    gamma: f64,
    h: u8,
}

impl ModelParams {
    pub fn new(r: f64, c: f64, gamma: f64, h: u8) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "must be finite and > 0",
            });
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "must be finite and > 0",
            });
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be finite",
            });
        }
        if h != 1 && h != 2 {
            return Err(Error::InvalidParameter {
                name: "h",
                value: f64::from(h),
                reason: "must be 1 or 2",
            });
        }
        Ok(Self { r, c, gamma, h })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn h(&self) -> u8 {
        self.h
    }

    /// Same `(r, c, h)` with a different `gamma`.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.r, self.c, gamma, self.h)
    }

    /// `r(1 + c)`: the positive fixed point exists iff `gamma` exceeds it.
    pub fn existence_threshold(&self) -> f64 {
        self.r * (1.0 + self.c)
    }

    /// `u^h` with integer exponent.
    pub(crate) fn pow_h(&self, u: f64) -> f64 {
        u.powi(i32::from(self.h))
    }

    /// `u^(h-1)`, with `u^0 = 1` also at `u = 0`.
    pub(crate) fn pow_h_minus_1(&self, u: f64) -> f64 {
        if self.h == 1 {
            1.0
        } else {
            u.powi(i32::from(self.h) - 1)
        }
    }
}

/// A point `(u, v)` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PlanktonState {
    pub u: f64,
    pub v: f64,
}

impl PlanktonState {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.u >= 0.0 && self.v >= 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Sup-norm distance.
    pub fn dist_inf(&self, other: &PlanktonState) -> f64 {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }
}

impl From<(f64, f64)> for PlanktonState {
    fn from((u, v): (f64, f64)) -> Self {
        Self { u, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jacobian2x2 {
    pub j11: f64,
    pub j12: f64,
    pub j21: f64,
    pub j22: f64,
}

impl Jacobian2x2 {
    pub fn trace(&self) -> f64 {
        self.j11 + self.j22
    }

    pub fn det(&self) -> f64 {
        self.j11 * self.j22 - self.j12 * self.j21
    }

    /// Roots of `lambda^2 - trace lambda + det`.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        quadratic_roots(-self.trace(), self.det())
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.j11 * x + self.j12 * y, self.j21 * x + self.j22 * y)
    }
}

/// One iterate of the map.
pub fn step(params: &ModelParams, s: PlanktonState) -> PlanktonState {
    let uh = params.pow_h(s.u);
    let uptake = uh * s.v / (1.0 + params.c * uh);
    PlanktonState {
        u: s.u * (2.0 - s.u) - uptake,
        v: params.gamma * uptake + (1.0 - params.r) * s.v,
    }
}

/// Jacobian of [`step`] at `s`. For `h = 1` the `u^(h-1)` factor is taken
/// as 1 everywhere, including `u = 0`.
pub fn jacobian(params: &ModelParams, s: PlanktonState) -> Jacobian2x2 {
    let h = f64::from(params.h);
    let uh = params.pow_h(s.u);
    let uh1 = params.pow_h_minus_1(s.u);
    let denom = 1.0 + params.c * uh;
    let d_uptake_du = h * s.v * uh1 / (denom * denom);
    Jacobian2x2 {
        j11: 2.0 - 2.0 * s.u - d_uptake_du,
        j12: -uh / denom,
        j21: params.gamma * d_uptake_du,
        j22: params.gamma * uh / denom + 1.0 - params.r,
    }
}

/// Closed-form positive fixed point, present iff `gamma > r(1+c)`.
pub fn positive_fixed_point(params: &ModelParams) -> Option<PlanktonState> {
    if params.gamma <= params.existence_threshold() {
        return None;
    }
    let uh = params.r / (params.gamma - params.r * params.c);
    let u = match params.h {
        1 => uh,
        _ => uh.sqrt(),
    };
    let v = (1.0 - u) * (1.0 + params.c * uh) / params.pow_h_minus_1(u);
    Some(PlanktonState { u, v })
}

/// The equilibria `E0 = (0, 0)` and `E1 = (1, 0)`, present for every parameter set.
pub fn boundary_fixed_points() -> (PlanktonState, PlanktonState) {
    (PlanktonState::new(0.0, 0.0), PlanktonState::new(1.0, 0.0))
}

/// Sufficient conditions (a)-(c) under which `v' >= 0` for all `u` in `[0, 1]`
/// and `v >= 0`:
///
/// * (a) `gamma <= -1`, `c >= -1 - gamma`, `0 < r <= (c + 1 + gamma)/(c + 1)`
/// * (b) `-1 < gamma <= 0`, `c > 0`, `0 < r <= (c + 1 + gamma)/(c + 1)`
/// * (c) `gamma > 0`, `c > 0`, `0 < r <= 1`
pub fn nonnegativity_condition(params: &ModelParams) -> bool {
    let (r, c, g) = (params.r, params.c, params.gamma);
    let r_cap = (c + 1.0 + g) / (c + 1.0);
    let a = g <= -1.0 && c >= -1.0 - g && r > 0.0 && r <= r_cap;
    let b = g > -1.0 && g <= 0.0 && c > 0.0 && r > 0.0 && r <= r_cap;
    let cc = g > 0.0 && c > 0.0 && r > 0.0 && r <= 1.0;
    a || b || cc
}
