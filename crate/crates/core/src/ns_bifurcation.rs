//! Neimark-Sacker analysis at the positive fixed point.
//!
//! At `gamma = gamma0` the Jacobian at the positive fixed point has a complex
//! pair on the unit circle. The pipeline here:
//!
//! 1. third-order Taylor coefficients of the map shifted to the fixed point,
//! 2. the transversality derivative `d|lambda|/dgamma`,
//! 3. the change of coordinates `T = [[m n, -n], [0, 1]]` that puts the
//!    linear part into rotation form,
//! 4. the coefficients `L20, L11, L02, L21` and the discriminating quantity
//!    `L`, whose sign decides whether the bifurcating closed curve attracts
//!    (`L < 0`, curve exists for `gamma > gamma0`) or repels (`L > 0`, curve
//!    exists for `gamma < gamma0`).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{positive_fixed_point, ModelParams, PlanktonState};
use crate::stability::{critical_gamma, p_of};

/// Third-order Taylor coefficients of the shifted map at the origin.
///
/// `x' = a10 x + a01 y + a20 x^2 + a11 x y + a30 x^3 + a21 x^2 y + O(4)`,
/// likewise `y'` with `b` coefficients. Every coefficient of `y^2`, `x y^2`
/// and `y^3` vanishes identically because the map is linear in `v`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TaylorCoeffs {
    pub a10: f64,
    pub a01: f64,
    pub a20: f64,
    pub a11: f64,
    pub a30: f64,
    pub a21: f64,
    pub b10: f64,
    pub b01: f64,
    pub b20: f64,
    pub b11: f64,
    pub b30: f64,
    pub b21: f64,
}

impl TaylorCoeffs {
    /// Coefficients at `params.gamma()` taken as `gamma0`, expanded about `fixed_point`.
    pub fn at_critical(params: &ModelParams, fixed_point: PlanktonState) -> Self {
        let (r, c, g0) = (params.r(), params.c(), params.gamma());
        let hi = i32::from(params.h());
        let h = f64::from(params.h());
        let u = fixed_point.u;
        let uh = u.powi(hi);
        let d = 1.0 + c * uh;
        let k = 1.0 - h + c * uh + h * c * uh;
        let cubic = 2.0 * d * d + 3.0 * h * (c * c * uh * uh - 1.0)
            + h * h * (1.0 - 4.0 * c * uh + c * c * uh * uh);

        let a10 = (1.0 - u) * (2.0 - h + 2.0 * c * uh) / d;
        let a01 = -r / g0;
        let a20 = -1.0 + h * (1.0 - u) * k / (2.0 * u * d * d);
        let a11 = -h * u.powi(hi - 1) / (d * d);
        let a30 = -h * (1.0 - u) * cubic / (6.0 * u * u * d.powi(3));
        let a21 = h * u.powi(hi - 2) * k / (2.0 * d.powi(3));

        Self {
            a10,
            a01,
            a20,
            a11,
            a30,
            a21,
            b10: g0 * h * (1.0 - u) / d,
            b01: 1.0,
            b20: -g0 * h * (1.0 - u) * k / (2.0 * u * d * d),
            b11: g0 * h * u.powi(hi - 1) / (d * d),
            b30: g0 * h * (1.0 - u) * cubic / (6.0 * u * u * d.powi(3)),
            b21: -g0 * h * u.powi(hi - 2) * k / (2.0 * d.powi(3)),
        }
    }

    /// Linear part `[[a10, a01], [b10, b01]]` applied to `(x, y)`.
    pub fn linear_part(&self, x: f64, y: f64) -> (f64, f64) {
        (self.a10 * x + self.a01 * y, self.b10 * x + self.b01 * y)
    }

    /// Quadratic and cubic terms `H(x, y)`.
    pub fn nonlinear_part(&self, x: f64, y: f64) -> (f64, f64) {
        let (x2, xy, x3, x2y) = (x * x, x * y, x * x * x, x * x * y);
        (
            self.a20 * x2 + self.a11 * xy + self.a30 * x3 + self.a21 * x2y,
            self.b20 * x2 + self.b11 * xy + self.b30 * x3 + self.b21 * x2y,
        )
    }
}

/// `d|lambda|/dgamma` at `gamma = gamma0`, with the fixed point held at its
/// critical location. Strictly positive for admissible parameters.
pub fn transversality(params: &ModelParams, fixed_point: PlanktonState) -> f64 {
    let (r, c, g0) = (params.r(), params.c(), params.gamma());
    let h = f64::from(params.h());
    let u = fixed_point.u;
    let uh = u.powi(i32::from(params.h()));
    let d = 1.0 + c * uh;
    // b(0) = 1 at criticality, so sqrt(b) drops out
    (1.0 - u) / (2.0 * d) * (uh * (2.0 - h + 2.0 * c * uh) / d + r * h / g0)
}

/// Coefficients of one cubic polynomial `k20 X^2 + k11 X Y + k02 Y^2 + k30 X^3
/// + k21 X^2 Y + k12 X Y^2 + k03 Y^3`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CubicPoly {
    pub k20: f64,
    pub k11: f64,
    pub k02: f64,
    pub k30: f64,
    pub k21: f64,
    pub k12: f64,
    pub k03: f64,
}

impl CubicPoly {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.k20 * x * x
            + self.k11 * x * y
            + self.k02 * y * y
            + self.k30 * x * x * x
            + self.k21 * x * x * y
            + self.k12 * x * y * y
            + self.k03 * y * y * y
    }

    /// `[P_XX, P_XY, P_YY, P_XXX, P_XXY, P_XYY, P_YYY]` at the origin.
    pub fn partials(&self) -> [f64; 7] {
        [
            2.0 * self.k20,
            self.k11,
            2.0 * self.k02,
            6.0 * self.k30,
            2.0 * self.k21,
            2.0 * self.k12,
            6.0 * self.k03,
        ]
    }
}

/// Nonlinear part in the rotated coordinates: `(F, G) = T^{-1} H(T X)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NormalForm {
    /// `c_ij`
    pub f: CubicPoly,
    /// `d_ij`
    pub g: CubicPoly,
}

impl NormalForm {
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (self.f.eval(x, y), self.g.eval(x, y))
    }
}

pub fn normal_form(t: &TaylorCoeffs, m: f64, n: f64) -> NormalForm {
    let (a20, a11, a30, a21) = (t.a20, t.a11, t.a30, t.a21);
    let (b20, b11, b30, b21) = (t.b20, t.b11, t.b30, t.b21);
    let (n2, n3) = (n * n, n * n * n);
    let (m2, m3) = (m * m, m * m * m);
    let f = CubicPoly {
        k20: a20 * m * n + b20 * m * n2,
        k11: a11 - a20 * n + b11 * n - b20 * n2,
        k02: (a20 * n - a11 + b20 * n2 - b11 * n) / m,
        k30: a30 * m2 * n2 + b30 * m2 * n3,
        k21: a21 * m * n - 3.0 * a30 * m * n2 + b21 * m * n2 - 3.0 * b30 * m * n3,
        k12: 3.0 * a30 * n2 - 2.0 * a21 * n + 3.0 * b30 * n3 - 2.0 * b21 * n2,
        k03: (a21 * n - a30 * n2 + b21 * n2 - b30 * n3) / m,
    };
    let g = CubicPoly {
        k20: b20 * m2 * n2,
        k11: b11 * m * n - b20 * m * n2,
        k02: b20 * n2 - b11 * n,
        k30: b30 * m3 * n3,
        k21: b21 * m2 * n2 - 3.0 * b30 * m2 * n3,
        k12: 3.0 * b30 * m * n3 - 2.0 * b21 * m * n2,
        k03: b21 * n2 - b30 * n3,
    };
    NormalForm { f, g }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveDirection {
    /// `L < 0`: an attracting closed curve exists for `gamma > gamma0`.
    AttractingCurveForGammaAbove,
    /// `L > 0`: a repelling closed curve exists for `gamma < gamma0`.
    RepellingCurveForGammaBelow,
}

/// The coefficients `L20, L11, L02, L21` and the quantity `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminatingQuantity {
    pub l20: Complex64,
    pub l11: Complex64,
    pub l02: Complex64,
    pub l21: Complex64,
    pub value: f64,
}

/// Evaluate `L` from the normal form and the critical eigenvalue pair
/// (`lambda1` with negative imaginary part, `lambda2 = conj(lambda1)`).
pub fn discriminating_quantity(nf: &NormalForm, lambda1: Complex64, lambda2: Complex64) -> DiscriminatingQuantity {
    let [fxx, fxy, fyy, fxxx, fxxy, fxyy, fyyy] = nf.f.partials();
    let [gxx, gxy, gyy, gxxx, gxxy, gxyy, gyyy] = nf.g.partials();
    let l20 = Complex64::new(fxx - fyy + 2.0 * gxy, gxx - gyy - 2.0 * fxy) / 8.0;
    let l11 = Complex64::new(fxx + fyy, gxx + gyy) / 4.0;
    let l02 = Complex64::new(fxx - fyy - 2.0 * gxy, gxx - gyy + 2.0 * fxy) / 8.0;
    let l21 = Complex64::new(fxxx + fxyy + gxxy + gyyy, gxxx + gxyy - fxxy - fyyy) / 16.0;
    let one = Complex64::new(1.0, 0.0);
    let lead = (one - 2.0 * lambda1) * lambda2 * lambda2 / (one - lambda1);
    let value = -(lead * l11 * l20).re - 0.5 * l11.norm_sqr() - l02.norm_sqr() + (lambda2 * l21).re;
    DiscriminatingQuantity {
        l20,
        l11,
        l02,
        l21,
        value,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsReport {
    pub gamma0: f64,
    pub fixed_point: PlanktonState,
    /// `lambda1 = (1 + a10 - i alpha)/2`, `lambda2` its conjugate.
    pub eigenvalues: [Complex64; 2],
    pub alpha: f64,
    pub m: f64,
    pub n: f64,
    pub coeffs: TaylorCoeffs,
    pub normal_form: NormalForm,
    pub l20: Complex64,
    pub l11: Complex64,
    pub l02: Complex64,
    pub l21: Complex64,
    /// The discriminating quantity `L`.
    pub l: f64,
    pub direction: CurveDirection,
    pub transversality: f64,
}

impl NsReport {
    /// Build the report from given Taylor coefficients. `params` must carry
    /// `gamma0` and `fixed_point` must be its positive fixed point.
    pub fn from_coeffs(params: &ModelParams, fixed_point: PlanktonState, coeffs: TaylorCoeffs) -> Result<Self> {
        let a10 = coeffs.a10;
        let alpha_sq = 3.0 - a10 * a10 - 2.0 * a10;
        if !(alpha_sq > 0.0) || a10 >= 1.0 {
            return Err(Error::Precondition(format!(
                "no complex critical pair: a10 = {a10}, alpha^2 = {alpha_sq}"
            )));
        }
        let alpha = alpha_sq.sqrt();
        let lambda1 = Complex64::new((1.0 + a10) / 2.0, -alpha / 2.0);
        let lambda2 = lambda1.conj();
        let m = alpha / (1.0 - a10);
        let n = params.r() / (2.0 * params.gamma());
        let nf = normal_form(&coeffs, m, n);
        let dq = discriminating_quantity(&nf, lambda1, lambda2);
        let direction = if dq.value < 0.0 {
            CurveDirection::AttractingCurveForGammaAbove
        } else {
            CurveDirection::RepellingCurveForGammaBelow
        };
        Ok(Self {
            gamma0: params.gamma(),
            fixed_point,
            eigenvalues: [lambda1, lambda2],
            alpha,
            m,
            n,
            coeffs,
            normal_form: nf,
            l20: dq.l20,
            l11: dq.l11,
            l02: dq.l02,
            l21: dq.l21,
            l: dq.value,
            direction,
            transversality: transversality(params, fixed_point),
        })
    }

    /// `lambda^k != 1` for `k = 1..=4` (no strong resonance).
    pub fn non_degenerate(&self) -> bool {
        let lambda = self.eigenvalues[0];
        (1..=4).all(|k| (lambda.powu(k) - 1.0).norm() > 1e-6)
    }

    /// Complex eigenvector for `lambda1`: `(-n - i m n, 1)`.
    pub fn eigenvector(&self) -> [Complex64; 2] {
        [
            Complex64::new(-self.n, -self.m * self.n),
            Complex64::new(1.0, 0.0),
        ]
    }
}

/// Full analysis for `(r, c, h)`: finds `gamma0`, then evaluates every
/// coefficient at the critical fixed point. `params.gamma()` is ignored.
pub fn lyapunov_quantity(params: &ModelParams) -> Result<NsReport> {
    let cg = critical_gamma(params.r(), params.c(), params.h())?;
    let critical = params.with_gamma(cg.gamma0)?;
    let fixed_point = positive_fixed_point(&critical).ok_or(Error::NoPositiveFixedPoint {
        gamma: cg.gamma0,
        threshold: critical.existence_threshold(),
    })?;
    let p = p_of(&critical, fixed_point.u);
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Precondition(format!("p(u) = {p} outside (1, 2)")));
    }
    let coeffs = TaylorCoeffs::at_critical(&critical, fixed_point);
    NsReport::from_coeffs(&critical, fixed_point, coeffs)
}
