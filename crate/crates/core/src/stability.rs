//! Fixed-point classification and the critical parameter `gamma0`.
//!
//! Classification uses the Jury-type conditions for `F(lambda) = lambda^2 + B
//! lambda + C`: when `F(1) > 0`,
//!
//! * both roots inside the unit circle iff `F(-1) > 0` and `C < 1`,
//! * a saddle iff `F(-1) < 0`,
//! * both outside iff `F(-1) > 0` and `C > 1`,
//! * a root on the unit circle iff `F(-1) = 0` or `C = 1`.
//!
//! For the positive fixed point the characteristic polynomial is
//! `lambda^2 - p(u) lambda + q(u)` with `F(1) > 0` and `F(-1) > 0` always, so
//! the class is decided by `q(u)` alone.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{boundary_fixed_points, jacobian, positive_fixed_point, ModelParams, PlanktonState};
use crate::roots::{cubic_real_roots, quadratic_roots};

/// Default band around `|lambda| = 1` treated as non-hyperbolic.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Back-substitution tolerance `|q(u) - 1|` for accepting a cubic root as `gamma0`.
pub const CRITICAL_FILTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StabilityClass {
    Attracting,
    Repelling,
    Saddle,
    NonHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub point: PlanktonState,
    pub classification: StabilityClass,
    pub eigenvalues: [Complex64; 2],
    /// `p(u)`, positive fixed point only.
    pub p_value: Option<f64>,
    /// `q(u)`, positive fixed point only.
    pub q_value: Option<f64>,
}

/// Classification from explicit eigenvalues.
pub fn classify_eigenvalues(eigenvalues: &[Complex64; 2], tol: f64) -> StabilityClass {
    let m1 = eigenvalues[0].norm();
    let m2 = eigenvalues[1].norm();
    if (m1 - 1.0).abs() <= tol || (m2 - 1.0).abs() <= tol {
        StabilityClass::NonHyperbolic
    } else {
        match (m1 < 1.0, m2 < 1.0) {
            (true, true) => StabilityClass::Attracting,
            (false, false) => StabilityClass::Repelling,
            _ => StabilityClass::Saddle,
        }
    }
}

/// Classify the roots of `lambda^2 + B lambda + C` relative to the unit circle.
///
/// Uses the sign conditions on `F(1)`, `F(-1)` and `C` when `F(1) > tol`;
/// otherwise computes the roots directly.
pub fn jury_classify(b: f64, c: f64, tol: f64) -> StabilityClass {
    let f_plus = 1.0 + b + c;
    let f_minus = 1.0 - b + c;
    if f_plus <= tol {
        return classify_eigenvalues(&quadratic_roots(b, c), tol);
    }
    if f_minus.abs() <= tol || (c - 1.0).abs() <= tol {
        StabilityClass::NonHyperbolic
    } else if f_minus < 0.0 {
        StabilityClass::Saddle
    } else if c < 1.0 {
        StabilityClass::Attracting
    } else {
        StabilityClass::Repelling
    }
}

/// `E0 = (0, 0)`: eigenvalues `2` and `1 - r`.
pub fn classify_e0(params: &ModelParams) -> FixedPointReport {
    classify_e0_with_tol(params, DEFAULT_TOL)
}

pub fn classify_e0_with_tol(params: &ModelParams, tol: f64) -> FixedPointReport {
    let r = params.r();
    let classification = if (r - 2.0).abs() <= tol {
        StabilityClass::NonHyperbolic
    } else if r < 2.0 {
        StabilityClass::Saddle
    } else {
        StabilityClass::Repelling
    };
    FixedPointReport {
        point: boundary_fixed_points().0,
        classification,
        eigenvalues: [Complex64::new(2.0, 0.0), Complex64::new(1.0 - r, 0.0)],
        p_value: None,
        q_value: None,
    }
}

/// `E1 = (1, 0)`: eigenvalues `0` and `gamma/(1+c) + 1 - r`.
pub fn classify_e1(params: &ModelParams) -> FixedPointReport {
    classify_e1_with_tol(params, DEFAULT_TOL)
}

pub fn classify_e1_with_tol(params: &ModelParams, tol: f64) -> FixedPointReport {
    let (r, c, g) = (params.r(), params.c(), params.gamma());
    let lower = (r - 2.0) * (1.0 + c);
    let upper = r * (1.0 + c);
    let band = tol * (1.0 + c);
    let classification = if (g - lower).abs() <= band || (g - upper).abs() <= band {
        StabilityClass::NonHyperbolic
    } else if lower < g && g < upper {
        StabilityClass::Attracting
    } else {
        StabilityClass::Saddle
    };
    FixedPointReport {
        point: boundary_fixed_points().1,
        classification,
        eigenvalues: [
            Complex64::new(0.0, 0.0),
            Complex64::new(g / (1.0 + c) + 1.0 - r, 0.0),
        ],
        p_value: None,
        q_value: None,
    }
}

/// `p(u)` (trace of the Jacobian at the positive fixed point).
pub fn p_of(params: &ModelParams, u: f64) -> f64 {
    let h = f64::from(params.h());
    let uh = u.powi(i32::from(params.h()));
    1.0 + (1.0 - u) * (2.0 - h + 2.0 * params.c() * uh) / (1.0 + params.c() * uh)
}

/// `q(u)` (determinant of the Jacobian at the positive fixed point).
pub fn q_of(params: &ModelParams, u: f64) -> f64 {
    let h = f64::from(params.h());
    let uh = u.powi(i32::from(params.h()));
    (1.0 - u) * (2.0 - h + params.r() * h + 2.0 * params.c() * uh) / (1.0 + params.c() * uh)
}

/// Positive fixed point classified by `q(u)`; `None` when `gamma <= r(1+c)`.
pub fn classify_positive(params: &ModelParams) -> Option<FixedPointReport> {
    classify_positive_with_tol(params, DEFAULT_TOL)
}

pub fn classify_positive_with_tol(params: &ModelParams, tol: f64) -> Option<FixedPointReport> {
    let point = positive_fixed_point(params)?;
    let p = p_of(params, point.u);
    let q = q_of(params, point.u);
    let classification = if (q - 1.0).abs() <= tol {
        StabilityClass::NonHyperbolic
    } else if q < 1.0 {
        StabilityClass::Attracting
    } else {
        StabilityClass::Repelling
    };
    Some(FixedPointReport {
        point,
        classification,
        eigenvalues: quadratic_roots(-p, q),
        p_value: Some(p),
        q_value: Some(q),
    })
}

/// Eigenvalues of the full Jacobian at `point`, for cross-checking reports.
pub fn eigenvalues_at(params: &ModelParams, point: PlanktonState) -> [Complex64; 2] {
    jacobian(params, point).eigenvalues()
}

/// Solution of `q(u(gamma)) = 1` together with the candidate roots it was
/// selected from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalGamma {
    pub gamma0: f64,
    /// Every real root of the defining polynomial (one root for `h = 1`).
    pub roots: Vec<f64>,
    /// Roots that passed `gamma > r(1+c)` and `|q(u) - 1| <= 1e-7`, ascending.
    pub accepted: Vec<f64>,
}

/// Critical `gamma0` at which the positive fixed point loses stability.
///
/// `h = 1` uses the closed form. `h = 2` solves
///
/// ```text
/// (2r-1)^2 g^3 - (rc(2r-1)(6r-5) + 4r^3) g^2
///   + 4r^2 c (r-1)(3rc - 2c + 2r) g - 4r^3 c^2 (r-1)^2 (c+1) = 0
/// ```
///
/// and keeps the smallest real root with `gamma > r(1+c)` that satisfies
/// `q(u) = 1` by back-substitution. The cubic has spurious roots, and for
/// `r <= 1/2` typically none survives.
pub fn critical_gamma(r: f64, c: f64, h: u8) -> Result<CriticalGamma> {
    let base = ModelParams::new(r, c, 0.0, h)?;
    let threshold = base.existence_threshold();
    let roots = match h {
        1 => {
            let disc = (1.0 - c).powi(2) + 2.0 * r + 6.0 * r * c + r * r;
            vec![(1.0 - c + r + 2.0 * r * c + disc.sqrt()) / 2.0]
        }
        _ => {
            let a3 = (2.0 * r - 1.0).powi(2);
            let a2 = -(r * c * (2.0 * r - 1.0) * (6.0 * r - 5.0) + 4.0 * r.powi(3));
            let a1 = 4.0 * r * r * c * (r - 1.0) * (3.0 * r * c - 2.0 * c + 2.0 * r);
            let a0 = -4.0 * r.powi(3) * c * c * (r - 1.0).powi(2) * (c + 1.0);
            cubic_real_roots(a3, a2, a1, a0)
        }
    };
    let mut accepted: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|&g| g > threshold)
        .filter(|&g| {
            base.with_gamma(g)
                .ok()
                .and_then(|p| positive_fixed_point(&p).map(|fp| (p, fp)))
                .is_some_and(|(p, fp)| {
                    fp.u > 0.0 && fp.u < 1.0 && (q_of(&p, fp.u) - 1.0).abs() <= CRITICAL_FILTER_TOL
                })
        })
        .collect();
    accepted.sort_by(f64::total_cmp);
    accepted.dedup();
    match accepted.first() {
        Some(&gamma0) => Ok(CriticalGamma {
            gamma0,
            roots,
            accepted,
        }),
        None => Err(Error::NoCriticalParameter { roots }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: f64, c: f64, g: f64, h: u8) -> ModelParams {
        ModelParams::new(r, c, g, h).unwrap()
    }

    #[test]
    fn jury_examples() {
        assert_eq!(jury_classify(0.0, 0.0, DEFAULT_TOL), StabilityClass::Attracting);
        assert_eq!(jury_classify(0.0, 1.0, DEFAULT_TOL), StabilityClass::NonHyperbolic);
        // F(1) < 0: falls back to roots 0.634 and 2.366
        assert_eq!(jury_classify(-3.0, 1.5, DEFAULT_TOL), StabilityClass::Saddle);
        assert_eq!(jury_classify(0.0, 4.0, DEFAULT_TOL), StabilityClass::Repelling);
        // lambda = -1 and 0.5
        assert_eq!(jury_classify(0.5, -0.5, DEFAULT_TOL), StabilityClass::NonHyperbolic);
        // lambda = 1 and 0.5 (F(1) = 0)
        assert_eq!(jury_classify(-1.5, 0.5, DEFAULT_TOL), StabilityClass::NonHyperbolic);
    }

    #[test]
    fn e0_cases() {
        assert_eq!(classify_e0(&p(0.5, 1.0, 1.0, 1)).classification, StabilityClass::Saddle);
        assert_eq!(classify_e0(&p(2.0, 1.0, 1.0, 1)).classification, StabilityClass::NonHyperbolic);
        assert_eq!(classify_e0(&p(3.0, 1.0, 1.0, 1)).classification, StabilityClass::Repelling);
    }

    #[test]
    fn e1_cases() {
        assert_eq!(classify_e1(&p(0.5, 1.0, 1.0, 1)).classification, StabilityClass::NonHyperbolic);
        assert_eq!(classify_e1(&p(0.5, 1.0, -3.0, 1)).classification, StabilityClass::NonHyperbolic);
        assert_eq!(classify_e1(&p(0.5, 1.0, 0.0, 1)).classification, StabilityClass::Attracting);
        assert_eq!(classify_e1(&p(0.5, 1.0, 2.0, 1)).classification, StabilityClass::Saddle);
        assert_eq!(classify_e1(&p(0.5, 1.0, -4.0, 1)).classification, StabilityClass::Saddle);
    }

    #[test]
    fn boundary_classes_match_eigenvalues() {
        for &(r, c, g) in &[(0.5, 1.0, 0.0), (0.5, 1.0, 2.0), (3.0, 0.5, 1.0), (1.2, 2.0, -1.0), (2.5, 1.0, -1.2)] {
            for h in [1, 2] {
                let params = p(r, c, g, h);
                for rep in [classify_e0(&params), classify_e1(&params)] {
                    let direct = classify_eigenvalues(&eigenvalues_at(&params, rep.point), DEFAULT_TOL);
                    assert_eq!(rep.classification, direct, "{params:?} {rep:?}");
                }
            }
        }
    }

    #[test]
    fn positive_point_figure_values() {
        let rep = classify_positive(&p(0.5, 1.0, 1.775, 1)).unwrap();
        // The caption prints q = 0.9996, which is q at gamma = 1.7798, not at
        // 1.775: there (1 - u)(1 + r + 2cu)/(1 + cu) = 0.997376 with u = 20/51.
        let u = 20.0 / 51.0;
        assert!((rep.q_value.unwrap() - (1.0 - u) * (1.5 + 2.0 * u) / (1.0 + u)).abs() < 1e-14);
        assert!((rep.q_value.unwrap() - 0.9996).abs() < 3e-3);
        assert!((rep.point.u - 0.3921).abs() < 1e-4);
        assert_eq!(rep.classification, StabilityClass::Attracting);

        let rep = classify_positive(&p(0.5, 1.0, 1.79, 1)).unwrap();
        assert!((rep.q_value.unwrap() - 1.00414).abs() < 1e-5);
        assert!((rep.point.u - 0.3875).abs() < 1e-4);
        assert_eq!(rep.classification, StabilityClass::Repelling);

        let rep = classify_positive(&p(0.8, 2.0, 6.2, 2)).unwrap();
        assert!((rep.point.u - 0.4170).abs() < 1e-4);
        assert!((rep.q_value.unwrap() - 0.9929).abs() < 1e-4);
        assert_eq!(rep.classification, StabilityClass::Attracting);

        let rep = classify_positive(&p(0.8, 2.0, 6.4, 2)).unwrap();
        assert!((rep.point.u - 0.4082).abs() < 1e-4);
        assert!((rep.q_value.unwrap() - 1.0059).abs() < 1e-4);

        assert!(classify_positive(&p(0.5, 1.0, 1.0, 1)).is_none());
    }

    #[test]
    fn positive_eigenvalues_match_full_jacobian() {
        let params = p(0.8, 2.0, 7.0, 2);
        let rep = classify_positive(&params).unwrap();
        let direct = eigenvalues_at(&params, rep.point);
        for (a, b) in rep.eigenvalues.iter().zip(direct.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn critical_gamma_reference_values() {
        let cg = critical_gamma(0.5, 1.0, 1).unwrap();
        assert!((cg.gamma0 - (3.0 + 17f64.sqrt()) / 4.0).abs() < 1e-12);
        let cg = critical_gamma(0.8, 2.0, 2).unwrap();
        assert!((cg.gamma0 - 6.3).abs() < 0.01, "{cg:?}");
        assert_eq!(cg.accepted.len(), 1);
    }

    #[test]
    fn critical_gamma_h2_special_cases() {
        // r = 1: the cubic reduces to g^2 (g - (c + 4)) = 0
        let cg = critical_gamma(1.0, 1.0, 2).unwrap();
        assert!((cg.gamma0 - 5.0).abs() < 1e-9);
        // r = 1/2: q(u) < 1 everywhere, no crossing
        match critical_gamma(0.5, 1.0, 2) {
            Err(Error::NoCriticalParameter { .. }) => {}
            other => panic!("expected no critical parameter, got {other:?}"),
        }
        // spurious root only
        assert!(critical_gamma(0.3, 1.0, 2).is_err());
    }
}
