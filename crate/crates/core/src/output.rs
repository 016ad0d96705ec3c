//! CSV and JSON encodings used by the command-line front end.
//!
//! CSV tables carry a header row, a fixed column order, and floats written
//! with 17 significant digits in scientific notation.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::control::{ControlGains, ControlTriangle};
use crate::error::Result;
use crate::model::{ModelParams, PlanktonState};
use crate::ns_bifurcation::{CurveDirection, NsReport};
use crate::orbit::{BifurcationColumn, MlePoint, OrbitRecord, RegionPoint};
use crate::stability::{FixedPointReport, StabilityClass};

/// 17 significant digits; NaN for missing values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

pub fn write_orbit_csv<W: Write>(out: W, orbit: &OrbitRecord) -> Result<()> {
    let mut w = writer(out, &["iteration", "u", "v"])?;
    for (k, s) in orbit.states.iter().enumerate() {
        w.write_record([k.to_string(), fmt_f64(s.u), fmt_f64(s.v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bifurcation_csv<W: Write>(out: W, columns: &[BifurcationColumn]) -> Result<()> {
    let mut w = writer(out, &["gamma", "sample_index", "u", "v"])?;
    for col in columns {
        let g = fmt_f64(col.gamma);
        for (i, (u, v)) in col.u.iter().zip(&col.v).enumerate() {
            w.write_record([g.clone(), i.to_string(), fmt_f64(*u), fmt_f64(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_mle_csv<W: Write>(out: W, curve: &[MlePoint]) -> Result<()> {
    let mut w = writer(out, &["gamma", "mle"])?;
    for pt in curve {
        w.write_record([fmt_f64(pt.gamma), fmt_f64(pt.mle.value)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_region_csv<W: Write>(out: W, region: &[RegionPoint]) -> Result<()> {
    let mut w = writer(out, &["r", "c", "gamma_low", "gamma_high"])?;
    for pt in region {
        w.write_record([
            fmt_f64(pt.r),
            fmt_f64(pt.c),
            fmt_f64(pt.gamma_low),
            fmt_f64(pt.gamma_high.unwrap_or(f64::NAN)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Three `vertex` rows (`s1, s2`) followed by three `line` rows with the
/// coefficients of `a s1 + b s2 + c = 0`.
pub fn write_triangle_csv<W: Write>(out: W, tri: &ControlTriangle) -> Result<()> {
    let mut w = writer(out, &["kind", "id", "s1", "s2", "a", "b", "c"])?;
    for (id, v) in ["l1^l2", "l2^l3", "l1^l3"].iter().zip(&tri.vertices) {
        w.write_record(["vertex", id, &fmt_f64(v.s1), &fmt_f64(v.s2), "", "", ""])?;
    }
    for (id, l) in [("l1", tri.l1), ("l2", tri.l2), ("l3", tri.l3)] {
        w.write_record(["line", id, "", "", &fmt_f64(l.a), &fmt_f64(l.b), &fmt_f64(l.c)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_control_scan_csv<W: Write>(out: W, scan: &[(ControlGains, bool)]) -> Result<()> {
    let mut w = writer(out, &["s1", "s2", "stable"])?;
    for (g, stable) in scan {
        w.write_record([fmt_f64(g.s1), fmt_f64(g.s2), u8::from(*stable).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One grid point of an invariant-set membership scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipRow {
    pub point: PlanktonState,
    pub member: bool,
    pub image_member: bool,
    /// `(converged, iterations)` when convergence to `E1` was checked.
    pub convergence: Option<(bool, usize)>,
}

pub fn write_membership_csv<W: Write>(out: W, rows: &[MembershipRow], with_convergence: bool) -> Result<()> {
    let mut header = vec!["u", "v", "member", "image_member"];
    if with_convergence {
        header.extend(["converged", "iterations"]);
    }
    let mut w = writer(out, &header)?;
    for row in rows {
        let mut rec = vec![
            fmt_f64(row.point.u),
            fmt_f64(row.point.v),
            u8::from(row.member).to_string(),
            u8::from(row.image_member).to_string(),
        ];
        if with_convergence {
            match row.convergence {
                Some((ok, n)) => rec.extend([u8::from(ok).to_string(), n.to_string()]),
                None => rec.extend([String::new(), String::new()]),
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointJson {
    pub u: f64,
    pub v: f64,
    pub classification: StabilityClass,
    pub eigenvalues: [ComplexJson; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

impl From<&FixedPointReport> for FixedPointJson {
    fn from(rep: &FixedPointReport) -> Self {
        Self {
            u: rep.point.u,
            v: rep.point.v,
            classification: rep.classification,
            eigenvalues: rep.eigenvalues.map(ComplexJson::from),
            p: rep.p_value,
            q: rep.q_value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointsJson {
    pub params: ModelParams,
    #[serde(rename = "E0")]
    pub e0: FixedPointJson,
    #[serde(rename = "E1")]
    pub e1: FixedPointJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<FixedPointJson>,
}

/// Flat JSON form of [`NsReport`].
#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct NsReportJson {
    pub r: f64,
    pub c: f64,
    pub h: u8,
    pub gamma0: f64,
    pub u: f64,
    pub v: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub alpha: f64,
    pub m: f64,
    pub n: f64,
    pub L20_re: f64,
    pub L20_im: f64,
    pub L11_re: f64,
    pub L11_im: f64,
    pub L02_re: f64,
    pub L02_im: f64,
    pub L21_re: f64,
    pub L21_im: f64,
    pub L: f64,
    pub direction: CurveDirection,
    pub transversality: f64,
    pub non_degenerate: bool,
}

impl NsReportJson {
    pub fn new(params: &ModelParams, rep: &NsReport) -> Self {
        // lambda1 = (1 + a10 - i alpha)/2; lambda2 is its conjugate
        let lam = rep.eigenvalues[0];
        Self {
            r: params.r(),
            c: params.c(),
            h: params.h(),
            gamma0: rep.gamma0,
            u: rep.fixed_point.u,
            v: rep.fixed_point.v,
            lambda_re: lam.re,
            lambda_im: lam.im,
            alpha: rep.alpha,
            m: rep.m,
            n: rep.n,
            L20_re: rep.l20.re,
            L20_im: rep.l20.im,
            L11_re: rep.l11.re,
            L11_im: rep.l11.im,
            L02_re: rep.l02.re,
            L02_im: rep.l02.im,
            L21_re: rep.l21.re,
            L21_im: rep.l21.im,
            L: rep.l,
            direction: rep.direction,
            transversality: rep.transversality,
            non_degenerate: rep.non_degenerate(),
        }
    }
}
