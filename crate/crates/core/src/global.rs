//! Invariant regions and convergence to `E1 = (1, 0)` when no positive fixed
//! point exists.
//!
//! Under one of the nonnegativity conditions (a)-(c) and `gamma <= r(1+c)`:
//!
//! | set | h | condition        | upper bound on `v`           |
//! |-----|---|------------------|------------------------------|
//! | M1  | 1 | `c <= 1/2`       | `(2-u)(1+cu)`                |
//! | M2  | 1 | `c >= 1`         | `2`                          |
//! | M3  | 1 | `1/2 < c < 1`    | `min(2, (2-u)(1+cu))`        |
//! | N1  | 2 | `c <= 27/4`      | `psi(u) = (2-u)(1+cu^2)/u`   |
//! | N2  | 2 | `c > 27/4`       | `psi_min`                    |
//!
//! all with `0 <= u <= 1`, `v >= 0`. The axes `{v = 0, 0 <= u <= 2}` and
//! (for `r <= 1`) `{u = 0, v >= 0}` are invariant as well.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{nonnegativity_condition, step, ModelParams, PlanktonState};
use crate::roots::bisect;

pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SetKind {
    M1,
    M2,
    M3,
    N1,
    N2,
    AxisU,
    AxisV,
}

impl SetKind {
    pub const ALL: [SetKind; 7] = [
        SetKind::M1,
        SetKind::M2,
        SetKind::M3,
        SetKind::N1,
        SetKind::N2,
        SetKind::AxisU,
        SetKind::AxisV,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SetKind::M1 => "M1",
            SetKind::M2 => "M2",
            SetKind::M3 => "M3",
            SetKind::N1 => "N1",
            SetKind::N2 => "N2",
            SetKind::AxisU => "U",
            SetKind::AxisV => "V",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || format!("{k:?}").eq_ignore_ascii_case(s))
    }

    /// Whether `(c, h)` (and `r` for the `u = 0` axis) is in the range where
    /// the set is claimed invariant.
    pub fn admissible(&self, params: &ModelParams) -> bool {
        let (c, h) = (params.c(), params.h());
        match self {
            SetKind::M1 => h == 1 && c <= 0.5,
            SetKind::M2 => h == 1 && c >= 1.0,
            SetKind::M3 => h == 1 && c > 0.5 && c < 1.0,
            SetKind::N1 => h == 2 && c <= 6.75,
            SetKind::N2 => h == 2 && c > 6.75,
            SetKind::AxisU => true,
            SetKind::AxisV => params.r() <= 1.0,
        }
    }

    /// The admissible two-dimensional set for these parameters.
    pub fn for_params(params: &ModelParams) -> SetKind {
        let c = params.c();
        match params.h() {
            1 if c <= 0.5 => SetKind::M1,
            1 if c >= 1.0 => SetKind::M2,
            1 => SetKind::M3,
            _ if c <= 6.75 => SetKind::N1,
            _ => SetKind::N2,
        }
    }
}

/// `psi(x) = (2 - x)(1 + c x^2)/x`, `+inf` at `x = 0`.
pub fn psi(c: f64, x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else {
        (2.0 - x) * (1.0 + c * x * x) / x
    }
}

/// Minimiser of `psi` on `(0, 2/3)` for `c > 27/4`, i.e. the smaller root of
/// `c x^3 - c x^2 + 1`, and the minimum value. Returns `(x_min, psi_min)`.
pub fn psi_min(c: f64) -> Result<(f64, f64)> {
    if !(c > 6.75) {
        return Err(Error::Precondition(format!(
            "psi has an interior minimum only for c > 27/4, got c = {c}"
        )));
    }
    let nu = |x: f64| c * x * x * x - c * x * x + 1.0;
    let x = bisect(nu, 0.0, 2.0 / 3.0, 1e-14)
        .ok_or_else(|| Error::Precondition(format!("no sign change of nu on (0, 2/3) for c = {c}")))?;
    Ok((x, psi(c, x)))
}

/// The hypotheses shared by the invariance and convergence results:
/// one of conditions (a)-(c) and `gamma <= r(1+c)`.
pub fn global_hypotheses(params: &ModelParams) -> bool {
    nonnegativity_condition(params) && params.gamma() <= params.existence_threshold()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantSet {
    kind: SetKind,
    params: ModelParams,
    psi_min: Option<f64>,
}

impl InvariantSet {
    /// Build the set, requiring `kind` to be admissible for `params`.
    pub fn new(kind: SetKind, params: ModelParams) -> Result<Self> {
        if !kind.admissible(&params) {
            return Err(Error::Precondition(format!(
                "set {} is not defined for h = {}, c = {}, r = {}",
                kind.name(),
                params.h(),
                params.c(),
                params.r()
            )));
        }
        Ok(Self::unchecked(kind, params))
    }

    /// Build the region described by `kind` without the admissibility check,
    /// e.g. to exhibit escaping points outside the valid parameter range.
    /// For N2 outside `c > 27/4` the bound falls back to `psi(2/3)`.
    pub fn unchecked(kind: SetKind, params: ModelParams) -> Self {
        let psi_min = match kind {
            SetKind::N2 => Some(psi_min(params.c()).map(|(_, v)| v).unwrap_or_else(|_| psi(params.c(), 2.0 / 3.0))),
            _ => None,
        };
        Self { kind, params, psi_min }
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn psi_min(&self) -> Option<f64> {
        self.psi_min
    }

    /// Upper bound on `v` at abscissa `u` (two-dimensional sets only).
    pub fn v_upper(&self, u: f64) -> f64 {
        let c = self.params.c();
        let f = (2.0 - u) * (1.0 + c * u);
        match self.kind {
            SetKind::M1 => f,
            SetKind::M2 => 2.0,
            SetKind::M3 => f.min(2.0),
            SetKind::N1 => psi(c, u),
            SetKind::N2 => self.psi_min.unwrap_or(f64::NAN),
            SetKind::AxisU => 0.0,
            SetKind::AxisV => f64::INFINITY,
        }
    }

    pub fn contains(&self, s: PlanktonState) -> bool {
        match self.kind {
            SetKind::AxisU => s.v == 0.0 && (0.0..=2.0).contains(&s.u),
            SetKind::AxisV => s.u == 0.0 && s.v >= 0.0,
            _ => (0.0..=1.0).contains(&s.u) && s.v >= 0.0 && s.v <= self.v_upper(s.u),
        }
    }

    /// Whether the image of `s` is back in the set.
    pub fn verify_step_stays(&self, s: PlanktonState) -> bool {
        self.contains(step(&self.params, s))
    }

    /// Uniform sample in the set: `u` uniform on `[0, 1]` then `v` uniform
    /// under the bound. N1's unbounded bound near `u = 0` is capped at `v_cap`.
    pub fn sample<R: Rng>(&self, rng: &mut R, v_cap: f64) -> PlanktonState {
        match self.kind {
            SetKind::AxisU => PlanktonState::new(2.0 * rng.random::<f64>(), 0.0),
            SetKind::AxisV => PlanktonState::new(0.0, v_cap * rng.random::<f64>()),
            _ => {
                let u = rng.random::<f64>();
                let top = self.v_upper(u).min(v_cap);
                PlanktonState::new(u, top * rng.random::<f64>())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceSample {
    pub kind: SetKind,
    pub samples: usize,
    /// Points whose image left the set.
    pub escapes: Vec<PlanktonState>,
    /// Points where `v` increased in one step.
    pub v_increases: usize,
}

/// Map `samples` seeded random points of `set` one step forward and collect
/// those that leave it. Deterministic in `seed` regardless of thread count.
pub fn sample_invariance(set: &InvariantSet, samples: usize, seed: u64) -> InvarianceSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<PlanktonState> = (0..samples).map(|_| set.sample(&mut rng, 1e3)).collect();
    let results: Vec<(bool, bool)> = points
        .par_iter()
        .map(|&s| {
            let next = step(set.params(), s);
            (set.contains(next), next.v > s.v)
        })
        .collect();
    let escapes = points
        .iter()
        .zip(&results)
        .filter(|(_, (stays, _))| !stays)
        .map(|(s, _)| *s)
        .collect();
    InvarianceSample {
        kind: set.kind(),
        samples,
        escapes,
        v_increases: results.iter().filter(|(_, up)| *up).count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Convergence {
    pub converged: bool,
    /// Iterations taken to reach the target, or the budget spent.
    pub iterations: usize,
    pub final_state: PlanktonState,
}

/// Iterate from `s0` until within `tol` (sup norm) of `target`.
pub fn converges_to(
    params: &ModelParams,
    s0: PlanktonState,
    target: PlanktonState,
    max_iter: usize,
    tol: f64,
) -> Convergence {
    let mut s = s0;
    for n in 0..=max_iter {
        if s.dist_inf(&target) < tol {
            return Convergence {
                converged: true,
                iterations: n,
                final_state: s,
            };
        }
        if n == max_iter || !s.is_finite() {
            break;
        }
        s = step(params, s);
    }
    Convergence {
        converged: false,
        iterations: max_iter,
        final_state: s,
    }
}

pub fn converges_to_e1(params: &ModelParams, s0: PlanktonState, max_iter: usize, tol: f64) -> Convergence {
    converges_to(params, s0, PlanktonState::new(1.0, 0.0), max_iter, tol)
}
