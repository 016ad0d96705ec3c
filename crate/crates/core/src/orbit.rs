//! Trajectories, the maximum Lyapunov exponent, and parameter sweeps.
//!
//! Sweeps evaluate grid points independently on the rayon pool and collect
//! them in grid order, so output does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{jacobian, step, ModelParams, PlanktonState};
use crate::stability::critical_gamma;

/// Iterates with `|u|` or `|v|` above this (or non-finite) count as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

pub const DEFAULT_TRANSIENT: usize = 2000;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_GRID_STEPS: usize = 1000;

fn escaped(s: &PlanktonState) -> bool {
    !(s.u.abs() <= DIVERGENCE_THRESHOLD && s.v.abs() <= DIVERGENCE_THRESHOLD)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub params: ModelParams,
    pub initial: PlanktonState,
    /// `states[0] == initial`, `states[k + 1] == step(states[k])`.
    pub states: Vec<PlanktonState>,
    /// The orbit was cut short at the first divergent iterate (which is
    /// included as the last state).
    pub diverged: bool,
}

impl OrbitRecord {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> PlanktonState {
        *self.states.last().expect("orbit holds at least the initial state")
    }

    /// Re-run the map over the stored states.
    pub fn verify(&self) -> bool {
        self.states.first() == Some(&self.initial)
            && self
                .states
                .windows(2)
                .all(|w| step(&self.params, w[0]) == w[1])
    }
}

/// `n` iterates from `s0` (`n + 1` states), truncated on divergence.
pub fn simulate(params: &ModelParams, s0: PlanktonState, n: usize) -> OrbitRecord {
    let mut states = Vec::with_capacity(n + 1);
    states.push(s0);
    let mut diverged = escaped(&s0);
    let mut s = s0;
    if !diverged {
        for _ in 0..n {
            s = step(params, s);
            states.push(s);
            if escaped(&s) {
                diverged = true;
                break;
            }
        }
    }
    OrbitRecord {
        params: *params,
        initial: s0,
        states,
        diverged,
    }
}

/// Iterate `n` times without recording. Returns `None` on divergence.
pub fn advance(params: &ModelParams, s0: PlanktonState, n: usize) -> Option<PlanktonState> {
    let mut s = s0;
    for _ in 0..n {
        s = step(params, s);
        if escaped(&s) {
            return None;
        }
    }
    Some(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MleOptions {
    /// Iterations averaged over, after the transient.
    pub n: usize,
    pub transient: usize,
    /// Renormalize the tangent vector every this many steps (>= 1).
    pub renorm_every: usize,
    /// Picks the direction of the initial tangent vector.
    pub seed: u64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            n: 20_000,
            transient: DEFAULT_TRANSIENT,
            renorm_every: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    /// Mean log growth rate over the steps actually taken.
    pub value: f64,
    pub steps: usize,
    pub diverged: bool,
}

/// Maximum Lyapunov exponent by tangent-vector iteration with default options.
pub fn max_lyapunov(params: &ModelParams, s0: PlanktonState, n: usize, transient: usize) -> LyapunovEstimate {
    max_lyapunov_with(
        params,
        s0,
        &MleOptions {
            n,
            transient,
            ..MleOptions::default()
        },
    )
}

/// `(1/n) sum log |J(x_k) w_k|`, the tangent vector `w` being renormalized
/// every `renorm_every` steps.
pub fn max_lyapunov_with(params: &ModelParams, s0: PlanktonState, opts: &MleOptions) -> LyapunovEstimate {
    let Some(mut s) = advance(params, s0, opts.transient) else {
        return LyapunovEstimate {
            value: f64::NAN,
            steps: 0,
            diverged: true,
        };
    };
    let angle = ChaCha8Rng::seed_from_u64(opts.seed).random::<f64>() * std::f64::consts::TAU;
    let (mut wx, mut wy) = (angle.cos(), angle.sin());
    let every = opts.renorm_every.max(1);
    let mut log_sum = 0.0;
    let mut steps = 0;
    let mut diverged = false;
    for k in 1..=opts.n {
        (wx, wy) = jacobian(params, s).apply(wx, wy);
        s = step(params, s);
        steps = k;
        if k % every == 0 || k == opts.n {
            let norm = wx.hypot(wy);
            if norm == 0.0 {
                // tangent vector annihilated (superstable orbit)
                return LyapunovEstimate {
                    value: f64::NEG_INFINITY,
                    steps,
                    diverged: false,
                };
            }
            log_sum += norm.ln();
            wx /= norm;
            wy /= norm;
        }
        if escaped(&s) {
            diverged = true;
            break;
        }
    }
    if diverged && steps % every != 0 {
        log_sum += wx.hypot(wy).ln();
    }
    LyapunovEstimate {
        value: if steps == 0 { f64::NAN } else { log_sum / steps as f64 },
        steps,
        diverged,
    }
}

/// A closed interval split into `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let grid = Self { lo, hi, steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Precondition(format!(
                "empty range [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.steps < 2 {
            return Err(Error::Precondition(format!("grid needs >= 2 points, got {}", self.steps)));
        }
        Ok(())
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.at(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub gamma: Grid,
    /// Iterations discarded before recording.
    pub transient: usize,
    /// Post-transient iterates recorded per grid point.
    pub samples: usize,
    pub initial: PlanktonState,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.gamma.validate()?;
        if self.samples < 1 {
            return Err(Error::Precondition("samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// Post-transient samples at one `gamma`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationColumn {
    pub gamma: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub diverged: bool,
}

impl BifurcationColumn {
    /// `max - min` of the recorded `u` values (NaN if divergent).
    pub fn u_spread(&self) -> f64 {
        spread(&self.u)
    }

    pub fn v_spread(&self) -> f64 {
        spread(&self.v)
    }
}

fn spread(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// One column of the diagram at a given `gamma`.
pub fn bifurcation_column(base: &ModelParams, gamma: f64, sweep: &SweepConfig) -> Result<BifurcationColumn> {
    let params = base.with_gamma(gamma)?;
    let nan_column = || BifurcationColumn {
        gamma,
        u: vec![f64::NAN; sweep.samples],
        v: vec![f64::NAN; sweep.samples],
        diverged: true,
    };
    let Some(mut s) = advance(&params, sweep.initial, sweep.transient) else {
        return Ok(nan_column());
    };
    let mut u = Vec::with_capacity(sweep.samples);
    let mut v = Vec::with_capacity(sweep.samples);
    for _ in 0..sweep.samples {
        s = step(&params, s);
        if escaped(&s) {
            return Ok(nan_column());
        }
        u.push(s.u);
        v.push(s.v);
    }
    Ok(BifurcationColumn {
        gamma,
        u,
        v,
        diverged: false,
    })
}

/// For each `gamma` on the grid: discard `transient` iterates from the
/// initial state, then record `samples` successive states.
pub fn bifurcation_diagram(base: &ModelParams, sweep: &SweepConfig) -> Result<Vec<BifurcationColumn>> {
    sweep.validate()?;
    (0..sweep.gamma.steps)
        .into_par_iter()
        .map(|i| bifurcation_column(base, sweep.gamma.at(i), sweep))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MlePoint {
    pub gamma: f64,
    pub mle: LyapunovEstimate,
}

/// MLE along a `gamma` grid, each point started from `initial`.
pub fn mle_curve(base: &ModelParams, gamma: &Grid, initial: PlanktonState, opts: &MleOptions) -> Result<Vec<MlePoint>> {
    gamma.validate()?;
    (0..gamma.steps)
        .into_par_iter()
        .map(|i| {
            let g = gamma.at(i);
            let params = base.with_gamma(g)?;
            Ok(MlePoint {
                gamma: g,
                mle: max_lyapunov_with(&params, initial, opts),
            })
        })
        .collect()
}

/// One point of the `(r, c)` stability map: the positive fixed point is
/// attracting for `gamma_low < gamma < gamma_high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub r: f64,
    pub c: f64,
    pub gamma_low: f64,
    /// `None` where `gamma0` could not be determined.
    pub gamma_high: Option<f64>,
}

/// Attracting band `r(1+c) < gamma < gamma0(r, c)` over an `(r, c)` grid,
/// row-major in `c`.
pub fn stability_region(r_grid: &Grid, c_grid: &Grid, h: u8) -> Result<Vec<RegionPoint>> {
    r_grid.validate()?;
    c_grid.validate()?;
    if r_grid.lo <= 0.0 || c_grid.lo <= 0.0 {
        return Err(Error::Precondition("r and c ranges must be positive".into()));
    }
    ModelParams::new(1.0, 1.0, 0.0, h)?;
    Ok((0..r_grid.steps * c_grid.steps)
        .into_par_iter()
        .map(|k| {
            let r = r_grid.at(k % r_grid.steps);
            let c = c_grid.at(k / r_grid.steps);
            RegionPoint {
                r,
                c,
                gamma_low: r * (1.0 + c),
                gamma_high: critical_gamma(r, c, h).ok().map(|cg| cg.gamma0),
            }
        })
        .collect())
}
