//! Command-line front end.
//!
//! Every analysis is a subcommand. Single-point analyses print JSON; sweeps
//! write CSV. Any subcommand accepts `--config FILE`, a `key = value` file
//! whose keys mirror the long flags; flags given on the command line win.
//!
//! Exit codes: 0 success, 1 invalid input, 2 runtime or I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::control::{control_triangle, simulate_controlled, stability_scan, ControlGains};
use crate::error::Error;
use crate::global::{
    converges_to_e1, global_hypotheses, sample_invariance, InvariantSet, SetKind, DEFAULT_CONVERGENCE_TOL,
    DEFAULT_MAX_ITER,
};
use crate::model::{positive_fixed_point, ModelParams, PlanktonState};
use crate::ns_bifurcation::lyapunov_quantity;
use crate::orbit::{
    bifurcation_diagram, mle_curve, simulate, stability_region, Grid, MleOptions, OrbitRecord, SweepConfig,
    DEFAULT_GRID_STEPS, DEFAULT_SAMPLES, DEFAULT_TRANSIENT,
};
use crate::output::{self, FixedPointJson, FixedPointsJson, MembershipRow, NsReportJson};
use crate::stability::{classify_e0_with_tol, classify_e1_with_tol, classify_positive_with_tol, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "plankton", version, about = "Discrete phytoplankton-zooplankton map analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify E0, E1 and the positive fixed point (JSON)
    #[command(args_override_self = true)]
    FixedPoints(FixedPointsArgs),
    /// Neimark-Sacker coefficients at the critical gamma0 (JSON)
    #[command(args_override_self = true)]
    Ns(NsArgs),
    /// Iterate one trajectory (CSV: iteration,u,v)
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Bifurcation diagram over gamma (CSV: gamma,sample_index,u,v)
    #[command(args_override_self = true)]
    Bifdiag(BifdiagArgs),
    /// Maximum Lyapunov exponent over gamma (CSV: gamma,mle)
    #[command(args_override_self = true)]
    Mle(MleArgs),
    /// Attracting band r(1+c) < gamma < gamma0 over (r, c) (CSV)
    #[command(args_override_self = true)]
    Region(RegionArgs),
    /// Feedback-gain stability triangle (CSV) and optional gain scan
    #[command(args_override_self = true)]
    Control(ControlArgs),
    /// Invariant-set membership grid and convergence to E1 (CSV)
    #[command(args_override_self = true)]
    Invariant(InvariantArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed for randomized choices
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
    /// `key = value` file mirroring the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointParams {
    #[arg(long, allow_hyphen_values = true)]
    pub r: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Response order: 1 (Holling II) or 2 (Holling III)
    #[arg(long, default_value_t = 1)]
    pub h: u8,
}

impl PointParams {
    fn params(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.r, self.c, self.gamma, self.h)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    #[arg(long, allow_hyphen_values = true)]
    pub r: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub h: u8,
}

impl FamilyParams {
    fn params(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.r, self.c, 0.0, self.h)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FixedPointsArgs {
    #[command(flatten)]
    pub model: PointParams,
    /// Band around |lambda| = 1 treated as non-hyperbolic
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NsArgs {
    #[command(flatten)]
    pub model: FamilyParams,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: PointParams,
    #[arg(long, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: f64,
    /// Number of iterations
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Feedback gain on u (enables the controlled map)
    #[arg(long, allow_hyphen_values = true)]
    pub s1: Option<f64>,
    /// Feedback gain on v (enables the controlled map)
    #[arg(long, allow_hyphen_values = true)]
    pub s2: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GammaSweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    pub transient: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: f64,
}

impl GammaSweepArgs {
    fn grid(&self) -> Result<Grid, Error> {
        Grid::new(self.gamma_min, self.gamma_max, self.steps)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BifdiagArgs {
    #[command(flatten)]
    pub model: FamilyParams,
    #[command(flatten)]
    pub sweep: GammaSweepArgs,
    /// Post-transient samples per gamma
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MleArgs {
    #[command(flatten)]
    pub model: FamilyParams,
    #[command(flatten)]
    pub sweep: GammaSweepArgs,
    /// Iterations averaged per gamma
    #[arg(long, default_value_t = 20_000)]
    pub n: usize,
    /// Renormalize the tangent vector every this many steps
    #[arg(long, default_value_t = 1)]
    pub renorm_every: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub r_min: f64,
    #[arg(long)]
    pub r_max: f64,
    #[arg(long, default_value_t = 50)]
    pub r_steps: usize,
    #[arg(long)]
    pub c_min: f64,
    #[arg(long)]
    pub c_max: f64,
    #[arg(long, default_value_t = 50)]
    pub c_steps: usize,
    #[arg(long, default_value_t = 1)]
    pub h: u8,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ControlArgs {
    #[command(flatten)]
    pub model: PointParams,
    /// Points per axis of an (s1, s2) stability scan; 0 disables it
    #[arg(long, default_value_t = 0)]
    pub scan_points: usize,
    /// File for the scan CSV (s1,s2,stable)
    #[arg(long)]
    pub scan_out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub s1_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s1_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s2_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s2_max: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub model: PointParams,
    /// M1, M2, M3, N1, N2, U or V (default: the set matching c and h)
    #[arg(long)]
    pub kind: Option<String>,
    /// Grid points per axis
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    /// Upper end of the v axis (default: the set's largest bound, capped at 10)
    #[arg(long)]
    pub v_max: Option<f64>,
    /// Also iterate members and report convergence to E1
    #[arg(long)]
    pub converge: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_CONVERGENCE_TOL)]
    pub tol: f64,
    /// Random one-step invariance checks reported on stderr
    #[arg(long, default_value_t = 0)]
    pub check_samples: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Config(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_VALIDATION,
            CliError::Lib(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Lib(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{}", e.render().to_string().trim_start_matches("error: ").trim_end()),
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

/// Parse a recipe file: one `key = value` per line, `#` starts a comment.
/// Keys may use `_` or `-`.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("line {}: bad key `{key}`", lineno + 1));
        }
        entries.push((key, value));
    }
    Ok(entries)
}

/// Flags for config entries. `true`/`false` values toggle switches.
fn config_to_args(entries: &[(String, String)]) -> Vec<OsString> {
    let mut args = Vec::new();
    for (key, value) in entries {
        match value.as_str() {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{key}").into());
                args.push(value.into());
            }
        }
    }
    args
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(path));
        }
    }
    None
}

/// Splice config-file flags in right after the subcommand so that explicit
/// flags, which come later, override them.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let entries = parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if entries.iter().any(|(k, _)| k == "config") {
        return Err(CliError::Config("nested `config` key".into()));
    }
    let insert_at = 2.min(args.len());
    let mut out = args[..insert_at].to_vec();
    out.extend(config_to_args(&entries));
    out.extend_from_slice(&args[insert_at..]);
    Ok(out)
}

/// Parse (with config expansion) without running.
pub fn parse(args: Vec<OsString>) -> Result<Cli, CliError> {
    let args = expand_args(args)?;
    Cli::try_parse_from(args).map_err(CliError::Usage)
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(create(p)?)),
        None => Box::new(stdout),
    })
}

fn create(path: &Path) -> io::Result<File> {
    File::create(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(CliError::Config("--threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Lib(Error::Io(io::Error::other(e))))?;
            Ok(pool.install(job))
        }
    }
}

fn write_json<T: serde::Serialize>(value: &T, mut out: impl Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn require_positive(name: &'static str, value: usize) -> Result<(), CliError> {
    if value == 0 {
        return Err(CliError::Lib(Error::InvalidParameter {
            name,
            value: 0.0,
            reason: "must be >= 1",
        }));
    }
    Ok(())
}

/// Execute a parsed command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::FixedPoints(a) => {
            let params = a.model.params()?;
            let report = FixedPointsJson {
                params,
                e0: FixedPointJson::from(&classify_e0_with_tol(&params, a.tol)),
                e1: FixedPointJson::from(&classify_e1_with_tol(&params, a.tol)),
                positive: classify_positive_with_tol(&params, a.tol).as_ref().map(FixedPointJson::from),
            };
            write_json(&report, open_out(&a.common.out, stdout)?)
        }
        Command::Ns(a) => {
            let params = a.model.params()?;
            let report = lyapunov_quantity(&params)?;
            write_json(&NsReportJson::new(&params, &report), open_out(&a.common.out, stdout)?)
        }
        Command::Simulate(a) => {
            let params = a.model.params()?;
            let s0 = PlanktonState::new(a.u0, a.v0);
            let orbit = if a.s1.is_some() || a.s2.is_some() {
                let fp = positive_fixed_point(&params).ok_or(Error::NoPositiveFixedPoint {
                    gamma: params.gamma(),
                    threshold: params.existence_threshold(),
                })?;
                let gains = ControlGains::new(a.s1.unwrap_or(0.0), a.s2.unwrap_or(0.0));
                let states = simulate_controlled(&params, gains, fp, s0, a.n);
                let diverged = states.len() < a.n + 1;
                OrbitRecord {
                    params,
                    initial: s0,
                    states,
                    diverged,
                }
            } else {
                simulate(&params, s0, a.n)
            };
            if orbit.diverged {
                writeln!(stderr, "warning: orbit diverged after {} iterations", orbit.len() - 1)?;
            }
            output::write_orbit_csv(open_out(&a.common.out, stdout)?, &orbit)?;
            Ok(())
        }
        Command::Bifdiag(a) => {
            let base = a.model.params()?;
            let sweep = SweepConfig {
                gamma: a.sweep.grid()?,
                transient: a.sweep.transient,
                samples: a.samples,
                initial: PlanktonState::new(a.sweep.u0, a.sweep.v0),
                seed: a.common.seed,
            };
            sweep.validate()?;
            let columns = with_threads(a.common.threads, || bifurcation_diagram(&base, &sweep))??;
            let diverged = columns.iter().filter(|c| c.diverged).count();
            if diverged > 0 {
                writeln!(stderr, "warning: {diverged} gamma values diverged (NaN rows)")?;
            }
            output::write_bifurcation_csv(open_out(&a.common.out, stdout)?, &columns)?;
            Ok(())
        }
        Command::Mle(a) => {
            let base = a.model.params()?;
            let grid = a.sweep.grid()?;
            require_positive("n", a.n)?;
            require_positive("renorm-every", a.renorm_every)?;
            let opts = MleOptions {
                n: a.n,
                transient: a.sweep.transient,
                renorm_every: a.renorm_every,
                seed: a.common.seed,
            };
            let s0 = PlanktonState::new(a.sweep.u0, a.sweep.v0);
            let curve = with_threads(a.common.threads, || mle_curve(&base, &grid, s0, &opts))??;
            output::write_mle_csv(open_out(&a.common.out, stdout)?, &curve)?;
            Ok(())
        }
        Command::Region(a) => {
            let r = Grid::new(a.r_min, a.r_max, a.r_steps)?;
            let c = Grid::new(a.c_min, a.c_max, a.c_steps)?;
            let region = with_threads(a.common.threads, || stability_region(&r, &c, a.h))??;
            let failed = region.iter().filter(|p| p.gamma_high.is_none()).count();
            if failed > 0 {
                writeln!(stderr, "warning: no gamma0 at {failed} grid points (NaN)")?;
            }
            output::write_region_csv(open_out(&a.common.out, stdout)?, &region)?;
            Ok(())
        }
        Command::Control(a) => {
            let params = a.model.params()?;
            let fp = positive_fixed_point(&params).ok_or(Error::NoPositiveFixedPoint {
                gamma: params.gamma(),
                threshold: params.existence_threshold(),
            })?;
            let tri = control_triangle(&params, fp)?;
            if a.scan_points > 0 {
                let Some(scan_path) = &a.scan_out else {
                    return Err(CliError::Config("--scan-points requires --scan-out".into()));
                };
                let s1s = tri.vertices.map(|v| v.s1);
                let s2s = tri.vertices.map(|v| v.s2);
                let bounds = |xs: [f64; 3]| {
                    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let pad = 0.1 * (hi - lo);
                    (lo - pad, hi + pad)
                };
                let (d1, d2) = (bounds(s1s), bounds(s2s));
                let s1 = (a.s1_min.unwrap_or(d1.0), a.s1_max.unwrap_or(d1.1));
                let s2 = (a.s2_min.unwrap_or(d2.0), a.s2_max.unwrap_or(d2.1));
                Grid::new(s1.0, s1.1, 2)?;
                Grid::new(s2.0, s2.1, 2)?;
                let scan = with_threads(a.common.threads, || stability_scan(&params, fp, s1, s2, a.scan_points))?;
                output::write_control_scan_csv(BufWriter::new(create(scan_path)?), &scan)?;
            }
            output::write_triangle_csv(open_out(&a.common.out, stdout)?, &tri)?;
            Ok(())
        }
        Command::Invariant(a) => run_invariant(a, stdout, stderr),
    }
}

fn run_invariant(a: &InvariantArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    use rayon::prelude::*;

    let params = a.model.params()?;
    let kind = match &a.kind {
        Some(name) => SetKind::parse(name).ok_or_else(|| CliError::Config(format!("unknown set kind `{name}`")))?,
        None => SetKind::for_params(&params),
    };
    let set = InvariantSet::new(kind, params)?;
    require_positive("grid", a.grid)?;
    if !global_hypotheses(&params) {
        writeln!(
            stderr,
            "warning: parameters violate the invariance hypotheses (nonnegativity condition and gamma <= r(1+c))"
        )?;
    }
    let v_max = a.v_max.unwrap_or_else(|| {
        let top = (0..=100)
            .map(|i| set.v_upper(i as f64 / 100.0))
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max);
        top.min(10.0).max(1e-3)
    });
    let n = a.grid.max(2);
    let (u_hi, grid_pts) = match kind {
        SetKind::AxisU => (2.0, n),
        SetKind::AxisV => (0.0, n),
        _ => (1.0, n * n),
    };
    let point = |k: usize| -> PlanktonState {
        let frac = |i: usize| i as f64 / (n - 1) as f64;
        match kind {
            SetKind::AxisU => PlanktonState::new(u_hi * frac(k), 0.0),
            SetKind::AxisV => PlanktonState::new(0.0, v_max * frac(k)),
            _ => PlanktonState::new(frac(k % n), v_max * frac(k / n)),
        }
    };
    let rows: Vec<MembershipRow> = with_threads(a.common.threads, || {
        (0..grid_pts)
            .into_par_iter()
            .map(|k| {
                let s = point(k);
                let member = set.contains(s);
                let convergence = (a.converge && member).then(|| {
                    let res = converges_to_e1(&params, s, a.max_iter, a.tol);
                    (res.converged, res.iterations)
                });
                MembershipRow {
                    point: s,
                    member,
                    image_member: set.verify_step_stays(s),
                    convergence,
                }
            })
            .collect()
    })?;
    if a.check_samples > 0 {
        let summary = sample_invariance(&set, a.check_samples, a.common.seed);
        writeln!(
            stderr,
            "{}: {} of {} sampled points left the set",
            kind.name(),
            summary.escapes.len(),
            summary.samples
        )?;
    }
    output::write_membership_csv(open_out(&a.common.out, stdout)?, &rows, a.converge)?;
    Ok(())
}

/// Entry point shared by the binary and tests. Returns the exit code.
pub fn run_with(args: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(CliError::Usage(e))
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os().collect(), &mut stdout.lock(), &mut stderr.lock())
}

/// Resolve a recipe path relative to this crate's `recipes/` directory.
pub fn recipe_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("recipes").join(name)
}
