//! `nmrelax fid|sweep|verify|measure`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 I/O error.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::measure::{
    blp_measure, blp_measure_analytic, ensemble_beta, load_trajectory, moving_average,
    DEFAULT_QUAD_POINTS, LONG_WINDOW, SHORT_WINDOW, SHORT_WINDOW_SAMPLES,
};
use crate::oracle::run_equatorial;
use crate::params::{ModelParams, TimeGrid};
use crate::propagator::Propagator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Grid points per second for sweep windows without `--samples`.
const SWEEP_SAMPLES_PER_SECOND: f64 = 2000.0;
const VERIFY_SAMPLES: usize = 1001;

#[derive(Parser, Debug)]
#[command(name = "nmrelax", version, about = "Phase relaxation and non-Markovianity of a driven central spin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normalized FID β_n(t) of the central qubit.
    Fid(FidArgs),
    /// Non-Markovianity measure over a list of drive strengths.
    Sweep(SweepArgs),
    /// Compare the closed form against the dense full-system integrator.
    Verify(VerifyArgs),
    /// Non-Markovianity measure of a trajectory CSV.
    Measure(MeasureArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Run configuration (flat `key = value` file). Defaults to TMS rates.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of satellite qubits.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FidArgs {
    #[command(flatten)]
    pub common: Common,
    /// Drive strength ω₁/2π in Hz.
    #[arg(long = "omega1-hz")]
    pub omega1_hz: Option<f64>,
    /// Time span of the output grid in seconds.
    #[arg(long, num_args = 2, value_names = ["T0", "T1"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Relative width of a Gaussian spread of ω₁.
    #[arg(long = "ensemble-spread")]
    pub ensemble_spread: Option<f64>,
    #[arg(long = "quad-points", default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated drive strengths ω₁/2π in Hz.
    #[arg(long = "omega1-hz", value_delimiter = ',', allow_negative_numbers = true)]
    pub omega1_hz: Vec<f64>,
    /// Linear range of drive strengths in Hz: MIN MAX COUNT.
    #[arg(long = "omega1-range-hz", num_args = 3, value_names = ["MIN", "MAX", "COUNT"], allow_negative_numbers = true)]
    pub omega1_range_hz: Option<Vec<f64>>,
    /// Measure window in seconds [default: 0 50].
    #[arg(long, num_args = 2, value_names = ["T0", "T1"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
    /// Grid samples on the window [default: 2000 per second, at least 20000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "omega1-hz")]
    pub omega1_hz: Option<f64>,
    #[arg(long = "t-end", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = VERIFY_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Scale J on the closed-form side only (negative control).
    #[arg(long = "corrupt-j", default_value_t = 1.0)]
    pub corrupt_j: f64,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// Trajectory CSV with header `t_s,re[,im]`.
    pub input: PathBuf,
    /// Output file for the backflow intervals.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Measure window in seconds [default: 0 0.2].
    #[arg(long, num_args = 2, value_names = ["T0", "T1"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
    /// Moving-average window in seconds.
    #[arg(long)]
    pub smooth: Option<f64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INPUT,
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Fid(a) => cmd_fid(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Measure(a) => cmd_measure(&a),
    }
}

fn base_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig {
            params: ModelParams::tms(0.0, 1)?,
            grid: TimeGrid::new(
                crate::config::DEFAULT_T_START,
                crate::config::DEFAULT_T_END,
                crate::config::DEFAULT_SAMPLES,
            )?,
        },
    };
    if let Some(n) = common.n {
        cfg.params = cfg.params.with_n(n)?;
    }
    Ok(cfg)
}

fn hz_to_radps(hz: f64) -> Result<f64> {
    if !hz.is_finite() || hz < 0.0 {
        return Err(Error::InvalidParam(format!("omega1 must be ≥ 0 Hz, got {hz}")));
    }
    Ok(TAU * hz)
}

fn window_arg(w: &Option<Vec<f64>>, default: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = match w.as_deref() {
        Some([lo, hi]) => (*lo, *hi),
        Some(_) => return Err(Error::InvalidParam("--window takes T0 T1".into())),
        None => default,
    };
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo || lo < 0.0 {
        return Err(Error::InvalidParam(format!("invalid window [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn params_header(p: &ModelParams, with_omega1: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gamma_I_radps = {}", p.gamma_i);
    let _ = writeln!(s, "# gamma_II_radps = {}", p.gamma_ii);
    let _ = writeln!(s, "# J_radps = {}", p.j);
    if with_omega1 {
        let _ = writeln!(s, "# omega1_radps = {}", p.omega1);
    }
    let _ = writeln!(s, "# n = {}", p.n);
    s
}

fn cmd_fid(a: &FidArgs) -> Result<i32> {
    let mut cfg = base_config(&a.common)?;
    if let Some(hz) = a.omega1_hz {
        cfg.params = cfg.params.with_omega1(hz_to_radps(hz)?)?;
    }
    let span = window_arg(&a.window, (cfg.grid.t_start, cfg.grid.t_end))?;
    let grid = TimeGrid::new(span.0, span.1, a.samples.unwrap_or(cfg.grid.samples))?;
    let spread = a.ensemble_spread.unwrap_or(0.0);
    let traj = ensemble_beta(&cfg.params, spread, a.quad_points, &grid)?;

    let mut out = open_out(&a.common.out)?;
    let mut head = String::from("# command = fid\n");
    head.push_str(&params_header(&cfg.params, true));
    let _ = writeln!(head, "# t_start_s = {}", grid.t_start);
    let _ = writeln!(head, "# t_end_s = {}", grid.t_end);
    let _ = writeln!(head, "# samples = {}", grid.samples);
    let _ = writeln!(head, "# ensemble_spread = {spread}");
    if spread > 0.0 {
        let _ = writeln!(head, "# ensemble_distribution = gaussian, sigma = spread * omega1, folded to |omega1|");
        let _ = writeln!(head, "# quad_points = {}", a.quad_points);
    }
    out.write_all(head.as_bytes())?;
    writeln!(out, "t_s,re_beta,im_beta")?;
    for (t, b) in traj.times().iter().zip(traj.values()) {
        writeln!(out, "{t},{},{}", b.re, b.im)?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

/// Drive strengths of a sweep, sorted ascending.
pub fn sweep_omegas(list_hz: &[f64], range_hz: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut hz: Vec<f64> = list_hz.to_vec();
    if let Some(r) = range_hz {
        let [lo, hi, count] = r else {
            return Err(Error::InvalidParam("--omega1-range-hz takes MIN MAX COUNT".into()));
        };
        if *count < 1.0 || count.fract() != 0.0 || hi < lo {
            return Err(Error::InvalidParam(format!("invalid range {lo} {hi} {count}")));
        }
        let count = *count as usize;
        for k in 0..count {
            hz.push(if count == 1 {
                *lo
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            });
        }
    }
    if hz.is_empty() {
        return Err(Error::InvalidParam("sweep needs at least one omega1 value".into()));
    }
    let mut omegas = hz.into_iter().map(hz_to_radps).collect::<Result<Vec<_>>>()?;
    omegas.sort_by(f64::total_cmp);
    Ok(omegas)
}

pub fn default_sweep_samples(window: (f64, f64)) -> usize {
    (((window.1 - window.0) * SWEEP_SAMPLES_PER_SECOND).ceil() as usize).max(SHORT_WINDOW_SAMPLES)
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let cfg = base_config(&a.common)?;
    let omegas = sweep_omegas(&a.omega1_hz, a.omega1_range_hz.as_deref())?;
    let window = window_arg(&a.window, LONG_WINDOW)?;
    let samples = a.samples.unwrap_or_else(|| default_sweep_samples(window));
    if a.jobs == 0 {
        return Err(Error::InvalidParam("--jobs must be ≥ 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| Error::InvalidParam(e.to_string()))?;
    let base = cfg.params;
    let rows = pool.install(|| {
        omegas
            .par_iter()
            .map(|&w| {
                let p = base.with_omega1(w)?;
                blp_measure_analytic(&p, window, samples).map(|m| (w, m.value, m.omega_plus.len()))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut out = open_out(&a.common.out)?;
    let mut head = String::from("# command = sweep\n");
    head.push_str(&params_header(&base, false));
    let _ = writeln!(head, "# window_s = {} {}", window.0, window.1);
    let _ = writeln!(head, "# samples = {samples}");
    out.write_all(head.as_bytes())?;
    writeln!(out, "omega1_radps,N,n_intervals")?;
    for (w, n_value, count) in rows {
        writeln!(out, "{w},{n_value},{count}")?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

/// Outcome of comparing the closed form with the dense integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub max_deviation: f64,
    pub trace_drift: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tol
            && self.trace_drift <= self.tol
            && self.hermiticity_defect <= self.tol
            && self.min_eigenvalue >= -self.tol
    }
}

/// Integrates the full system at a tighter tolerance than `tol` and compares
/// `β_n` with the closed form computed from `analytic`.
pub fn verify(
    oracle: &ModelParams,
    analytic: &ModelParams,
    t_end: f64,
    samples: usize,
    tol: f64,
) -> Result<VerifyReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParam(format!("tol must be positive, got {tol}")));
    }
    if oracle.n > 3 {
        return Err(Error::InvalidParam(format!(
            "verify supports n ≤ 3, got {}",
            oracle.n
        )));
    }
    let grid = TimeGrid::new(0.0, t_end, samples)?;
    let integration_tol = (tol * 1e-3).clamp(crate::oracle::evolve::MIN_TOL, crate::oracle::evolve::MAX_TOL);
    let run = run_equatorial(oracle, 0.0, &grid, integration_tol, 20)?;
    let prop = Propagator::new(analytic)?;
    let max_deviation = run
        .samples
        .iter()
        .map(|s| (s.beta - prop.beta(s.t)).norm())
        .fold(0.0, f64::max);
    Ok(VerifyReport {
        max_deviation,
        trace_drift: run.max_trace_defect(),
        hermiticity_defect: run.max_hermiticity_defect(),
        min_eigenvalue: run.min_eigenvalue,
        tol,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let mut cfg = base_config(&a.common)?;
    if let Some(hz) = a.omega1_hz {
        cfg.params = cfg.params.with_omega1(hz_to_radps(hz)?)?;
    }
    let analytic = cfg.params.with_j(cfg.params.j * a.corrupt_j)?;
    let report = verify(&cfg.params, &analytic, a.t_end, a.samples, a.tol)?;
    let mut out = open_out(&a.common.out)?;
    let mut text = String::from("# command = verify\n");
    text.push_str(&params_header(&cfg.params, true));
    let _ = writeln!(text, "# t_end_s = {}", a.t_end);
    let _ = writeln!(text, "# samples = {}", a.samples);
    let _ = writeln!(text, "# corrupt_j = {}", a.corrupt_j);
    let _ = writeln!(text, "tol = {:e}", report.tol);
    let _ = writeln!(text, "max_beta_deviation = {:e}", report.max_deviation);
    let _ = writeln!(text, "trace_drift = {:e}", report.trace_drift);
    let _ = writeln!(text, "hermiticity_defect = {:e}", report.hermiticity_defect);
    let _ = writeln!(text, "positivity_margin = {:e}", report.min_eigenvalue);
    let _ = writeln!(text, "result = {}", if report.passed() { "PASS" } else { "FAIL" });
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_measure(a: &MeasureArgs) -> Result<i32> {
    let window = window_arg(&a.window, SHORT_WINDOW)?;
    let mut traj = load_trajectory(Path::new(&a.input))?;
    if let Some(w) = a.smooth {
        traj = moving_average(&traj, w)?;
    }
    let m = blp_measure(&traj, window)?;

    let mut report = String::new();
    let _ = writeln!(report, "N = {}", m.value);
    let _ = writeln!(report, "window_s = {} {}", m.window.0, m.window.1);
    let _ = writeln!(report, "grid_samples = {}", m.grid_samples);
    let _ = writeln!(report, "intervals = {}", m.omega_plus.len());
    for iv in &m.omega_plus.intervals {
        let _ = writeln!(report, "  [{}, {}] gain {}", iv.start, iv.end, iv.gain);
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(report.as_bytes())?;
    lock.flush()?;

    if a.out.is_some() {
        let mut out = open_out(&a.out)?;
        let mut head = String::from("# command = measure\n");
        let _ = writeln!(head, "# input = {}", a.input.display());
        let _ = writeln!(head, "# window_s = {} {}", window.0, window.1);
        match a.smooth {
            Some(w) => {
                let _ = writeln!(head, "# smooth_s = {w}");
            }
            None => head.push_str("# smooth_s = none\n"),
        }
        let _ = writeln!(head, "# N = {}", m.value);
        out.write_all(head.as_bytes())?;
        writeln!(out, "start_s,end_s,gain")?;
        for iv in &m.omega_plus.intervals {
            writeln!(out, "{},{},{}", iv.start, iv.end, iv.gain)?;
        }
        out.flush()?;
    }
    Ok(EXIT_OK)
}
