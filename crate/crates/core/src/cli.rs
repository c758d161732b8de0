//! Command-line front-end: configuration merging, ingestion, dispatch and
//! report emission. The `poafd` binary is a thin wrapper around [`run`].
//!
//! Precedence, highest first: command-line flags, `POAFD_*` environment
//! variables, the JSON file given by `--config`, built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{basis_build, basis_expand, basis_invert, BasisPlan};
use crate::engine::{PoafdConfig, SelectionGrid, SelectionMode};
use crate::error::{Error, Result};
use crate::hardy::{apply_l, apply_l_inverse, BoundaryFunction, DiscFunction, DEFAULT_TRUNCATION};
use crate::io::{ingest, residual_report, Signal};
use crate::solvers::{solve_expansion, solve_inversion, solve_pseudo_inverse};
use crate::verify::{run_suite, DEFAULT_SEED};

pub const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  verification suite reported a failing check
  2  invalid configuration
  3  malformed input
  4  I/O error
  5  parameter or evaluation point outside the admissible disc
  6  zero input or zero candidate
  7  exhausted dictionary (every grid point degenerate)
  8  degenerate basis plan
  9  ill-conditioned transfer or Gram matrix
  10 requested more terms than available

Every flag can also be set through an environment variable named POAFD_<FLAG>
(upper case, dashes as underscores), e.g. POAFD_MAX_TERMS=32.";

#[derive(Debug, Parser)]
#[command(name = "poafd", version, about = "Adaptive kernel expansion and inversion in the Hardy space", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// POAFD expansion of a disc function.
    Expand,
    /// Minimum-norm inversion of L via POAFD.
    Invert,
    /// Moore-Penrose pseudo-inversion of boundary data.
    PseudoInvert,
    /// Basis method on a fixed parameter plan (--plan-file).
    Basis,
    /// Run the randomized oracle suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Weak,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Coefficient JSON or CSV of uniform boundary samples.
    #[arg(long, global = true, env = "POAFD_INPUT")]
    pub input: Option<PathBuf>,
    /// JSON result path; the residual CSV goes next to it with a .csv extension.
    #[arg(long, global = true, env = "POAFD_OUTPUT")]
    pub output: Option<PathBuf>,
    /// JSON file with defaults for any of the options below.
    #[arg(long, global = true, env = "POAFD_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, env = "POAFD_MODE")]
    pub mode: Option<ModeArg>,
    /// Weak-mode fraction of the supremum, in (0, 1).
    #[arg(long, global = true, env = "POAFD_RHO")]
    pub rho: Option<f64>,
    #[arg(long, global = true, env = "POAFD_GRID_RADIAL")]
    pub grid_radial: Option<usize>,
    #[arg(long, global = true, env = "POAFD_GRID_ANGULAR")]
    pub grid_angular: Option<usize>,
    #[arg(long, global = true, env = "POAFD_R_MAX")]
    pub r_max: Option<f64>,
    #[arg(long, global = true, env = "POAFD_REFINE_STEPS")]
    pub refine_steps: Option<usize>,
    #[arg(long, global = true, env = "POAFD_MAX_TERMS")]
    pub max_terms: Option<usize>,
    /// Residual tolerance relative to the input norm.
    #[arg(long, global = true, env = "POAFD_TOL_RESIDUAL")]
    pub tol_residual: Option<f64>,
    /// Truncation degree N of coefficient vectors.
    #[arg(long, global = true, env = "POAFD_TRUNC_N")]
    pub trunc_n: Option<usize>,
    #[arg(long, global = true, env = "POAFD_EPS_COINCIDE")]
    pub eps_coincide: Option<f64>,
    #[arg(long, global = true, env = "POAFD_DELTA_SPAN")]
    pub delta_span: Option<f64>,
    #[arg(long, global = true, env = "POAFD_SEED")]
    pub seed: Option<u64>,
    /// Number of randomized trials for `verify`.
    #[arg(long, global = true, env = "POAFD_TRIALS")]
    pub trials: Option<usize>,
    /// JSON list of [re, im] plan parameters for `basis`.
    #[arg(long, global = true, env = "POAFD_PLAN_FILE")]
    pub plan_file: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub mode: ModeArg,
    pub rho: f64,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub r_max: f64,
    pub refine_steps: usize,
    pub max_terms: usize,
    pub tol_residual: f64,
    pub trunc_n: Option<usize>,
    pub eps_coincide: f64,
    pub delta_span: f64,
    pub seed: u64,
    pub trials: usize,
    pub plan_file: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let poafd = PoafdConfig::default();
        Self {
            command: None,
            input: None,
            output: None,
            mode: ModeArg::Full,
            rho: 0.9,
            grid_radial: 64,
            grid_angular: 128,
            r_max: crate::hardy::DEFAULT_R_MAX,
            refine_steps: poafd.refine_steps,
            max_terms: poafd.max_terms,
            tol_residual: poafd.tol_residual,
            trunc_n: None,
            eps_coincide: poafd.eps_coincide,
            delta_span: poafd.delta_span,
            seed: DEFAULT_SEED,
            trials: 100,
            plan_file: None,
        }
    }
}

impl RunConfig {
    /// Merges `flags` over the optional config file over defaults.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self> {
        let mut cfg = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str::<RunConfig>(&text)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        cfg.command = Some(command);
        macro_rules! over {
            ($($field:ident),*) => { $( if let Some(v) = flags.$field.clone() { cfg.$field = v; } )* };
        }
        over!(mode, rho, grid_radial, grid_angular, r_max, refine_steps, max_terms, tol_residual, eps_coincide, delta_span, seed, trials);
        if flags.input.is_some() {
            cfg.input = flags.input.clone();
        }
        if flags.output.is_some() {
            cfg.output = flags.output.clone();
        }
        if flags.trunc_n.is_some() {
            cfg.trunc_n = flags.trunc_n;
        }
        if flags.plan_file.is_some() {
            cfg.plan_file = flags.plan_file.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == ModeArg::Weak && !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidConfig(format!("--rho must lie in (0, 1), got {}", self.rho)));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::InvalidConfig(format!("--r-max must lie in (0, 1), got {}", self.r_max)));
        }
        if self.grid_radial < 2 || self.grid_angular < 1 {
            return Err(Error::InvalidConfig("grid needs --grid-radial >= 2 and --grid-angular >= 1".into()));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidConfig("--max-terms must be positive".into()));
        }
        if !(self.tol_residual >= 0.0) || !(self.eps_coincide > 0.0) || !(self.delta_span > 0.0) {
            return Err(Error::InvalidConfig(
                "--tol-residual must be >= 0; --eps-coincide and --delta-span must be > 0".into(),
            ));
        }
        if self.trunc_n == Some(0) {
            return Err(Error::InvalidConfig("--trunc-n must be positive".into()));
        }
        Ok(())
    }

    pub fn poafd_config(&self) -> Result<PoafdConfig> {
        Ok(PoafdConfig {
            mode: match self.mode {
                ModeArg::Full => SelectionMode::Full,
                ModeArg::Weak => SelectionMode::Weak { rho: self.rho },
            },
            max_terms: self.max_terms,
            tol_residual: self.tol_residual,
            eps_coincide: self.eps_coincide,
            delta_span: self.delta_span,
            grid: SelectionGrid::polar(self.grid_radial, self.grid_angular, self.r_max)?,
            refine_steps: self.refine_steps,
        })
    }

    fn truncation_for(&self, natural: usize) -> usize {
        self.trunc_n.unwrap_or(natural.max(DEFAULT_TRUNCATION))
    }
}

/// Artifacts of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub json: String,
    pub csv: Option<String>,
    pub success: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: Command,
    config: &'a RunConfig,
    result: T,
}

fn load_signal(cfg: &RunConfig) -> Result<Signal> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("--input is required".into()))?;
    ingest(path, cfg.trunc_n.unwrap_or(DEFAULT_TRUNCATION))
}

fn as_disc(cfg: &RunConfig, signal: Signal) -> DiscFunction {
    let f = match signal {
        Signal::Disc(f) => f,
        Signal::Boundary(b) => apply_l(&b),
    };
    f.resized(cfg.truncation_for(f.trunc()))
}

fn as_boundary(cfg: &RunConfig, signal: Signal) -> BoundaryFunction {
    let f = match signal {
        Signal::Disc(f) => apply_l_inverse(&f),
        Signal::Boundary(b) => b,
    };
    f.resized(cfg.truncation_for(f.trunc()))
}

fn read_plan(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedInput(format!("plan file {}: {e}", path.display())))
}

#[derive(Serialize)]
struct BasisOutput {
    plan: Vec<Complex64>,
    transfer: Vec<Vec<Complex64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    projection: Option<DiscFunction>,
    s1: DiscFunction,
    s2: BoundaryFunction,
}

/// Executes one resolved configuration.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let command = cfg
        .command
        .ok_or_else(|| Error::InvalidConfig("no subcommand given".into()))?;
    let envelope = |result: serde_json::Value| -> Result<String> {
        Ok(serde_json::to_string_pretty(&Envelope {
            command,
            config: cfg,
            result,
        })?)
    };
    match command {
        Command::Expand => {
            let f = as_disc(cfg, load_signal(cfg)?);
            let r = solve_expansion(&f, &cfg.poafd_config()?)?;
            Ok(RunOutput {
                json: envelope(serde_json::to_value(&r)?)?,
                csv: Some(residual_report(&r)?),
                success: true,
            })
        }
        Command::Invert => {
            let f = as_disc(cfg, load_signal(cfg)?);
            let r = solve_inversion(&f, &cfg.poafd_config()?)?;
            Ok(RunOutput {
                json: envelope(serde_json::to_value(&r)?)?,
                csv: Some(residual_report(&r.expansion)?),
                success: true,
            })
        }
        Command::PseudoInvert => {
            let f = as_boundary(cfg, load_signal(cfg)?);
            let r = solve_pseudo_inverse(&f, &cfg.poafd_config()?)?;
            Ok(RunOutput {
                json: envelope(serde_json::to_value(&r)?)?,
                csv: Some(residual_report(&r.expansion)?),
                success: true,
            })
        }
        Command::Basis => {
            let plan_path = cfg
                .plan_file
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("basis needs --plan-file".into()))?;
            let points = read_plan(plan_path)?;
            let plan = BasisPlan::with_tolerances(&points, cfg.eps_coincide, cfg.delta_span)?;
            let (g, projection) = match load_signal(cfg)? {
                Signal::Disc(f) => (f.resized(cfg.truncation_for(f.trunc())), None),
                Signal::Boundary(b) => {
                    let b = b.resized(cfg.truncation_for(b.trunc()));
                    let g = apply_l(&b);
                    (g.clone(), Some(g))
                }
            };
            let sys = basis_build(&plan, g.trunc())?;
            let out = BasisOutput {
                plan: points,
                transfer: sys.transfer_rows().to_vec(),
                projection,
                s1: basis_expand(&g, &plan)?,
                s2: basis_invert(&g, &plan)?,
            };
            Ok(RunOutput {
                json: envelope(serde_json::to_value(&out)?)?,
                csv: None,
                success: true,
            })
        }
        Command::Verify => {
            let report = run_suite(cfg.seed, cfg.trials)?;
            let success = report.all_passed;
            Ok(RunOutput {
                json: envelope(serde_json::to_value(&report)?)?,
                csv: None,
                success,
            })
        }
    }
}

/// Writes the artifacts of `out` according to `cfg`; prints JSON to stdout
/// when no output path is set.
pub fn emit(cfg: &RunConfig, out: &RunOutput) -> Result<()> {
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &out.json)?;
            if let Some(csv) = &out.csv {
                std::fs::write(path.with_extension("csv"), csv)?;
            }
        }
        None => println!("{}", out.json),
    }
    Ok(())
}

/// Machine-readable error document.
pub fn error_json(err: &Error) -> String {
    serde_json::json!({
        "error": err.kind(),
        "message": err.to_string(),
        "exit_code": err.exit_code(),
    })
    .to_string()
}

/// Parses, runs and emits; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = RunConfig::resolve(cli.command, &cli.flags).and_then(|cfg| {
        let out = run(&cfg)?;
        emit(&cfg, &out)?;
        Ok(out.success)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}
