//! Command-line front end for the `caustics` library.
//!
//! [`run`] parses arguments, resolves the [`RunConfig`] (defaults, then the
//! config file, then flags), dispatches one subcommand and writes its JSON
//! or CSV output. Errors go to standard error as one JSON object.

pub mod commands;
pub mod config;
pub mod error;
pub mod reproduce;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use config::{ConfigFile, Format, RunConfig, CONFIG_ENV};
use error::CliError;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "caustics",
    version,
    about = "Elliptic billiards, caustics, eccentricity expansions and non-degeneracy certificates",
    after_help = "Exit codes: 0 success, 1 computation failure, 2 usage or validation error, 3 I/O error.\n\
                  The config file is TOML with keys precision, digits, k_max, grid, profile_grid,\n\
                  tolerance, format, output, seed. Its default path is read from CAUSTICS_CONFIG."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file; overrides the file named by CAUSTICS_CONFIG.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Working precision: double or extended.
    #[arg(long, global = true, value_parser = ["double", "extended"])]
    pub precision: Option<String>,
    /// Significant digits in extended precision (25 to 32).
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Largest mode index accepted by modes and annihilate.
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<u64>,
    /// Periodic grid size for modes and annihilate.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Number of θ samples in the integrability profile.
    #[arg(long = "profile-grid", global = true)]
    pub profile_grid: Option<usize>,
    /// Tangency-defect threshold for caustic-test.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Seed for randomized optimizer restarts; recorded in the output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// Table given either as an ellipse or as a domain file.
#[derive(Debug, Args)]
pub struct TableArgs {
    /// Semi-major axis of an elliptic table.
    #[arg(long, requires = "b", conflicts_with = "domain")]
    pub a: Option<f64>,
    /// Semi-minor axis of an elliptic table.
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
    /// Perturbed domain JSON ({"frame": {"a", "b"}, "mu": {"mean", "cos", "sin"}}).
    #[arg(long, value_name = "FILE")]
    pub domain: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Incomplete elliptic integral F(φ; k), or K(k) without --phi.
    Ellint {
        #[arg(long)]
        k: String,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Rotation number of the confocal caustic λ, or λ for a rotation number.
    Rotnum {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, required_unless_present = "omega", conflicts_with = "omega")]
        lambda: Option<String>,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Billiard orbit started tangent to the confocal caustic λ of the frame.
    #[command(after_help = "CSV columns: step, phi, theta, x, y, tangency_defect (one row per impact).")]
    Orbit {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Starting time of the closed-form orbit.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
    },
    /// Caustic invariance and agreement of billiard steps with the closed-form orbit.
    #[command(after_help = "CSV columns: step, phi, theta, x, y, tangency_defect, closed_form_deviation.")]
    CausticTest {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Threshold for the per-step deviation from the closed-form orbit.
        #[arg(long, default_value_t = 1e-9)]
        step_tolerance: f64,
    },
    /// Maximal-perimeter (p, q)-periodic orbit.
    #[command(after_help = "CSV columns: index, phi, x, y (one row per vertex).")]
    Pqgon {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0.0)]
        start_phi: f64,
        /// Let the first vertex move as well.
        #[arg(long)]
        free_start: bool,
    },
    /// Oscillation of the integrable-caustic profile at rotation number p/q.
    #[command(after_help = "CSV columns: theta, value (one row per profile sample).")]
    Integrability {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Fit exponent and constant of the oscillation under halving of μ.
        #[arg(long)]
        fit: bool,
    },
    /// Exact coefficients φ_j of the amplitude expansion.
    #[command(after_help = "CSV columns: j, harm, fn, num, den.")]
    Expand {
        #[arg(long)]
        order: usize,
    },
    /// Exact polynomials ξ_{j,l}(k).
    #[command(after_help = "CSV columns: j, l, degree, num, den (one row per coefficient).")]
    Xi {
        #[arg(long)]
        order: usize,
    },
    /// One non-degeneracy matrix with its determinant certificate.
    #[command(after_help = "CSV columns: row, col, p, q, harmonic, kind, xi, j, w (one row per entry).")]
    Matrix {
        #[arg(long)]
        q0: Option<u64>,
        /// odd, even or concrete:ID with ID one of q3_odd, q4_odd, q4_even, q5_odd4, q5_odd6, q5_even7.
        #[arg(long)]
        parity: String,
        #[arg(long)]
        m: Option<u64>,
        /// Output format; overrides --format.
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
    /// Certify every matrix for q0.
    #[command(after_help = "CSV columns: matrix, size, det_order, value, lo, hi, homogeneous, count_identity, status.")]
    Verify {
        #[arg(long)]
        q0: u64,
        /// Also build the singular even m = 1 matrix.
        #[arg(long)]
        include_even_m1: bool,
    },
    /// Basis defect of the deformed modes.
    #[command(after_help = "CSV columns: k, c0, hr (one row per mode).")]
    Modes {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        e: f64,
        #[arg(long)]
        q0: u64,
        #[arg(long)]
        r: u32,
        #[arg(long = "K")]
        k: u64,
    },
    /// Pairing of a domain's perturbation with the deformed modes ±q.
    Annihilate {
        /// Domain JSON, or the output of fit-ellipse.
        #[arg(long, value_name = "FILE")]
        domain: PathBuf,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        /// Modes up to q0 are undeformed; defaults to q − 1.
        #[arg(long)]
        q0: Option<u64>,
    },
    /// Best-fit ellipse and the perturbation relative to it.
    FitEllipse {
        #[arg(long, value_name = "FILE")]
        domain: PathBuf,
        /// Derivative order n of the weighted residual norm.
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Search radius around the input frame.
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
    },
    /// Run the acceptance criteria.
    #[command(after_help = "CSV columns: id, status, known_unattainable, title, detail.")]
    Reproduce {
        /// Criteria to run (1 to 10); all by default.
        #[arg(long)]
        criterion: Vec<u32>,
    },
}

/// Result of one subcommand, ready for emission.
pub struct Emitted {
    pub json: String,
    pub csv: Option<String>,
}

impl Emitted {
    pub fn json<T: serde::Serialize>(value: &T) -> Self {
        Self { json: serde_json::to_string_pretty(value).expect("output serializes"), csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let base = match g.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from)) {
        Some(p) => ConfigFile::load(&p)?,
        None => ConfigFile::default(),
    };
    let flags = ConfigFile {
        precision: g.precision.clone(),
        digits: g.digits,
        k_max: g.k_max,
        grid: g.grid,
        profile_grid: g.profile_grid,
        tolerance: g.tolerance,
        format: g.format,
        output: g.output.clone(),
        seed: g.seed,
    };
    base.merge(flags).resolve()
}

fn execute(cli: &Cli) -> Result<(Emitted, RunConfig), CliError> {
    let mut cfg = resolve_config(&cli.global)?;
    if let Command::Matrix { emit: Some(f), .. } = cli.command {
        cfg.format = f;
    }
    let out = commands::dispatch(&cli.command, &cfg)?;
    Ok((out, cfg))
}

fn emit(out: Emitted, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = match cfg.format {
        Format::Json => out.json,
        Format::Csv => out.csv.ok_or_else(|| CliError::Validation("this subcommand has no CSV form".into()))?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Runs one invocation; `args` includes the program name. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = Cli::command().try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    match execute(&cli).and_then(|(out, cfg)| emit(out, &cfg, stdout)) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}
