//! `qdlab`: verification suites, quasidensity probes and grid calculus from the command line.

mod commands;
mod config;
mod report;
mod suites;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, GridSpec, RunConfig};
use suites::Suite;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    Io(String),
    Compute(String),
}

impl CliError {
    pub fn parse(path: &str, e: &serde_json::Error) -> Self {
        CliError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Parse {
                path,
                line,
                column,
                message,
            } => {
                write!(f, "{path}:{line}:{column}: parse error: {message}")
            }
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl From<quasidense::Error> for CliError {
    fn from(e: quasidense::Error) -> Self {
        match e {
            quasidense::Error::InvalidGrid(_) | quasidense::Error::InvalidArgument(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Compute(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qdlab",
    version,
    about = "Numerical laboratory for quasidense monotone operators"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    #[arg(long, global = true, env = "QDLAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_exact: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_opt: f64,
    #[arg(long, global = true, default_value_t = 64)]
    truncation: usize,
    /// Lattice as `min:max:step` per axis, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    /// Output file; relative paths resolve against `QDLAB_OUT_DIR` when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            tol_exact: self.tol_exact,
            tol_opt: self.tol_opt,
            truncation: self.truncation,
            grid: self.grid.clone(),
            out: self.out.clone(),
            format: self.format,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Suite {
        #[arg(value_enum)]
        name: Suite,
    },
    /// Probe quasidensity of an operator at a list of points.
    Probe {
        /// Operator JSON file or built-in name (tail, skewq, bstele).
        #[arg(long)]
        operator: String,
        /// JSON array of points `[x, xstar]` or `{"x": .., "xstar": ..}`.
        #[arg(long, required_unless_present = "point")]
        points: Option<PathBuf>,
        /// A single point given inline as JSON.
        #[arg(long, conflicts_with = "points")]
        point: Option<String>,
    },
    /// Conjugate a grid function on `--grid` (default: its slope lattice).
    Conjugate {
        file: PathBuf,
        /// Emit the biconjugate envelope instead of the conjugate.
        #[arg(long)]
        envelope: bool,
    },
    /// Desk check of the sum theorem for phi_Id (+)_2 phi_Id.
    SumTheorem,
    /// Sample a gallery operator's lower bound.
    Gallery {
        #[arg(value_enum)]
        name: GalleryName,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GalleryName {
    Tail,
    Skewq,
    Bstele,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = cli.global.config();
    cfg.validate()?;
    let out_dir = std::env::var_os("QDLAB_OUT_DIR").map(PathBuf::from);
    let (name, body, pass) = match cli.command {
        Command::Suite { name } => commands::suite(name, &cfg)?,
        Command::Probe {
            operator,
            points,
            point,
        } => commands::probe(&operator, points.as_deref(), point.as_deref(), &cfg)?,
        Command::Conjugate { file, envelope } => commands::conjugate(&file, envelope, &cfg)?,
        Command::SumTheorem => commands::sum_theorem(&cfg)?,
        Command::Gallery { name, samples } => commands::gallery(name, samples, &cfg)?,
    };
    match cfg.destination(&name, out_dir) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, body)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        None => print!("{body}"),
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qdlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
