//! The `fano-workbench` command line.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fano_core::{Error, ErrorClass};
use serde_json::{Map, Value};

pub mod commands;
pub mod input;

pub const SCHEMA: &str = "fano-workbench/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{err}")]
    Core { flag: Option<&'static str>, err: Error },
    #[error("{msg}")]
    Usage { flag: &'static str, msg: String },
}

impl CliError {
    pub fn at(flag: &'static str, err: Error) -> Self {
        CliError::Core { flag: Some(flag), err }
    }

    pub fn usage(flag: &'static str, msg: impl Into<String>) -> Self {
        CliError::Usage { flag, msg: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Core { err, .. } => match err.class() {
                ErrorClass::Input => 2,
                ErrorClass::Budget => 3,
                ErrorClass::Internal => 4,
            },
        }
    }

    fn flag(&self) -> Option<&'static str> {
        match self {
            CliError::Usage { flag, .. } => Some(flag),
            CliError::Core { flag: Some(f), .. } => Some(f),
            CliError::Core { err, .. } => match err {
                Error::NotPrime(_) | Error::PrimeOutOfRange(_) | Error::CharacteristicTooSmall { .. } => Some("--prime"),
                Error::SearchSpaceTooLarge { .. } => Some("--budget"),
                Error::GatedDegree(_) => Some("--d"),
                _ => None,
            },
        }
    }

    fn hint(&self) -> &'static str {
        let CliError::Core { err, .. } = self else {
            return "see --help for the expected form of this flag";
        };
        match err {
            Error::NotPrime(_) | Error::PrimeOutOfRange(_) => "pass a prime p with 2 < p < 2^31",
            Error::CharacteristicTooSmall { .. } => "pass a prime larger than the degree",
            Error::Parse { .. } | Error::NonHomogeneous(..) | Error::UnknownVariable { .. } => {
                "forms use terms like 3*x0^2*x1 joined by + and -, in variables x0..xn"
            }
            Error::SearchSpaceTooLarge { .. } => "raise --budget or use a smaller prime",
            Error::SmoothnessNotAchieved { .. } => "try another --seed or a larger prime",
            Error::RetryBudgetExhausted(_) | Error::DownwardSetNotFound { .. } => "try another --seed",
            Error::GatedDegree(_) => "pass --allow-large to evaluate degrees of 7 and above",
            Error::Unsupported(_) => "pass --prime to work over a finite field",
            Error::Invariant(_) => "this is a bug; please report the command line",
            _ => "check the input against the command's --help",
        }
    }

    pub fn render(&self) -> String {
        let head = match self.flag() {
            Some(f) => format!("error ({f}): {self}"),
            None => format!("error: {self}"),
        };
        format!("{head}\nhint: {}\n", self.hint())
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core { flag: None, err }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fano-workbench", version, about = "Exact computations with linear spaces and rational curves on hypersurfaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Hypersurface file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Work over F_p instead of the file's field.
    #[arg(long, visible_alias = "field", global = true)]
    pub prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on points or planes visited by exhaustive scans.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub budget: u128,
    /// Include the elapsed time in the report (it always goes to stderr).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Local expansions at a point or along a plane.
    #[command(subcommand)]
    Expand(ExpandCmd),
    /// Fano fibers, plane censuses and dimension estimates.
    #[command(subcommand)]
    Fano(FanoCmd),
    /// Normal bundles and pulled-back tangent bundles of rational curves.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Residual towers, quadric parametrizations and boundary series.
    #[command(subcommand)]
    Unirat(UniratCmd),
    /// Closed-form thresholds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Generate example hypersurfaces as input files.
    #[command(subcommand)]
    Examples(ExamplesCmd),
    /// Points where V(h) is tangent to V(h_1, .., h_r); h is the input form.
    Tangency {
        /// Lower-degree forms separated by ';'.
        #[arg(long)]
        lower: String,
        #[arg(long, default_value_t = 1000)]
        list_cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExpandCmd {
    Point {
        #[arg(long)]
        point: String,
        /// Use a random x0 drawn from --seed instead of the adapted one.
        #[arg(long)]
        random_x0: bool,
    },
    Plane {
        /// Rows separated by ';'.
        #[arg(long)]
        center: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FanoCmd {
    Fiber {
        #[arg(long)]
        center: String,
    },
    Census {
        #[arg(long)]
        k: usize,
        /// Only planes containing this marked plane of the input.
        #[arg(long)]
        through: Option<usize>,
        /// List the planes found.
        #[arg(long)]
        list: bool,
    },
    Estimate {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "5,13")]
        primes: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CurveArg {
    /// A line on X, as two rows separated by ';'.
    #[arg(long)]
    pub line: Option<String>,
    /// Binary forms in x0, x1 (one per coordinate) separated by ';'.
    #[arg(long)]
    pub curve: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    Splitting {
        #[arg(long)]
        line: String,
    },
    H0 {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        /// Parameter point "s,t" at which sections must vanish.
        #[arg(long)]
        at: Option<String>,
    },
    Free {
        #[command(flatten)]
        curve: CurveArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum UniratCmd {
    Sample {
        /// Index of the marked plane used as Γ.
        #[arg(long, visible_alias = "through", default_value_t = 0)]
        gamma: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Discard towers through singular residuals.
        #[arg(long)]
        reject_singular: bool,
    },
    Quadric {
        #[arg(long)]
        point: String,
    },
    Series {
        #[arg(long, visible_alias = "through", default_value_t = 0)]
        gamma: usize,
        /// Repeat the basepoint check over this prime.
        #[arg(long)]
        second_prime: Option<u64>,
    },
    Bertini {
        #[arg(long, visible_alias = "through", default_value_t = 0)]
        gamma: usize,
        /// Use this base-locus dimension instead of measuring it.
        #[arg(long, allow_hyphen_values = true)]
        base_dim: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    K0 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        allow_large: bool,
    },
    N0 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        allow_large: bool,
    },
    Report {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = 1)]
        e: i64,
        /// Evaluate the tower hypothesis with this r.
        #[arg(long)]
        r: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesCmd {
    Fermat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    Conical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    Planed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: usize,
    },
    RandomSmooth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
}

fn render_text(map: &Map<String, Value>) -> String {
    let mut out = String::new();
    for (k, v) in map {
        let shown = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k}: {shown}\n"));
    }
    out
}

/// Parse `argv`, run the command and write the report. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let start = Instant::now();
    match commands::dispatch(&cli) {
        Ok((name, Value::Object(mut map))) => {
            let elapsed = start.elapsed();
            map.insert("schema".into(), Value::from(SCHEMA));
            map.insert("command".into(), Value::from(name));
            if cli.global.timing {
                map.insert("elapsed_ms".into(), Value::from(elapsed.as_millis() as u64));
            }
            let text = if cli.global.json {
                format!("{}\n", Value::Object(map))
            } else {
                render_text(&map)
            };
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "elapsed: {:.3}s", elapsed.as_secs_f64());
            0
        }
        Ok((_, other)) => {
            let e = CliError::from(Error::Invariant(format!("report is not an object: {other}")));
            let _ = err.write_all(e.render().as_bytes());
            e.exit_code()
        }
        Err(e) => {
            let _ = err.write_all(e.render().as_bytes());
            e.exit_code()
        }
    }
}
