//! `gabmul`: experiments with finite Gabor multipliers and LTI filters.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on
//! usage errors (bad flags, specs or input files).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gabmul::equivalence::DEFAULT_TOLERANCE;
use gabmul::random::random_signal;
use gabmul::tf::modulate;
use gabmul::{Lattice, Signal};

use crate::config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(gabmul::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<gabmul::Error> for CliError {
    fn from(e: gabmul::Error) -> Self {
        match e {
            gabmul::Error::NonDivisor { .. }
            | gabmul::Error::InvalidParameter(_)
            | gabmul::Error::OutOfRange { .. }
            | gabmul::Error::LengthMismatch { .. }
            | gabmul::Error::Empty => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other),
        }
    }
}

#[derive(Parser)]
#[command(name = "gabmul", version, about = "Finite Gabor multipliers versus LTI filters")]
struct Cli {
    /// JSON configuration file; flags take precedence over its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory [default: $GABMUL_OUT_DIR, then ./out]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Signal length N
    #[arg(long)]
    n: Option<usize>,
    /// Seed for random data (ChaCha8)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ReprOpts {
    #[command(flatten)]
    common: Common,
    /// Time step of the lattice
    #[arg(long)]
    alpha: Option<usize>,
    /// Frequency step of the lattice
    #[arg(long)]
    beta: Option<usize>,
    /// Impulse response: lowpass:R | delta | random[:seed] | file:PATH
    #[arg(long)]
    filter: Option<String>,
    /// Analysis window: gaussian[:width] | ones | delta | file:PATH
    #[arg(long)]
    window: Option<String>,
    /// Synthesis window (defaults to the analysis window)
    #[arg(long)]
    synthesis_window: Option<String>,
    /// Relative tolerance for vanishing values
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Ideal low-pass filter against its naive Gabor multiplier
    FigureLowpass {
        #[command(flatten)]
        common: Common,
        /// Cutoff R: frequencies |v| <= R pass
        #[arg(long)]
        cutoff: Option<usize>,
        /// Analysis window; the synthesis window is this one divided by N
        #[arg(long)]
        window: Option<String>,
    },
    /// Decide whether a filter is a Gabor multiplier on a lattice
    ReprCheck {
        #[command(flatten)]
        opts: ReprOpts,
        /// Also write the JSON report here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Construct the mask of a representable filter
    ReprConstruct {
        #[command(flatten)]
        opts: ReprOpts,
        /// Mask file (default: OUT_DIR/mask.csv)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare Gaussian closed forms with quadrature
    GaussVerify {
        /// Comma-separated rescaling parameters
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
    },
    /// Spectrogram |V_g f|^2 of a signal file, rows = frequency
    Spectrogram {
        /// Signal CSV (index,re,im)
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: Option<String>,
        /// Output CSV (default: OUT_DIR/spectrogram.csv)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a test signal
    GenSignal {
        #[command(flatten)]
        common: Common,
        /// random | tone:L | delta:K | gaussian[:width]
        #[arg(long, default_value = "random")]
        kind: String,
        /// Output CSV (default: OUT_DIR/signal.csv)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a window
    GenWindow {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: Option<String>,
        /// Output CSV (default: OUT_DIR/window.csv)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

const OUT_DIR_ENV: &str = "GABMUL_OUT_DIR";
const DEFAULT_N: usize = 480;
const DEFAULT_CUTOFF: usize = 80;
const DEFAULT_WINDOW: &str = "gaussian";
const DEFAULT_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];

struct Resolved {
    file: FileConfig,
    out_dir: PathBuf,
}

impl Resolved {
    fn n(&self, c: &Common, default: usize) -> usize {
        c.n.or(self.file.n).unwrap_or(default)
    }

    fn seed(&self, c: &Common) -> u64 {
        c.seed.or(self.file.seed).unwrap_or(0)
    }

    fn window(&self, flag: &Option<String>) -> String {
        flag.clone()
            .or_else(|| self.file.window.clone())
            .unwrap_or_else(|| DEFAULT_WINDOW.into())
    }

    fn out(&self, flag: &Option<PathBuf>, name: &str) -> PathBuf {
        flag.clone().unwrap_or_else(|| self.out_dir.join(name))
    }
}

fn repr_args(r: &Resolved, o: &ReprOpts) -> Result<commands::ReprArgs, CliError> {
    let n = r.n(&o.common, 48);
    let seed = r.seed(&o.common);
    let alpha = o.alpha.or(r.file.alpha).unwrap_or(1);
    let beta = o.beta.or(r.file.beta).unwrap_or(1);
    let lattice = Lattice::new(n, alpha, beta)?;
    let filter_spec = o
        .filter
        .clone()
        .or_else(|| r.file.filter.clone())
        .unwrap_or_else(|| "random".into());
    let g1_spec = r.window(&o.window);
    let g2_spec = o
        .synthesis_window
        .clone()
        .or_else(|| r.file.synthesis_window.clone())
        .unwrap_or_else(|| g1_spec.clone());
    if !(o.tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {}", o.tol)));
    }
    Ok(commands::ReprArgs {
        h: config::filter(&filter_spec, n, seed)?,
        g1: config::window(&g1_spec, n)?,
        g2: config::window(&g2_spec, n)?,
        lattice,
        tol: o.tol,
    })
}

fn test_signal(kind: &str, n: usize, seed: u64) -> Result<Signal, CliError> {
    let bad = || CliError::Usage(format!("unrecognized signal kind {kind:?}"));
    let (name, arg) = match kind.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (kind, None),
    };
    let int = |s: &str| s.trim().parse::<isize>().map_err(|_| bad());
    Ok(match (name, arg) {
        ("random", None) => random_signal(n, seed),
        ("tone", Some(l)) => modulate(&gabmul::algebra::ones(n), int(l)?),
        ("delta", Some(k)) => gabmul::algebra::unit_impulse(n, int(k)?),
        ("gaussian", _) => config::window(kind, n)?,
        _ => return Err(bad()),
    })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| file.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let r = Resolved { file, out_dir };

    match &cli.command {
        Command::FigureLowpass {
            common,
            cutoff,
            window,
        } => {
            let n = r.n(common, DEFAULT_N);
            let args = commands::LowpassArgs {
                n,
                cutoff: cutoff.or(r.file.cutoff).unwrap_or(DEFAULT_CUTOFF),
                seed: r.seed(common),
                window: config::window(&r.window(window), n)?,
                out_dir: r.out_dir.clone(),
            };
            commands::figure_lowpass(&args)?;
            Ok(true)
        }
        Command::ReprCheck { opts, output } => {
            commands::repr_check(&repr_args(&r, opts)?, output.as_deref())
        }
        Command::ReprConstruct { opts, output } => {
            let path = r.out(output, "mask.csv");
            commands::repr_construct(&repr_args(&r, opts)?, &path)
        }
        Command::GaussVerify { lambdas } => {
            let lambdas = lambdas
                .clone()
                .or_else(|| r.file.lambdas.clone())
                .unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec());
            commands::gauss_verify(&lambdas)
        }
        Command::Spectrogram {
            input,
            window,
            output,
        } => {
            let f = config::read_signal_file(input)?;
            let g = config::window(&r.window(window), f.len())?;
            commands::spectrogram_cmd(&f, &g, &r.out(output, "spectrogram.csv"))?;
            Ok(true)
        }
        Command::GenSignal {
            common,
            kind,
            output,
        } => {
            let s = test_signal(kind, r.n(common, DEFAULT_N), r.seed(common))?;
            commands::write_signal_file(&s, &r.out(output, "signal.csv"))?;
            Ok(true)
        }
        Command::GenWindow {
            common,
            window,
            output,
        } => {
            let g = config::window(&r.window(window), r.n(common, DEFAULT_N))?;
            commands::write_signal_file(&g, &r.out(output, "window.csv"))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
