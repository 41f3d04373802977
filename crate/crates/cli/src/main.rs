mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Distances, geodesics and monotone metrics on positive-definite matrices.
#[derive(Parser, Debug)]
#[command(name = "qig", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bures, Wigner–Yanase and RLD-bound distances between two states.
    Dist {
        rho0: PathBuf,
        rho1: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample a curve between two states as CSV.
    Geodesic {
        /// bures-line, bures-arc, wy-line, wy-arc, rld-dual or linear.
        #[arg(long, default_value = "bures-line")]
        kind: String,
        rho0: PathBuf,
        rho1: PathBuf,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Explicit parameters in [0, 1]; overrides --samples.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        t: Option<Vec<f64>>,
        /// Trace-normalize the curve (implied by the arc kinds).
        #[arg(long)]
        normalized: bool,
        /// Also report the curve length under this metric.
        #[command(flatten)]
        metric: OptionalMetric,
        #[arg(long, default_value_t = 1024)]
        panels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a monotone metric λ_ρ(h, k); k defaults to h.
    Metric {
        #[command(flatten)]
        metric: MetricArgs,
        rho: PathBuf,
        h: PathBuf,
        k: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite and write its JSON report.
    Verify {
        /// chain, monotonicity, lengths, residuals, hessian_crosscheck, frechet_fd or bounds_f.
        #[arg(long, default_value = "chain")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "QIG_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write random states as matrix JSON files.
    Rand {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        unit_trace: bool,
        #[arg(long, env = "QIG_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct MetricArgs {
    #[arg(long, value_enum)]
    metric: MetricName,
    /// WYD parameter in [−3, 3]; only valid with --metric wyd.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct OptionalMetric {
    #[arg(long, value_enum)]
    metric: Option<MetricName>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricName {
    Bures,
    Rld,
    Wy,
    Bkm,
    Wyd,
}

impl MetricName {
    fn as_str(self) -> &'static str {
        match self {
            MetricName::Bures => "bures",
            MetricName::Rld => "rld",
            MetricName::Wy => "wy",
            MetricName::Bkm => "bkm",
            MetricName::Wyd => "wyd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist { rho0, rho1, format } => commands::dist(&rho0, &rho1, format),
        Command::Geodesic {
            kind,
            rho0,
            rho1,
            samples,
            t,
            normalized,
            metric,
            panels,
            out,
        } => commands::geodesic(commands::GeodesicRequest {
            kind: &kind,
            rho0: &rho0,
            rho1: &rho1,
            samples,
            ts: t.as_deref(),
            normalized,
            metric: metric.metric.map(|m| (m.as_str(), metric.alpha)),
            stray_alpha: metric.metric.is_none() && metric.alpha.is_some(),
            panels,
            out: out.as_deref(),
        }),
        Command::Metric {
            metric,
            rho,
            h,
            k,
            format,
        } => commands::metric(metric.metric.as_str(), metric.alpha, &rho, &h, k.as_deref(), format),
        Command::Verify {
            suite,
            trials,
            seed,
            out,
        } => commands::verify(&suite, trials, seed, out.as_deref()),
        Command::Rand {
            n,
            count,
            unit_trace,
            seed,
            out_dir,
        } => commands::rand(n, count, unit_trace, seed, &out_dir),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
