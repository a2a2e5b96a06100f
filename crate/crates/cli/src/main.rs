mod commands;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use format::OutputFormat;

#[derive(Parser)]
#[command(
    name = "degen-poisson",
    version,
    about = "Degenerate zero-truncated Poisson distributions"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Law {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
}

#[derive(Args)]
struct Tail {
    /// Bound on the probability mass left out of a table.
    #[arg(long, env = "DEGEN_POISSON_TAIL_TOL", default_value_t = degen_poisson::tolerances::DEFAULT_TAIL_TOL, value_parser = parse_tail_tol)]
    tail_tol: f64,
}

fn parse_tail_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(format!("tail tolerance must lie in (0, 1), got {s}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Mass function table with cumulative probabilities.
    Pmf {
        #[command(flatten)]
        law: Law,
        /// Last support point to list.
        #[arg(long)]
        n_max: Option<u64>,
        #[command(flatten)]
        tail: Tail,
    },
    /// Exact moments beside direct summation over the mass function.
    Moments {
        #[command(flatten)]
        law: Law,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        max_order: u32,
        #[command(flatten)]
        tail: Tail,
    },
    /// Seeded random variates.
    Sample {
        #[command(flatten)]
        law: Law,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Law of a sum of independent variables sharing one λ.
    #[command(group(ArgGroup::new("mode").required(true).args(["alpha", "alphas"])))]
    Sum {
        /// α of every summand (with --k).
        #[arg(long, allow_hyphen_values = true, requires = "k")]
        alpha: Option<f64>,
        /// Number of summands (with --alpha).
        #[arg(long, requires = "alpha", value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        /// One α per summand, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["alpha", "k"])]
        alphas: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        n_max: Option<u64>,
        #[command(flatten)]
        tail: Tail,
    },
    /// Triangle of degenerate Stirling numbers of the second kind.
    Triangle {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        max_n: usize,
    },
    /// Cross-check every closed form over a parameter grid.
    Verify {
        /// `default` or a JSON grid file.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Overrides the grid's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file overriding individual tolerances.
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let fmt = cli.format;
    let result = match cli.command {
        Command::Pmf { law, n_max, tail } => commands::pmf(law.alpha, law.lambda, n_max, tail.tail_tol, fmt),
        Command::Moments { law, max_order, tail } => {
            commands::moments(law.alpha, law.lambda, max_order, tail.tail_tol, fmt)
        }
        Command::Sample { law, count, seed } => commands::sample(law.alpha, law.lambda, count, seed, fmt),
        Command::Sum {
            alpha,
            k,
            alphas,
            lambda,
            n_max,
            tail,
        } => {
            let alphas = alphas.unwrap_or_else(|| vec![alpha.expect("mode group"); k.expect("k required") as usize]);
            commands::sum(alphas, alpha.is_some(), lambda, n_max, tail.tail_tol, fmt)
        }
        Command::Triangle { lambda, max_n } => commands::triangle(lambda, max_n, fmt),
        Command::Verify { grid, seed, tolerances } => commands::verify(&grid, seed, tolerances.as_deref(), fmt),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
