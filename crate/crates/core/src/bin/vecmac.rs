use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vecmac::checks::{CheckOptions, DEFAULT_TOLERANCE};
use vecmac::cli::{self, config::SEED_ENV, RunReport, SeedSources};
use vecmac::subsets::DEFAULT_SUBSET_CAP;
use vecmac::{Error, PowerExponent};

/// Check vector-valued Maclaurin and Newton inequalities.
///
/// Prints a JSON report to standard output. Exit status is 0 when every
/// checked inequality holds, 1 when one is violated and 2 on error.
#[derive(Parser, Debug)]
#[command(name = "vecmac", version)]
struct Cli {
    /// Verdict tolerance on margins.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,

    /// Maximum number of subsets a single sum may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_CAP)]
    cap: u128,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maclaurin chain M_{1,p} >= ... >= M_{k,p} for a family file.
    Check {
        path: PathBuf,
        /// Exponent: a number, 0 or inf. Negative values are accepted.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        p: String,
        /// Largest k (default: the dimension).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Intrinsic volumes of the zonotope spanned by a family file.
    Zonotope {
        path: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated direction for the projection checks; normalized.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Randomized search for violating families.
    ///
    /// Seed precedence: --seed, then `seed` in the config file, then the
    /// VECMAC_SEED environment variable, then a built-in default.
    Search {
        /// TOML configuration; the default searches p = -1, k = 2, m = d = 3.
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the best witness family here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Pivot ratios and monotone orthogonalization of a square family.
    Reduce {
        path: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the orthogonalized family here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classical Maclaurin chain of positive numbers.
    Chain {
        #[arg(required = true, allow_negative_numbers = true)]
        scalars: Vec<f64>,
    },
}

fn parse_direction(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .enumerate()
        .map(|(i, x)| {
            x.trim().parse::<f64>().map_err(|_| Error::Parse {
                line: 1,
                field: "direction".into(),
                message: format!("entry {} `{}` is not a number", i + 1, x.trim()),
            })
        })
        .collect()
}

fn run(cli: &Cli) -> Result<RunReport, Error> {
    let opts = CheckOptions { tolerance: cli.tol, cap: cli.cap };
    match &cli.command {
        Command::Check { path, p, k } => {
            let p: PowerExponent = p.parse()?;
            cli::cli_check(path, p, *k, &opts)
        }
        Command::Zonotope { path, k, direction } => {
            let u = direction.as_deref().map(parse_direction).transpose()?;
            cli::cli_zonotope(path, *k, u.as_deref(), cli.tol)
        }
        Command::Search { config, seed, witness } => {
            let env = std::env::var(SEED_ENV).ok();
            let seeds = SeedSources { flag: *seed, env: env.as_deref() };
            cli::cli_search(config.as_deref(), &seeds, witness.as_deref(), cli.tol)
        }
        Command::Reduce { path, k, output } => cli::cli_reduce(path, *k, output.as_deref(), cli.tol),
        Command::Chain { scalars } => cli::cli_chain(scalars),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match outcome {
        Ok(mut report) => {
            report.command = std::env::args().skip(1).collect();
            print!("{}", report.render());
            ExitCode::from(report.exit_status() as u8)
        }
        Err(e) => {
            eprintln!("vecmac: {e}");
            ExitCode::from(2)
        }
    }
}
