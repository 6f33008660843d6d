use std::path::PathBuf;
use std::process::ExitCode;

use cclt::commands;
use cclt::config::RunConfig;
use cclt::error::{CliError, CliResult};
use cclt::grid::parse_grid;
use cclt::io::{emit, read_complex, read_matrix, Format};
use cclt::verify;
use cclt_core::constants::{PipelineInputs, ROUNDED_C1, ROUNDED_C2};
use clap::{Args, Parser, Subcommand};

/// Error bounds, exact distributions and characteristic functions for
/// permutation statistics `S_n = sum_j a[j][pi(j)]`.
#[derive(Parser)]
#[command(name = "cclt", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Matrix file (CSV or JSON)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Input format; inferred from the extension when omitted
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest n enumerated exactly
    #[arg(long, global = true, default_value_t = 10)]
    enum_cap: usize,
    /// Largest n for Ryser permanents
    #[arg(long, global = true, default_value_t = 20)]
    perm_cap: usize,
    /// Absolute quadrature tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    quad_tol: f64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    mc_samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "CCLT_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Constants {
    #[arg(long, default_value_t = ROUNDED_C1)]
    c1: f64,
    #[arg(long, default_value_t = ROUNDED_C2)]
    c2: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Main and Lyapunov-type bounds, with the exact (or sampled) distance
    Bound {
        #[command(flatten)]
        k: Constants,
    },
    /// Kolmogorov distance of the standardized statistic to the normal law
    Exact {
        /// Estimate by sampling instead of enumerating
        #[arg(long)]
        monte_carlo: bool,
        /// Include the atoms of the distribution
        #[arg(long)]
        atoms: bool,
    },
    /// Characteristic function and its bounds on a grid
    Charfn {
        /// start:stop:count
        #[arg(long, default_value = "0:5:11")]
        t_grid: String,
    },
    /// Sampling m values without replacement from a population
    Sample {
        /// Comma-separated population values
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        #[arg(long)]
        m_draw: usize,
        #[command(flatten)]
        k: Constants,
    },
    /// The constant pipeline
    Constants {
        #[arg(long, default_value_t = 0.89)]
        w: f64,
        #[arg(long, default_value_t = 1367)]
        m: u32,
        #[arg(long, default_value_t = 7.915)]
        c4: f64,
        #[arg(long, default_value_t = 0.047)]
        c5: f64,
        #[arg(long, default_value_t = 33.0)]
        c6: f64,
    },
    /// Seeded verification batteries; exits nonzero on any failed check
    Verify {
        /// identity, bounds, constants, cf or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Permanent identity checks for a complex matrix given as JSON {"re", "im"}
    Identity,
}

fn input(opts: &Opts) -> CliResult<&PathBuf> {
    opts.input.as_ref().ok_or_else(|| CliError::Config("--input is required for this command".into()))
}

fn run(cli: Cli) -> CliResult<bool> {
    let o = &cli.opts;
    let cfg = RunConfig {
        enum_cap: o.enum_cap,
        perm_cap: o.perm_cap,
        quad_tol: o.quad_tol,
        mc_samples: o.mc_samples,
        seed: o.seed,
        threads: o.threads,
        output_path: o.output.clone(),
    };
    cfg.validate()?;
    let out = cfg.output_path.as_ref();
    let matrix = || read_matrix(input(o)?, o.format);
    match cli.command {
        Command::Bound { k } => emit("bound", commands::bound(&matrix()?, k.c1, k.c2, &cfg)?, out)?,
        Command::Exact { monte_carlo, atoms } => {
            emit("exact", commands::exact(&matrix()?, monte_carlo, atoms, &cfg)?, out)?
        }
        Command::Charfn { t_grid } => emit("charfn", commands::charfn(&matrix()?, &parse_grid(&t_grid)?, &cfg)?, out)?,
        Command::Sample { values, m_draw, k } => {
            emit("sample", commands::sample(&values, m_draw, k.c1, k.c2, &cfg)?, out)?
        }
        Command::Constants { w, m, c4, c5, c6 } => {
            emit("constants", commands::constants(PipelineInputs { w, m, c4, c5, c6 })?, out)?
        }
        Command::Verify { suite } => {
            let summary = verify::run(&suite, &cfg)?;
            let passed = summary.passed;
            emit("verify", summary, out)?;
            return Ok(passed);
        }
        Command::Identity => emit("identity", commands::identity(&read_complex(input(o)?)?, &cfg)?, out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
