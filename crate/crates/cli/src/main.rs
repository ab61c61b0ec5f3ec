//! `fillgap`: select training sets, fit and score kernel models, and run
//! seeded experiment sweeps from the command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or numerical errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fillgap", version, about = "Coreset selection by farthest point sampling")]
struct Cli {
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true, env = "FILLGAP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Pool CSV; a first row with non-numeric cells is a header.
    #[arg(long)]
    data: PathBuf,
    /// Label column: `last`, a 0-based index or a header name.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choose a training subset with a named strategy and print it as JSON.
    Select {
        #[command(flatten)]
        data: DataArgs,
        /// One of: fps, random, facility_location, kmedoidspp, fps_then_random.
        #[arg(long)]
        strategy: String,
        /// Row count (`100`) or fraction of the pool (`0.02`).
        #[arg(long)]
        budget: commands::Budget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pool fraction chosen by fps before switching to random (fps_then_random).
        #[arg(long = "switch")]
        switch_fraction: Option<f64>,
        /// Fixed first row instead of a seeded draw (fps, facility_location).
        #[arg(long)]
        start: Option<usize>,
        /// Iteration cap (kmedoidspp).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Include fill and separation distance traces.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit Gaussian kernel ridge regression and save the model.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        /// Selection JSON; train on its rows only.
        #[arg(long)]
        selection: Option<PathBuf>,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        lambda: f64,
        /// Dimension constant of the smallest-eigenvalue bound.
        #[arg(long, default_value_t = 1.0)]
        c_d: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict labels for every row of a CSV.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum and mean absolute error of a model, on unselected rows when a selection is given.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        selection: Option<PathBuf>,
    },
    /// Evaluate the fill-distance error bound against the observed error.
    Bound {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        selection: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// `lip_target=<v>,eps=<v>[,lip_label=<v>]`.
        #[arg(long)]
        constants: commands::Constants,
    },
    /// Correlation between pairwise feature and label distances.
    Corr {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = fillgap::analysis::DEFAULT_MAX_PAIRS)]
        max_pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Nearest-neighbour distance of every row and their mean.
    Nn {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Write a synthetic pool with a linear target of known Lipschitz constant.
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        lipschitz: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0.0)]
        tail_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a strategy × budget × repeat sweep from a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Validate and print the plan without running or writing anything.
        #[arg(long)]
        dry_run: bool,
        /// Directory for rows.csv and aggregates.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(commands::usage("--threads must be at least 1")),
        Some(n) => fillgap::parallel::with_threads(n, || commands::run(cli.command))
            .map_err(anyhow::Error::from)
            .and_then(|r| r),
        None => commands::run(cli.command),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
