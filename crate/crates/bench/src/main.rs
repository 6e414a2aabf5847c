//! `lradi-bench run <config>` and `lradi-bench compare <config>...`.
//!
//! Exit codes: 0 on success, 1 for configuration errors, 2 for solver
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lradi_bench::run::{format_table, write_table_csv};
use lradi_bench::{compare, run, BenchError, Overrides, RunConfig};

#[derive(Parser)]
#[command(version, about = "Run LR-ADI shift strategies on benchmark problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration; writes `<stem>.csv` and `<stem>.json`.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run several configurations on the same problem and tabulate them.
    Compare {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
struct OverrideArgs {
    /// Directory for all output files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Seed for the random right-hand side.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of logical LR-ADI steps.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Target scaled residual.
    #[arg(long)]
    tol: Option<f64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides { out_dir: a.out_dir, seed: a.seed, max_iter: a.max_iter, tol: a.tol }
    }
}

fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig, BenchError> {
    let mut cfg = RunConfig::load(path)?;
    cfg.apply(overrides)?;
    Ok(cfg)
}

fn execute(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Run { config, overrides } => {
            let cfg = load(&config, &overrides.into())?;
            let out = run(&cfg)?;
            println!("{}", format_table(std::slice::from_ref(&out.summary)));
            Ok(())
        }
        Command::Compare { configs, overrides } => {
            let overrides: Overrides = overrides.into();
            let cfgs = configs.iter().map(|p| load(p, &overrides)).collect::<Result<Vec<_>, _>>()?;
            let outs = compare(&cfgs)?;
            let rows: Vec<_> = outs.into_iter().map(|o| o.summary).collect();
            let path = cfgs[0].output.dir.join("compare.csv");
            let mut file = std::fs::File::create(&path).map_err(|source| BenchError::Write { path: path.clone(), source })?;
            write_table_csv(&rows, &mut file).map_err(|source| BenchError::Write { path, source })?;
            print!("{}", format_table(&rows));
            match rows.iter().find(|r| r.error.is_some()) {
                Some(r) => Err(BenchError::Solver {
                    strategy: r.strategy.clone(),
                    message: r.error.clone().unwrap_or_default(),
                }),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
