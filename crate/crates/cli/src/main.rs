// `!(x > 0.0)` is how NaN gets rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heatbound_core::Shape;

mod output;
mod run;
mod scenario;

use run::{run_scenario, BudgetError};
use scenario::{Scenario, SchemaError, BUNDLED};

#[derive(Parser)]
#[command(name = "heatbound", version, about = "Heat kernel bound and metric experiments on catalog domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or the name of a bundled scenario).
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        verbose: bool,
    },
    /// Print catalog shapes and bundled scenarios.
    List,
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", catalog_listing());
            ExitCode::SUCCESS
        }
        Command::Run { config, out_dir, threads, verbose } => {
            env_logger::Builder::new()
                .filter_level(if verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
                .parse_default_env()
                .init();
            if let Some(k) = threads {
                if k == 0 {
                    eprintln!("--threads must be at least 1");
                    return ExitCode::from(EXIT_SCHEMA);
                }
                rayon::ThreadPoolBuilder::new().num_threads(k).build_global().expect("thread pool is built once");
            }
            let scenario = match Scenario::load(&config) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_SCHEMA);
                }
            };
            match run_scenario(&scenario, &out_dir) {
                Ok(summary) => {
                    for c in &summary.checks {
                        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                    }
                    println!("reports written to {}", out_dir.display());
                    if summary.pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_CHECK_FAILED)
                    }
                }
                Err(e) => exit_for(&e),
            }
        }
    }
}

fn exit_for(e: &anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    if e.downcast_ref::<SchemaError>().is_some() {
        return ExitCode::from(EXIT_SCHEMA);
    }
    if e.downcast_ref::<BudgetError>().is_some()
        || matches!(e.downcast_ref::<heatbound_core::Error>(), Some(heatbound_core::Error::EigenBudget { .. }))
    {
        return ExitCode::from(EXIT_BUDGET);
    }
    ExitCode::from(EXIT_CHECK_FAILED)
}

fn catalog_listing() -> String {
    let mut out = String::from("shapes:\n");
    for shape in Shape::catalog() {
        out += &format!("  {:<12}{}\n", shape.name(), shape.parameter_names().join(", "));
    }
    out += "scenarios:\n";
    for (name, text) in BUNDLED {
        let description = Scenario::parse(text).map(|s| s.description).unwrap_or_default();
        out += &format!("  {name:<20}{description}\n");
    }
    out
}
