use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use macro_core::harness::{self, SEED_ENV};
use macro_core::modes::ModeKind;
use macro_core::Error;

#[derive(Parser)]
#[command(name = "macro", version, about = "Quasi-static planar contact manipulation runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write log.csv, log.json, summary.json, trajectory.svg.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override a scenario field, e.g. `--set object.c=0.43`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Seed (takes precedence over MACRO_SEED and the file).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a scenario once per value of one parameter.
    Sweep {
        scenario: PathBuf,
        /// Dotted path of a scalar field, e.g. `object.c`.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
    /// Inspect the contact-mode registry.
    Modes {
        #[command(subcommand)]
        action: ModesAction,
    },
    /// Parse and validate a scenario without running it.
    Validate { scenario: PathBuf },
}

#[derive(Subcommand)]
enum ModesAction {
    List,
}

fn report(e: &Error) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    eprintln!("{body}");
    ExitCode::from(1)
}

fn seed(cli: Option<u64>) -> Result<Option<u64>, Error> {
    harness::resolve_seed(cli, std::env::var(SEED_ENV).ok().as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, out, overrides, seed: s } => {
            let result = seed(s).and_then(|s| harness::run(&scenario, &out, &overrides, s));
            match result {
                Ok(a) => {
                    let summary = serde_json::to_string(&a.summary).expect("summary serializes");
                    println!("{summary}");
                    if let Some(msg) = &a.log.error {
                        eprintln!("{}", serde_json::json!({ "error": { "kind": "episode", "message": msg } }));
                    }
                    ExitCode::from(harness::exit_code(a.status()) as u8)
                }
                Err(e) => report(&e),
            }
        }
        Command::Sweep { scenario, param, values, out, overrides, seed: s, jobs } => {
            match seed(s).and_then(|s| harness::sweep(&scenario, &param, &values, &out, &overrides, s, jobs)) {
                Ok(rows) => {
                    print!("{}", harness::sweep_csv(&rows));
                    ExitCode::SUCCESS
                }
                Err(e) => report(&e),
            }
        }
        Command::Modes { action: ModesAction::List } => {
            println!("{:<22} {:>4} {:>4} {:<13} {:<38} quasi-holonomic", "mode", "arms", "top", "tracking", "model");
            for kind in ModeKind::ALL {
                let t = kind.traits();
                let tracking = serde_json::to_value(t.tracking).expect("serializes");
                println!(
                    "{:<22} {:>4} {:>4} {:<13} {:<38} {}",
                    kind.name(),
                    t.arms,
                    if t.top_access { "yes" } else { "no" },
                    tracking.as_str().unwrap_or(""),
                    t.reduced_order_model,
                    if t.quasi_holonomic { "yes" } else { "no" }
                );
            }
            ExitCode::SUCCESS
        }
        Command::Validate { scenario } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => return report(&Error::Io(format!("{}: {e}", scenario.display()))),
            };
            match harness::parse_scenario(&text).and_then(|s| Ok((s.stage_specs()?.len(), s))) {
                Ok((stages, s)) => {
                    println!("ok: {} ({stages} stage{})", s.name, if stages == 1 { "" } else { "s" });
                    ExitCode::SUCCESS
                }
                Err(e) => report(&e),
            }
        }
    }
}
