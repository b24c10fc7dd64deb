//! `hctest`: uniformity and identity testing experiments from the command line.
//!
//! Exit status is 0 for a YES verdict (or a passing check), 3 for NO (or a
//! failing check) and 2 for usage, input or validation errors.

mod commands;
mod config;
mod report;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use commands::*;
use config::MissingParameter;

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hctest",
    version,
    about = "Uniformity and identity testing in the high-confidence regime"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether samples come from the uniform distribution.
    TestUniformity(TestUniformityArgs),
    /// Decide whether samples come from a reference distribution.
    TestIdentity(TestIdentityArgs),
    /// Worst-case type-II error of a convex statistic over the candidate family.
    EvalWorstCase(EvalWorstCaseArgs),
    /// Empirical stochastic-domination check for a majorizing pair.
    DominanceCheck(DominanceArgs),
    /// Draw a lower-bound instance, optionally with the indistinguishability witness.
    LbInstance(LbInstanceArgs),
    /// Exact expectation, threshold and bound calculators.
    Exact {
        #[arg(long, global = true)]
        output: Option<PathBuf>,
        #[command(subcommand)]
        op: ExactOp,
    },
    /// Fit the tester's constants on a grid of (n, ε, δ).
    Calibrate(CalibrateArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TestUniformity(_) => "test-uniformity",
            Command::TestIdentity(_) => "test-identity",
            Command::EvalWorstCase(_) => "eval-worst-case",
            Command::DominanceCheck(_) => "dominance-check",
            Command::LbInstance(_) => "lb-instance",
            Command::Exact { .. } => "exact",
            Command::Calibrate(_) => "calibrate",
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("HCTEST_THREADS") {
        let threads: usize = value.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            anyhow::anyhow!("HCTEST_THREADS must be a positive integer, got {value:?}")
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn run(command: &Command) -> anyhow::Result<i32> {
    init_threads()?;
    match command {
        Command::TestUniformity(a) => test_uniformity_cmd(a),
        Command::TestIdentity(a) => test_identity_cmd(a),
        Command::EvalWorstCase(a) => eval_worst_case_cmd(a),
        Command::DominanceCheck(a) => dominance_cmd(a),
        Command::LbInstance(a) => lb_instance_cmd(a),
        Command::Exact { output, op } => exact_cmd(op, output.as_deref()),
        Command::Calibrate(a) => calibrate_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<MissingParameter>().is_some() {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(cli.command.name()) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            ExitCode::from(EXIT_USAGE)
        }
    }
}
