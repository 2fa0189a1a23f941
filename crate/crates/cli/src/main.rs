//! `chansim` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod channel;
mod grid;
mod oracle;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use channel::{ChannelArgs, ChannelId};
use grid::GridSpec;
use output::{Format, Metadata};

#[derive(Parser, Debug)]
#[command(
    name = "chansim",
    version,
    about = "Capacity bounds for mixtures of quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one capacity report.
    Bounds {
        channel: ChannelId,
        #[command(flatten)]
        args: ChannelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a report over a one- or two-parameter grid and write CSV.
    Sweep {
        channel: ChannelId,
        #[command(flatten)]
        args: ChannelArgs,
        /// Swept parameter, `name=start:stop:steps` or `name=start:stop:steps:log`.
        #[arg(long = "grid", required = true)]
        grids: Vec<GridSpec>,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        suite: verify::Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override every check threshold.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Compare Gaussian moment formulas with a truncated Fock expansion.
    Oracle {
        prep: oracle::PrepKind,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        nu_b: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 40)]
        cutoff: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(clap::Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Seed recorded in the metadata block.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<chansim::Error> for Failure {
    fn from(e: chansim::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds { channel, args, out } => {
            let report = channel::report(channel, &args)?;
            let meta = Metadata::new("bounds", out.seed);
            let text = output::render_report(&report, &meta, out.format.into())?;
            output::emit(out.output.as_deref(), &text)
        }
        Command::Sweep {
            channel,
            args,
            grids,
            output,
        } => {
            if grids.len() > 2 {
                return Err(Failure::Usage(format!(
                    "at most 2 swept parameters, got {}",
                    grids.len()
                )));
            }
            for g in &grids {
                channel::check_sweepable(channel, &g.name)?;
            }
            let points = grid::points(&grids);
            let rows: Vec<_> = points
                .par_iter()
                .map(|pt| {
                    let mut a = args.clone();
                    for (name, v) in pt {
                        a.set(name, *v);
                    }
                    channel::report(channel, &a).map(|r| (pt.clone(), r))
                })
                .collect::<Result<_, _>>()?;
            output::emit(output.as_deref(), &output::sweep_csv(&rows))
        }
        Command::Verify {
            suite,
            seed,
            tolerance,
        } => {
            if verify::run(suite, seed, tolerance) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Oracle {
            prep,
            nu,
            nu_b,
            mu,
            eta,
            cutoff,
            out,
        } => {
            let prep = oracle::preparation(prep, nu, nu_b, mu, eta)?;
            let cmp = oracle::compare(&prep, cutoff)?;
            let meta = Metadata::new("oracle", out.seed);
            let text = output::render_oracle(&cmp, &meta, out.format.into())?;
            output::emit(out.output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
