//! `moufang`: builds the loops, runs the verification suites and writes
//! reports, certificates and Cayley tables.
//!
//! Every command prints a report (JSON or text). The exit code is 0 iff
//! every verdict in the report passed; errors exit with code 2.

mod commands;
mod report;
mod spec;
mod suite;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use moufang::loop_core::DEFAULT_SEED;

use commands::{Expectation, RunOptions, SubloopChoice};
use report::{Report, Section};
use spec::LoopSpec;

#[derive(Debug, Parser)]
#[command(name = "moufang", version, about = "Moufang loops of exponent 3 with a non-normal commutative center")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Samples for identity checks too large to run exhaustively.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,

    /// Samples for the randomized normality pass.
    #[arg(long, global = true, default_value_t = 100_000)]
    normality_samples: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report (or table) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a loop and run its construction-time validations.
    Build { spec: LoopSpec },
    /// Run the identity suite: symbolic for the polynomial loop, exhaustive
    /// or sampled otherwise.
    Verify { spec: LoopSpec },
    /// Order, exponent, commutativity, associativity and the three centers.
    Invariants { spec: LoopSpec },
    /// The commutative center and whether it is associative.
    Center { spec: LoopSpec },
    /// The nucleus and whether it is associative.
    Nucleus { spec: LoopSpec },
    /// Decide whether a subloop is normal, with a certificate if not.
    Normality {
        spec: LoopSpec,
        /// center, nucleus, zcenter, sector0, span:I,J,.. or gens:A;B;..
        #[arg(long, default_value = "center")]
        subloop: SubloopChoice,
        /// Fail unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Witnesses for the structural claims about a loop.
    Witness { spec: LoopSpec },
    /// Write the Cayley table as CSV.
    ExportTable { spec: LoopSpec },
    /// Run the full reproduction suite.
    ReproducePaper,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let opts = RunOptions { seed: cli.seed, samples: cli.samples, normality_samples: cli.normality_samples };
    let start = Instant::now();
    let name = match &cli.command {
        Command::Build { .. } => "build",
        Command::Verify { .. } => "verify",
        Command::Invariants { .. } => "invariants",
        Command::Center { .. } => "center",
        Command::Nucleus { .. } => "nucleus",
        Command::Normality { .. } => "normality",
        Command::Witness { .. } => "witness",
        Command::ExportTable { .. } => "export-table",
        Command::ReproducePaper => "reproduce-paper",
    };
    let mut report = Report::new(name, cli.seed, cli.samples);

    let loop_spec = match &cli.command {
        Command::Build { spec }
        | Command::Verify { spec }
        | Command::Invariants { spec }
        | Command::Center { spec }
        | Command::Nucleus { spec }
        | Command::Normality { spec, .. }
        | Command::Witness { spec }
        | Command::ExportTable { spec } => Some(spec),
        Command::ReproducePaper => None,
    };

    if let Some(spec) = loop_spec {
        let build_start = Instant::now();
        let (l, checks) = spec::build(spec).with_context(|| format!("building {spec}"))?;
        let build_ms = build_start.elapsed().as_secs_f64() * 1e3;

        if let Command::ExportTable { .. } = cli.command {
            let table = l.to_table().with_context(|| format!("exporting {spec}"))?;
            let mut out = output(&cli.out)?;
            table.write_csv(&mut out)?;
            out.flush()?;
            return Ok(true);
        }

        report.loop_spec = Some(spec.to_string());
        report.loop_name = Some(l.describe());
        report.order = Some(l.order());
        let all_valid = checks.iter().all(|c| c.passed);
        report.push(Section {
            name: "construction".into(),
            passed: Some(all_valid),
            data: serde_json::to_value(&checks)?,
            elapsed_ms: build_ms,
        });

        let sections = match &cli.command {
            Command::Build { .. } => Vec::new(),
            Command::Verify { .. } => commands::verify(&l, &opts),
            Command::Invariants { .. } => commands::invariants(&l),
            Command::Center { .. } => commands::center_or_nucleus(&l, SubloopChoice::Center),
            Command::Nucleus { .. } => commands::center_or_nucleus(&l, SubloopChoice::Nucleus),
            Command::Normality { subloop, expect, .. } => commands::normality(&l, subloop, *expect, &opts),
            Command::Witness { .. } => commands::witness(&l, &opts),
            Command::ExportTable { .. } | Command::ReproducePaper => unreachable!(),
        };
        sections.into_iter().for_each(|s| report.push(s));
    } else {
        suite::reproduce(&opts).into_iter().for_each(|s| report.push(s));
    }

    report.finish(start);
    let mut out = output(&cli.out)?;
    match cli.format {
        Format::Json => out.write_all(report.to_json().as_bytes())?,
        Format::Text => out.write_all(report.to_text().as_bytes())?,
    }
    out.flush()?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: configuring {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
