use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sdym_core::config;
use sdym_core::hierarchy::{listing_json, listing_latex, Family};
use sdym_core::jetexpr::{normalize, parse};
use sdym_core::series::{abelian_fixture, random_fixture};
use sdym_core::verify::{self, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "sdym", version, about = "Symmetry verification for the self-dual Yang-Mills equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an expression.
    Parse { expr: String },
    /// Run a verification suite and stream one JSON report per case.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long = "rng-seed", default_value_t = 42)]
        rng_seed: u64,
    },
    /// List a hierarchy of characteristics with its nonlocal variables.
    Hierarchy {
        #[arg(long = "seed-family")]
        seed_family: Family,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build a series solution fixture and check its invariants.
    Oracle {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long = "rng-seed", default_value_t = 42)]
        rng_seed: u64,
        #[arg(long, value_enum, default_value_t = FixtureKind::Random)]
        fixture: FixtureKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Abelian,
    Random,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Parse { expr } => match parse(&expr) {
            Ok(e) => {
                let _ = writeln!(out, "{}", normalize(&e));
                ExitCode::SUCCESS
            }
            Err(e) => usage(e),
        },
        Command::Verify { suite, levels, degree, rng_seed } => {
            let cfg = VerifyConfig { degree: degree.unwrap_or_else(config::default_degree), seed: rng_seed, levels };
            let reports = match verify::run(suite, &cfg) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            for r in &reports {
                let _ = writeln!(out, "{}", r.to_json(&cfg));
            }
            status(!reports.is_empty() && reports.iter().all(|r| r.pass))
        }
        Command::Hierarchy { seed_family, depth, format } => match seed_family.hierarchy(depth) {
            Ok(entries) => {
                let family = seed_family.to_string();
                match format {
                    Format::Json => {
                        let _ = writeln!(out, "{}", listing_json(&family, &entries));
                    }
                    Format::Latex => {
                        let _ = write!(out, "{}", listing_latex(&family, &entries));
                    }
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Oracle { degree, rng_seed, fixture } => {
            let d = degree.unwrap_or_else(config::default_degree);
            let f = match fixture {
                FixtureKind::Abelian => abelian_fixture(d),
                FixtureKind::Random => random_fixture(rng_seed, d),
            };
            let check = f.check_invariants();
            let report = json!({
                "schema": 1,
                "fixture": f.to_json(),
                "status": if check.is_ok() { "pass" } else { "fail" },
                "witness": check.as_ref().err().map(|e| e.to_string()),
            });
            let _ = writeln!(out, "{report}");
            status(check.is_ok())
        }
    }
}
