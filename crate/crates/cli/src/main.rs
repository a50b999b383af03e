//! `hodge`: Hodge bookkeeping, period evaluation and cyclotomic lemma checks.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

mod periods;
mod render;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hodge_core::covers::{hypersurface_hodge_oracle, vz_report};
use hodge_core::tower::{run_tower, TowerSpec};

#[derive(Parser)]
#[command(name = "hodge", version, about = "Hodge numbers, periods and CM detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Fold Borcea-Voisin steps over the bases of a tower spec.
    BvTower {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Eigenspace tables and assembled diamonds of the (m, n) cyclic cover tower.
    Vz {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Independent Hodge-number oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Numerical periods.
    Periods {
        #[command(subcommand)]
        which: periods::PeriodCommand,
    },
    /// Search for an integer polynomial vanishing at a decimal value.
    CmDetect {
        #[arg(long, allow_hyphen_values = true, value_parser = periods::decimal)]
        re: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = periods::decimal)]
        im: String,
        #[arg(long, default_value_t = 2)]
        deg: u32,
        #[arg(long, default_value = "1000000")]
        height: num_bigint::BigInt,
        #[command(flatten)]
        prec: Precision,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Run the cyclotomic linear-algebra routines on fixed examples.
    LemmasSelftest {
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Hodge numbers of the middle cohomology of a smooth degree-d hypersurface in P^N.
    Hypersurface {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        ambient: u32,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
}

/// Working precision in decimal digits.
#[derive(Args, Clone, Copy)]
pub struct Precision {
    #[arg(long = "prec", env = "HODGE_PREC", default_value_t = 30,
          value_parser = clap::value_parser!(u32).range(15..))]
    pub digits: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::BvTower { spec, emit } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: TowerSpec =
                serde_json::from_str(&text).with_context(|| format!("parsing tower spec {}", spec.display()))?;
            let reports = run_tower(&spec)?;
            match emit {
                Emit::Json => render::json(&reports),
                Emit::Table => Ok(render::tower_table(&reports)),
            }
        }
        Command::Vz { m, n, emit } => {
            let report = vz_report(m, n)?;
            match emit {
                Emit::Json => render::json(&report),
                Emit::Table => Ok(render::vz_table(&report)),
            }
        }
        Command::Oracle {
            which: OracleCommand::Hypersurface { degree, ambient, emit },
        } => {
            anyhow::ensure!(degree >= 1 && ambient >= 2, "need degree >= 1 and ambient dimension >= 2");
            let h = hypersurface_hodge_oracle(degree, ambient);
            match emit {
                Emit::Json => render::json(&serde_json::json!({
                    "degree": degree,
                    "ambient": ambient,
                    "weight": ambient - 1,
                    "hodge": h,
                })),
                Emit::Table => Ok(render::hodge_row_table(ambient - 1, &h)),
            }
        }
        Command::Periods { which } => periods::run(which),
        Command::CmDetect {
            re,
            im,
            deg,
            height,
            prec,
            emit,
        } => periods::cm_detect(&re, &im, deg, &height, prec.digits, emit),
        Command::LemmasSelftest { emit } => selftest::run(emit),
    }
}
