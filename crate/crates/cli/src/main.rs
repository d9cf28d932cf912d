mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "ultra", version, about = "Exact computations on p-adic, r-adic and Cantor-type ultrametric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized audits; recorded in every report.
    #[arg(long, default_value_t = 20240229, global = true)]
    seed: u64,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lift a root of a polynomial over Z_p.
    Hensel(commands::HenselArgs),
    /// p-adic absolute values, arithmetic and geometric series.
    Padic(commands::PadicArgs),
    /// Radix embeddings, comparison and projection.
    Radic(commands::RadicArgs),
    /// Hausdorff content and dimension of Cantor-type sets.
    Hausdorff(commands::HausdorffArgs),
    /// Doubling and isometry audits.
    Audit(commands::AuditArgs),
    /// Maximal functions, weak type, L^p and Doob checks on finite trees.
    Maximal(commands::MaximalArgs),
    /// Character tables and Gram matrices of Z/nZ.
    Characters(commands::CharactersArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Hensel(a) => commands::hensel(a, &cli.common),
        Command::Padic(a) => commands::padic(a, &cli.common),
        Command::Radic(a) => commands::radic(a, &cli.common),
        Command::Hausdorff(a) => commands::hausdorff(a, &cli.common),
        Command::Audit(a) => commands::audit(a, &cli.common),
        Command::Maximal(a) => commands::maximal(a, &cli.common),
        Command::Characters(a) => commands::characters(a, &cli.common),
    };
    match result {
        Ok(Outcome { report, refuted }) => {
            let mut report = report;
            if let Some(obj) = report.as_object_mut() {
                obj.insert("schema".into(), "1".into());
                obj.insert("seed".into(), cli.common.seed.into());
            }
            print_report(&report, cli.common.format);
            ExitCode::from(if refuted { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_report(report: &serde_json::Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Table => {
            if let Some(obj) = report.as_object() {
                let width = obj.keys().map(|k| k.len()).max().unwrap_or(0);
                for (k, v) in obj {
                    let v = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    println!("{k:width$}  {v}");
                }
            }
        }
    }
}
