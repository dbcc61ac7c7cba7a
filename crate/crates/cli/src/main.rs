use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use blockscope::character::character_table_with;
use blockscope::verify::catalog::{run_catalog, Catalog};
use blockscope::verify::{analyze_recipe, CaseLabel, Options, QOrderReading};
use blockscope::{construct_group_with, preset, Error, GroupRecipe};

const EXIT_VERDICT: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "blockscope", version, about = "Block and fusion invariants of permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one group and verify the predicted invariants.
    Analyze {
        /// Preset name, path to a recipe JSON file, or inline recipe JSON.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the text summary.
        #[arg(long)]
        json: bool,
        /// Read the bound on |Q| as |Q| < 16 instead of |Q| <= 16.
        #[arg(long)]
        strict_lt_16: bool,
    },
    /// Evaluate a catalog file (the shipped catalog by default).
    Catalog {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Only entries with this expected case label.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        strict_lt_16: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print the character table of a group.
    Table {
        #[arg(long)]
        group: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn resolve_group(arg: &str) -> Result<GroupRecipe, Failure> {
    if let Some(r) = preset(arg) {
        return Ok(r);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        return Ok(GroupRecipe::from_json(&text)?);
    }
    if arg.trim_start().starts_with('{') {
        return Ok(GroupRecipe::from_json(arg)?);
    }
    Err(Failure::Input(format!("{arg:?} is neither a preset, a recipe file nor recipe JSON")))
}

fn options(seed: u64, strict: bool) -> Options {
    Options {
        seed,
        q_reading: if strict { QOrderReading::LessThan16 } else { QOrderReading::AtMost16 },
        ..Options::default()
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            group,
            prime,
            seed,
            out,
            json,
            strict_lt_16,
        } => {
            let recipe = resolve_group(&group)?;
            let report = analyze_recipe(&group, &recipe, prime, &options(seed, strict_lt_16))?;
            if let Some(path) = &out {
                write_json(path, &report)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.summary());
            }
            Ok(if report.pass { 0 } else { EXIT_VERDICT })
        }
        Command::Catalog {
            file,
            filter,
            strict_lt_16,
            seed,
            out,
            json,
        } => {
            let cat = match &file {
                Some(path) => Catalog::load(path)?,
                None => Catalog::shipped(),
            };
            let filter = match filter {
                Some(f) => Some(CaseLabel::parse(&f).ok_or_else(|| Failure::Input(format!("unknown case label {f:?}")))?),
                None => None,
            };
            let report = run_catalog(&cat, filter, &options(seed, strict_lt_16));
            if let Some(path) = &out {
                write_json(path, &report)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.summary());
            }
            Ok(report.exit_code() as u8)
        }
        Command::Table { group, json } => {
            let recipe = resolve_group(&group)?;
            let limits = Default::default();
            let g = construct_group_with(&recipe, &limits)?;
            let t = character_table_with(&g, &limits)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&t).expect("table serializes"));
                return Ok(0);
            }
            println!("{recipe}: order {}, {} classes", t.group_order(), t.num_classes());
            for (i, c) in t.classes().iter().enumerate() {
                println!(
                    "class {i}: {} (order {}, size {})",
                    c.representative.to_cycle_string(),
                    c.element_order,
                    c.size
                );
            }
            for chi in 0..t.num_characters() {
                let row: Vec<String> = t.row(chi).iter().map(ToString::to_string).collect();
                println!("X.{chi}: {}", row.join(", "));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
