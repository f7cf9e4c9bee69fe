use clap::{Parser, ValueEnum};
use hecke_ext_cli::{parse_scenario, records_text, run_scenario, table_text};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
    Both,
}

/// Runs declarative scenarios: root data, module recipes and check batteries,
/// reported with exact rational arithmetic.
#[derive(Parser)]
#[command(name = "hecke-ext", version)]
struct Args {
    /// Scenario files, executed in order
    #[arg(required = true)]
    scenarios: Vec<PathBuf>,

    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Also write the machine-readable records to this file
    #[arg(long)]
    out: Option<PathBuf>,

    /// Accepted for interface compatibility; the computations have no
    /// randomness anywhere
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let _ = args.seed;
    let mut all_records = Vec::new();
    for path in &args.scenarios {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        let scenario = match parse_scenario(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        let records = match run_scenario(&scenario) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        all_records.extend(records);
    }

    match args.format {
        Format::Table => print!("{}", table_text(&all_records)),
        Format::Records => print!("{}", records_text(&all_records)),
        Format::Both => {
            print!("{}", table_text(&all_records));
            print!("{}", records_text(&all_records));
        }
    }
    if let Some(out) = &args.out {
        if let Err(e) = std::fs::write(out, records_text(&all_records)) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }

    if hecke_ext_cli::runner::all_checks_pass(&all_records) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
