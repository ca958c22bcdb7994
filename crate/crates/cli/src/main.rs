mod registry;
mod report;
mod suite;
mod verify;

use clap::{ArgGroup, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use vinv::mochizuki::{load_or_extract, Insertion};

/// Exit codes: 0 pass, 1 mismatch or compute failure, 2 usage or configuration error.
#[derive(Parser)]
#[command(name = "vinv", version, about = "Virtual invariants of moduli of sheaves on surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extract the seven universal series by localization and write them to the cache.
    Universal {
        #[arg(long)]
        invariant: String,
        #[arg(long)]
        order: usize,
        /// Also write the set to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a closed formula against localization or run an identity check.
    #[command(group(ArgGroup::new("bound").args(["max_vd", "max_order"])))]
    Verify {
        #[arg(long)]
        conjecture: String,
        #[arg(long)]
        surface: Option<String>,
        #[arg(long)]
        c1: Option<String>,
        #[arg(long)]
        max_vd: Option<i64>,
        #[arg(long)]
        max_order: Option<i64>,
        #[arg(long)]
        rank: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
    },
    /// Print a named series.
    Series {
        #[arg(long)]
        name: String,
        #[arg(long)]
        order: i64,
        #[arg(long)]
        refined: bool,
    },
    /// Run a registered check suite.
    #[command(group(ArgGroup::new("which").args(["all", "suite"]).required(true)))]
    Report {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max_order: Option<i64>,
    },
}

pub struct Usage(pub String);

pub fn cache_dir() -> PathBuf {
    std::env::var_os("VI_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cache"))
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn print_json(v: &serde_json::Value) {
    // a closed pipe downstream is not an error here
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Universal { invariant, order, out } => {
            let Some(ins) = Insertion::parse(&invariant) else {
                return usage(format!("unknown invariant {invariant}"));
            };
            let set = match load_or_extract(&cache_dir(), &ins, order) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let path = vinv::mochizuki::cache_path(&cache_dir(), &ins, order);
            if let Some(out) = out {
                let text = serde_json::to_string_pretty(&set.to_json()).expect("json") + "\n";
                if let Err(e) = std::fs::write(&out, text) {
                    return fail(format!("{}: {e}", out.display()));
                }
                println!("{}", out.display());
            } else {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Cmd::Verify { conjecture, surface, c1, max_vd, max_order, rank, r } => {
            let req = verify::Request { conjecture, surface, c1, max_vd, max_order, rank, r };
            let t = std::time::Instant::now();
            match verify::run(&req) {
                Ok(rep) => {
                    // timing stays on stderr so the report is reproducible
                    eprintln!("{}: {:.2}s", rep.target, t.elapsed().as_secs_f64());
                    print_json(&rep.to_json());
                    if rep.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(verify::VerifyError::Usage(m)) => usage(m),
                Err(verify::VerifyError::Compute(m)) => fail(m),
            }
        }
        Cmd::Series { name, order, refined } => {
            if order <= 0 {
                return usage("order must be positive");
            }
            match registry::series(&name, order, refined) {
                Ok(v) => {
                    print_json(&v);
                    ExitCode::SUCCESS
                }
                Err(Usage(m)) => usage(m),
            }
        }
        Cmd::Report { all, suite, max_order } => {
            let filter = match (all, suite.as_deref()) {
                (true, _) => suite::Filter::All,
                (false, Some("fast")) => suite::Filter::Fast,
                (false, Some("")) | (false, None) => return usage("empty suite name"),
                (false, Some(other)) => return usage(format!("unknown suite {other}; known: fast")),
            };
            let summary = suite::run(filter, max_order, &cache_dir());
            eprint!("{}", summary.table());
            print_json(&summary.to_json());
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
