use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use k3cone::io::command::{parse_class, EXIT_INTERNAL, EXIT_INVALID};
use k3cone::io::{run, Command, RunOptions, TableKind};
use k3cone::lattice::ClassVector;

/// Chambers, fundamental domains and orbit tables of even hyperbolic
/// lattices.
#[derive(Parser, Debug)]
#[command(name = "k3cone", version)]
struct Cli {
    /// Seed for verification samples (overrides the problem file).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the chamber adjacency graph of the domain (sterk only).
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Pretty-print the report.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Nodal,
    Elliptic,
    Genus,
}

fn class(s: &str) -> Result<ClassVector, String> {
    parse_class(s)
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the problem file and print lattice invariants.
    Validate { problem: PathBuf },
    /// Roots of degree 1..=BOUND.
    Roots {
        problem: PathBuf,
        #[arg(long)]
        bound: Option<BigInt>,
    },
    /// Walls and rays of the chamber of the ample class.
    Walls { problem: PathBuf },
    /// Reflect a class into the chamber.
    Walk {
        problem: PathBuf,
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        class: ClassVector,
    },
    /// Decide whether a class is nef.
    NefTest {
        problem: PathBuf,
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        class: ClassVector,
    },
    /// Build and verify the fundamental domain.
    Sterk { problem: PathBuf },
    /// Move a class into the fundamental domain.
    Reduce {
        problem: PathBuf,
        #[arg(long, value_parser = class, allow_hyphen_values = true)]
        class: ClassVector,
    },
    /// Orbit table of nodal, elliptic or genus-g classes.
    Orbits {
        problem: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        genus: Option<u64>,
        #[arg(long)]
        bound: Option<BigInt>,
    },
    /// Bounded search for an isotropic vector.
    Isotropic {
        problem: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Keep the generators preserving the supersingular subspace.
    FilterK { problem: PathBuf },
}

fn split(cmd: Cmd) -> (PathBuf, Command) {
    match cmd {
        Cmd::Validate { problem } => (problem, Command::Validate),
        Cmd::Roots { problem, bound } => (problem, Command::Roots { bound }),
        Cmd::Walls { problem } => (problem, Command::Walls),
        Cmd::Walk { problem, class } => (problem, Command::Walk { class }),
        Cmd::NefTest { problem, class } => (problem, Command::NefTest { class }),
        Cmd::Sterk { problem } => (problem, Command::Sterk),
        Cmd::Reduce { problem, class } => (problem, Command::Reduce { class }),
        Cmd::Orbits {
            problem,
            kind,
            genus,
            bound,
        } => {
            let kind = match kind {
                Kind::Nodal => TableKind::Nodal,
                Kind::Elliptic => TableKind::Elliptic,
                Kind::Genus => TableKind::Genus,
            };
            (problem, Command::Orbits { kind, genus, bound })
        }
        Cmd::Isotropic { problem, bound } => (problem, Command::Isotropic { bound }),
        Cmd::FilterK { problem } => (problem, Command::FilterK),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    let ceiling = match std::env::var("K3CONE_CEILING") {
        Ok(s) => match s.parse::<u32>() {
            Ok(c) => Some(c),
            Err(_) => {
                eprintln!("error: K3CONE_CEILING must be a non-negative integer");
                return ExitCode::from(EXIT_INVALID as u8);
            }
        },
        Err(_) => None,
    };
    let (path, command) = split(cli.command);
    let input = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let opts = RunOptions {
        seed: cli.seed,
        ceiling,
        dot: cli.dot.is_some(),
    };
    let outcome = match std::panic::catch_unwind(|| run(&command, &input, &opts)) {
        Ok(o) => o,
        Err(_) => return ExitCode::from(EXIT_INTERNAL as u8),
    };
    if let Some(r) = &outcome.report {
        let text = if cli.pretty {
            serde_json::to_string_pretty(r)
        } else {
            serde_json::to_string(r)
        };
        println!("{}", text.expect("report serializes"));
    }
    if let Some(msg) = &outcome.error {
        eprintln!("error: {msg}");
    }
    if let (Some(path), Some(dot)) = (&cli.dot, &outcome.dot) {
        if let Err(e) = std::fs::write(path, dot) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    ExitCode::from(outcome.code as u8)
}
