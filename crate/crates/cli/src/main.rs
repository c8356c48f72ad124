//! `nlverify`: runs the torsion, invariant-structure and flag checks and
//! writes a deterministic report.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlverify::chart::AcsKind;

use commands::{Generate, RunConfig, DEFAULT_SWEEP};
use report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "nlverify",
    version,
    about = "Numerical checks for almost complex and invariant complex structures"
)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count: chart points for `torsion`, unitaries per flag for `flag`.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Pass threshold for `torsion` and `roundtrip` residuals.
    #[arg(long, global = true, env = "NL_TOL")]
    tol: Option<f64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion formulas and derivative identities for an operator field.
    Torsion(TorsionArgs),
    /// Integrability criterion versus subalgebra closure on pair fixtures.
    Invariant(FixtureArgs),
    /// Flag-manifold data built from projections.
    Flag(FlagArgs),
    /// Round trips between structures and subalgebras.
    Roundtrip(FixtureArgs),
    /// Every suite on built-in inputs.
    All(AllArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Generic,
    Integrable,
}

#[derive(Args, Debug)]
struct TorsionArgs {
    /// Operator-field fixture; may be repeated.
    #[arg(long, conflicts_with = "generate")]
    input: Vec<PathBuf>,
    /// Generate a field instead of reading one.
    #[arg(long)]
    generate: bool,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Kind::Generic)]
    kind: Kind,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    /// Pair fixture; may be repeated. Without it the named fixtures and a
    /// random sweep are used.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Size of the random sweep.
    #[arg(long, default_value_t = DEFAULT_SWEEP)]
    count: usize,
}

#[derive(Args, Debug)]
struct FlagArgs {
    /// Flag fixture; may be repeated.
    #[arg(long, conflicts_with = "exhaustive")]
    input: Vec<PathBuf>,
    /// Every flag of length at most 3 over algebras of matrix size at most 6.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args, Debug)]
struct AllArgs {
    #[arg(long, default_value_t = DEFAULT_SWEEP)]
    count: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig {
        seed: cli.seed,
        samples: cli.samples,
        tol: cli.tol,
        inputs: Vec::new(),
        generate: None,
        count: DEFAULT_SWEEP,
        exhaustive: false,
    };
    let mut report = Report::new();
    let name = match &cli.command {
        Command::Torsion(a) => {
            cfg.inputs = a.input.clone();
            cfg.generate = Some(Generate {
                n: a.n,
                d: a.d,
                eps: a.eps,
                kind: match a.kind {
                    Kind::Generic => AcsKind::Generic,
                    Kind::Integrable => AcsKind::Integrable,
                },
            });
            commands::torsion(&cfg, &mut report);
            "torsion"
        }
        Command::Invariant(a) => {
            cfg.inputs = a.input.clone();
            cfg.count = a.count;
            commands::invariant(&cfg, &mut report);
            "invariant"
        }
        Command::Roundtrip(a) => {
            cfg.inputs = a.input.clone();
            cfg.count = a.count;
            commands::roundtrip(&cfg, &mut report);
            "roundtrip"
        }
        Command::Flag(a) => {
            cfg.inputs = a.input.clone();
            cfg.exhaustive = a.exhaustive;
            commands::flag(&cfg, &mut report);
            "flag"
        }
        Command::All(a) => {
            cfg.count = a.count;
            commands::all(&cfg, &mut report);
            "all"
        }
    };
    let text = report.render(name);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(Outcome::BadInput.code() as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.outcome().code() as u8)
}
