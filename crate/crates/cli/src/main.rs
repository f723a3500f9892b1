mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latticetri_core::fixtures::{
    self, cyclic_generators, run_cyclic_example, run_signed_pair_example, signed_pair,
    FixtureOutcome, FIXTURE_NAMES,
};
use latticetri_core::generate::{
    gen_idempotent, gen_matrix, gen_semigroup_framed, GenMode, GenSpec, IdempotentShape,
};
use latticetri_core::semigroup::semigroup_pipeline;
use latticetri_core::{Error, Rational};
use serde_json::json;

use crate::report::TOOL_VERSION;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_INTERNAL: u8 = 70;

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            e if e.is_internal() => Failure::Internal(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) | Failure::Internal(m) => m,
        }
    }
}

/// Exact ideal-triangularizability analysis for nonnegative matrices.
///
/// Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 parse or I/O
/// failure, 3 domain error (e.g. negative entries), 70 internal consistency failure.
#[derive(Parser)]
#[command(name = "latticetri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all triangularizability criteria and diagonal checks on one matrix.
    Analyze {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compare the atomic diagonal with the partition infimum (n <= 12).
        #[arg(long)]
        oracle: bool,
        /// Include the idempotent decomposition.
        #[arg(long)]
        idempotent: bool,
    },
    /// Decompose a nonnegative idempotent into canonical block form.
    Idempotent {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide common triangularizability of a finitely generated semigroup.
    Semigroup {
        /// Files holding a matrix, an array of matrices, or {"generators": [...]}.
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<PathBuf>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Generate a reproducible instance.
    Gen(Box<GenArgs>),
    /// Run the built-in counterexample fixtures.
    Fixtures {
        /// Print fixture names without running them.
        #[arg(long)]
        list: bool,
        #[command(subcommand)]
        action: Option<FixtureAction>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Infimum over all set partitions of block compressions.
    Schep {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Run the fixtures, optionally on input files written by `export`.
    Run {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Emit the full outcome as JSON instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Write the fixture input matrices to a directory.
    Export { dir: PathBuf },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    mode: GenMode,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, env = "LATTICETRI_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1/2")]
    density: Rational,
    #[arg(long, default_value = "0")]
    lo: Rational,
    #[arg(long, default_value = "3")]
    hi: Rational,
    #[arg(long, default_value_t = 4)]
    max_denominator: u32,
    /// Number of generators in semigroup-framed mode.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Idempotent mode: absolute-kernel size.
    #[arg(long)]
    kernel: Option<usize>,
    /// Idempotent mode: comma-separated rank-one part sizes.
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<usize>>,
    /// Idempotent mode: size of the trailing zero-row block.
    #[arg(long)]
    tail: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            input,
            output,
            oracle,
            idempotent,
        } => {
            let (m, provenance) = io::read_matrix(&input)?;
            let report = report::analyze(m, provenance, oracle, idempotent)?;
            io::emit(&report, output.as_ref())?;
            Ok(0)
        }
        Command::Idempotent { input, output } => {
            let (m, _) = io::read_matrix(&input)?;
            let report = report::idempotent_report(&m)?;
            io::emit(&report, output.as_ref())?;
            Ok(if report.is_idempotent {
                0
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Semigroup {
            gens,
            depth,
            output,
        } => {
            let mut mats = Vec::new();
            for path in &gens {
                mats.extend(io::read_matrices(path)?);
            }
            let verdict = semigroup_pipeline(&mats, depth)?;
            io::emit(&verdict, output.as_ref())?;
            Ok(if verdict.commonly_triangularizable {
                0
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Oracle {
            which: OracleCommand::Schep { input, output },
        } => {
            let (m, _) = io::read_matrix(&input)?;
            let report = report::schep_report(&m)?;
            io::emit(&report, output.as_ref())?;
            Ok(if report.equal { 0 } else { EXIT_NEGATIVE })
        }
        Command::Gen(args) => generate(*args),
        Command::Fixtures { list, action } => {
            if list {
                for name in FIXTURE_NAMES {
                    println!("{name}");
                }
                return Ok(0);
            }
            match action {
                None => run_fixtures(None, false),
                Some(FixtureAction::Run { dir, json }) => run_fixtures(dir, json),
                Some(FixtureAction::Export { dir }) => export_fixtures(&dir),
            }
        }
    }
}

fn generate(args: GenArgs) -> Result<u8, Failure> {
    let shape = match (args.kernel, &args.parts, args.tail) {
        (None, None, None) => None,
        (kernel, parts, tail) => Some(IdempotentShape {
            kernel: kernel.unwrap_or(0),
            parts: parts.clone().unwrap_or_default(),
            tail: tail.unwrap_or(0),
        }),
    };
    let n = match (args.n, &shape) {
        (Some(n), _) => n,
        (None, Some(s)) => s.dimension(),
        (None, None) => return Err(Failure::Domain("--n is required".into())),
    };
    let spec = GenSpec {
        n,
        density: args.density,
        value_range: (args.lo, args.hi),
        max_denominator: args.max_denominator,
        mode: args.mode,
        seed: args.seed,
        shape: if args.mode == GenMode::Idempotent {
            shape
        } else {
            None
        },
    };
    let provenance = json!({
        "tool_version": TOOL_VERSION,
        "generator": "splitmix64",
        "spec": spec,
        "k": if args.mode == GenMode::SemigroupFramed { Some(args.k) } else { None },
    });
    let value = match args.mode {
        GenMode::SemigroupFramed => json!({
            "generators": gen_semigroup_framed(&spec, args.k)?,
            "provenance": provenance,
        }),
        GenMode::Idempotent => {
            let m = gen_idempotent(&spec)?;
            with_provenance(&m, provenance)?
        }
        _ => {
            let m = gen_matrix(&spec)?;
            with_provenance(&m, provenance)?
        }
    };
    io::emit(&value, args.output.as_ref())?;
    Ok(0)
}

fn with_provenance(
    m: &latticetri_core::Matrix,
    provenance: serde_json::Value,
) -> Result<serde_json::Value, Failure> {
    let mut value = serde_json::to_value(m).map_err(|e| Failure::Internal(e.to_string()))?;
    value["provenance"] = provenance;
    Ok(value)
}

const CYCLIC_FILE: &str = "cyclic.json";
const SIGNED_PAIR_FILE: &str = "signed_pair.json";

fn export_fixtures(dir: &std::path::Path) -> Result<u8, Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Parse(format!("cannot create {}: {e}", dir.display())))?;
    let (a, b) = signed_pair();
    io::emit(
        &json!({ "generators": cyclic_generators(4) }),
        Some(&dir.join(CYCLIC_FILE)),
    )?;
    io::emit(
        &json!({ "generators": [a, b] }),
        Some(&dir.join(SIGNED_PAIR_FILE)),
    )?;
    Ok(0)
}

fn run_fixtures(dir: Option<PathBuf>, as_json: bool) -> Result<u8, Failure> {
    let outcomes: Vec<FixtureOutcome> = match dir {
        None => fixtures::run_all(),
        Some(dir) => {
            let gens = io::read_matrices(&dir.join(CYCLIC_FILE))?;
            let pair = io::read_matrices(&dir.join(SIGNED_PAIR_FILE))?;
            let [a, b] = pair.as_slice() else {
                return Err(Failure::Parse(format!(
                    "{}: expected exactly two matrices",
                    SIGNED_PAIR_FILE
                )));
            };
            vec![run_cyclic_example(&gens), run_signed_pair_example(a, b)]
        }
    };
    let all_passed = outcomes.iter().all(|o| o.passed);
    if as_json {
        io::emit(&outcomes, None)?;
    } else {
        for o in &outcomes {
            let status = if o.passed { "PASS" } else { "FAIL" };
            println!("{status} {} ({} checks)", o.name, o.checks.len());
            for c in o.failures() {
                println!("  - {}", c.name);
                println!("    expected: {}", c.expected);
                println!("    actual:   {}", c.actual);
            }
        }
    }
    Ok(if all_passed { 0 } else { EXIT_NEGATIVE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("latticetri: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
