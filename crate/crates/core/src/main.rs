use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use paspc::graph::Heuristic;
use paspc::io::{parse_program, read_td, write_td};
use paspc::{oracle, solve, AlgorithmChoice, Error, Program, SolveOptions, TdSource};

#[derive(Parser)]
#[command(name = "paspc", version, about = "Projected answer-set counting over tree decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the answer sets of a ground program, projected onto a set of atoms.
    Solve(SolveArgs),
}

#[derive(Args)]
#[group(id = "proj", multiple = false)]
struct Projection {
    /// Comma-separated projection atoms; replaces any #project directive.
    #[arg(long, value_delimiter = ',')]
    project: Option<Vec<String>>,
    /// Project onto every atom (plain answer-set counting).
    #[arg(long)]
    project_all: bool,
    /// Project onto no atom (1 if consistent, 0 otherwise).
    #[arg(long)]
    project_none: bool,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    projection: Projection,
    #[arg(long, default_value = "auto", value_parser = parse_choice)]
    algorithm: AlgorithmChoice,
    /// `min-fill`, `min-degree`, or `file:<path>` for a PACE .td file.
    #[arg(long, default_value = "min-fill")]
    td: String,
    /// Tie-break seed for the decomposition heuristic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print run statistics as JSON on stderr.
    #[arg(long)]
    stats: bool,
    /// Write the tree decomposition used in PACE format.
    #[arg(long)]
    emit_td: Option<PathBuf>,
    /// Write table dumps into this directory.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Compare against brute-force enumeration.
    #[arg(long)]
    oracle_check: bool,
}

fn parse_choice(s: &str) -> Result<AlgorithmChoice, String> {
    s.parse()
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn fail(code: u8, error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code,
        error: error.into(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::InvalidTd(_) => 3,
        Error::ClassMismatch { .. } => 4,
        _ => 1,
    }
}

fn projection(program: &Program, args: &Projection) -> Result<Option<BTreeSet<paspc::Atom>>, Failure> {
    if args.project_all {
        return Ok(Some(program.atom_table().atoms().collect()));
    }
    if args.project_none {
        return Ok(Some(BTreeSet::new()));
    }
    let Some(names) = &args.project else { return Ok(None) };
    let mut set = BTreeSet::new();
    for name in names.iter().map(|n| n.trim()).filter(|n| !n.is_empty()) {
        let atom = program
            .atom(name)
            .ok_or_else(|| fail(2, anyhow!("projection atom `{name}` does not occur in the program")))?;
        set.insert(atom);
    }
    Ok(Some(set))
}

fn run_solve(args: SolveArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))
        .map_err(|e| fail(1, e))?;
    let mut program = parse_program(&text)
        .map_err(|d| fail(2, anyhow!("{}:{d}", args.file.display())))?;
    if let Some(p) = projection(&program, &args.projection)? {
        program = program.with_projection(p);
    }

    let td = match args.td.strip_prefix("file:") {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {path}"))
                .map_err(|e| fail(3, e))?;
            let td = read_td(&text, program.num_atoms()).map_err(|d| fail(3, anyhow!("{path}:{d}")))?;
            TdSource::Given(td)
        }
        None => TdSource::Heuristic(args.td.parse::<Heuristic>().map_err(|e| fail(1, anyhow!(e)))?),
    };
    let opts = SolveOptions {
        algorithm: args.algorithm,
        td,
        seed: args.seed,
        trace: args.trace.is_some(),
    };
    let solution = solve(&program, &opts).map_err(|e| fail(exit_code(&e), e))?;

    if let Some(path) = &args.emit_td {
        fs::write(path, write_td(&solution.td))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| fail(1, e))?;
    }
    if let (Some(dir), Some(trace)) = (&args.trace, &solution.trace) {
        let write = |name: &str, body: &str| {
            fs::write(dir.join(name), body).with_context(|| format!("writing {}", dir.join(name).display()))
        };
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .and_then(|_| write("tables.txt", &trace.tables))
            .and_then(|_| write("proj.txt", &trace.proj))
            .and_then(|_| write("decomposition.td", &write_td(&solution.td)))
            .map_err(|e| fail(1, e))?;
    }
    if args.stats {
        let json = serde_json::to_string(&solution.stats).map_err(|e| fail(1, e))?;
        eprintln!("{json}");
    }
    if args.oracle_check {
        let expected = oracle::projected_count(&program, program.projection()).map_err(|e| fail(1, e))?;
        if expected != solution.count {
            println!("c {}", solution.count);
            return Err(fail(
                5,
                anyhow!("oracle mismatch: dynamic programming counted {}, brute force counted {expected}", solution.count),
            ));
        }
    }
    println!("c {}", solution.count);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
