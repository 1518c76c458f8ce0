use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use intersect_nd::derivation::{parse_derivation, render_latex, render_latex_fragment};
use intersect_nd::oracle::{crosscheck_characterization, infer_with, GraphBudgets, SearchBounds, SearchOptions};
use intersect_nd::subject_reduction::{
    leftmost_subject_reduce, normalize_by_leftmost_with, subject_reduce, NormalizeOptions, SRError, SRResult,
    DEFAULT_STEP_BUDGET,
};
use intersect_nd::syntax::{parse_term, pretty_term_unicode};
use intersect_nd::{Derivation, SystemId, TermPath};

/// Check, reduce and normalize typing derivations of the intersection type
/// systems D and DΩ.
#[derive(Parser)]
#[command(name = "intersect-nd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation and print its conclusion.
    Check {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = System::D)]
        system: System,
    },
    /// Perform one derivation-carrying β-step.
    Reduce(ReduceArgs),
    /// Normalize by leftmost reduction, carrying the derivation along.
    Normalize {
        #[command(flatten)]
        io: Io,
        /// Write the full ↝ trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Maximum number of ↝ steps.
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Search for a derivation of a term within bounds.
    Infer {
        #[command(flatten)]
        io: Io,
        /// Term given inline instead of read from INPUT.
        #[arg(short, long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = System::D)]
        system: System,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Cross-check the characterization theorems over all closed terms.
    Sweep {
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, default_value_t = 10_000)]
        node_budget: usize,
        #[arg(long, default_value_t = 100_000)]
        step_budget: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a derivation as a bussproofs proof tree.
    Render {
        #[command(flatten)]
        io: Io,
        /// Emit a complete LaTeX document instead of a fragment.
        #[arg(long)]
        standalone: bool,
    },
}

#[derive(Args)]
struct Io {
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Output file; standard output by default.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("redex").required(true).args(["path", "leftmost", "weak_head"])))]
struct ReduceArgs {
    #[command(flatten)]
    io: Io,
    /// Redex position in the subject, e.g. `root` or `fun.body.arg`.
    #[arg(long)]
    path: Option<TermPath>,
    /// Contract the leftmost redex.
    #[arg(long)]
    leftmost: bool,
    /// Contract the weak-head redex.
    #[arg(long)]
    weak_head: bool,
    /// Write the ↝ trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 12)]
    max_type_size: usize,
    #[arg(long, default_value_t = 2)]
    max_and: usize,
    #[arg(long, default_value_t = 20)]
    max_depth: usize,
    /// Unification attempts before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    time_budget: usize,
}

impl BoundsArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_type_size: self.max_type_size,
            max_and_per_var: self.max_and,
            max_depth: self.max_depth,
            time_budget: self.time_budget,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    D,
    Domega,
}

impl From<System> for SystemId {
    fn from(s: System) -> Self {
        match s {
            System::D => SystemId::D,
            System::Domega => SystemId::DOmega,
        }
    }
}

/// Exit status with the message already formatted.
enum Failure {
    /// The input was understood but the operation failed.
    Semantic(String),
    /// Unreadable or malformed input.
    Usage(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SRError> for Failure {
    fn from(e: SRError) -> Self {
        Failure::Semantic(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn read_derivation(path: &Path) -> Result<Derivation, Failure> {
    parse_derivation(&read_input(path)?).map_err(|e| Failure::Usage(e.to_string()))
}

fn check(io: &Io, system: System) -> Result<(), Failure> {
    let d = read_derivation(&io.input)?;
    match d.check(system.into()) {
        Ok(j) => write_output(io.output.as_deref(), &format!("{j} ⊢ from {}\n", d.context())),
        Err(e) => Err(Failure::Semantic(format!("{} at {}", e.code, e.path))),
    }
}

fn reduce(args: &ReduceArgs) -> Result<(), Failure> {
    let d = read_derivation(&args.io.input)?;
    let result: SRResult = if let Some(path) = &args.path {
        subject_reduce(&d, path)?
    } else if args.leftmost {
        leftmost_subject_reduce(&d)?
    } else {
        let path = d
            .subject()
            .weak_head_redex()
            .ok_or_else(|| Failure::Semantic("NotARedex: subject has no weak-head redex".to_string()))?;
        subject_reduce(&d, &path)?
    };
    if let Some(trace) = &args.trace {
        write_output(Some(trace), &result.trace.serialize())?;
    }
    write_output(args.io.output.as_deref(), &format!("{}\n", result.derivation))
}

fn normalize(io: &Io, trace: Option<&Path>, budget: u64) -> Result<(), Failure> {
    let d = read_derivation(&io.input)?;
    let options = NormalizeOptions {
        budget: usize::try_from(budget).unwrap_or(usize::MAX),
        cancel: None,
    };
    let n = normalize_by_leftmost_with(&d, &options)?;
    if let Some(path) = trace {
        write_output(Some(path), &n.trace.serialize())?;
    }
    let report = format!(
        "normal: {}\nsteps: {}\nis_system_d: {}\nderivation: {}\n",
        pretty_term_unicode(&n.normal),
        n.leftmost_steps,
        n.is_system_d,
        n.derivation
    );
    write_output(io.output.as_deref(), &report)
}

fn infer(io: &Io, expr: Option<&str>, system: System, bounds: &BoundsArgs) -> Result<(), Failure> {
    let text = match expr {
        Some(e) => e.to_string(),
        None => read_input(&io.input)?,
    };
    let t = parse_term(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let outcome = infer_with(&t, system.into(), &bounds.bounds(), SearchOptions::default());
    match outcome.derivation {
        Some(d) => write_output(io.output.as_deref(), &format!("{d}\n")),
        None => Err(Failure::Semantic("no derivation within bounds".to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { io, system } => check(io, *system),
        Command::Reduce(args) => reduce(args),
        Command::Normalize { io, trace, budget } => normalize(io, trace.as_deref(), *budget),
        Command::Infer {
            io,
            expr,
            system,
            bounds,
        } => infer(io, expr.as_deref(), *system, bounds),
        Command::Sweep {
            max_size,
            bounds,
            node_budget,
            step_budget,
            output,
        } => {
            let budgets = GraphBudgets {
                node_budget: *node_budget,
                step_budget: *step_budget,
            };
            let report = crosscheck_characterization(*max_size, &bounds.bounds(), &budgets);
            write_output(output.as_deref(), &report.to_string()).and_then(|()| {
                let s = report.summary;
                if s.soundness_violations + s.leftmost_violations > 0 {
                    Err(Failure::Semantic("characterization violations found".to_string()))
                } else {
                    Ok(())
                }
            })
        }
        Command::Render { io, standalone } => read_derivation(&io.input).and_then(|d| {
            let tex = if *standalone { render_latex(&d) } else { render_latex_fragment(&d) };
            write_output(io.output.as_deref(), &tex)
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
