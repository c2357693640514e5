//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests; the `minmaxcc` binary is a thin
//! wrapper around it.
//!
//! Exit codes: 0 success, 1 usage, parse or validation error, 2 the solver
//! hit an infeasibility, size or iteration limit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, Suite};
use crate::cc_complete;
use crate::error::{Error, Result};
use crate::gen;
use crate::graph::{max_disagreement, MulticutInstance, Partition, SignedGraph, TOL};
use crate::io::{self, Instance};
use crate::multicut;
use crate::oracle;
use crate::reduction;

#[derive(Parser, Debug)]
#[command(name = "minmaxcc", version, about = "Min-max correlation clustering and multicut")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the approximation pipeline.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Exhaustive optimum (small instances only).
    Exact {
        #[arg(value_parser = ["cc", "mc"])]
        kind: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Write the multicut instance of a signed graph.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Generate a seeded instance.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run a benchmark suite and write its CSV report.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fill the wall_ms column (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SolveCmd {
    Cc(SolveArgs),
    Mc {
        #[command(flatten)]
        args: SolveArgs,
        /// Every part must hold a terminal; needs `--k`.
        #[arg(long, requires = "k")]
        constrained: bool,
    },
}

#[derive(Args, Debug)]
struct GenOut {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    RandomSigned {
        n: usize,
        p: f64,
        #[command(flatten)]
        o: GenOut,
    },
    Planted {
        n: usize,
        k: usize,
        flip: f64,
        #[command(flatten)]
        o: GenOut,
    },
    GridMc {
        rows: usize,
        cols: usize,
        npairs: usize,
        #[command(flatten)]
        o: GenOut,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::InvalidInstance(_)
        | Error::InvalidPartition(_)
        | Error::OutOfRange { .. }
        | Error::NotComplete => 1,
        _ => 2,
    }
}

/// Parse `args` (program name first) and execute. Results go to `out` when
/// no output file is given; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.cmd, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn read_signed(path: &Path) -> Result<SignedGraph> {
    match io::parse_instance(&read(path)?)? {
        Instance::Signed(g) => Ok(g),
        Instance::Multicut(_) => Err(Error::InvalidInstance("expected a signed graph (sg or sgc)".into())),
    }
}

fn read_mc(path: &Path) -> Result<MulticutInstance> {
    match io::parse_instance(&read(path)?)? {
        Instance::Multicut(mc) => Ok(mc),
        Instance::Signed(_) => Err(Error::InvalidInstance("expected a multicut instance (mc)".into())),
    }
}

/// Complete unit graphs take the direct pipeline; anything else goes through
/// the multicut reduction.
pub fn solve_cc(g: &SignedGraph, seed: u64, k: Option<usize>) -> Result<Partition> {
    if g.is_complete() {
        return Ok(cc_complete::solve_cc_complete(g, seed, k)?.0);
    }
    let (mc, map) = reduction::cc_to_multicut(g);
    let (p, _) = multicut::solve_multicut(&mc, seed, k)?;
    reduction::partition_to_clustering(&map, &p)
}

fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Cmd::Solve(SolveCmd::Cc(a)) => {
            let g = read_signed(&a.input)?;
            let c = solve_cc(&g, a.seed, a.k)?;
            emit(&io::write_solution(&c, max_disagreement(&g, &c)), a.out.as_deref(), out)
        }
        Cmd::Solve(SolveCmd::Mc { args: a, constrained }) => {
            let mc = read_mc(&a.input)?;
            let (p, _) = if constrained {
                multicut::solve_constrained_multicut(&mc, a.k.unwrap_or(1), a.seed)?
            } else {
                multicut::solve_multicut(&mc, a.seed, a.k)?
            };
            emit(&io::write_solution(&p, mc.max_boundary(&p)), a.out.as_deref(), out)
        }
        Cmd::Exact { kind, input } => {
            let (opt, p) = if kind == "cc" {
                oracle::exact_cc(&read_signed(&input)?)?
            } else {
                oracle::exact_multicut(&read_mc(&input)?)?
            };
            writeln!(out, "OPT {opt}")?;
            for part in &p.parts {
                let ids: Vec<String> = part.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", ids.join(" "))?;
            }
            Ok(())
        }
        Cmd::Reduce { input, out: path } => {
            let (mc, _) = reduction::cc_to_multicut(&read_signed(&input)?);
            emit(&io::write_mc(&mc), path.as_deref(), out)
        }
        Cmd::Verify { instance, solution } => verify(&read(&instance)?, &read(&solution)?, out),
        Cmd::Gen(g) => {
            let (text, o) = match g {
                GenCmd::RandomSigned { n, p, o } => (io::write_signed_complete(&gen::random_signed(n, p, o.seed)?)?, o),
                GenCmd::Planted { n, k, flip, o } => (io::write_signed_complete(&gen::planted(n, k, flip, o.seed)?)?, o),
                GenCmd::GridMc { rows, cols, npairs, o } => (io::write_mc(&gen::grid_mc(rows, cols, npairs, o.seed)?), o),
            };
            emit(&text, o.out.as_deref(), out)
        }
        Cmd::Bench { suite, seed, csv, timing } => {
            let suite: Suite = suite.parse()?;
            let rows = bench::run_bench(suite, seed, timing)?;
            emit(&bench::to_csv(&rows), csv.as_deref(), out)
        }
    }
}

/// Validate a solution against its instance and recompute its cost. Prints
/// `OK max_cost <value>` on success.
pub fn verify(instance: &str, solution: &str, out: &mut dyn Write) -> Result<()> {
    let inst = io::parse_instance(instance)?;
    let sol = io::parse_solution(solution)?;
    let p = &sol.partition;
    io::check_partition(inst.n(), p)?;
    let cost = match &inst {
        Instance::Signed(g) => max_disagreement(g, p),
        Instance::Multicut(mc) => {
            let bad: Vec<String> = p
                .parts
                .iter()
                .filter(|part| mc.vio(part) > 0)
                .map(|part| format!("part {part:?} holds a source-sink pair"))
                .collect();
            if !bad.is_empty() {
                return Err(Error::InvalidPartition(bad));
            }
            mc.max_boundary(p)
        }
    };
    if let Some(declared) = sol.max_cost {
        if (declared - cost).abs() > TOL.max(1e-6 * cost.abs()) {
            return Err(Error::InvalidPartition(vec![format!("declared max_cost {declared}, actual {cost}")]));
        }
    }
    writeln!(out, "OK max_cost {cost}")?;
    Ok(())
}
