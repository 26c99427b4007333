//! `conebb`: run the cone branch and bound solver on a registered test problem.
//!
//! Exit codes: 0 converged, 1 I/O failure, 2 iteration limit reached,
//! 3 infeasible or empty collection, 4 invalid configuration.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conebb::{solve, IterationTrace, SolveError, SolveResult64, Termination};

use config::{RunArgs, RunConfig};
use output::Outcome;

const EXIT_IO: u8 = 1;
const EXIT_MAX_ITERS: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Parser)]
#[command(name = "conebb", version, about = "Cone dominance-based branch and bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and write result.json, trace.csv and front.csv.
    Run(RunArgs),
    /// Solve the same problem under two configurations and write compare.csv.
    Compare {
        /// Flags of the first run, e.g. "--problem tp1 --epsilon 0.75".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, env = "CONEBB_THREADS")]
        threads: Option<usize>,
    },
}

/// Parses the flags of one side of `compare`.
#[derive(Parser)]
#[command(name = "conebb-run", no_binary_name = true)]
struct SideArgs {
    #[command(flatten)]
    run: RunArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(err: anyhow::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{err:#}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Compare { a, b, out, threads } => cmd_compare(&a, &b, out, threads),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<u8, Failure> {
    let cfg = args.resolve().map_err(Failure::invalid)?;
    let (code, _) = execute(&cfg, &cfg.out)?;
    Ok(code)
}

fn cmd_compare(a: &str, b: &str, out: PathBuf, threads: Option<usize>) -> Result<u8, Failure> {
    let parse = |flags: &str| -> Result<RunConfig, Failure> {
        let side = SideArgs::try_parse_from(flags.split_whitespace())
            .map_err(|e| Failure::invalid(e.to_string()))?;
        let mut cfg = side.run.resolve().map_err(Failure::invalid)?;
        cfg.threads = cfg.threads.or(threads);
        Ok(cfg)
    };
    let cfg_a = parse(a)?;
    let cfg_b = parse(b)?;
    if cfg_a.problem.name() != cfg_b.problem.name() {
        return Err(Failure::invalid(format!(
            "compare needs the same problem, got {} and {}",
            cfg_a.problem.name(),
            cfg_b.problem.name()
        )));
    }
    let (code_a, trace_a) = execute(&cfg_a, &out.join("a"))?;
    let (code_b, trace_b) = execute(&cfg_b, &out.join("b"))?;
    output::write_compare(&out.join("compare.csv"), &trace_a, &trace_b).map_err(Failure::io)?;
    Ok(code_a.max(code_b))
}

/// Solves, writes the run files into `dir` and returns the exit code and trace.
fn execute(cfg: &RunConfig, dir: &std::path::Path) -> Result<(u8, Vec<IterationTrace<f64>>), Failure> {
    let solved = run_solver(cfg).map_err(Failure::invalid)?;
    match solved {
        Ok(res) => {
            for w in &res.warnings {
                eprintln!("warning: {w}");
            }
            output::write_run(dir, cfg, &Outcome::Solved(&res)).map_err(Failure::io)?;
            let code = match res.status {
                Termination::Converged => 0,
                Termination::IterationLimit => EXIT_MAX_ITERS,
            };
            Ok((code, res.trace))
        }
        Err(SolveError::Invalid(e)) => Err(Failure::invalid(e.to_string())),
        Err(err) => {
            let message = err.to_string();
            let (status, trace) = match err {
                SolveError::Exhausted { trace, .. } => ("empty", trace),
                SolveError::NoFeasiblePoint { trace, .. } => ("infeasible", trace),
                SolveError::Invalid(_) => unreachable!(),
            };
            eprintln!("error: {message}");
            output::write_run(
                dir,
                cfg,
                &Outcome::Failed {
                    status,
                    message,
                    trace: &trace,
                },
            )
            .map_err(Failure::io)?;
            Ok((EXIT_INFEASIBLE, trace))
        }
    }
}

fn run_solver(cfg: &RunConfig) -> Result<Result<SolveResult64, SolveError<f64>>, String> {
    match cfg.threads {
        None => Ok(solve(&cfg.problem, &cfg.params)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(pool.install(|| solve(&cfg.problem, &cfg.params)))
        }
    }
}
