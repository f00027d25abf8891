use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use holeflow::excess::{check, CheckOptions};
use holeflow::format::{parse_instance, parse_solution, print_instance, print_solution, SolutionFile};
use holeflow::generate::{generate, GenError, GenParams, Target};
use holeflow::multiflow::check_admissible;
use holeflow::oracle::{self, CutFilter, MetricFilter, OracleConfig};
use holeflow::solver::{solve, SolveError, SolveOptions, Verdict};
use holeflow::Instance;

#[derive(Parser)]
#[command(name = "holeflow", version, about = "Integer multiflows for demands on three holes of a planar graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance, check parity and print its canonical form.
    Validate { path: PathBuf },
    /// Print the excess bounds and the solvability verdict.
    Check {
        path: PathBuf,
        /// Cut bounds only.
        #[arg(long)]
        skip_metric: bool,
        /// Refuse holes whose boundary has more edges than this.
        #[arg(long)]
        max_quad: Option<usize>,
    },
    /// Find an integer multiflow or an infeasibility certificate.
    Solve {
        path: PathBuf,
        /// Solution file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the reduction trace to standard error.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        max_quad: Option<usize>,
    },
    /// Re-check a solution file against its instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Exhaustive ground truth for small instances.
    Oracle {
        path: PathBuf,
        /// Largest vertex count to enumerate.
        #[arg(long)]
        size_bound: Option<usize>,
    },
    /// Print a random Eulerian instance.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        holes: usize,
        /// Boundary length the bounded holes are widened towards.
        #[arg(long, default_value_t = 4)]
        hole_len: usize,
        #[arg(long, default_value_t = 5)]
        outer_len: usize,
        #[arg(long, default_value_t = 3)]
        demands: usize,
        #[arg(long, default_value_t = 3)]
        max_capacity: i64,
        #[arg(long, default_value_t = 3)]
        max_demand: i64,
        #[arg(long, default_value_t = Target::Any)]
        target: Target,
        #[arg(long, default_value_t = 200)]
        retries: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// How a command ended; the discriminant is the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Infeasible = 1,
    Invalid = 2,
    Cap = 3,
}

struct Failure {
    status: Status,
    error: anyhow::Error,
}

fn invalid(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: Status::Invalid,
        error: error.into(),
    }
}

fn cap(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: Status::Cap,
        error: error.into(),
    }
}

type Outcome = Result<Status, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    parse_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(invalid)
}

fn parity_report(inst: &Instance) -> Option<String> {
    let odd = inst.odd_vertices();
    if odd.is_empty() {
        return None;
    }
    let labels: Vec<String> = odd.iter().map(|&v| inst.vertex_label(v).to_string()).collect();
    Some(format!(
        "not Eulerian: capacity plus demand is odd at vertices {}",
        labels.join(" ")
    ))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(invalid),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(path: &Path) -> Outcome {
    let inst = load(path)?;
    if let Some(report) = parity_report(&inst) {
        return Err(invalid(anyhow::anyhow!(report)));
    }
    print!("{}", print_instance(&inst));
    Ok(Status::Ok)
}

fn run_check(path: &Path, skip_metric: bool, max_quad: Option<usize>) -> Outcome {
    let inst = load(path)?;
    let report = check(&inst, CheckOptions { skip_metric, max_quad }).map_err(cap)?;
    println!("{report}");
    Ok(if report.is_violated() {
        Status::Infeasible
    } else {
        Status::Ok
    })
}

fn run_solve(path: &Path, output: Option<&Path>, trace: bool, max_quad: Option<usize>) -> Outcome {
    let inst = load(path)?;
    let opts = SolveOptions {
        check: CheckOptions {
            skip_metric: false,
            max_quad,
        },
        ..SolveOptions::default()
    };
    let out = solve(&inst, opts).map_err(|e| match e {
        SolveError::Cap(_) => cap(e),
        SolveError::NotEulerian(_) => invalid(e),
        SolveError::Internal(_) => Failure {
            status: Status::Invalid,
            error: anyhow::anyhow!(e).context("solver failed"),
        },
    })?;
    if trace {
        for event in &out.trace.events {
            eprintln!("{event}");
        }
        eprintln!("iterations {}", out.trace.iterations);
    }
    emit(&print_solution(&SolutionFile::from_verdict(&out.verdict)), output)?;
    Ok(match out.verdict {
        Verdict::Solved(_) => Status::Ok,
        Verdict::Infeasible(_) => Status::Infeasible,
    })
}

fn verify(instance: &Path, solution: &Path) -> Outcome {
    let inst = load(instance)?;
    let text = read(solution)?;
    let sol = parse_solution(&text)
        .with_context(|| format!("parsing {}", solution.display()))
        .map_err(invalid)?;
    match sol {
        SolutionFile::Solved(flow) => {
            let report = check_admissible(&inst, &flow);
            if report.is_admissible() {
                println!("admissible: {} paths", flow.entries.len());
                return Ok(Status::Ok);
            }
            let mut msg = String::from("solution is not admissible");
            for (e, load, c) in &report.capacity_violations {
                let _ = write!(msg, "\nedge {e} carries {load} over capacity {c}");
            }
            for (s, t, d, f) in report.demand_mismatches() {
                let _ = write!(msg, "\npair {s} {t} demands {d}, routed {f}");
            }
            for m in &report.malformed {
                let _ = write!(msg, "\n{m}");
            }
            Err(invalid(anyhow::anyhow!(msg)))
        }
        SolutionFile::Infeasible(cert) => {
            let report = check(&inst, CheckOptions::default()).map_err(cap)?;
            if report.is_violated() {
                println!("infeasible, certificate excess {}, checker minimum {}", cert.excess, report.min());
                Ok(Status::Infeasible)
            } else {
                Err(invalid(anyhow::anyhow!(
                    "certificate claims excess {} but every bound is nonnegative",
                    cert.excess
                )))
            }
        }
    }
}

fn run_oracle(path: &Path, size_bound: Option<usize>) -> Outcome {
    let inst = load(path)?;
    let cfg = match size_bound {
        Some(b) => OracleConfig {
            cut_bound: b,
            metric_bound: b,
        },
        None => OracleConfig::default(),
    };
    let cuts = [
        ("cut all", CutFilter::All),
        ("cut regular", CutFilter::Regular),
        ("cut semi-regular", CutFilter::SemiRegular),
    ];
    for (name, filter) in cuts {
        let m = oracle::oracle_cut_min(&inst, filter, cfg.cut_bound).map_err(cap)?;
        match m.witness {
            Some(w) => println!("{name} {} at {w}", m.value),
            None => println!("{name} {}", m.value),
        }
    }
    if inst.hole_count() == 3 {
        let metrics = [
            ("metric all", MetricFilter::All),
            ("metric semi-regular", MetricFilter::SemiRegular),
            ("metric regular", MetricFilter::Regular),
        ];
        for (name, filter) in metrics {
            let m = oracle::oracle_metric_min(&inst, filter, cfg.metric_bound).map_err(cap)?;
            match m.witness {
                Some(w) => println!("{name} {} at {w}", m.value),
                None => println!("{name} {}", m.value),
            }
        }
    }
    let solvable = oracle::oracle_solvable(&inst, cfg).map_err(cap)?;
    println!("verdict {}", if solvable { "SOLVABLE" } else { "INFEASIBLE" });
    Ok(if solvable { Status::Ok } else { Status::Infeasible })
}

fn run_gen(seed: u64, p: &GenParams, output: Option<&Path>) -> Outcome {
    let inst = generate(seed, p).map_err(|e| match e {
        GenError::Unreachable { .. } => cap(e),
        _ => invalid(e),
    })?;
    emit(&print_instance(&inst), output)?;
    Ok(Status::Ok)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Check {
            path,
            skip_metric,
            max_quad,
        } => run_check(&path, skip_metric, max_quad),
        Command::Solve {
            path,
            output,
            trace,
            max_quad,
        } => run_solve(&path, output.as_deref(), trace, max_quad),
        Command::Verify { instance, solution } => verify(&instance, &solution),
        Command::Oracle { path, size_bound } => run_oracle(&path, size_bound),
        Command::Gen {
            seed,
            n,
            holes,
            hole_len,
            outer_len,
            demands,
            max_capacity,
            max_demand,
            target,
            retries,
            output,
        } => {
            let p = GenParams {
                n,
                holes,
                hole_len,
                outer_len,
                demands,
                max_capacity,
                max_demand,
                target,
                retries,
            };
            run_gen(seed, &p, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.status as u8)
        }
    }
}
