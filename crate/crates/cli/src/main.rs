use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodstein_core::classify::classify;
use goodstein_core::hierarchy::{Hierarchy, HierarchySpec};
use goodstein_core::nat::{parse_nat, Limits, Nat};
use goodstein_core::ordinal::{big_f, compare, fs as fund, parse, parse_ext, render, sq_fs_ext};
use goodstein_core::process::{run, verify_majorization, CheckLevel, End, RunConfig};
use goodstein_core::upgrade::{good_successor_check, UpgradeSession};
use goodstein_core::Error;

#[derive(Parser)]
#[command(name = "goodstein", version, about = "Multi-base Goodstein processes and their ordinal certificates")]
struct Cli {
    /// Largest admissible number, in decimal digits.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    digit_cap: u64,
    /// Iteration budget.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    step_cap: u64,
    /// Candidate budget for searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    search_cap: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a process and write its trace as JSON lines.
    Run {
        #[command(flatten)]
        run: RunArgs,
        /// Trace file; stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Checks::Descent)]
        checks: Checks,
    },
    /// Check a property and report violations.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Classify a hierarchy spec and print the report JSON.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        /// Horizon for explicit and successor specs.
        #[arg(long, default_value = "1000")]
        probe_bound: String,
    },
    /// Evaluate ordinal terms.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Hierarchy spec JSON file.
    #[arg(long)]
    hierarchy: PathBuf,
    #[arg(long)]
    start: String,
    #[arg(long, default_value_t = 100)]
    max_steps: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Checks {
    None,
    Descent,
    Preservation,
}

#[derive(Subcommand)]
enum Verify {
    /// Every step descends.
    Descent(RunArgs),
    /// Every step descends and preserves the ordinal under upgrade.
    Preservation(RunArgs),
    /// Fundamental-sequence majorization against the ouroboros successor.
    Majorization {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// The good-successor conditions up to a bound.
    Goodsucc {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        bound: String,
    },
}

#[derive(Subcommand)]
enum OrdOp {
    /// Print the normal form.
    Eval { term: String },
    /// Print LT, EQ or GT.
    Compare { a: String, b: String },
    /// x[θ].
    Fs { x: String, theta: String },
    /// x[[ι]]; `x` may be TOP.
    Sqfs { x: String, iota: u64 },
    /// F_α(n).
    #[command(name = "F")]
    BigF { alpha: String, n: u64 },
}

enum Failure {
    Violation(String),
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Invalid(_) => Failure::Usage(e.to_string()),
            Error::Inconclusive(_) => Failure::Budget(e.to_string()),
            e if e.is_budget() => Failure::Budget(e.to_string()),
            e => Failure::Violation(e.to_string()),
        }
    }
}

type Out = Result<(), Failure>;

fn read_spec(path: &Path) -> Result<HierarchySpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(HierarchySpec::from_json(&text)?)
}

fn nat_arg(s: &str) -> Result<Nat, Failure> {
    Ok(parse_nat(s)?)
}

enum Sink<'a> {
    File(&'a Path),
    Stdout,
    Discard,
}

fn run_cmd(args: &RunArgs, checks: CheckLevel, limits: Limits, sink: Sink) -> Out {
    let mut cfg = RunConfig::new(read_spec(&args.hierarchy)?, nat_arg(&args.start)?);
    cfg.max_steps = args.max_steps;
    cfg.limits = limits;
    cfg.checks = checks;
    let t = run(&cfg)?;
    let lines = t.to_json_lines();
    match sink {
        Sink::File(p) => fs::write(p, &lines).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        Sink::Stdout => print!("{lines}"),
        Sink::Discard => {}
    }
    let end = match &t.end {
        End::Zero => "zero".to_string(),
        End::MaxSteps => "max-steps".to_string(),
        End::Blowup(m) => format!("blow-up ({m})"),
    };
    eprintln!("{} steps, end: {end}", t.steps.len());
    if !t.passed() {
        let bad: Vec<_> = t.steps.iter().filter(|s| !s.passed()).map(|s| s.i.to_string()).collect();
        return Err(Failure::Violation(format!("checks failed at steps {}", bad.join(", "))));
    }
    match t.end {
        End::Blowup(m) => Err(Failure::Budget(m)),
        _ => Ok(()),
    }
}

fn violations(passed: bool, list: &[String]) -> Out {
    for v in list {
        println!("{v}");
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} violations", list.len())))
    }
}

fn execute(cli: Cli) -> Out {
    let limits = Limits { digit_cap: cli.digit_cap, step_cap: cli.step_cap, search_cap: cli.search_cap };
    match cli.cmd {
        Cmd::Run { run, trace, checks } => {
            let level = match checks {
                Checks::None => CheckLevel::None,
                Checks::Descent => CheckLevel::Descent,
                Checks::Preservation => CheckLevel::Preservation,
            };
            let sink = trace.as_deref().map_or(Sink::Stdout, Sink::File);
            run_cmd(&run, level, limits, sink)
        }
        Cmd::Verify { what } => match what {
            Verify::Descent(a) => run_cmd(&a, CheckLevel::Descent, limits, Sink::Discard),
            Verify::Preservation(a) => run_cmd(&a, CheckLevel::Preservation, limits, Sink::Discard),
            Verify::Majorization { hierarchy, i, n_max } => {
                let b = Hierarchy::new(&read_spec(&hierarchy)?, limits)?;
                let r = verify_majorization(b, i, n_max)?;
                println!("checked {}", r.checked);
                violations(r.passed, &r.violations)
            }
            Verify::Goodsucc { source, target, bound } => {
                let b = Hierarchy::new(&read_spec(&source)?, limits)?;
                let c = Hierarchy::new(&read_spec(&target)?, limits)?;
                let mut s = UpgradeSession::new(b, c)?;
                let r = good_successor_check(&mut s, &nat_arg(&bound)?)?;
                violations(r.passed, &r.violations)
            }
        },
        Cmd::Classify { spec, probe_bound } => {
            let r = classify(&read_spec(&spec)?, &nat_arg(&probe_bound)?)?;
            println!("{}", r.report());
            Ok(())
        }
        Cmd::Ord { op } => {
            let out = match op {
                OrdOp::Eval { term } => render(&parse(&term)?),
                OrdOp::Compare { a, b } => match compare(&parse(&a)?, &parse(&b)?) {
                    std::cmp::Ordering::Less => "LT".into(),
                    std::cmp::Ordering::Equal => "EQ".into(),
                    std::cmp::Ordering::Greater => "GT".into(),
                },
                OrdOp::Fs { x, theta } => render(&fund(&parse(&x)?, &parse(&theta)?)),
                OrdOp::Sqfs { x, iota } => render(&sq_fs_ext(&parse_ext(&x)?, iota)),
                OrdOp::BigF { alpha, n } => big_f(&parse_ext(&alpha)?, n, limits.step_cap)?.to_string(),
            };
            println!("{out}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(3)
        }
    }
}
