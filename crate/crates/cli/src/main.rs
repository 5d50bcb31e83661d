use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asyncsub::ast::{fragments, parse, SessionType};
use asyncsub::cfsm::{build_cfsm, to_dot};
use asyncsub::queue_machine::{parse_machine, reduction, run, trace, QueueMachine, RunOutcome};
use asyncsub::subtyping::{decidable_fragment, oracle_check, CheckResult, Checker, OracleVerdict};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Asynchronous session subtyping checker.
#[derive(Parser)]
#[command(name = "asyncsub", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether the left type is an asynchronous subtype of the right one.
    Check {
        left: PathBuf,
        right: PathBuf,
        /// Defaults to `decide` inside the decidable fragments, `semi` otherwise.
        #[arg(long, value_enum)]
        algo: Option<Algo>,
        /// Rule application budget (pair budget for `oracle`).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: Option<u64>,
        /// Print every rule application before the verdict.
        #[arg(long)]
        trace: bool,
        /// Print the verdict as a JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Report which fragments a type belongs to.
    Classify { file: PathBuf },
    /// Queue machine commands.
    Qm {
        #[command(subcommand)]
        command: QmCommand,
    },
    /// Write the CFSM of a type in Graphviz format.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QmCommand {
    /// Run a machine on an input word.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
    },
    /// Encode a machine and an input word as a pair of session types.
    Encode {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        out_control: Option<PathBuf>,
        #[arg(long)]
        out_queue: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Semi,
    Decide,
    Oracle,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Semi => "semi",
            Algo::Decide => "decide",
            Algo::Oracle => "oracle",
        })
    }
}

const DEFAULT_SEMI_FUEL: u64 = 100_000;
const DEFAULT_ORACLE_PAIRS: u64 = 10_000;

/// Exit codes: 0 positive answer, 1 negative answer, 2 undetermined, 3 error.
#[derive(Clone, Copy)]
enum Answer {
    Yes,
    No,
    Unknown,
}

impl From<Answer> for ExitCode {
    fn from(a: Answer) -> ExitCode {
        ExitCode::from(match a {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
        })
    }
}

struct Failure(String);

impl<E: fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {}", path.display(), e)))
}

fn read_type(path: &Path) -> Result<SessionType, Failure> {
    parse(&read(path)?).map_err(|e| Failure(format!("{}:{}", path.display(), e)))
}

fn read_machine(path: &Path) -> Result<QueueMachine, Failure> {
    parse_machine(&read(path)?).map_err(|e| Failure(format!("{}: {}", path.display(), e)))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {}", path.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn check(
    t: &SessionType,
    s: &SessionType,
    algo: Option<Algo>,
    fuel: Option<u64>,
    show_trace: bool,
    as_json: bool,
) -> Result<Answer, Failure> {
    let algo = algo.unwrap_or(if decidable_fragment(t, s).is_ok() { Algo::Decide } else { Algo::Semi });
    eprintln!("algo: {}", algo);
    if algo == Algo::Oracle {
        let bound = fuel.unwrap_or(DEFAULT_ORACLE_PAIRS) as usize;
        let (verdict, answer, pairs) = match oracle_check(t, s, bound) {
            OracleVerdict::Subtype { pairs } => ("subtype", Answer::Yes, Some(pairs)),
            OracleVerdict::NotSubtype { witness } => {
                if show_trace {
                    println!("witness | {} | {}", witness.0, witness.1);
                }
                ("not a subtype", Answer::No, None)
            }
            OracleVerdict::Inconclusive { pairs } => ("inconclusive", Answer::Unknown, Some(pairs)),
        };
        if as_json {
            let v = json!({"verdict": verdict, "rule_applications": null, "sigma_max": null, "pairs": pairs, "algo": "oracle"});
            println!("{}", v);
        } else {
            println!("{}", verdict);
        }
        return Ok(answer);
    }
    let checker = match algo {
        Algo::Decide => {
            decidable_fragment(t, s)?;
            Checker::terminating().with_fuel(fuel.unwrap_or(u64::MAX))
        }
        _ => Checker::semi().with_fuel(fuel.unwrap_or(DEFAULT_SEMI_FUEL)),
    };
    let result = checker.with_trace(show_trace).run(t, s);
    if show_trace {
        for e in &result.trace().entries {
            println!("{}", e);
        }
        if let CheckResult::NotSubtype { failing, .. } = &result {
            println!("stuck | {}", failing);
        }
    }
    let stats = result.stats();
    if as_json {
        let v = json!({
            "verdict": result.verdict().to_string(),
            "rule_applications": stats.rule_applications,
            "sigma_max": stats.sigma_max,
            "algo": algo.to_string(),
        });
        println!("{}", v);
    } else {
        println!("{}", result.verdict());
    }
    Ok(match result {
        CheckResult::Subtype { .. } => Answer::Yes,
        CheckResult::NotSubtype { .. } => Answer::No,
        CheckResult::FuelExhausted { .. } => Answer::Unknown,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: Cli) -> Result<Answer, Failure> {
    match cli.command {
        Command::Check { left, right, algo, fuel, trace, json } => {
            let (t, s) = (read_type(&left)?, read_type(&right)?);
            check(&t, &s, algo, fuel, trace, json)
        }
        Command::Classify { file } => {
            let f = fragments(&read_type(&file)?);
            println!("single-output: {}", yes_no(f.single_output));
            println!("single-input: {}", yes_no(f.single_input));
            println!("input-guarded: {}", yes_no(f.input_guarded));
            Ok(Answer::Yes)
        }
        Command::Qm { command: QmCommand::Run { file, input, max_steps, trace: show_trace } } => {
            let m = read_machine(&file)?;
            let word = m.tokenize(&input)?;
            if show_trace {
                for c in trace(&m, &word, max_steps) {
                    println!("{}", m.show(&c));
                }
            }
            match run(&m, &word, max_steps) {
                outcome @ RunOutcome::Accepted(_) => {
                    println!("{}", outcome);
                    Ok(Answer::Yes)
                }
                RunOutcome::StillRunning(c) => {
                    println!("still running after {} steps at {}", max_steps, m.show(&c));
                    Ok(Answer::No)
                }
            }
        }
        Command::Qm { command: QmCommand::Encode { file, input, out_control, out_queue } } => {
            let m = read_machine(&file)?;
            let (control, queue) = reduction(&m, &m.tokenize(&input)?);
            match (&out_control, &out_queue) {
                (None, None) => {
                    println!("{}", control);
                    println!("{}", queue);
                }
                _ => {
                    if let Some(p) = &out_control {
                        write_or_print(Some(p), &format!("{}\n", control))?;
                    }
                    if let Some(p) = &out_queue {
                        write_or_print(Some(p), &format!("{}\n", queue))?;
                    }
                }
            }
            Ok(Answer::Yes)
        }
        Command::ExportDot { file, out } => {
            let c = build_cfsm(&read_type(&file)?)?;
            write_or_print(out.as_deref(), &to_dot(&c))?;
            Ok(Answer::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(answer) => answer.into(),
        Err(Failure(message)) => {
            eprintln!("error: {}", message);
            ExitCode::from(3)
        }
    }
}
