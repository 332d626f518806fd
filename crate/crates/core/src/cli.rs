//! Command-line interface. Verdicts go to stdout, diagnostics to stderr.
//! Exit codes: 0 for answered commands (including the EMPTY verdict),
//! 1 for failed checks or validations, 2 for usage and parse errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::automaton::{StateId, SubzeroAutomaton};
use crate::bounds::{bound_f, BoundError, BoundParams};
use crate::calculus::{validate_derivation, Profile};
use crate::engine::{decide_from, saturate, Verdict};
use crate::examples;
use crate::format::{
    derivation_from_json, derivation_to_json, parse_automaton, run_graph_from_json,
    run_graph_to_dot, run_graph_to_json, serialize_automaton, AutomatonDocument,
};
use crate::multiset::Multiset;
use crate::oracle;
use crate::realizer::realize;
use crate::runcheck::{check_partial_run, is_accepting_run, AllCondition};

#[derive(Parser)]
#[command(
    name = "subzero",
    version,
    about = "Subzero tree automata: regular emptiness, run checking, bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants of an automaton file.
    Validate { file: PathBuf },
    /// Decide regular emptiness. Without --state the file's start state is
    /// used; without either, every state is tried and NONEMPTY is reported
    /// if any of them accepts.
    Decide {
        file: PathBuf,
        /// Start state to decide for.
        #[arg(long)]
        state: Option<String>,
        /// Write the witness derivation (JSON) here on NONEMPTY.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Realize the witness and write the run graph (JSON) here.
        #[arg(long)]
        run: Option<PathBuf>,
    },
    /// Decide derivability of one profile.
    Derivable {
        file: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        bound: String,
        /// Comma-separated port states, repetitions allowed; empty for no
        /// ports.
        #[arg(long, default_value = "")]
        ports: String,
    },
    /// Compile a derivation file into a run graph.
    Realize {
        file: PathBuf,
        derivation: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write a DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a run graph: transitions, cycle condition, exact measure.
    CheckRun { file: PathBuf, run: PathBuf },
    /// Print the exact bad-branch measure of a run graph; optionally a
    /// Monte Carlo estimate next to it.
    Measure {
        file: PathBuf,
        run: PathBuf,
        /// Number of sampled walks.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 200)]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the derivation-size bound f(q, n).
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long = "size-q")]
        size_q: u64,
        #[arg(long, default_value_t = 8)]
        c1: u64,
        #[arg(long, default_value_t = 8)]
        c2: u64,
        #[arg(long, default_value_t = 1 << 20)]
        max_steps: u64,
        #[arg(long, default_value_t = 1 << 20)]
        max_bits: u64,
    },
    /// Write a bundled example automaton to a file.
    Example {
        /// One of: example12, l3, parity-demo.
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Brute-force cross-validation helpers.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Print the minimal block schedule (and optionally its measure sum).
    L3Witness {
        #[arg(long)]
        blocks: usize,
        /// Also print the exact partial sum of per-block probabilities.
        #[arg(long)]
        sum: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustively search for a derivation of one profile under caps.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        bound: String,
        #[arg(long, default_value = "")]
        ports: String,
        #[arg(long = "size-cap")]
        size_cap: u64,
        #[arg(long = "mult-cap")]
        mult_cap: u64,
        /// Write the found derivation (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the profiles of finite runs up to a depth.
    Runs {
        file: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        depth: u64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.message);
            failure.code
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<AutomatonDocument, Failure> {
    let text = read_file(path)?;
    parse_automaton(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn resolve_state(a: &SubzeroAutomaton, name: &str) -> Result<StateId, Failure> {
    a.state_by_name(name)
        .ok_or_else(|| Failure::usage(format!("unknown state `{name}`")))
}

fn parse_ports(a: &SubzeroAutomaton, list: &str) -> Result<Multiset, Failure> {
    let mut ports = Multiset::empty(a.num_states());
    for name in list.split(',').filter(|s| !s.is_empty()) {
        ports.add(resolve_state(a, name.trim())?, 1);
    }
    Ok(ports)
}

fn fraction(r: &num::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => {
            let text = read_file(&file)?;
            let doc = crate::format::parse_automaton_raw(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let report = doc.automaton.validate();
            if report.is_ok() {
                println!("OK");
                Ok(0)
            } else {
                println!("{report}");
                Ok(1)
            }
        }
        Command::Decide {
            file,
            state,
            witness,
            run,
        } => {
            let doc = load_automaton(&file)?;
            let a = &doc.automaton;
            let states: Vec<StateId> = match state {
                Some(name) => vec![resolve_state(a, &name)?],
                None => match doc.start {
                    Some(q) => vec![q],
                    None => a.states().collect(),
                },
            };
            let saturation =
                saturate(a).map_err(|e| Failure::usage(e.to_string()))?;
            let mut found = None;
            for q in states {
                if let Verdict::NonEmpty(d) =
                    decide_from(&saturation, q).map_err(|e| Failure::usage(e.to_string()))?
                {
                    found = Some(d);
                    break;
                }
            }
            match found {
                Some(derivation) => {
                    println!("NONEMPTY");
                    if let Some(path) = witness {
                        write_file(&path, &derivation_to_json(a, &derivation))?;
                    }
                    if let Some(path) = run {
                        let g = realize(a, &derivation)
                            .map_err(|e| Failure::check(e.to_string()))?;
                        write_file(&path, &run_graph_to_json(a, &g))?;
                    }
                }
                None => {
                    if witness.is_some() || run.is_some() {
                        eprintln!("no witness: the language is empty");
                    }
                    println!("EMPTY");
                }
            }
            Ok(0)
        }
        Command::Derivable {
            file,
            root,
            bound,
            ports,
        } => {
            let doc = load_automaton(&file)?;
            let a = &doc.automaton;
            let target = Profile::new(
                resolve_state(a, &root)?,
                resolve_state(a, &bound)?,
                parse_ports(a, &ports)?,
            );
            let yes =
                crate::engine::derivable(a, &target).map_err(|e| Failure::usage(e.to_string()))?;
            println!("{}", if yes { "DERIVABLE" } else { "NOT DERIVABLE" });
            Ok(0)
        }
        Command::Realize {
            file,
            derivation,
            output,
            dot,
        } => {
            let doc = load_automaton(&file)?;
            let a = &doc.automaton;
            let text = read_file(&derivation)?;
            let d = derivation_from_json(a, &text)
                .map_err(|e| Failure::usage(format!("{}: {e}", derivation.display())))?;
            let report = validate_derivation(a, &d);
            if !report.is_ok() {
                for v in &report.violations {
                    eprintln!("{v}");
                }
                return Err(Failure::check("derivation does not validate"));
            }
            let g = realize(a, &d).map_err(|e| Failure::check(e.to_string()))?;
            write_file(&output, &run_graph_to_json(a, &g))?;
            if let Some(path) = dot {
                write_file(&path, &run_graph_to_dot(a, &g))?;
            }
            Ok(0)
        }
        Command::CheckRun { file, run } => {
            let doc = load_automaton(&file)?;
            let a = &doc.automaton;
            let text = read_file(&run)?;
            let g = run_graph_from_json(a, &text)
                .map_err(|e| Failure::usage(format!("{}: {e}", run.display())))?;
            let report = check_partial_run(a, &g).map_err(|e| Failure::check(e.to_string()))?;
            match report.transitions_ok {
                true => println!("transitions: ok"),
                false => {
                    println!("transitions: FAILED");
                    for line in &report.transition_errors {
                        eprintln!("  {line}");
                    }
                }
            }
            match &report.all_condition {
                AllCondition::Ok => println!("all-condition: ok"),
                AllCondition::Counterexample(cycle) => {
                    let nodes = cycle
                        .iter()
                        .map(|id| format!("n{}", id.index()))
                        .collect::<Vec<_>>()
                        .join(" -> ");
                    println!("all-condition: counterexample cycle {nodes}");
                }
            }
            println!("zero-measure: {}", fraction(&report.zero_measure));
            println!(
                "zero-condition: {}",
                if report.zero_condition { "ok" } else { "violated" }
            );
            println!(
                "accepting: {}",
                if is_accepting_run(a, &g) { "yes" } else { "no" }
            );
            Ok(if report.is_ok() { 0 } else { 1 })
        }
        Command::Measure {
            file,
            run,
            mc,
            horizon,
            seed,
        } => {
            let doc = load_automaton(&file)?;
            let a = &doc.automaton;
            let text = read_file(&run)?;
            let g = run_graph_from_json(a, &text)
                .map_err(|e| Failure::usage(format!("{}: {e}", run.display())))?;
            g.check_structure()
                .map_err(|e| Failure::check(e.to_string()))?;
            let exact = crate::runcheck::zero_measure_exact(a, &g);
            println!("exact: {}", fraction(&exact));
            if let Some(samples) = mc {
                let estimate = oracle::mc_zero_measure(a, &g, samples, horizon, seed);
                println!("estimate: {estimate} (samples={samples}, horizon={horizon}, seed={seed})");
            }
            Ok(0)
        }
        Command::Bound {
            q,
            n,
            size_q,
            c1,
            c2,
            max_steps,
            max_bits,
        } => {
            let params = BoundParams {
                c1,
                c2,
                size_q,
                max_steps,
                max_bits,
            };
            match bound_f(&params, q, n) {
                Ok(value) => println!("{value}"),
                Err(e @ BoundError::Overflow(_)) => println!("{e}"),
                Err(e) => return Err(Failure::usage(e.to_string())),
            }
            Ok(0)
        }
        Command::Example { name, output } => {
            let doc = match name.as_str() {
                "example12" => AutomatonDocument {
                    start: examples::make_example12().state_by_name("q"),
                    automaton: examples::make_example12(),
                },
                "l3" => AutomatonDocument {
                    automaton: examples::make_l3(),
                    start: None,
                },
                "parity-demo" => {
                    let a = examples::make_parity(
                        &["q"],
                        &["a"],
                        &["q"],
                        &[("q", "a", "q", "q")],
                    )
                    .expect("static automaton");
                    AutomatonDocument {
                        start: a.state_by_name("q"),
                        automaton: a,
                    }
                }
                other => {
                    return Err(Failure::usage(format!(
                        "unknown example `{other}` (try example12, l3, parity-demo)"
                    )))
                }
            };
            write_file(&output, &serialize_automaton(&doc))?;
            Ok(0)
        }
        Command::Oracle { command } => match command {
            OracleCommand::Enumerate {
                file,
                root,
                bound,
                ports,
                size_cap,
                mult_cap,
                out,
            } => {
                let doc = load_automaton(&file)?;
                let a = &doc.automaton;
                let target = Profile::new(
                    resolve_state(a, &root)?,
                    resolve_state(a, &bound)?,
                    parse_ports(a, &ports)?,
                );
                let caps = oracle::EnumerationCaps::new(size_cap.max(1), mult_cap.max(1), 1);
                match oracle::enumerate_derivations(a, &target, &caps)
                    .map_err(|e| Failure::usage(e.to_string()))?
                {
                    Some(d) => {
                        println!("FOUND size={}", d.size());
                        if let Some(path) = out {
                            write_file(&path, &derivation_to_json(a, &d))?;
                        }
                    }
                    None => {
                        println!(
                            "NOT FOUND within caps (size<={size_cap}, multiplicity<={mult_cap})"
                        );
                    }
                }
                Ok(0)
            }
            OracleCommand::Runs { file, root, depth } => {
                let doc = load_automaton(&file)?;
                let a = &doc.automaton;
                let root = resolve_state(a, &root)?;
                let profiles = oracle::enumerate_finite_runs(a, root, depth)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                for p in &profiles {
                    println!("{}", p.display(a));
                }
                Ok(0)
            }
        },
        Command::L3Witness { blocks, sum } => {
            if blocks == 0 {
                return Err(Failure::usage("--blocks must be at least 1"));
            }
            let schedule = examples::l3_block_schedule(blocks);
            let values = schedule
                .values()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            println!("schedule: {values}");
            if sum {
                let (total, within) = examples::l3_measure_bound(&schedule);
                println!("sum: {}", fraction(&total));
                println!("sum<=1: {within}");
            }
            Ok(0)
        }
    }
}
