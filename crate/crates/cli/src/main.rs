use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wheelsort::automaton::{parse_automaton, parse_ordered_partition, Automaton, OrderedPartition, StateId};
use wheelsort::bench::{bench_scaling, to_csv};
use wheelsort::colex::colex_order;
use wheelsort::gen::{gen_random_dfa, gen_random_dfa_with_edges, gen_wheeler_nfa};
use wheelsort::oracle::{check_wheeler_order, naive_coarsest_forward_stable};
use wheelsort::prune::{refine_with_pruning, Direction};
use wheelsort::refine::wheeler_preorder;
use wheelsort::Error;

const DEFAULT_SEED: u64 = 1;

const EXIT_INVALID: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "wheelsort", version, about = "Wheeler preorders and co-lex orders by partition refinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered coarsest forward-stable partition and quasi-Wheeler verdict.
    Sort {
        input: PathBuf,
        /// Append the quotient automaton after the verdict.
        #[arg(long)]
        emit_quotient: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Infimum or supremum automaton of a DFA.
    Prune {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        out: Output,
    },
    /// Co-lex ranks and a minimum chain partition of a DFA.
    Colex {
        input: PathBuf,
        /// Split states with several in-letters first.
        #[arg(long)]
        make_ic: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Verify an order or ordered partition against an automaton.
    Check {
        input: PathBuf,
        #[command(flatten)]
        what: CheckTarget,
    },
    /// Generate a random instance.
    Gen {
        #[command(flatten)]
        kind: GenKind,
        #[arg(short = 'n', long = "states")]
        n: usize,
        #[arg(short = 'm', long = "edges")]
        m: Option<usize>,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the planted Wheeler order (as ORDPART) to this file.
        #[arg(long, requires = "wheeler")]
        planted: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Timing of the refinement engines on generated instances (CSV).
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [15625usize, 31250, 62500, 125000, 250000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    path: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CheckTarget {
    /// A total order: whitespace-separated state ids, or an all-singleton ORDPART.
    #[arg(long)]
    order: Option<PathBuf>,
    /// An ORDPART file that should be the automaton's Wheeler preorder.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GenKind {
    #[arg(long)]
    wheeler: bool,
    #[arg(long)]
    dfa: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Inf,
    Sup,
}

enum Failure {
    Error(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Error(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    let (a, warnings) = parse_automaton(&read(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        e => e,
    })?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(a)
}

fn emit(out: &Output, text: &str) -> Outcome {
    match &out.path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sort(input: &Path, emit_quotient: bool, out: &Output) -> Outcome {
    let a = load(input)?;
    let w = wheeler_preorder(&a)?;
    let mut text = w.partition.to_ordpart_string();
    text.push_str(&format!("QUASI_WHEELER: {}\n", w.quasi_wheeler));
    if emit_quotient {
        text.push_str(&w.quotient.automaton.to_nfa_string_with_comment(Some("quotient")));
    }
    emit(out, &text)
}

fn prune(input: &Path, mode: Mode, out: &Output) -> Outcome {
    let a = load(input)?;
    let dir = match mode {
        Mode::Inf => Direction::Inf,
        Mode::Sup => Direction::Sup,
    };
    let p = refine_with_pruning(&a, dir)?;
    emit(out, &p.pruned.to_nfa_string())
}

fn colex(input: &Path, make_ic: bool, out: &Output) -> Outcome {
    let mut a = load(input)?;
    if make_ic {
        let (b, _) = a.make_input_consistent();
        a = b;
    }
    let c = colex_order(&a)?;
    emit(out, &c.to_text())
}

fn parse_order(text: &str, n: usize) -> Result<Vec<StateId>, Failure> {
    if text.trim_start().starts_with("ORDPART") {
        let p = parse_ordered_partition(text, n)?;
        return p
            .as_order()
            .ok_or_else(|| Failure::Check("order file has a part with several states".into()));
    }
    text.split_whitespace()
        .enumerate()
        .map(|(i, t)| {
            t.parse::<u32>().map(StateId).map_err(|_| {
                Failure::Error(Error::Parse {
                    line: 1,
                    msg: format!("token {} ('{t}') is not a state id", i + 1),
                })
            })
        })
        .collect()
}

fn check(input: &Path, what: &CheckTarget) -> Outcome {
    let a = load(input)?;
    if let Some(path) = &what.order {
        let order = parse_order(&read(path)?, a.n())?;
        return match check_wheeler_order(&a, &order) {
            Ok(None) => Ok(()),
            Ok(Some(v)) => Err(Failure::Check(format!("not a Wheeler order: {v}"))),
            Err(Error::Contract(msg)) => Err(Failure::Check(msg)),
            Err(e) => Err(e.into()),
        };
    }
    let path = what.partition.as_ref().expect("clap enforces one target");
    let p: OrderedPartition = parse_ordered_partition(&read(path)?, a.n())?;
    if p.unordered() != naive_coarsest_forward_stable(&a) {
        return Err(Failure::Check(
            "parts differ from the coarsest forward-stable partition".into(),
        ));
    }
    let q = a.quotient(&p).map_err(|e| Failure::Check(e.to_string()))?;
    let order: Vec<StateId> = q.automaton.states().collect();
    match check_wheeler_order(&q.automaton, &order)? {
        None => Ok(()),
        Some(v) => Err(Failure::Check(format!("part order is not Wheeler on the quotient: {v}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: &GenKind,
    n: usize,
    m: Option<usize>,
    sigma: u32,
    seed: u64,
    planted: Option<&Path>,
    out: &Output,
) -> Outcome {
    let a = if kind.wheeler {
        let m = m.ok_or_else(|| Error::Infeasible("--wheeler needs -m".into()))?;
        gen_wheeler_nfa(n, m, sigma, seed)?
    } else {
        match m {
            Some(m) => gen_random_dfa_with_edges(n, m, sigma, seed)?,
            None => gen_random_dfa(n, sigma, seed)?,
        }
    };
    if let Some(p) = planted {
        let order: Vec<StateId> = a.states().collect();
        fs::write(p, OrderedPartition::from_order(&order)?.to_ordpart_string())?;
    }
    emit(out, &a.to_nfa_string())
}

fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn bench(sizes: &[usize], trials: usize, seed: u64, out: &Output) -> Outcome {
    let t = Instant::now();
    let rows = bench_scaling(sizes, trials, seed)?;
    emit(out, &to_csv(&rows))?;
    match peak_rss_kib() {
        Some(k) => eprintln!("peak RSS {:.1} MiB, total {:.1} s", k as f64 / 1024.0, t.elapsed().as_secs_f64()),
        None => eprintln!("total {:.1} s", t.elapsed().as_secs_f64()),
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Sort {
            input,
            emit_quotient,
            out,
        } => sort(input, *emit_quotient, out),
        Command::Prune { input, mode, out } => prune(input, *mode, out),
        Command::Colex { input, make_ic, out } => colex(input, *make_ic, out),
        Command::Check { input, what } => check(input, what),
        Command::Gen {
            kind,
            n,
            m,
            sigma,
            seed,
            planted,
            out,
        } => gen(kind, *n, *m, *sigma, *seed, planted.as_deref(), out),
        Command::Bench {
            sizes,
            trials,
            seed,
            out,
        } => bench(sizes, *trials, *seed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let is_check = matches!(cli.command, Command::Check { .. });
    match run(cli) {
        Ok(()) => {
            if is_check {
                println!("PASS");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            println!("FAIL: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Io(_) => EXIT_IO,
                _ => EXIT_INVALID,
            })
        }
    }
}
