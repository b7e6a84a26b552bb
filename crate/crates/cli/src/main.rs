//! `aclattice`: antichain lattice calculator.
//!
//! Exit codes: 0 ok, 1 parse or usage error, 2 precondition or budget
//! violation, 3 failed verification.

mod method;

use std::cell::Cell;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use aclattice::counting::canonical_decomposition;
use aclattice::decomp::{self, PartitionReport};
use aclattice::oracle::{self, EnumerationBudget};
use aclattice::verify::{self, Suite};
use aclattice::{
    parse_antichain, parse_family_max_ac, size_auto, underlying_poset, Antichain, Count, Error, Interval, Subset,
    Universe,
};
use clap::{Parser, Subcommand, ValueEnum};

use crate::method::{DedekindMethod, SizeMethod};

#[derive(Parser, Debug)]
#[command(name = "aclattice", version, about = "Antichains, intervals and Dedekind numbers")]
struct Cli {
    /// Worker threads for parallel sums (default: all cores).
    #[arg(long, global = true, env = "AC_LATTICE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print an antichain in canonical form.
    Normalize {
        #[arg(long)]
        n: usize,
        /// Reduce an arbitrary family to its maximal sets instead of rejecting it.
        #[arg(long)]
        from_family: bool,
        /// Antichain text, or `-` for stdin.
        text: String,
    },
    /// Lattice operations.
    Op {
        #[arg(value_enum)]
        op: OpKind,
        #[arg(long)]
        n: usize,
        /// One operand for `check`, two for the others (`-` reads stdin).
        #[arg(required = true, num_args = 1..=2)]
        operands: Vec<String>,
    },
    /// Interval size, underlying poset, or canonical decomposition.
    Interval {
        #[arg(value_enum)]
        action: IntervalAction,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bottom: String,
        #[arg(long)]
        top: String,
        /// brute | even | odd | auto | pivot:k | multi:k1,k2,...
        #[arg(long, default_value = "auto")]
        method: String,
        /// The antichain to decompose.
        #[arg(long)]
        chi: Option<String>,
    },
    /// Partition 𝒜_N or an interval into disjoint blocks.
    Partition {
        #[arg(value_enum)]
        kind: PartitionKind,
        #[arg(long)]
        n: usize,
        /// For `nondominating`.
        #[arg(long)]
        alpha: Option<String>,
        /// For `interval`.
        #[arg(long)]
        bottom: Option<String>,
        #[arg(long)]
        top: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
        /// For `product`: part sizes `a,b` with `a + b = n` (default balanced).
        #[arg(long)]
        split: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The number of antichains of an n-element set.
    Dedekind {
        #[arg(long)]
        n: usize,
        /// brute | levels | product, or any interval method applied to [⊥, ⊤].
        #[arg(long, default_value = "levels")]
        method: String,
        /// Part sizes `a,b` for `product` (default balanced).
        #[arg(long)]
        split: Option<String>,
        /// Largest n that `brute` may enumerate.
        #[arg(long, default_value_t = 5)]
        max_brute_n: usize,
    },
    /// Randomized checks of the decomposition theorems.
    Verify {
        /// partitions | directjoin | updown | posets | counting | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random trials per check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Time Dedekind methods against each other; CSV on stdout.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "levels,product")]
        methods: String,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        split: Option<String>,
        #[arg(long, default_value_t = 5)]
        max_brute_n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpKind {
    Join,
    Meet,
    Prod,
    Leq,
    /// The largest nondominating antichain.
    Check,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IntervalAction {
    Size,
    Poset,
    Decompose,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PartitionKind {
    Nondominating,
    Interval,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

/// What went wrong, by exit-code class.
enum Failure {
    Lib(Error),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Usage(_) | Error::UniverseMismatch { .. } => 1,
        Error::Precondition(_) | Error::Budget(_) => 2,
    }
}

/// Resolves `-` to stdin, which may be consumed only once.
struct Inputs {
    stdin_used: Cell<bool>,
}

impl Inputs {
    fn text(&self, arg: &str) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if self.stdin_used.replace(true) {
            return Err(Error::Usage("stdin (`-`) can be used for one argument only".into()).into());
        }
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    }

    fn antichain(&self, u: Universe, arg: &str) -> Result<Antichain, Failure> {
        Ok(parse_antichain(u, &self.text(arg)?)?)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let inputs = Inputs {
        stdin_used: Cell::new(false),
    };
    match run(cli.command, &inputs) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, inputs: &Inputs) -> Outcome {
    let mut out = io::stdout().lock();
    match command {
        Command::Normalize { n, from_family, text } => {
            let u = Universe::new(n)?;
            let text = inputs.text(&text)?;
            let a = if from_family {
                parse_family_max_ac(u, &text)?
            } else {
                parse_antichain(u, &text)?
            };
            writeln!(out, "{a}")?;
        }
        Command::Op { op, n, operands } => {
            let u = Universe::new(n)?;
            let a = inputs.antichain(u, &operands[0])?;
            if let OpKind::Check = op {
                if operands.len() != 1 {
                    return Err(Error::Usage("`check` takes one operand".into()).into());
                }
                writeln!(out, "{}", decomp::largest_nondominating(u, &a)?)?;
                return Ok(());
            }
            let Some(b) = operands.get(1) else {
                return Err(Error::Usage(format!("`{op:?}` takes two operands").to_lowercase()).into());
            };
            let b = inputs.antichain(u, b)?;
            match op {
                OpKind::Join => writeln!(out, "{}", a.join(&b)?)?,
                OpKind::Meet => writeln!(out, "{}", a.meet(&b)?)?,
                OpKind::Prod => writeln!(out, "{}", a.direct_product(&b)?)?,
                OpKind::Leq => writeln!(out, "{}", a.leq(&b)?)?,
                OpKind::Check => unreachable!(),
            }
        }
        Command::Interval {
            action,
            n,
            bottom,
            top,
            method,
            chi,
        } => {
            let u = Universe::new(n)?;
            let i = Interval::new(inputs.antichain(u, &bottom)?, inputs.antichain(u, &top)?)?;
            match action {
                IntervalAction::Size => {
                    let m: SizeMethod = method.parse()?;
                    writeln!(out, "{}", m.size(&i, EnumerationBudget::default())?)?;
                }
                IntervalAction::Poset => writeln!(out, "{}", underlying_poset(&i)?)?,
                IntervalAction::Decompose => {
                    let Some(chi) = chi else {
                        return Err(Error::Usage("`decompose` needs --chi".into()).into());
                    };
                    let chi = inputs.antichain(u, &chi)?;
                    writeln!(out, "{}", canonical_decomposition(&i, &chi)?)?;
                }
            }
        }
        Command::Partition {
            kind,
            n,
            alpha,
            bottom,
            top,
            gamma,
            split,
            format,
        } => {
            let u = Universe::new(n)?;
            let need = |v: Option<String>, flag: &str| {
                v.ok_or_else(|| Failure::Lib(Error::Usage(format!("this partition needs --{flag}"))))
            };
            let report = match kind {
                PartitionKind::Nondominating => {
                    decomp::partition_by_nondominating(&inputs.antichain(u, &need(alpha, "alpha")?)?)?
                }
                PartitionKind::Interval => {
                    let i = Interval::new(
                        inputs.antichain(u, &need(bottom, "bottom")?)?,
                        inputs.antichain(u, &need(top, "top")?)?,
                    )?;
                    let g = inputs.antichain(u, &need(gamma, "gamma")?)?;
                    decomp::partition_interval_by_nondominating(&i, &g)?
                }
                PartitionKind::Product => {
                    let (n1, n2) = split_parts(u, split.as_deref())?;
                    decomp::partition_by_product(u, n1, n2)?
                }
            };
            print_report(&mut out, &report, format)?;
            if !(report.complete && report.disjoint) {
                return Err(Failure::Verification(format!(
                    "blocks cover {} of {} (disjoint: {})",
                    report.covered, report.total, report.disjoint
                )));
            }
        }
        Command::Dedekind {
            n,
            method,
            split,
            max_brute_n,
        } => {
            let m: DedekindMethod = method.parse()?;
            let v = dedekind(n, &m, split.as_deref(), max_brute_n)?;
            writeln!(out, "{v}")?;
        }
        Command::Verify { suite, n, seed, trials } => {
            let suite: Suite = suite.parse()?;
            let checks = verify::run_suite(suite, n, seed, trials)?;
            let mut failed = Vec::new();
            for c in &checks {
                writeln!(out, "{c}")?;
                if !c.passed() {
                    failed.push(c.theorem);
                }
            }
            if !failed.is_empty() {
                return Err(Failure::Verification(failed.join("; ")));
            }
        }
        Command::Bench {
            n,
            methods,
            repeats,
            split,
            max_brute_n,
        } => {
            let methods: Vec<DedekindMethod> =
                methods.split(',').map(|m| m.trim().parse()).collect::<Result<_, _>>()?;
            if repeats == 0 {
                return Err(Error::Usage("--repeats must be at least 1".into()).into());
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["method", "n", "result", "seconds"])?;
            let mut results: Vec<(String, Count)> = Vec::new();
            for m in &methods {
                for _ in 0..repeats {
                    let start = Instant::now();
                    let v = dedekind(n, m, split.as_deref(), max_brute_n)?;
                    let secs = start.elapsed().as_secs_f64();
                    w.write_record([m.to_string(), n.to_string(), v.to_string(), format!("{secs:.6}")])?;
                    results.push((m.to_string(), v));
                }
            }
            w.flush()?;
            if let Some((name, v)) = results.iter().find(|(_, v)| *v != results[0].1) {
                return Err(Failure::Verification(format!(
                    "{name} gives {v}, {} gives {}",
                    results[0].0, results[0].1
                )));
            }
        }
    }
    Ok(())
}

fn dedekind(n: usize, m: &DedekindMethod, split: Option<&str>, max_brute_n: usize) -> Result<Count, Failure> {
    let u = Universe::new(n)?;
    Ok(match m {
        DedekindMethod::Brute => {
            if n > max_brute_n {
                return Err(Error::Budget(format!(
                    "brute force is capped at n = {max_brute_n}; use --method levels or product, or raise --max-brute-n"
                ))
                .into());
            }
            let budget = EnumerationBudget {
                max_n: max_brute_n,
                max_items: u64::MAX,
            };
            oracle::dedekind_brute(n, budget)?
        }
        DedekindMethod::Levels => size_auto(&Interval::full(u))?,
        DedekindMethod::Product => {
            if n < 2 {
                // no nontrivial split exists; fall back to the level counter
                size_auto(&Interval::full(u))?
            } else {
                let (n1, n2) = split_parts(u, split)?;
                decomp::dedekind_by_product(u, n1, n2)?
            }
        }
        DedekindMethod::Interval(sm) => sm.size(&Interval::full(u), EnumerationBudget::default())?,
    })
}

/// `a,b` part sizes into `{1..a} | {a+1..n}`; balanced when absent.
fn split_parts(u: Universe, split: Option<&str>) -> Result<(Subset, Subset), Failure> {
    let Some(s) = split else {
        return Ok(decomp::balanced_split(u)?);
    };
    let bad = || Failure::Lib(Error::Usage(format!("bad split `{s}`; expected sizes a,b with a + b = n")));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 || a + b != u.n() {
        return Err(bad());
    }
    let lo = (1u64 << a) - 1;
    Ok((Subset::new(u, lo)?, Subset::new(u, u.full_mask() & !lo)?))
}

fn print_report(out: &mut impl Write, r: &PartitionReport, format: Format) -> Outcome {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["key", "bottom", "top", "size"])?;
            for row in r.to_csv_rows() {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for b in &r.blocks {
                writeln!(out, "{}  {}  {}", b.key, b.interval, b.size)?;
            }
            writeln!(
                out,
                "blocks: {}  covered: {}  total: {}  complete: {}  disjoint: {}  checked: {}",
                r.blocks.len(),
                r.covered,
                r.total,
                r.complete,
                r.disjoint,
                if r.exact { "exhaustively" } else { "by size" }
            )?;
        }
    }
    Ok(())
}
