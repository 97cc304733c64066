use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use intcx::all_targets::{compute_table, naive_oracle, Engine};
use intcx::bounds::{lower_bound, upper_bound};
use intcx::conjectures::{check_collapse, evaluate_family, family_csv, Family};
use intcx::sampling::{emit_table, RowRequest};
use intcx::single_target::{compute_single, Evaluator, WindowMode};
use intcx::witness::{reconstruct, verify};
use intcx::{table_io, Error, Limits};

#[derive(Parser)]
#[command(name = "intcx", version, about = "Integer complexity: fewest ones that build n with + and *")]
struct Cli {
    /// Upper-bound constant used to size addendum windows.
    #[arg(long, global = true, default_value_t = 4.125)]
    alpha: f64,
    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for verify and sample.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Re-check results against bounds and independent paths.
    #[arg(long, global = true)]
    debug_asserts: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute f(1..=N) and save it as a binary table.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = EngineArg::Capped)]
        engine: EngineArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute f(N) for one N.
    Eval {
        #[arg(long)]
        n: u128,
        #[arg(long, value_enum, default_value_t = ModeArg::PerWindow)]
        mode: ModeArg,
        /// Also print a minimal expression.
        #[arg(long)]
        witness: bool,
        /// Use the memoized search instead of the window engine.
        #[arg(long)]
        fast: bool,
    },
    /// f(N) by the quadratic reference recurrence.
    Oracle {
        #[arg(long)]
        n: usize,
    },
    /// Look for the first exponent i with f(base^i) < i f(base).
    Collapse {
        #[arg(long)]
        base: u128,
        #[arg(long)]
        max_exp: u32,
        /// Stop after this many seconds and report what was reached.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Check a conjectured closed form on every family member up to a limit.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        limit: u128,
    },
    /// Average of f(i) / log_3 i over 2..=N, exact or sampled.
    Sample {
        /// One row per value; repeat for several rows.
        #[arg(long, required = true, num_args = 1..)]
        n: Vec<u128>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        exact: bool,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a witness expression and compare its value and number of ones.
    CheckWitness {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        expect_value: Option<String>,
        #[arg(long)]
        expect_ones: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Brute,
    Capped,
    Packed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PerWindow,
    #[value(name = "global-L", alias = "global-l")]
    GlobalL,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Pow2,
    Pow235,
    Pow2plus1,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let limits = Limits::new(cli.alpha)?;
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let checks = cli.debug_asserts;
    let start = Instant::now();
    let out = io::stdout();
    let mut out = out.lock();
    let result = match cli.command {
        Command::Table { n, engine, out: path } => table(n, engine, &path, &limits, checks, &mut out),
        Command::Eval { n, mode, witness, fast } => eval(n, mode, witness, fast, &limits, checks, &mut out),
        Command::Oracle { n } => {
            let t = naive_oracle(n)?;
            writeln!(out, "f({n}) = {}", t.get(n))?;
            Ok(())
        }
        Command::Collapse { base, max_exp, budget } => {
            let budget = match budget {
                Some(s) if !(s >= 0.0 && s.is_finite()) => {
                    return Err(Failure::Usage(format!("invalid budget {s}")));
                }
                Some(s) => Some(Duration::from_secs_f64(s)),
                None => None,
            };
            let r = check_collapse(base, max_exp, &limits, budget)?;
            write!(out, "{}", r.to_csv())?;
            eprintln!("status: {:?}", r.status);
            Ok(())
        }
        Command::Verify { family, limit } => {
            let family = match family {
                FamilyArg::Pow2 => Family::Pow2,
                FamilyArg::Pow235 => Family::Pow235,
                FamilyArg::Pow2plus1 => Family::Pow2Plus1,
            };
            let rows = evaluate_family(family, limit, &limits)?;
            let bad: Vec<_> = rows.iter().copied().filter(|r| !r.holds()).collect();
            write!(out, "{}", family_csv(&bad))?;
            eprintln!("{} members checked, {} violations", rows.len(), bad.len());
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} violations", bad.len())))
            }
        }
        Command::Sample { n, samples, exact, out: path } => {
            let rows: Vec<RowRequest> = n
                .iter()
                .map(|&n| RowRequest {
                    n,
                    samples: (!exact).then_some(samples),
                })
                .collect();
            match path {
                Some(p) => {
                    let file = File::create(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    emit_table(&rows, cli.seed, &limits, BufWriter::new(file))?;
                }
                None => {
                    emit_table(&rows, cli.seed, &limits, &mut out)?;
                }
            }
            Ok(())
        }
        Command::CheckWitness {
            file,
            expect_value,
            expect_ones,
        } => check_witness(&file, expect_value.as_deref(), expect_ones, &mut out),
    };
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    result
}

fn table(n: usize, engine: EngineArg, path: &PathBuf, limits: &Limits, checks: bool, out: &mut impl Write) -> Outcome {
    let engine = match engine {
        EngineArg::Brute => Engine::Brute,
        EngineArg::Capped => Engine::Capped,
        EngineArg::Packed => Engine::Packed,
    };
    let t = Instant::now();
    let table = compute_table(n, limits, engine)?;
    eprintln!("computed {n} values with {} in {:.3} s", engine.name(), t.elapsed().as_secs_f64());
    if checks {
        for k in 2..=n {
            let f = table.get(k);
            let hi = upper_bound(k as u128, limits)?;
            if f < lower_bound(k as u128) || f as u16 > hi {
                return Err(Failure::Verification(format!("f({k}) = {f} outside its bounds")));
            }
        }
    }
    table_io::save(&table, path)?;
    writeln!(out, "wrote {n} values to {}", path.display())?;
    Ok(())
}

fn eval(
    n: u128,
    mode: ModeArg,
    witness: bool,
    fast: bool,
    limits: &Limits,
    checks: bool,
    out: &mut impl Write,
) -> Outcome {
    let mode = match mode {
        ModeArg::PerWindow => WindowMode::PerWindow,
        ModeArg::GlobalL => WindowMode::GlobalL,
    };
    let mut search = None;
    let value = if fast || n < 2 {
        let mut e = Evaluator::for_target(n, limits)?;
        let v = e.f(n)?;
        search = Some(e);
        v
    } else {
        match compute_single(n, limits, mode) {
            Err(e @ Error::MemoryBudget { .. }) => {
                return Err(Failure::Usage(format!("{e}; the window engine cannot reach n = {n}, try --fast")));
            }
            r => r?,
        }
    };
    writeln!(out, "f({n}) = {value}")?;
    if checks {
        let e = match search.as_mut() {
            Some(e) => e,
            None => search.insert(Evaluator::for_target(n, limits)?),
        };
        let other = e.f(n)?;
        if other != value {
            return Err(Failure::Verification(format!("engines disagree on f({n}): {value} vs {other}")));
        }
        if n >= 2 && (value < lower_bound(n) || value as u16 > upper_bound(n, limits)?) {
            return Err(Failure::Verification(format!("f({n}) = {value} outside its bounds")));
        }
    }
    if witness {
        let e = match search.as_mut() {
            Some(e) => e,
            None => search.insert(Evaluator::for_target(n, limits)?),
        };
        let tree = reconstruct(n, e)?;
        if checks {
            let (v, ones) = verify(&tree.render())?;
            if v.to_string() != n.to_string() || ones != value as u64 {
                return Err(Failure::Verification(format!("witness gives ({v}, {ones})")));
            }
        }
        writeln!(out, "{tree}")?;
    }
    Ok(())
}

fn check_witness(
    path: &PathBuf,
    expect_value: Option<&str>,
    expect_ones: Option<u64>,
    out: &mut impl Write,
) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let (value, ones) = verify(&text).map_err(|e| Failure::Verification(e.to_string()))?;
    let value = value.to_string();
    writeln!(out, "value = {value}")?;
    writeln!(out, "ones = {ones}")?;
    if let Some(want) = expect_value {
        let want = want.trim();
        if want.is_empty() || !want.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Failure::Usage(format!("--expect-value must be a decimal integer, got {want:?}")));
        }
        let want = want.trim_start_matches('0');
        let want = if want.is_empty() { "0" } else { want };
        if want != value {
            return Err(Failure::Verification(format!("value {value}, expected {want}")));
        }
    }
    if let Some(want) = expect_ones {
        if want != ones {
            return Err(Failure::Verification(format!("{ones} ones, expected {want}")));
        }
    }
    Ok(())
}
