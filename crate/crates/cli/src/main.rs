use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ensemble_vol::verify::{self, Suite, VerifyConfig};
use ensemble_vol::{format, io, report, search, table};
use ensemble_vol_core::explorer::{self, SearchOutcome};
use ensemble_vol_core::geometry;

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "ensemble-vol", version, about = "Volume invariants and entropy derivatives of pure-state ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report spectrum, entropy, volume invariants and derivatives of an ensemble file.
    Analyze {
        input: PathBuf,
        /// Also show entropies in bits.
        #[arg(long)]
        bits: bool,
        /// Rescale states to unit norm and probabilities to unit sum.
        #[arg(long)]
        renormalize: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run randomized property suites.
    Verify {
        suite: SuiteArg,
        /// Trials (per spectrum size for theorem1 and bounds).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the residual tolerances.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for a witness.
    Search {
        kind: SearchKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidate evaluations (default 1000000 for js-counterexample, 100000 for nonmonotone).
        #[arg(long)]
        budget: Option<usize>,
        /// Small probability used by the nonmonotone construction.
        #[arg(long, default_value_t = 0.05)]
        p_small: f64,
        #[arg(long)]
        bits: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Degree-of-freedom table nu (tau) for 2 <= n <= k <= k_max.
    Table {
        k_max: u32,
        /// Compare the k <= 5 entries with the published values.
        #[arg(long)]
        check_paper: bool,
        /// Lay the table out as a k by n grid.
        #[arg(long)]
        grid: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Theorem1,
    Bounds,
    Identities,
    Gradients,
    Subentropy,
    WFunction,
    HermiteGennochi,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    JsCounterexample,
    Nonmonotone,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), ExitCode> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(EXIT_IO)
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = match ensemble_vol::requested_threads() {
        Ok(t) => t,
        Err(msg) => return usage(msg),
    };
    ensemble_vol::with_threads(threads, move || run(cli.command))
}

fn run(command: Command) -> ExitCode {
    let result = match command {
        Command::Analyze {
            input,
            bits,
            renormalize,
            output,
        } => analyze(&input, bits, renormalize, output.as_ref()),
        Command::Verify {
            suite,
            trials,
            seed,
            tolerance,
            output,
        } => run_verify(suite, trials, seed, tolerance, output.as_ref()),
        Command::Search {
            kind,
            seed,
            budget,
            p_small,
            bits,
            output,
        } => run_search(kind, seed, budget, p_small, bits, output.as_ref()),
        Command::Table {
            k_max,
            check_paper,
            grid,
            output,
        } => run_table(k_max, check_paper, grid, output.as_ref()),
    };
    result.unwrap_or_else(|code| code)
}

fn analyze(input: &PathBuf, bits: bool, renormalize: bool, output: Option<&PathBuf>) -> Result<ExitCode, ExitCode> {
    let e = io::load_ensemble(input, renormalize).map_err(|err| {
        eprintln!("error: {}: {err}", input.display());
        ExitCode::from(EXIT_INVALID_INPUT)
    })?;
    let doc = report::analyze(&e, bits).map_err(|err| {
        eprintln!("error: {err}");
        ExitCode::from(EXIT_INVALID_INPUT)
    })?;
    emit(&format::render(&doc), output)?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(
    suite: SuiteArg,
    trials: Option<usize>,
    seed: u64,
    tolerance: Option<f64>,
    output: Option<&PathBuf>,
) -> Result<ExitCode, ExitCode> {
    if trials == Some(0) {
        return Err(usage("--trials must be at least 1"));
    }
    if let Some(t) = tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("--tolerance must be a positive number"));
        }
    }
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Theorem1 => vec![Suite::Theorem1],
        SuiteArg::Bounds => vec![Suite::Bounds],
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Gradients => vec![Suite::Gradients],
        SuiteArg::Subentropy => vec![Suite::Subentropy],
        SuiteArg::WFunction => vec![Suite::WFunction],
        SuiteArg::HermiteGennochi => vec![Suite::HermiteGennochi],
    };
    let cfg = VerifyConfig {
        trials,
        seed,
        tolerance,
    };
    let mut results = Vec::new();
    for s in suites {
        let r = verify::run_suite(s, &cfg);
        eprintln!(
            "{}: {} ({} trials, {} violations, {} errors, {:.2} s)",
            s.name(),
            if r.passed() { "pass" } else { "FAIL" },
            r.trials,
            r.violations(),
            r.errors,
            r.elapsed.as_secs_f64()
        );
        results.push(r);
    }
    let doc = verify::summary_document(seed, &results);
    emit(&format::render(&doc), output)?;
    Ok(if results.iter().all(verify::SuiteResult::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    })
}

fn run_search(
    kind: SearchKind,
    seed: u64,
    budget: Option<usize>,
    p_small: f64,
    bits: bool,
    output: Option<&PathBuf>,
) -> Result<ExitCode, ExitCode> {
    if budget == Some(0) {
        return Err(usage("--budget must be at least 1"));
    }
    let start = Instant::now();
    let (doc, found) = match kind {
        SearchKind::JsCounterexample => {
            let budget = budget.unwrap_or(1_000_000);
            match search::js_counterexample(seed, budget) {
                Ok(SearchOutcome::Found(r)) => (search::counterexample_document(&r, bits), true),
                Ok(SearchOutcome::Exhausted { candidates, .. }) => (
                    search::exhausted_document("js-counterexample", seed, budget, candidates),
                    false,
                ),
                Err(e) => return Err(usage(e)),
            }
        }
        SearchKind::Nonmonotone => {
            let budget = budget.unwrap_or(100_000);
            match explorer::nonmonotonicity_demo(p_small, seed, budget) {
                Ok(SearchOutcome::Found(w)) => (search::nonmonotone_document(&w, bits), true),
                Ok(SearchOutcome::Exhausted { candidates, .. }) => (
                    search::exhausted_document("nonmonotone", seed, budget, candidates),
                    false,
                ),
                Err(e) => return Err(usage(e)),
            }
        }
    };
    eprintln!(
        "search: {} ({:.2} s)",
        if found { "witness found" } else { "budget exhausted" },
        start.elapsed().as_secs_f64()
    );
    emit(&format::render(&doc), output)?;
    Ok(if found {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_EXHAUSTED)
    })
}

fn run_table(k_max: u32, check_paper: bool, grid: bool, output: Option<&PathBuf>) -> Result<ExitCode, ExitCode> {
    let rows = geometry::dof_table(k_max).map_err(usage)?;
    let text = if grid {
        table::grid_text(&rows)
    } else {
        table::rows_text(&rows)
    };
    emit(&text, output)?;
    if !check_paper {
        return Ok(ExitCode::SUCCESS);
    }
    let expected: Vec<_> = geometry::REFERENCE_TABLE
        .iter()
        .filter(|r| r.0 <= k_max)
        .collect();
    let bad: Vec<_> = geometry::reference_mismatches(&rows)
        .into_iter()
        .filter(|&(k, _)| k <= k_max)
        .collect();
    eprintln!(
        "reference check: {} of {} entries match",
        expected.len() - bad.len(),
        expected.len()
    );
    for (k, n) in &bad {
        eprintln!("  mismatch at k={k} n={n}");
    }
    Ok(if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    })
}
