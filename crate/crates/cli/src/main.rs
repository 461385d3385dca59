//! `quadra`: JSON reports for lattices, finite quadratic forms, simplicial
//! manifolds, differential cochains, characteristic series and Picard
//! categories.
//!
//! Exit codes: 0 when every verdict holds, 1 when one fails, 2 on bad input.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use quadra::rng::resolve_seed;
use quadra::selftest::SuiteConfig;

use commands::{ComplexArgs, DcohomArgs, LatticeArgs, SelftestArgs, SeriesArgs};
use report::{CmdResult, Outcome, RunReport};

#[derive(Parser)]
#[command(name = "quadra", version, about = "Exact quadratic-refinement invariants")]
struct Cli {
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON input file.
    path: Option<PathBuf>,
    /// Use a built-in object instead of a file (see `quadra list`).
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Signature, characteristic vector, discriminant form, Gauss sum, κ and the Milgram verdict.
    Lattice {
        #[command(flatten)]
        source: Source,
        /// Characteristic vector: `auto` or comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Gauss sum and eighth-root class of a finite quadratic form.
    Gauss { path: PathBuf },
    /// Cohomology, Wu classes, Steenrod squares and κ/q tables of a complex.
    Complex {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        wu: bool,
        #[arg(long)]
        kappa: bool,
        /// Print Sq^k on mod-2 cohomology bases.
        #[arg(long, value_name = "K")]
        steenrod: Option<usize>,
        #[arg(long)]
        qtable: bool,
    },
    /// Structure of the differential cohomology group Ȟ(q)^k.
    Dcohom {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: usize,
        /// Run this many random exact-sequence witness trials.
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Characteristic series and their identities; all checks run when no flag is given.
    Series {
        /// Coefficients of the spin Wu series through x^N.
        #[arg(long, value_name = "N")]
        spin_wu: Option<usize>,
        /// Integrality of the two-variable coboundary of g through order N.
        #[arg(long, value_name = "N")]
        delta_g_check: Option<usize>,
        /// Mod-4 square identity through order N.
        #[arg(long, value_name = "N")]
        mod4_check: Option<usize>,
        /// Spin Wu polynomials ν₄ … ν₄ₖ, for T and for −T.
        #[arg(long, value_name = "K")]
        pontryagin: Option<usize>,
        /// L-polynomials L₁ … L_k.
        #[arg(long, value_name = "K")]
        l_genus: Option<usize>,
        /// Change-of-spin identity through order N.
        #[arg(long, value_name = "N")]
        spin_change: Option<usize>,
    },
    /// Dold–Kan for a chain complex or a simplicial abelian group.
    Doldkan { path: PathBuf },
    /// Classes of functor pairs of a two-term Picard category.
    Picard { path: PathBuf },
    /// Randomized identity suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        milgram_trials: Option<usize>,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long)]
        unimodular_trials: Option<usize>,
        /// Trials for the cochain identity suites.
        #[arg(long)]
        trials: Option<usize>,
        /// Random complexes for the Dold–Kan and Picard suites.
        #[arg(long)]
        complexes: Option<usize>,
        /// Run only these suites (repeatable).
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
    },
    /// Built-in complexes, lattices, series and suites.
    List,
    /// Print the input JSON of a built-in complex or lattice.
    Export {
        #[arg(value_parser = ["complex", "lattice"])]
        kind: String,
        name: String,
    },
}

fn dispatch(command: Command) -> CmdResult<Outcome> {
    match command {
        Command::Lattice { source, lambda } => {
            commands::lattice(&LatticeArgs { path: source.path, builtin: source.builtin, lambda })
        }
        Command::Gauss { path } => commands::gauss(&path),
        Command::Complex { source, wu, kappa, steenrod, qtable } => {
            commands::complex(&ComplexArgs { path: source.path, builtin: source.builtin, wu, kappa, steenrod, qtable })
        }
        Command::Dcohom { source, q, k, witnesses, seed } => commands::dcohom(&DcohomArgs {
            path: source.path,
            builtin: source.builtin,
            q,
            k,
            witnesses,
            seed: resolve_seed(seed),
        }),
        Command::Series { spin_wu, delta_g_check, mod4_check, pontryagin, l_genus, spin_change } => {
            commands::series(&SeriesArgs { spin_wu, delta_g_check, mod4_check, pontryagin, l_genus, spin_change })
        }
        Command::Doldkan { path } => commands::doldkan(&path),
        Command::Picard { path } => commands::picard(&path),
        Command::Selftest { seed, milgram_trials, max_rank, unimodular_trials, trials, complexes, suites } => {
            let d = SuiteConfig::default();
            let config = SuiteConfig {
                seed: resolve_seed(seed),
                milgram_trials: milgram_trials.unwrap_or(d.milgram_trials),
                max_rank: max_rank.unwrap_or(d.max_rank),
                unimodular_trials: unimodular_trials.unwrap_or(d.unimodular_trials),
                identity_trials: trials.unwrap_or(d.identity_trials),
                random_complexes: complexes.unwrap_or(d.random_complexes),
            };
            commands::selftest(&SelftestArgs { config, suites })
        }
        Command::List => Ok(commands::list()),
        Command::Export { .. } => unreachable!("handled before dispatch"),
    }
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Export { kind, name } = &cli.command {
        return match commands::export(kind, name) {
            Ok(v) => {
                emit(&serde_json::to_string(&v).expect("plain data"));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let start = Instant::now();
    let outcome = match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        input: outcome.input,
        seed: outcome.seed,
        passed: outcome.passed,
        results: outcome.results,
        timing_ms: cli.timing.then(|| format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)),
    };
    emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
