use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use cohsys::campaign::{run_campaign, AlphaRule, VerifyCampaignConfig};
use cohsys::delta::{delta_bruteforce, delta_formula, DeltaInput};
use cohsys::{classify, PrimeField, Rational, StabilityChecker, SystemInstance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

mod ranges;
mod table;

use ranges::IntRange;

/// Coherent systems on the projective line: classification tables,
/// stability checks on explicit systems, and randomized cross-checks.
#[derive(Parser)]
#[command(name = "cohsys", version)]
struct Cli {
    /// Field size for sampled or checked systems.
    #[arg(long, global = true, default_value_t = cohsys::exactmath::DEFAULT_PRIME)]
    q: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random draws per cell (verify, default 20) or per pair (delta-check, default 50).
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Lift the subspace-count guard (k > 3 at q > 31).
    #[arg(long, global = true)]
    force_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    IntervalMidpoint,
    CellMidpoints,
    Explicit,
}

#[derive(Subcommand)]
enum Command {
    /// Verdict for one triple (n, d, k).
    Classify {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// Verdicts for every triple in the given ranges (`a..b` inclusive, or a single value).
    Table {
        #[arg(long, allow_hyphen_values = true)]
        n: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        d: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        k: IntRange,
    },
    /// Compare verdicts with the stability checker on sampled systems.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        n: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        d: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        k: IntRange,
        #[arg(long, value_enum, default_value = "interval-midpoint")]
        alpha_rule: RuleArg,
        /// Comma-separated alphas for the explicit rule, e.g. `1/2,1,10`.
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<Rational>,
        #[arg(long, default_value_t = 0.8)]
        stable_threshold: f64,
        #[arg(long, default_value_t = 0)]
        max_false_positives: usize,
        /// Sample only systems whose sections generate the bundle.
        #[arg(long)]
        require_generation: bool,
    },
    /// Compare the delta formula with brute force on random inputs.
    DeltaCheck { a: i64, t: i64 },
    /// Alpha-stability of a system read from a JSON file.
    CheckInstance {
        path: PathBuf,
        #[arg(long, default_value = "1")]
        alpha: Rational,
        /// Report critical alphas and the stable interval instead.
        #[arg(long)]
        interval: bool,
    },
}

/// Exit status for a run that completed but found a disagreement.
const DISAGREE: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(DISAGREE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn json_only(cli: &Cli, command: &str) -> anyhow::Result<()> {
    if cli.format == Some(Format::Csv) {
        bail!("{command} only writes JSON");
    }
    Ok(())
}

/// `Ok(false)` means the command ran and observed a disagreement.
fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Classify { n, d, k } => {
            json_only(cli, "classify")?;
            print_json(&classify(*n, *d, *k)?)?;
            Ok(true)
        }
        Command::Table { n, d, k } => {
            let rows = table::rows(n, d, k)?;
            let out = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => table::to_csv(&rows)?,
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            emit(&out)?;
            Ok(true)
        }
        Command::Verify { n, d, k, alpha_rule, alphas, stable_threshold, max_false_positives, require_generation } => {
            json_only(cli, "verify")?;
            let alpha_rule = match alpha_rule {
                RuleArg::IntervalMidpoint => AlphaRule::IntervalMidpoint,
                RuleArg::CellMidpoints => AlphaRule::CellMidpoints,
                RuleArg::Explicit if alphas.is_empty() => bail!("--alpha-rule explicit needs --alphas"),
                RuleArg::Explicit => AlphaRule::Explicit(alphas.clone()),
            };
            if !alphas.is_empty() && !matches!(alpha_rule, AlphaRule::Explicit(_)) {
                bail!("--alphas only applies to --alpha-rule explicit");
            }
            let config = VerifyCampaignConfig {
                n: n.bounds(),
                d: d.bounds(),
                k: k.bounds(),
                q: cli.q,
                trials: cli.trials.unwrap_or(20),
                alpha_rule,
                seed: cli.seed,
                stable_threshold: *stable_threshold,
                max_false_positives: *max_false_positives,
                force_large: cli.force_large,
                require_generation: *require_generation,
            };
            let report = run_campaign(&config)?;
            print_json(&report)?;
            Ok(report.all_agree)
        }
        Command::DeltaCheck { a, t } => {
            json_only(cli, "delta-check")?;
            let trials = cli.trials.unwrap_or(50);
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let formula = delta_formula(*a, *t)?;
            let field = PrimeField::new(cli.q)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut observed = Vec::with_capacity(trials);
            for _ in 0..trials {
                let input = DeltaInput::random(*a, *t, &field, &mut rng)?;
                observed.push(delta_bruteforce(&input, &field)?);
            }
            let max = *observed.iter().max().unwrap();
            let matches = observed.iter().filter(|&&v| v == formula).count();
            let exceed = observed.iter().filter(|&&v| v > formula).count();
            print_json(&json!({
                "a": a,
                "t": t,
                "q": cli.q,
                "seed": cli.seed,
                "trials": trials,
                "formula": formula,
                "observed_max": max,
                "match_fraction": matches as f64 / trials as f64,
                "exceeding": exceed,
            }))?;
            Ok(max == formula && exceed == 0)
        }
        Command::CheckInstance { path, alpha, interval } => {
            json_only(cli, "check-instance")?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let inst = SystemInstance::from_json(&text)?;
            let checker = StabilityChecker::new(&inst, cli.force_large)?;
            if *interval {
                print_json(&json!({
                    "critical_alphas": checker.critical_alphas(),
                    "stability_interval": checker.stability_interval()?,
                }))?;
            } else {
                print_json(&checker.is_alpha_stable(alpha)?)?;
            }
            Ok(true)
        }
    }
}
