use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use commute_lab::commute::Algorithm;
use commute_lab::generators::{Generated, GeneratorSpec};
use commute_lab::harness::{
    compute, parse_range, run_suite, sweep, sweep_csv, to_json, with_threads, ComputeOptions,
    Family, Input, Quantity, Suite, VerifyOptions,
};
use commute_lab::measures::{AnyMeasure, ScalarSet};
use commute_lab::oracle::Caps;
use commute_lab::{Error, Result};

/// Exact commuting-pair statistics for 2×2 matrix measures.
///
/// Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 cap exceeded.
/// Oracle caps are read from COMMUTE_LAB_CAPS, e.g. `set_t=6,delta=64`.
#[derive(Parser)]
#[command(name = "commute-lab", version)]
struct Cli {
    /// Worker threads for the counting engines; output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute quantities for a set or measure and print a JSON report.
    Compute {
        /// Newline-delimited scalar set, or a JSON measure.
        #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
        set: Option<PathBuf>,
        /// Inline generator spec such as `interval:4`, or its JSON form.
        #[arg(long)]
        gen: Option<String>,
        /// Comma-separated: T,E,M,delta,affine_energy,asym,profiles,moments,dyadic_levels.
        #[arg(long = "q", default_value = "T")]
        quantities: String,
        /// Recompute with the brute-force oracle and report agreement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::ZeroPattern)]
        algorithm: AlgorithmArg,
        /// Second set D for the asymmetric counts.
        #[arg(long = "with")]
        partner: Option<PathBuf>,
        /// Comma-separated moment orders for `moments`.
        #[arg(long, default_value = "2,3")]
        moments: String,
    },
    /// Run a verification suite and print a JSON report with a verdict.
    Verify {
        /// theorem1, sharp-ratio, affine-bijection, lower-bounds, wtun,
        /// closed-forms, growth, oracle, or `all`.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        /// Instance size range, `lo..hi`.
        #[arg(long)]
        sizes: Option<String>,
        /// Family parameter range, `lo..hi`.
        #[arg(long = "N")]
        n: Option<String>,
    },
    /// Tabulate a family over a parameter range.
    Sweep {
        /// interval, geometric or gap.
        family: String,
        /// Parameter range, `lo..hi`.
        #[arg(long = "N", default_value = "4..12")]
        n: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the set (one value per line) or measure (JSON) of a generator spec.
    Gen { spec: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Pairwise,
    ZeroPattern,
    Commutant,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Pairwise => Algorithm::Pairwise,
            AlgorithmArg::ZeroPattern => Algorithm::ZeroPattern,
            AlgorithmArg::Commutant => Algorithm::Commutant,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// What a command produced: text for stdout and whether it passed.
struct Output {
    text: String,
    passed: bool,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("invalid {what} `{s}`")))
        })
        .collect()
}

fn run(command: Command) -> Result<Output> {
    let caps = Caps::from_env()?;
    let passed = |text| Ok(Output { text, passed: true });
    match command {
        Command::Compute {
            set,
            gen,
            quantities,
            oracle,
            algorithm,
            partner,
            moments,
        } => {
            let input = match (&set, &gen) {
                (Some(path), _) => Input::from_text(&read(path)?, path.display().to_string())?,
                (None, Some(spec)) => Input::from_spec(&GeneratorSpec::parse(spec)?)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let partner = match partner {
                Some(path) => Some(ScalarSet::parse(&read(&path)?)?),
                None => None,
            };
            let opts = ComputeOptions {
                algorithm: algorithm.into(),
                oracle,
                partner,
                moments: list(&moments, "moment order")?,
                caps,
            };
            let report = compute(&input, &Quantity::parse_list(&quantities)?, &opts)?;
            let agreed = report["oracle"]["agreement"].as_bool().unwrap_or(true);
            Ok(Output {
                text: to_json(&report),
                passed: agreed,
            })
        }
        Command::Verify {
            suite,
            seed,
            trials,
            sizes,
            n,
        } => {
            let opts = VerifyOptions {
                seed,
                trials,
                sizes: sizes.as_deref().map(parse_range).transpose()?,
                n: n.as_deref().map(parse_range).transpose()?,
                caps,
            };
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let mut text = String::new();
            let mut ok = true;
            for s in suites {
                let report = run_suite(s, &opts)?;
                if !report.passed() {
                    ok = false;
                    eprintln!(
                        "POTENTIAL THEOREM DISCREPANCY: suite {s} failed on {} instance check(s)",
                        report.failures.len()
                    );
                    for f in report.failures.iter().take(10) {
                        eprintln!("  {f}");
                    }
                }
                text.push_str(&report.to_json());
            }
            Ok(Output { text, passed: ok })
        }
        Command::Sweep { family, n, format } => {
            let family: Family = family.parse()?;
            let rows = sweep(family, parse_range(&n)?)?;
            passed(match format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => to_json(&rows),
            })
        }
        Command::Gen { spec } => passed(match GeneratorSpec::parse(&spec)?.generate()? {
            Generated::Set(a) => a.to_text(),
            Generated::Measure(nu) => AnyMeasure::Scalar(nu).to_json(),
            Generated::Matrix(mu) => AnyMeasure::Matrix(mu).to_json(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(cli.threads, || run(cli.command)).and_then(|r| r) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
