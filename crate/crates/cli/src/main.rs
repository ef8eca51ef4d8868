//! `sumrank`: build sum-rank metric codes from a JSON config and report
//! their invariants as JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sumrank::codes::{Code, ENUMERATION_CAP};
use sumrank::config::{parse_bits, CodeSummary, Report, RunConfig, WeightReport};
use sumrank::invariants::{self, Verdict};
use sumrank::srmat::FqBasis;
use sumrank::suites::{self, Status, SuiteOptions};

#[derive(Parser)]
#[command(name = "sumrank", version, about = "Sum-rank metric codes and their ring invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ceiling on the number of codewords enumerated.
    #[arg(long, global = true, default_value_t = ENUMERATION_CAP)]
    cap: u64,
    /// Worker threads for enumeration (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Seed for randomised suites and isometries.
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
}

#[derive(clap::Args)]
struct Io {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OptIo {
    /// JSON run configuration; the suite's standard frame when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the configured code and summarise it.
    Construct(Io),
    /// Exhaustive weight distribution.
    Weights(Io),
    /// Minimum distance, Singleton bound and nondegeneracy.
    MsrdCheck(Io),
    /// The s-idealiser for a bit-string s (1: left action on that block).
    Idealiser {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        s: String,
    },
    /// Idealisers, centraliser and centre with fingerprints.
    Nuclear(Io),
    /// Compare invariants of `code` and `code_b`.
    Distinguish(Io),
    /// Run a named verification suite.
    VerifyTheorem {
        #[command(flatten)]
        io: OptIo,
        #[arg(long)]
        suite: String,
    },
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(RunConfig::from_json(&text)?)
}

fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn as_matrix(code: &Code) -> Result<Code> {
    Ok(match code.ring() {
        Ok(r) => code.to_matrix_ambient(&FqBasis::default_for(r.tower()))?,
        Err(_) => code.clone(),
    })
}

fn weights_json(code: &Code, cap: u64) -> Result<Value> {
    let wd = code.weight_distribution(cap)?;
    let witness = match wd.min_distance {
        Some(d) => code.first_of_weight(d, cap)?,
        None => None,
    };
    Ok(serde_json::to_value(WeightReport::new(&wd, witness))?)
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global()?;
    }
    let cap = cli.cap;
    match &cli.command {
        Command::Construct(io) => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let code = cfg.code(&built)?;
            emit(io.out.as_deref(), &Report::new("construct", &cfg, &built, CodeSummary::of(&code)))?;
        }
        Command::Weights(io) => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let code = cfg.code(&built)?;
            emit(io.out.as_deref(), &Report::new("weights", &cfg, &built, weights_json(&code, cap)?))?;
        }
        Command::MsrdCheck(io) => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let code = cfg.code(&built)?;
            let wd = code.weight_distribution(cap)?;
            let nondegenerate = match code.nondegeneracy()? {
                Ok(()) => json!({"nondegenerate": true}),
                Err(w) => json!({"nondegenerate": false, "witness": w}),
            };
            let result = json!({
                "min_distance": wd.min_distance,
                "log_q_size": wd.log_q_size,
                "singleton_exponent": wd.singleton_exponent,
                "msrd": wd.msrd,
                "nondegeneracy": nondegenerate,
            });
            emit(io.out.as_deref(), &Report::new("msrd-check", &cfg, &built, result))?;
        }
        Command::Idealiser { io, s } => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let code = as_matrix(&cfg.code(&built)?)?;
            let bits = parse_bits(s)?;
            let sub = invariants::s_idealiser(&code, &bits)?;
            let result = json!({
                "s": s,
                "fingerprint": sub.fingerprint()?,
                "basis": sub.space().rows,
            });
            emit(io.out.as_deref(), &Report::new("idealiser", &cfg, &built, result))?;
        }
        Command::Nuclear(io) => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let code = cfg.code(&built)?;
            let np = invariants::nuclear_parameters(&code, cap)?;
            let field_criterion = match code.weight_distribution(cap) {
                Ok(wd) => {
                    let shapes = code.ambient().shapes();
                    let threshold = shapes.iter().map(|s| s.0).sum::<usize>() / 2 + 1;
                    let full = wd.counts.last().is_some_and(|&c| c > 0);
                    json!({
                        "full_weight_codeword": full,
                        "min_distance": wd.min_distance,
                        "threshold": threshold,
                        "hypothesis_holds": full && wd.min_distance.is_some_and(|d| d >= threshold),
                        "left_is_field": np.left_idealiser.is_field,
                    })
                }
                Err(_) => Value::Null,
            };
            let result = json!({
                "sizes": np.sizes().map(|x| x.to_string()),
                "parameters": np,
                "field_criterion": field_criterion,
            });
            emit(io.out.as_deref(), &Report::new("nuclear", &cfg, &built, result))?;
        }
        Command::Distinguish(io) => {
            let cfg = read_config(&io.config)?;
            let built = cfg.build()?;
            let a = cfg.code(&built)?;
            let b = cfg.code_b(&built)?;
            let cert = invariants::distinguish(&a, &b, cap)?;
            let undetermined = cert.verdict == Verdict::Undetermined;
            let result = json!({
                "code": CodeSummary::of(&a),
                "code_b": CodeSummary::of(&b),
                "certificate": cert,
            });
            emit(io.out.as_deref(), &Report::new("distinguish", &cfg, &built, result))?;
            if undetermined {
                return Ok(2);
            }
        }
        Command::VerifyTheorem { io, suite } => {
            let cfg = match &io.config {
                Some(p) => Some(read_config(p)?),
                None => suites::default_config(suite),
            };
            let opts = SuiteOptions { seed: cli.seed, cap };
            let report = suites::run_suite(suite, cfg.as_ref(), opts)?;
            let failed = report.status == Status::Fail;
            let value = json!({
                "schema_version": sumrank::config::SCHEMA_VERSION,
                "command": "verify-theorem",
                "config": cfg,
                "seed": cli.seed,
                "result": report,
            });
            emit(io.out.as_deref(), &value)?;
            if failed {
                bail!("suite {suite} has failing checks");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let outcome = run(&cli);
    log::info!("finished in {:?}", start.elapsed());
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
