//! `qia` — experiment driver for the threshold-CHSH information-advantage
//! protocol: in-process Monte Carlo runs, bound sweeps, the parameter
//! audit, the cross-module fact battery, and the networked verifier and
//! prover.

use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand};
use qia_core::quantum::NoiseChannel;
use qia_core::GameSpec;
use qia_protocol::prover::{run_client, ClientConfig, ProverKind};
use qia_protocol::verifier::{Verifier, VerifierConfig};
use qia_protocol::{read_log, replay_check};

use qia_cli::audit::{audit_parameters, render_audit};
use qia_cli::checks;
use qia_cli::config::{resolve, FileConfig};
use qia_cli::experiments::{
    run_classical_experiment, run_quantum_experiment, ClassicalExperiment, QuantumExperiment,
};
use qia_cli::sweep::{run_sweep, SweepConfig};

#[derive(Parser)]
#[command(name = "qia", version, about = "threshold-CHSH quantum information advantage toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo accept rate of the simulated honest quantum prover.
    RunQuantum(RunArgs),
    /// Monte Carlo accept rate of a named classical strategy.
    RunClassical(RunArgs),
    /// Evaluate the headline formulas next to their claimed figures.
    AuditParameters {
        /// Emit the audit as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run the cross-module fact battery; nonzero exit on any failure.
    VerifyFacts {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Grid sweep over (n, gamma, t/n, strategy), CSV out.
    Sweep(SweepArgs),
    /// Serve the verifier over TCP.
    Serve(ServeArgs),
    /// Run a prover client against a verifier.
    Prove(ProveArgs),
    /// Recompute verdicts from a session log and compare.
    Replay {
        #[arg(long)]
        log: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    /// Threshold; defaults to ceil(0.83 n).
    #[arg(long)]
    t: Option<u32>,
    /// Per-copy win deficit of the noisy device (quantum runs).
    #[arg(long)]
    gamma: Option<f64>,
    /// Noise channel: outcome-coin | depolarize-memory.
    #[arg(long)]
    channel: Option<String>,
    /// Strategy name (classical runs): constant-zero, prefix-leak:<c>, random-hash:<c>.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the full report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated copies counts, e.g. 1000,10000.
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    gamma_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    t_fractions: Option<Vec<f64>>,
    /// `quantum` and/or classical strategy names.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ServeArgs {
    /// Bind address, e.g. 127.0.0.1:4400 (port 0 picks one).
    #[arg(long, default_value = "127.0.0.1:0")]
    listen: String,
    #[arg(long)]
    n: u32,
    /// Threshold; defaults to ceil(0.83 n).
    #[arg(long)]
    t: Option<u32>,
    /// Seeded transcripts; omit for system entropy.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 30_000)]
    timeout_ms: u64,
    /// Append NDJSON session records here.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Exit after this many sessions (serves forever when omitted).
    #[arg(long)]
    max_sessions: Option<u64>,
}

#[derive(clap::Args)]
struct ProveArgs {
    /// Verifier address, e.g. 127.0.0.1:4400.
    #[arg(long)]
    connect: String,
    /// quantum-sim | classical:<name>.
    #[arg(long, default_value = "quantum-sim")]
    kind: String,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Noise channel for quantum-sim: outcome-coin | depolarize-memory.
    #[arg(long, default_value = "outcome-coin")]
    channel: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    sessions: u64,
    #[arg(long, default_value_t = 30_000)]
    timeout_ms: u64,
    /// Cross-check the verifier's announced n.
    #[arg(long)]
    n: Option<u32>,
    /// Write the exit report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_channel(name: &str) -> anyhow::Result<NoiseChannel> {
    match name {
        "outcome-coin" => Ok(NoiseChannel::OutcomeCoin),
        "depolarize-memory" => Ok(NoiseChannel::DepolarizeMemory),
        other => anyhow::bail!("unknown channel {other:?}"),
    }
}

fn spec_from(n: u32, t: Option<u32>) -> anyhow::Result<GameSpec> {
    Ok(match t {
        Some(t) => GameSpec::new(n, t)?,
        None => GameSpec::with_standard_threshold(n)?,
    })
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::RunQuantum(args) => {
            let file = FileConfig::load(args.config.as_deref())?;
            let n = resolve(args.n, file.n, 1_000);
            let spec = spec_from(n, args.t.or(file.t))?;
            let cfg = QuantumExperiment {
                spec,
                gamma: resolve(args.gamma, file.gamma, 0.0),
                channel: parse_channel(&resolve(
                    args.channel,
                    file.channel,
                    "outcome-coin".into(),
                ))?,
                trials: resolve(args.trials, file.trials, 1_000),
                seed: resolve(args.seed, file.seed, 1),
            };
            let report = run_quantum_experiment(&cfg)?;
            print!("{}", report.render_table());
            if let Some(path) = args.json.or(file.json) {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            anyhow::ensure!(report.bound_satisfied, "empirical rate violated its bound");
        }
        Cmd::RunClassical(args) => {
            let file = FileConfig::load(args.config.as_deref())?;
            let n = resolve(args.n, file.n, 100);
            let spec = spec_from(n, args.t.or(file.t))?;
            let cfg = ClassicalExperiment {
                spec,
                strategy: resolve(args.strategy, file.strategy, "constant-zero".into()),
                trials: resolve(args.trials, file.trials, 1_000),
                seed: resolve(args.seed, file.seed, 1),
            };
            let report = run_classical_experiment(&cfg)?;
            print!("{}", report.render_table());
            if let Some(path) = args.json.or(file.json) {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            anyhow::ensure!(report.bound_satisfied, "empirical rate violated its bound");
        }
        Cmd::AuditParameters { json } => {
            let lines = audit_parameters();
            if json {
                println!("{}", serde_json::to_string_pretty(&lines)?);
            } else {
                print!("{}", render_audit(&lines));
            }
        }
        Cmd::VerifyFacts { seed } => {
            let results = checks::run_all(seed);
            print!("{}", checks::render(&results));
            if results.iter().any(|r| !r.passed) {
                std::process::exit(1);
            }
        }
        Cmd::Sweep(args) => {
            let file = FileConfig::load(args.config.as_deref())?;
            let cfg = SweepConfig {
                n_values: resolve(args.n_values, file.n_values, vec![1_000]),
                gamma_values: resolve(args.gamma_values, file.gamma_values, vec![0.0, 0.01]),
                t_fractions: resolve(args.t_fractions, file.t_fractions, vec![0.83]),
                strategies: resolve(args.strategies, file.strategies, vec!["quantum".into()]),
                trials: resolve(args.trials, file.trials, 1_000),
                seed: resolve(args.seed, file.seed, 1),
            };
            let csv = run_sweep(&cfg)?;
            match args.out.or(file.out) {
                Some(path) => std::fs::write(&path, csv)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
        }
        Cmd::Serve(args) => {
            let mut cfg = VerifierConfig::new(spec_from(args.n, args.t)?);
            cfg.seed = args.seed;
            cfg.timeout = Duration::from_millis(args.timeout_ms);
            cfg.log_path = args.log;
            cfg.max_sessions = args.max_sessions;
            let verifier = Verifier::bind(&args.listen, cfg)?;
            // announced before serving so callers can parse the chosen port
            println!("listening on {}", verifier.local_addr()?);
            use std::io::Write;
            std::io::stdout().flush().ok();
            let records = verifier.run()?;
            let accepts = records
                .iter()
                .filter(|r| r.verdict == qia_protocol::Verdict::Accept)
                .count();
            println!("served {} sessions, {} accepts", records.len(), accepts);
        }
        Cmd::Prove(args) => {
            let kind = match args.kind.as_str() {
                "quantum-sim" => ProverKind::QuantumSim {
                    gamma: args.gamma,
                    channel: parse_channel(&args.channel)?,
                },
                other => ProverKind::parse(other, args.gamma)?,
            };
            let report = run_client(&ClientConfig {
                addr: args.connect,
                kind,
                seed: args.seed,
                sessions: args.sessions,
                timeout: Duration::from_millis(args.timeout_ms),
                expected_n: args.n,
            })?;
            println!(
                "{}: {} sessions, {} accepts, {} rejects, {} errors (rate {:.6})",
                report.prover,
                report.sessions,
                report.accepts,
                report.rejects,
                report.errors,
                report.accept_rate
            );
            println!(
                "declared memory: {} bits, accounting: {:?}",
                report.memory_meta.declared_width, report.memory_meta.accounting
            );
            if let Some(path) = args.json {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Cmd::Replay { log } => {
            let records = read_log(&log)?;
            let report = replay_check(&records);
            println!(
                "{} records: {} complete, {} aborted, {} mismatches",
                report.total,
                report.complete,
                report.aborted,
                report.mismatches.len()
            );
            for m in &report.mismatches {
                println!("  MISMATCH {m}");
            }
            if !report.is_clean() {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
