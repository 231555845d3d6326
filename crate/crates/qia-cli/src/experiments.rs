//! Monte Carlo experiment drivers.
//!
//! Trials fan out across rayon workers with one RNG stream per session, so
//! aggregate counts are identical for any worker count. Wherever the copies
//! win i.i.d. (the honest quantum prover; the baseline classical
//! strategies) the exact binomial tail is computed alongside the Monte
//! Carlo estimate and used as the oracle.

use qia_core::binom::binomial_tail_geq;
use qia_core::classical::{run_strategy, strategy_by_name, SharedRandomness};
use qia_core::game::{chernoff_bound, classical_value_base};
use qia_core::info::{imax_smoothed, mutual_information, SmoothingBudget};
use qia_core::quantum::{optimal_win_probability, NoiseChannel, NoiseParams, QuantumSim};
use qia_core::rng::stream_rng;
use qia_core::{Bitstring, GameSpec};
use rayon::prelude::*;

use crate::report::{BoundEntry, BoundReport, ImaxAccounting};

#[derive(Debug, Clone)]
pub struct QuantumExperiment {
    pub spec: GameSpec,
    pub gamma: f64,
    pub channel: NoiseChannel,
    pub trials: u64,
    pub seed: u64,
}

pub fn run_quantum_experiment(cfg: &QuantumExperiment) -> anyhow::Result<BoundReport> {
    let sim = QuantumSim::new(
        qia_core::quantum::MeasurementAngles::default(),
        NoiseParams::with_channel(cfg.gamma, cfg.channel)?,
    )?;
    let spec = cfg.spec;
    let accepts: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, i);
            qia_core::quantum::run_session(&spec, &sim, &mut rng).accepted as u64
        })
        .sum();

    let rate = accepts as f64 / cfg.trials as f64;
    let se = (rate * (1.0 - rate) / cfg.trials as f64).sqrt();
    let (n, t) = (spec.n() as u64, spec.t() as u64);
    let per_copy = optimal_win_probability() - cfg.gamma;
    let exact = binomial_tail_geq(n, t, per_copy);
    let completeness = 1.0 - chernoff_bound(n, 0.0, cfg.gamma);
    let eps = spec.epsilon();
    let threshold_bound = if eps > 0.0 {
        (-2.0 * eps * eps * n as f64).exp()
    } else {
        1.0
    };

    let entries = vec![
        BoundEntry::new(
            "exact_binomial_accept",
            "Pr[Bin(n, cos^2(pi/8) - gamma) >= t]",
            format!("n={n}, t={t}, per-copy={per_copy:.6}"),
            exact,
        ),
        BoundEntry::new(
            "completeness_chernoff",
            "1 - exp(-2 gamma^2 n)",
            format!("n={n}, gamma={}", cfg.gamma),
            completeness,
        ),
        BoundEntry::new(
            "threshold_game_bound",
            "exp(-2 eps^2 n)",
            format!("n={n}, eps={eps:.6}"),
            threshold_bound,
        ),
    ];

    // completeness: the rate must clear the Chernoff lower bound, and the
    // exact oracle must sit within Monte Carlo resolution. The empirical SE
    // collapses to 0 when every trial accepts, so the oracle's own binomial
    // SE sets the floor of the tolerance.
    let oracle_se = (exact * (1.0 - exact) / cfg.trials as f64).sqrt();
    let tol = 3.0 * se.max(oracle_se).max(1e-9);
    let bound_satisfied = rate >= completeness - tol && (rate - exact).abs() <= tol;

    Ok(BoundReport {
        experiment: "quantum".into(),
        n: spec.n(),
        t: spec.t(),
        gamma: Some(cfg.gamma),
        strategy: None,
        trials: cfg.trials,
        seed: cfg.seed,
        accept_rate: rate,
        std_error: se,
        entries,
        imax_accounting: None,
        bound_satisfied,
    })
}

#[derive(Debug, Clone)]
pub struct ClassicalExperiment {
    pub spec: GameSpec,
    pub strategy: String,
    pub trials: u64,
    pub seed: u64,
}

pub fn run_classical_experiment(cfg: &ClassicalExperiment) -> anyhow::Result<BoundReport> {
    let spec = cfg.spec;
    let n = spec.n() as usize;
    let strategy = strategy_by_name(&cfg.strategy, n)?;
    let width = strategy.memory_width() as u32;

    let strategy_ref = strategy.as_ref();
    let accepts: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, i);
            let x = Bitstring::random(n, &mut rng);
            let y = Bitstring::random(n, &mut rng);
            let shared = SharedRandomness::new(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(i));
            let (a, b, _m) = run_strategy(strategy_ref, &x, &y, &shared).expect("lengths");
            spec.accepts(&x, &y, &a, &b).expect("lengths") as u64
        })
        .sum();

    let rate = accepts as f64 / cfg.trials as f64;
    let se = (rate * (1.0 - rate) / cfg.trials as f64).sqrt();
    let eps = spec.epsilon();
    let threshold_bound = if eps > 0.0 {
        (-2.0 * eps * eps * spec.n() as f64).exp()
    } else {
        1.0
    };
    let leaked_bound = ((width as f64).exp2() * threshold_bound).min(1.0);

    let mut entries = vec![
        BoundEntry::new(
            "leaked_bits_bound",
            "min(1, 2^c * exp(-2 eps^2 n))",
            format!("n={}, eps={eps:.6}, c={width}", spec.n()),
            leaked_bound,
        ),
        BoundEntry::new(
            "threshold_game_bound",
            "exp(-2 eps^2 n)",
            format!("n={}, eps={eps:.6}", spec.n()),
            threshold_bound,
        ),
    ];
    if let Some(exact) = strategy.exact_accept_probability(&spec) {
        entries.push(BoundEntry::new(
            "exact_binomial_accept",
            "closed form for this strategy",
            format!("n={}, t={}", spec.n(), spec.t()),
            exact,
        ));
    }

    // exact memory accounting is cheap at small n
    let imax_accounting = if n <= 12 && (n + strategy.memory_width()) <= 22 {
        let joint = qia_core::classical::memory_joint(strategy.as_ref(), n)?;
        Some(ImaxAccounting {
            declared_width: width,
            imax_unsmoothed: imax_smoothed(&joint, SmoothingBudget::ZERO)?,
            mutual_information: mutual_information(&joint)?,
        })
    } else {
        None
    };

    let bound_satisfied = rate <= leaked_bound + 3.0 * se;

    Ok(BoundReport {
        experiment: "classical".into(),
        n: spec.n(),
        t: spec.t(),
        gamma: None,
        strategy: Some(cfg.strategy.clone()),
        trials: cfg.trials,
        seed: cfg.seed,
        accept_rate: rate,
        std_error: se,
        entries,
        imax_accounting,
        bound_satisfied,
    })
}

/// t = ⌈frac · n⌉ with a guard against float dust on exact multiples.
pub fn ceil_threshold(frac: f64, n: u32) -> u32 {
    let raw = (frac * n as f64 - 1e-9).ceil();
    (raw.max(1.0) as u32).min(n)
}

/// Margin of t/n over the classical base (1+√5)/4.
pub fn margin_epsilon(n: u32, t: u32) -> f64 {
    t as f64 / n as f64 - classical_value_base()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_experiment_matches_binomial_oracle() {
        let cfg = QuantumExperiment {
            spec: GameSpec::with_standard_threshold(100).unwrap(),
            gamma: 0.0,
            channel: NoiseChannel::OutcomeCoin,
            trials: 4_000,
            seed: 3,
        };
        let report = run_quantum_experiment(&cfg).unwrap();
        let exact = report.entry("exact_binomial_accept").unwrap().value;
        let direct = binomial_tail_geq(100, 83, optimal_win_probability());
        assert!((exact - direct).abs() < 1e-12);
        assert!((report.accept_rate - exact).abs() <= 4.0 * report.std_error.max(1e-3));
        assert!(report.bound_satisfied);
    }

    #[test]
    fn quantum_trivial_threshold_always_accepts() {
        let cfg = QuantumExperiment {
            spec: GameSpec::new(50, 1).unwrap(),
            gamma: 0.02,
            channel: NoiseChannel::OutcomeCoin,
            trials: 300,
            seed: 5,
        };
        let report = run_quantum_experiment(&cfg).unwrap();
        assert_eq!(report.accept_rate, 1.0);
    }

    #[test]
    fn classical_experiment_respects_leak_bound() {
        let cfg = ClassicalExperiment {
            spec: GameSpec::with_standard_threshold(200).unwrap(),
            strategy: "constant-zero".into(),
            trials: 4_000,
            seed: 7,
        };
        let report = run_classical_experiment(&cfg).unwrap();
        assert!(report.bound_satisfied);
        let exact = report.entry("exact_binomial_accept").unwrap().value;
        assert!((report.accept_rate - exact).abs() <= 4.0 * report.std_error.max(1e-3));
    }

    #[test]
    fn full_prefix_leak_reports_vacuous_bound() {
        let cfg = ClassicalExperiment {
            spec: GameSpec::with_standard_threshold(16).unwrap(),
            strategy: "prefix-leak:16".into(),
            trials: 500,
            seed: 9,
        };
        let report = run_classical_experiment(&cfg).unwrap();
        assert_eq!(report.accept_rate, 1.0);
        assert_eq!(report.entry("leaked_bits_bound").unwrap().value, 1.0);
        assert!(report.bound_satisfied);
    }

    #[test]
    fn imax_accounting_matches_prefix_width() {
        let cfg = ClassicalExperiment {
            spec: GameSpec::new(12, 10).unwrap(),
            strategy: "prefix-leak:4".into(),
            trials: 100,
            seed: 11,
        };
        let report = run_classical_experiment(&cfg).unwrap();
        let acc = report.imax_accounting.unwrap();
        assert_eq!(acc.imax_unsmoothed, 4.0);
        assert!((acc.mutual_information - 4.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_reports_per_seed() {
        let cfg = QuantumExperiment {
            spec: GameSpec::with_standard_threshold(64).unwrap(),
            gamma: 0.01,
            channel: NoiseChannel::OutcomeCoin,
            trials: 500,
            seed: 21,
        };
        let a = run_quantum_experiment(&cfg).unwrap();
        let b = run_quantum_experiment(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn ceil_threshold_handles_exact_multiples() {
        assert_eq!(ceil_threshold(0.83, 100), 83);
        assert_eq!(ceil_threshold(0.83, 200), 166);
        assert_eq!(ceil_threshold(0.83, 11_697), 9_709);
        assert_eq!(ceil_threshold(0.5, 10), 5);
        assert_eq!(ceil_threshold(0.75, 4), 3);
        assert_eq!(ceil_threshold(1.0, 7), 7);
    }
}
