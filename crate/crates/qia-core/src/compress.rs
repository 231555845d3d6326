//! Rejection-sampling compression of one-way protocols.
//!
//! A one-way protocol sends a message m ~ p(m|x) from Alice to Bob. If the
//! spectrum max-information I_s^β(X:M) is at most c, the message can be
//! replaced by the index of a candidate in a shared random stream drawn
//! from the marginal p_M: Alice scans candidates m₁, m₂, …, accepts m_j
//! with probability min(1, p(m_j|x) / (2^c · p_M(m_j))), and sends the
//! first accepted index (or aborts after K candidates). For cells under the
//! cap the accepted message is distributed exactly as p(m|x); cells above
//! the cap carry at most β of mass, and the candidate budget
//! K = ⌈(2/β)·2^c·ln(2/β)⌉ pushes the abort probability below β. The
//! resulting success degradation is measured here, never assumed.

use rand::Rng;
use rayon::prelude::*;

use crate::bits::Bitstring;
use crate::classical::{ClassicalStrategy, Message, SharedRandomness};
use crate::error::{Error, Result};
use crate::game::{win_count_encoded, GameSpec};
use crate::info::{ispec_smoothed, JointDistribution, SmoothingBudget};
use crate::rng::stream_rng;

/// A one-way private-coin protocol on finite alphabets: Alice sees x, emits
/// a public output and a message; Bob sees (message, y) and emits his
/// output. Inputs are uniform over their alphabets.
pub struct OneWayProtocol {
    name: String,
    nx: usize,
    ny: usize,
    message_dist: Vec<Vec<f64>>, // [x][m], rows sum to 1
    alice_out: Vec<u64>,
    bob_out: Vec<Vec<u64>>, // [m][y]
    /// Measured success probability; recorded by `measure_alpha`, never
    /// asserted as ground truth.
    alpha: Option<f64>,
}

impl OneWayProtocol {
    pub fn new(
        name: impl Into<String>,
        message_dist: Vec<Vec<f64>>,
        alice_out: Vec<u64>,
        bob_out: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let nx = message_dist.len();
        if nx == 0 || message_dist[0].is_empty() {
            return Err(Error::InvalidParam("empty message law".into()));
        }
        let nm = message_dist[0].len();
        for row in &message_dist {
            if row.len() != nm {
                return Err(Error::InvalidParam("ragged message law".into()));
            }
            let mass: f64 = row.iter().sum();
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (mass - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParam(
                    "conditional message law must be a distribution".into(),
                ));
            }
        }
        if alice_out.len() != nx {
            return Err(Error::InvalidParam("alice output table size".into()));
        }
        if bob_out.len() != nm || bob_out[0].is_empty() {
            return Err(Error::InvalidParam("bob output table size".into()));
        }
        let ny = bob_out[0].len();
        if bob_out.iter().any(|row| row.len() != ny) {
            return Err(Error::InvalidParam("ragged bob output table".into()));
        }
        Ok(OneWayProtocol {
            name: name.into(),
            nx,
            ny,
            message_dist,
            alice_out,
            bob_out,
            alpha: None,
        })
    }

    /// Lifts a two-phase classical strategy into protocol form. Alice's and
    /// Bob's outputs must not depend on the shared randomness (the message
    /// may); this is probed with two seeds rather than trusted.
    pub fn from_strategy(strategy: &dyn ClassicalStrategy, n: usize) -> Result<Self> {
        if n != strategy.copies() || n > 10 {
            return Err(Error::InvalidParam(format!(
                "protocol form needs the strategy's own n (= {}) and n <= 10",
                strategy.copies()
            )));
        }
        let nx = 1usize << n;
        let width = strategy.memory_width();
        let nm = 1usize << width;
        let probes = [SharedRandomness::new(0), SharedRandomness::new(1)];

        let mut message_dist = Vec::with_capacity(nx);
        let mut alice_out = Vec::with_capacity(nx);
        for xi in 0..nx {
            let x = Bitstring::from_uint(xi as u64, n);
            let (a0, _) = strategy.phase_t0(&x, &probes[0]);
            let (a1, _) = strategy.phase_t0(&x, &probes[1]);
            if a0 != a1 {
                return Err(Error::InvalidParam(
                    "strategy's public output depends on shared randomness".into(),
                ));
            }
            alice_out.push(a0.to_uint());
            message_dist.push(strategy.message_distribution(&x));
        }
        let mut bob_out = Vec::with_capacity(nm);
        for mi in 0..nm {
            let m = Message::from_index(mi as u64, width);
            let mut row = Vec::with_capacity(nx);
            for yi in 0..nx {
                let y = Bitstring::from_uint(yi as u64, n);
                let b0 = strategy.phase_t1(&m, &y, &probes[0]);
                let b1 = strategy.phase_t1(&m, &y, &probes[1]);
                if b0 != b1 {
                    return Err(Error::InvalidParam(
                        "strategy's second output depends on shared randomness".into(),
                    ));
                }
                row.push(b0.to_uint());
            }
            bob_out.push(row);
        }
        OneWayProtocol::new(strategy.name(), message_dist, alice_out, bob_out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.message_dist[0].len())
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// The exact joint p(x, m) under uniform x.
    pub fn message_joint(&self) -> Result<JointDistribution> {
        let px = 1.0 / self.nx as f64;
        JointDistribution::new(
            self.message_dist
                .iter()
                .map(|row| row.iter().map(|&p| p * px).collect())
                .collect(),
        )
    }

    /// Evaluates and records the exact success probability.
    pub fn measure_alpha(&mut self, relation: &Relation) -> Result<f64> {
        let alpha = evaluate_success(self, relation, EvalMode::Exact)?.value;
        self.alpha = Some(alpha);
        Ok(alpha)
    }
}

/// What the verifier accepts. Inputs and outputs are alphabet indices; for
/// the threshold relation they are n-bit string encodings.
pub enum Relation {
    /// win_count(x, y, a, b) ≥ t on n-bit encoded strings.
    ChshThreshold(GameSpec),
    /// Arbitrary predicate on (x, y, bob_output).
    Predicate(Box<dyn Fn(u64, u64, u64) -> bool + Send + Sync>),
    /// Accepts everything.
    AcceptAll,
}

impl Relation {
    fn accepts(&self, x: u64, y: u64, a: u64, b: u64) -> bool {
        match self {
            Relation::ChshThreshold(spec) => {
                win_count_encoded(spec.n(), x, y, a, b) >= spec.t()
            }
            Relation::Predicate(f) => f(x, y, b),
            Relation::AcceptAll => true,
        }
    }
}

pub enum EvalMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

pub struct SuccessEstimate {
    pub value: f64,
    /// Zero in exact mode.
    pub std_error: f64,
}

/// Success probability of the uncompressed protocol under uniform inputs.
pub fn evaluate_success(
    protocol: &OneWayProtocol,
    relation: &Relation,
    mode: EvalMode,
) -> Result<SuccessEstimate> {
    let (nx, ny, nm) = protocol.dims();
    match mode {
        EvalMode::Exact => {
            const MAX_ATOMS: usize = 1_000_000;
            let atoms = nx * ny * nm;
            if atoms > MAX_ATOMS {
                return Err(Error::AlphabetTooLarge {
                    cells: atoms,
                    limit: MAX_ATOMS,
                });
            }
            let mut acc = 0.0;
            for x in 0..nx {
                let a = protocol.alice_out[x];
                for m in 0..nm {
                    let pm = protocol.message_dist[x][m];
                    if pm == 0.0 {
                        continue;
                    }
                    let hits = (0..ny)
                        .filter(|&y| {
                            relation.accepts(x as u64, y as u64, a, protocol.bob_out[m][y])
                        })
                        .count();
                    acc += pm * hits as f64;
                }
            }
            Ok(SuccessEstimate {
                value: acc / (nx * ny) as f64,
                std_error: 0.0,
            })
        }
        EvalMode::MonteCarlo { trials, seed } => {
            let mut rng = stream_rng(seed, 0);
            let mut wins = 0u64;
            for _ in 0..trials {
                let x = rng.random_range(0..nx);
                let y = rng.random_range(0..ny);
                let m = sample_index(&protocol.message_dist[x], rng.random());
                if relation.accepts(
                    x as u64,
                    y as u64,
                    protocol.alice_out[x],
                    protocol.bob_out[m][y],
                ) {
                    wins += 1;
                }
            }
            let p = wins as f64 / trials as f64;
            Ok(SuccessEstimate {
                value: p,
                std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            })
        }
    }
}

fn sample_index(dist: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

/// The compressed protocol: candidate budget, cap exponent, and everything
/// needed to replay a candidate stream from a shared seed.
#[derive(Debug)]
pub struct CompressedProtocol {
    cap_exponent: f64,
    beta: f64,
    budget_k: u64,
    marginal: Vec<f64>,
    message_dist: Vec<Vec<f64>>,
    alice_out: Vec<u64>,
    bob_out: Vec<Vec<u64>>,
    nx: usize,
    ny: usize,
}

/// Builds the compressed protocol. Preconditions: β ∈ (0, α/2] against the
/// measured α, and I_s^β(X:M) ≤ c on the exact joint; the measured value is
/// returned in the error when the cap is violated.
pub fn compress(orig: &OneWayProtocol, cap_exponent: f64, beta: f64) -> Result<CompressedProtocol> {
    let alpha = orig.alpha.ok_or_else(|| {
        Error::InvalidParam("measure the protocol's success before compressing".into())
    })?;
    if !(beta > 0.0 && beta <= alpha / 2.0 + 1e-12) {
        return Err(Error::InvalidParam(format!(
            "beta must lie in (0, alpha/2] = (0, {:.6}], got {beta}",
            alpha / 2.0
        )));
    }
    let joint = orig.message_joint()?;
    let measured = ispec_smoothed(&joint, SmoothingBudget::new(beta)?)?;
    if measured > cap_exponent + 1e-9 {
        return Err(Error::SpectrumInfoExceedsCap {
            measured,
            cap: cap_exponent,
        });
    }

    let two_over_beta = 2.0 / beta;
    let k = (two_over_beta * cap_exponent.exp2() * two_over_beta.ln()).ceil() as u64;
    let marginal: Vec<f64> = {
        let (nx, _, nm) = orig.dims();
        (0..nm)
            .map(|m| (0..nx).map(|x| orig.message_dist[x][m]).sum::<f64>() / nx as f64)
            .collect()
    };
    Ok(CompressedProtocol {
        cap_exponent,
        beta,
        budget_k: k,
        marginal,
        message_dist: orig.message_dist.clone(),
        alice_out: orig.alice_out.clone(),
        bob_out: orig.bob_out.clone(),
        nx: orig.nx,
        ny: orig.ny,
    })
}

impl CompressedProtocol {
    /// Overrides the default candidate budget (it is a tunable; the default
    /// is derived from β).
    pub fn with_budget(mut self, k: u64) -> Self {
        assert!(k >= 1);
        self.budget_k = k;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget_k
    }

    pub fn cap_exponent(&self) -> f64 {
        self.cap_exponent
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Bits on the wire: the index 1..=K or abort, so ⌈log₂(K+1)⌉.
    pub fn communication_bits(&self) -> u32 {
        ceil_log2(self.budget_k + 1)
    }

    /// The target bound c + log₂(2/β) + log₂log₂(2/β); our K choice lands
    /// within two bits of it (reported, never assumed).
    pub fn stated_bound_bits(&self) -> f64 {
        let l = (2.0 / self.beta).log2();
        self.cap_exponent + l + l.log2()
    }

    /// Joint mass sitting above the cap 2^c — an upper-bound ingredient for
    /// both the abort rate and the distortion.
    pub fn tail_mass_above_cap(&self) -> f64 {
        let cap = self.cap_exponent.exp2();
        let mut mass = 0.0;
        for row in &self.message_dist {
            for (m, &p) in row.iter().enumerate() {
                if p > cap * self.marginal[m] {
                    mass += p / self.nx as f64;
                }
            }
        }
        mass
    }

    /// Alice's scan over the shared candidate stream: the index of the first
    /// accepted candidate and its message, or None after K rejections.
    fn scan(&self, x: usize, stream: &mut CandidateStream) -> Option<(u64, usize)> {
        let cap = self.cap_exponent.exp2();
        for j in 0..self.budget_k {
            let (m, u) = stream.candidate(j as usize);
            let accept_p = self.message_dist[x][m] / (cap * self.marginal[m]);
            if u < accept_p.min(1.0) {
                return Some((j + 1, m));
            }
        }
        None
    }
}

fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}

/// Lazily materialized shared candidate stream for one seed: pairs of a
/// message drawn from the marginal and an acceptance coin.
struct CandidateStream {
    rng: rand_chacha::ChaCha8Rng,
    marginal: Vec<f64>,
    cache: Vec<(usize, f64)>,
}

impl CandidateStream {
    fn new(master_seed: u64, stream: u64, marginal: Vec<f64>) -> Self {
        CandidateStream {
            rng: stream_rng(master_seed, stream),
            marginal,
            cache: Vec::new(),
        }
    }

    fn candidate(&mut self, j: usize) -> (usize, f64) {
        while self.cache.len() <= j {
            let m = sample_index(&self.marginal, self.rng.random());
            let u: f64 = self.rng.random();
            self.cache.push((m, u));
        }
        self.cache[j]
    }
}

/// Everything measured about one compression run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CompressionReport {
    pub name: String,
    pub cap_exponent: f64,
    pub beta: f64,
    pub candidate_budget: u64,
    pub comm_bits: u32,
    pub stated_bound_bits: f64,
    pub original_success: f64,
    pub compressed_success: f64,
    pub std_error: f64,
    pub best_seed: u64,
    pub best_seed_success: f64,
    pub abort_rate: f64,
    pub tail_mass_above_cap: f64,
    pub seeds: u64,
}

impl CompressionReport {
    /// The measured degradation guarantee: compressed ≥ original − 2β,
    /// within Monte Carlo resolution.
    pub fn degradation_within_bound(&self) -> bool {
        self.compressed_success >= self.original_success - 2.0 * self.beta - 3.0 * self.std_error
    }
}

/// Runs the compressed protocol over `seeds` shared candidate streams,
/// enumerating all (x, y) exactly for each stream. Also reports the best
/// fixed stream, which is the deterministic-protocol reading.
pub fn evaluate_compressed(
    comp: &CompressedProtocol,
    relation: &Relation,
    original_success: f64,
    seeds: u64,
    master_seed: u64,
    name: impl Into<String>,
) -> CompressionReport {
    let per_seed: Vec<(f64, f64)> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let mut stream = CandidateStream::new(master_seed, s, comp.marginal.clone());
            let mut wins = 0u64;
            let mut aborts = 0u64;
            for x in 0..comp.nx {
                match comp.scan(x, &mut stream) {
                    Some((_, m)) => {
                        for y in 0..comp.ny {
                            if relation.accepts(
                                x as u64,
                                y as u64,
                                comp.alice_out[x],
                                comp.bob_out[m][y],
                            ) {
                                wins += 1;
                            }
                        }
                    }
                    None => aborts += 1,
                }
            }
            (
                wins as f64 / (comp.nx * comp.ny) as f64,
                aborts as f64 / comp.nx as f64,
            )
        })
        .collect();

    let n = per_seed.len() as f64;
    let mean = per_seed.iter().map(|(s, _)| s).sum::<f64>() / n;
    let var = per_seed.iter().map(|(s, _)| (s - mean).powi(2)).sum::<f64>() / n;
    let se = (var / n).sqrt();
    let abort_rate = per_seed.iter().map(|(_, a)| a).sum::<f64>() / n;
    let (best_seed, best_success) = per_seed
        .iter()
        .enumerate()
        .fold((0u64, f64::NEG_INFINITY), |acc, (s, &(succ, _))| {
            if succ > acc.1 {
                (s as u64, succ)
            } else {
                acc
            }
        });

    CompressionReport {
        name: name.into(),
        cap_exponent: comp.cap_exponent,
        beta: comp.beta,
        candidate_budget: comp.budget_k,
        comm_bits: comp.communication_bits(),
        stated_bound_bits: comp.stated_bound_bits(),
        original_success,
        compressed_success: mean,
        std_error: se,
        best_seed,
        best_seed_success: best_success,
        abort_rate,
        tail_mass_above_cap: comp.tail_mass_above_cap(),
        seeds,
    }
}

/// One named instance for the degradation suite.
pub struct CompressionCase {
    pub name: String,
    pub protocol: OneWayProtocol,
    pub relation: Relation,
    pub cap_exponent: f64,
    pub beta: f64,
}

/// The standard small-protocol battery: strategy-backed threshold games
/// plus two synthetic channels, every case with measured I_s^β ≤ c.
pub fn standard_cases() -> Result<Vec<CompressionCase>> {
    use crate::classical::{ConstantZero, PrefixLeak, RandomHash};

    let mut cases = Vec::new();

    let threshold = |n: u32, t: u32| -> Result<Relation> {
        Ok(Relation::ChshThreshold(GameSpec::new(n, t)?))
    };

    cases.push(CompressionCase {
        name: "constant-zero n=2 t=2".into(),
        protocol: OneWayProtocol::from_strategy(&ConstantZero::new(2), 2)?,
        relation: threshold(2, 2)?,
        cap_exponent: 0.0,
        beta: 0.05,
    });
    cases.push(CompressionCase {
        name: "prefix-leak:1 n=3 t=3".into(),
        protocol: OneWayProtocol::from_strategy(&PrefixLeak::new(3, 1)?, 3)?,
        relation: threshold(3, 3)?,
        cap_exponent: 1.0,
        beta: 0.05,
    });
    cases.push(CompressionCase {
        name: "prefix-leak:2 n=4 t=4".into(),
        protocol: OneWayProtocol::from_strategy(&PrefixLeak::new(4, 2)?, 4)?,
        relation: threshold(4, 4)?,
        cap_exponent: 2.0,
        beta: 0.05,
    });
    cases.push(CompressionCase {
        name: "random-hash:2 n=4 t=3".into(),
        protocol: OneWayProtocol::from_strategy(&RandomHash::new(4, 2)?, 4)?,
        relation: threshold(4, 3)?,
        cap_exponent: 2.0,
        beta: 0.05,
    });

    // noisy identity channel: m = x with prob 3/4, else uniform over all
    let size = 8usize;
    let mut rows = vec![vec![0.25 / size as f64; size]; size];
    for (x, row) in rows.iter_mut().enumerate() {
        row[x] += 0.75;
    }
    let bob: Vec<Vec<u64>> = (0..size).map(|m| vec![m as u64]).collect();
    cases.push(CompressionCase {
        name: "noisy-identity 8x8".into(),
        protocol: OneWayProtocol::new("noisy-identity", rows, vec![0; size], bob)?,
        relation: Relation::Predicate(Box::new(|x, _y, z| z == x)),
        // max ratio is (3/4 + 1/32)/(1/8) = 6.25
        cap_exponent: 6.25f64.log2(),
        beta: 0.05,
    });

    // spike channel: x = 0 pins m = 0 (ratio 8, mass 1/8); other rows are
    // uniform over m >= 1 (ratio 8/7). Bob must recover whether x was the
    // spike. The cap 2^0.2 cuts the spike cell off, so beta has to absorb
    // its 1/8 of mass.
    let mut rows = vec![vec![0.0; size]; size];
    rows[0][0] = 1.0;
    for row in rows.iter_mut().skip(1) {
        for cell in row.iter_mut().skip(1) {
            *cell = 1.0 / (size - 1) as f64;
        }
    }
    let bob: Vec<Vec<u64>> = (0..size).map(|m| vec![m as u64]).collect();
    cases.push(CompressionCase {
        name: "spike-channel 8x8".into(),
        protocol: OneWayProtocol::new("spike-channel", rows, vec![0; size], bob)?,
        relation: Relation::Predicate(Box::new(|x, _y, z| (z == 0) == (x == 0))),
        cap_exponent: 0.2,
        beta: 0.125,
    });

    Ok(cases)
}

/// Runs one case end to end: measure α, compress, evaluate over seeds.
pub fn run_case(case: &mut CompressionCase, seeds: u64, master_seed: u64) -> Result<CompressionReport> {
    let alpha = case.protocol.measure_alpha(&case.relation)?;
    let comp = compress(&case.protocol, case.cap_exponent, case.beta)?;
    Ok(evaluate_compressed(
        &comp,
        &case.relation,
        alpha,
        seeds,
        master_seed,
        case.name.clone(),
    ))
}
