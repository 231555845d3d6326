//! The CHSH game and its threshold parallel repetition.
//!
//! A single copy takes bit inputs (x, y) and bit outputs (a, b) and is won
//! when a ⊕ b = x·y. The threshold game CHSH^{t/n} plays n independent
//! copies with uniform inputs and accepts when at least t copies win.
//!
//! Closed forms used throughout: the quantum value of n copies is
//! cos^{2n}(π/8) and the classical value is at most ((1+√5)/4)^n. Small
//! instances can be solved exactly by exhausting deterministic strategies.

use rayon::prelude::*;

use crate::bits::Bitstring;
use crate::error::{Error, Result};

/// Golden-ratio constant (1+√5)/4, the base of the classical value bound.
pub fn classical_value_base() -> f64 {
    (1.0 + 5.0_f64.sqrt()) / 4.0
}

/// Single-copy CHSH predicate: a ⊕ b = x·y.
pub fn chsh_predicate(x: u8, y: u8, a: u8, b: u8) -> bool {
    debug_assert!(x <= 1 && y <= 1 && a <= 1 && b <= 1);
    (a ^ b) == (x & y)
}

/// Number of copies won: |{i : a_i ⊕ b_i = x_i·y_i}|.
pub fn win_count(x: &Bitstring, y: &Bitstring, a: &Bitstring, b: &Bitstring) -> Result<u32> {
    let n = x.len();
    y.check_len(n)?;
    a.check_len(n)?;
    b.check_len(n)?;
    let mut count = 0;
    for i in 0..n {
        if chsh_predicate(x.bit(i), y.bit(i), a.bit(i), b.bit(i)) {
            count += 1;
        }
    }
    Ok(count)
}

/// `win_count` on n-bit integer encodings: a copy wins iff the i-th bit of
/// (a ⊕ b) ⊕ (x & y) is zero.
pub fn win_count_encoded(n: u32, x: u64, y: u64, a: u64, b: u64) -> u32 {
    debug_assert!(n <= 64);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    n - (((a ^ b) ^ (x & y)) & mask).count_ones()
}

/// The threshold game CHSH^{t/n}.
///
/// The margin ε = t/n − (1+√5)/4 is always recomputed from (n, t) rather
/// than stored, so it cannot drift from the pair that defines it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GameSpec {
    n: u32,
    t: u32,
}

impl GameSpec {
    pub fn new(n: u32, t: u32) -> Result<Self> {
        if n == 0 || t == 0 || t > n {
            return Err(Error::InvalidParam(format!(
                "GameSpec requires 0 < t <= n, got n={n}, t={t}"
            )));
        }
        Ok(GameSpec { n, t })
    }

    /// The standard protocol threshold t = ⌈0.83·n⌉, computed in integer
    /// arithmetic so no float rounding can shift the boundary.
    pub fn with_standard_threshold(n: u32) -> Result<Self> {
        let t = (83 * n as u64).div_ceil(100) as u32;
        Self::new(n, t)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Margin over the classical base: ε = t/n − (1+√5)/4.
    pub fn epsilon(&self) -> f64 {
        self.t as f64 / self.n as f64 - classical_value_base()
    }

    /// Accepts iff at least t of the n copies satisfy the CHSH predicate.
    pub fn accepts(
        &self,
        x: &Bitstring,
        y: &Bitstring,
        a: &Bitstring,
        b: &Bitstring,
    ) -> Result<bool> {
        x.check_len(self.n as usize)?;
        Ok(win_count(x, y, a, b)? >= self.t)
    }
}

/// Alias for `GameSpec::accepts` as a free function.
pub fn threshold_accept(
    spec: &GameSpec,
    x: &Bitstring,
    y: &Bitstring,
    a: &Bitstring,
    b: &Bitstring,
) -> Result<bool> {
    spec.accepts(x, y, a, b)
}

/// Quantum value of n parallel copies: cos^{2n}(π/8).
pub fn quantum_value(n: u32) -> f64 {
    assert!(n >= 1);
    std::f64::consts::FRAC_PI_8.cos().powi(2 * n as i32)
}

/// Classical value bound for n parallel copies: ((1+√5)/4)^n.
/// Tight for large n; for n ≤ 2 the exact value comes from `brute_force_value`.
pub fn classical_value_bound(n: u32) -> f64 {
    assert!(n >= 1);
    classical_value_base().powi(n as i32)
}

/// Two-sided Chernoff tail for n i.i.d. Bernoulli(δ) variables deviating to
/// fraction γ: e^{−2(γ−δ)²n}.
pub fn chernoff_bound(n: u64, delta: f64, gamma: f64) -> f64 {
    assert!((0.0..=1.0).contains(&delta) && (0.0..=1.0).contains(&gamma));
    (-2.0 * (gamma - delta).powi(2) * n as f64).exp()
}

/// A deterministic strategy pair: output tables indexed by the input string,
/// plus an optional c-bit message table for one-way communication models.
#[derive(Debug, Clone)]
pub struct StrategyTable {
    n: usize,
    alice: Vec<Bitstring>,
    bob: Vec<Bitstring>,
    message: Option<Vec<Bitstring>>,
}

impl StrategyTable {
    pub fn new(n: usize, alice: Vec<Bitstring>, bob: Vec<Bitstring>) -> Result<Self> {
        let domain = 1usize << n;
        if alice.len() != domain || bob.len() != domain {
            return Err(Error::InvalidParam(format!(
                "strategy tables must cover all {domain} inputs"
            )));
        }
        for out in alice.iter().chain(bob.iter()) {
            out.check_len(n)?;
        }
        Ok(StrategyTable {
            n,
            alice,
            bob,
            message: None,
        })
    }

    /// Attaches a message table; every entry must share one width c.
    pub fn with_messages(mut self, message: Vec<Bitstring>) -> Result<Self> {
        if message.len() != 1usize << self.n {
            return Err(Error::InvalidParam(
                "message table must cover all inputs".into(),
            ));
        }
        let c = message[0].len();
        for m in &message {
            m.check_len(c)?;
        }
        self.message = Some(message);
        Ok(self)
    }

    /// Decodes a strategy pair from the integer encodings used by the
    /// exhaustive search: output(x) = bits n·x .. n·x+n−1 of the code.
    pub fn from_encoding(n: usize, alice_code: u64, bob_code: u64) -> Result<Self> {
        assert!(n <= 4, "encoded tables only make sense for tiny n");
        let domain = 1usize << n;
        let decode = |code: u64| -> Vec<Bitstring> {
            (0..domain)
                .map(|x| {
                    let out = (code >> (n * x)) & ((1 << n) - 1);
                    Bitstring::from_uint(out, n)
                })
                .collect()
        };
        StrategyTable::new(n, decode(alice_code), decode(bob_code))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alice_output(&self, x: &Bitstring) -> Result<&Bitstring> {
        x.check_len(self.n)?;
        Ok(&self.alice[x.to_uint() as usize])
    }

    pub fn bob_output(&self, y: &Bitstring) -> Result<&Bitstring> {
        y.check_len(self.n)?;
        Ok(&self.bob[y.to_uint() as usize])
    }

    pub fn message(&self, x: &Bitstring) -> Result<Option<&Bitstring>> {
        x.check_len(self.n)?;
        Ok(self.message.as_ref().map(|m| &m[x.to_uint() as usize]))
    }

    /// Exact count of input pairs (x, y) on which this pair wins at least t
    /// copies, over all 4^n uniform inputs.
    pub fn winning_input_count(&self, t: u32) -> Result<u64> {
        let domain = 1u64 << self.n;
        let mut count = 0;
        for xi in 0..domain {
            let x = Bitstring::from_uint(xi, self.n);
            let a = self.alice_output(&x)?.clone();
            for yi in 0..domain {
                let y = Bitstring::from_uint(yi, self.n);
                let b = self.bob_output(&y)?;
                if win_count(&x, &y, &a, b)? >= t {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Which repetition of the base game to value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameVariant {
    /// All n copies must win (equivalently, threshold t = n).
    FullParallel,
    /// At least t copies must win.
    Threshold(u32),
}

/// An exactly computed game value: winning input pairs over total input
/// pairs. Counting over the 4^n uniform inputs keeps the argmax over
/// strategies free of float ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactValue {
    pub numer: u64,
    pub denom: u64,
}

impl ExactValue {
    pub fn as_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

/// Exact classical value of CHSH^n (full or threshold variant) by exhausting
/// all deterministic strategy pairs. Only n ≤ 2 is allowed; n = 3 already
/// means (2^3)^(2^3) = 2^24 tables per side.
pub fn brute_force_value(n: u32, variant: GameVariant) -> Result<ExactValue> {
    Ok(brute_force_argmax(n, variant)?.0)
}

/// As `brute_force_value`, also returning one optimal strategy pair
/// (smallest encoding among the maximizers, so the witness is deterministic
/// regardless of how the search is partitioned).
pub fn brute_force_argmax(n: u32, variant: GameVariant) -> Result<(ExactValue, StrategyTable)> {
    if n == 0 || n > 2 {
        return Err(Error::TooManyCopies { n });
    }
    let t = match variant {
        GameVariant::FullParallel => n,
        GameVariant::Threshold(t) => {
            if t == 0 || t > n {
                return Err(Error::InvalidParam(format!(
                    "threshold {t} out of range 1..={n}"
                )));
            }
            t
        }
    };

    let n = n as usize;
    let domain = 1usize << n; // input strings per side
    let code_bits = n * domain; // bits in one strategy encoding
    let num_strategies = 1u64 << code_bits;
    let total_inputs = (domain * domain) as u64;

    // wins[x][y][a][b] = copies won, all strings encoded as n-bit ints
    let mask = (1u64 << n) - 1;
    let mut wins = vec![0u8; domain * domain * domain * domain];
    let idx = |x: usize, y: usize, a: usize, b: usize| ((x * domain + y) * domain + a) * domain + b;
    for x in 0..domain {
        for y in 0..domain {
            for a in 0..domain {
                for b in 0..domain {
                    let mut w = 0u8;
                    for i in 0..n {
                        let bit = |v: usize| ((v >> (n - 1 - i)) & 1) as u8;
                        if chsh_predicate(bit(x), bit(y), bit(a), bit(b)) {
                            w += 1;
                        }
                    }
                    wins[idx(x, y, a, b)] = w;
                }
            }
        }
    }

    // Exhaust Alice tables in parallel; the reduction keys on
    // (count, -codes) so the result is partition-independent.
    let best = (0..num_strategies)
        .into_par_iter()
        .map(|alice_code| {
            let alice_out: Vec<usize> = (0..domain)
                .map(|x| ((alice_code >> (n * x)) & mask) as usize)
                .collect();
            let mut local_best = (0u64, 0u64, 0u64); // (count, alice, bob)
            for bob_code in 0..num_strategies {
                let mut count = 0u64;
                let mut remaining = total_inputs;
                'inputs: for x in 0..domain {
                    let a = alice_out[x];
                    for y in 0..domain {
                        let b = ((bob_code >> (n * y)) & mask) as usize;
                        if u32::from(wins[idx(x, y, a, b)]) >= t {
                            count += 1;
                        }
                        remaining -= 1;
                        // prune: even winning every remaining input cannot
                        // beat the incumbent
                        if count + remaining <= local_best.0 {
                            break 'inputs;
                        }
                    }
                }
                if count > local_best.0 {
                    local_best = (count, alice_code, bob_code);
                }
            }
            local_best
        })
        .reduce(
            || (0u64, u64::MAX, u64::MAX),
            |x, y| {
                // higher count wins; ties resolved toward smaller encodings
                match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Greater => x,
                    std::cmp::Ordering::Less => y,
                    std::cmp::Ordering::Equal => {
                        if (x.1, x.2) <= (y.1, y.2) {
                            x
                        } else {
                            y
                        }
                    }
                }
            },
        );

    let value = ExactValue {
        numer: best.0,
        denom: total_inputs,
    };
    let witness = StrategyTable::from_encoding(n, best.1, best.2)?;
    Ok((value, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn predicate_examples() {
        assert!(chsh_predicate(0, 0, 0, 0));
        assert!(!chsh_predicate(1, 1, 0, 0));
        assert!(chsh_predicate(1, 1, 0, 1));
    }

    #[test]
    fn predicate_truth_table_by_enumeration() {
        // every input pair admits exactly 2 of the 4 output pairs, so the
        // 16-row truth table has 8 satisfying assignments
        let mut wins = 0;
        for v in 0u8..16 {
            let (x, y, a, b) = (v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1);
            if chsh_predicate(x, y, a, b) {
                wins += 1;
            }
        }
        assert_eq!(wins, 8);
        // the constant strategy a = b = 0 wins exactly when x·y = 0: 3 of 4
        // input pairs, the single-copy classical value 3/4
        let constant_wins = (0u8..4)
            .filter(|v| chsh_predicate(v >> 1 & 1, v & 1, 0, 0))
            .count();
        assert_eq!(constant_wins, 3);
    }

    #[test]
    fn win_count_examples() {
        let z = Bitstring::zeros(4);
        assert_eq!(win_count(&z, &z, &z, &z).unwrap(), 4);
        let ones = Bitstring::parse("1111").unwrap();
        assert_eq!(win_count(&ones, &ones, &z, &z).unwrap(), 0);
    }

    #[test]
    fn win_count_matches_per_index_recount() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = Bitstring::random(8, &mut rng);
            let y = Bitstring::random(8, &mut rng);
            let a = Bitstring::random(8, &mut rng);
            let b = Bitstring::random(8, &mut rng);
            let direct: u32 = (0..8)
                .map(|i| chsh_predicate(x.bit(i), y.bit(i), a.bit(i), b.bit(i)) as u32)
                .sum();
            assert_eq!(win_count(&x, &y, &a, &b).unwrap(), direct);
        }
    }

    #[test]
    fn encoded_win_count_agrees_with_bitstring_route() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let n = 1 + (rand::Rng::random::<u32>(&mut rng) % 16);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                rand::Rng::random::<u64>(rng) & ((1u64 << n) - 1)
            };
            let (x, y, a, b) = (draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let via_bits = win_count(
                &Bitstring::from_uint(x, n as usize),
                &Bitstring::from_uint(y, n as usize),
                &Bitstring::from_uint(a, n as usize),
                &Bitstring::from_uint(b, n as usize),
            )
            .unwrap();
            assert_eq!(win_count_encoded(n, x, y, a, b), via_bits);
        }
    }

    #[test]
    fn win_count_rejects_length_mismatch() {
        let x = Bitstring::zeros(4);
        let y = Bitstring::zeros(5);
        assert!(win_count(&x, &y, &x, &x).is_err());
    }

    #[test]
    fn threshold_boundary_is_inclusive() {
        let spec = GameSpec::new(4, 3).unwrap();
        // a = b = 0 on x = 1110, y = 1011 wins copies where x_i·y_i = 0
        let x = Bitstring::parse("1110").unwrap();
        let y = Bitstring::parse("1011").unwrap();
        let z = Bitstring::zeros(4);
        assert_eq!(win_count(&x, &y, &z, &z).unwrap(), 2);
        assert!(!spec.accepts(&x, &y, &z, &z).unwrap());
        let y2 = Bitstring::parse("0011").unwrap();
        assert_eq!(win_count(&x, &y2, &z, &z).unwrap(), 3);
        assert!(spec.accepts(&x, &y2, &z, &z).unwrap());
    }

    #[test]
    fn threshold_accept_matches_recount_at_large_n() {
        let spec = GameSpec::with_standard_threshold(100).unwrap();
        assert_eq!(spec.t(), 83);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x = Bitstring::zeros(100);
        let a = Bitstring::zeros(100);
        let b = Bitstring::zeros(100);
        for _ in 0..20 {
            let y = Bitstring::random(100, &mut rng);
            let zero_products = (0..100).filter(|&i| x.bit(i) & y.bit(i) == 0).count();
            assert_eq!(
                spec.accepts(&x, &y, &a, &b).unwrap(),
                zero_products >= 83
            );
        }
    }

    #[test]
    fn standard_threshold_is_integer_ceiling() {
        for (n, expect) in [(100, 83), (200, 166), (11697, 9709), (1, 1), (3, 3)] {
            assert_eq!(GameSpec::with_standard_threshold(n).unwrap().t(), expect);
        }
    }

    #[test]
    fn quantum_value_examples() {
        assert!((quantum_value(1) - 0.8535533905932737).abs() < 1e-12);
        assert!((quantum_value(2) - 0.7285533905932737).abs() < 1e-12);
    }

    #[test]
    fn quantum_and_classical_values_are_multiplicative() {
        for n in 1..=8u32 {
            assert!((quantum_value(n) - quantum_value(1).powi(n as i32)).abs() < 1e-12);
            assert!(
                (classical_value_bound(n) - classical_value_bound(1).powi(n as i32)).abs() < 1e-12
            );
        }
    }

    #[test]
    fn classical_bound_examples() {
        assert!((classical_value_bound(1) - 0.8090169943749475).abs() < 1e-12);
        assert!((classical_value_bound(2) - 0.6545084971874737).abs() < 1e-12);
        assert!(classical_value_bound(1) > 0.75);
    }

    #[test]
    fn chernoff_examples() {
        // γ = δ gives the trivial bound
        assert_eq!(chernoff_bound(100, 0.3, 0.3), 1.0);
        assert!((chernoff_bound(10_000, 0.0, 0.02) - 0.00033546262790251185).abs() < 1e-15);
        let b = chernoff_bound(11_697, 0.0, 0.01);
        assert!((b - 0.09638545215587452).abs() < 1e-12);
        assert!((1.0 - b - 0.9036145478441255).abs() < 1e-12);
    }

    #[test]
    fn chernoff_is_monotone() {
        assert!(chernoff_bound(200, 0.1, 0.2) < chernoff_bound(100, 0.1, 0.2));
        assert!(chernoff_bound(100, 0.1, 0.3) < chernoff_bound(100, 0.1, 0.2));
        assert!(chernoff_bound(100, 0.3, 0.1) < chernoff_bound(100, 0.2, 0.1));
    }

    #[test]
    fn brute_force_single_copy_is_three_quarters() {
        let v = brute_force_value(1, GameVariant::FullParallel).unwrap();
        assert_eq!((v.numer, v.denom), (3, 4));
    }

    #[test]
    fn brute_force_two_copies_exact() {
        // exhaustive over all 256·256 strategy pairs
        let v = brute_force_value(2, GameVariant::FullParallel).unwrap();
        assert_eq!((v.numer, v.denom), (10, 16));
        assert!(v.as_f64() <= classical_value_bound(2));
    }

    #[test]
    fn brute_force_two_copies_threshold_one_is_perfect() {
        let (v, witness) = brute_force_argmax(2, GameVariant::Threshold(1)).unwrap();
        assert_eq!((v.numer, v.denom), (16, 16));
        // replay the witness: it must win at least one copy on every input
        assert_eq!(witness.winning_input_count(1).unwrap(), 16);
    }

    #[test]
    fn brute_force_is_nonincreasing_in_threshold() {
        for n in 1..=2u32 {
            let mut prev = u64::MAX;
            for t in 1..=n {
                let v = brute_force_value(n, GameVariant::Threshold(t)).unwrap();
                assert!(v.numer <= prev);
                prev = v.numer;
            }
        }
    }

    #[test]
    fn brute_force_refuses_three_copies() {
        assert!(matches!(
            brute_force_value(3, GameVariant::FullParallel),
            Err(Error::TooManyCopies { n: 3 })
        ));
    }

    #[test]
    fn witness_replay_matches_reported_value() {
        let (v, witness) = brute_force_argmax(2, GameVariant::FullParallel).unwrap();
        assert_eq!(witness.winning_input_count(2).unwrap(), v.numer);
    }

    #[test]
    fn strategy_table_messages() {
        let n = 2;
        let outputs: Vec<Bitstring> = (0..4).map(|v| Bitstring::from_uint(v, n)).collect();
        let table = StrategyTable::new(n, outputs.clone(), outputs.clone()).unwrap();
        // one-bit message per input: the parity of x
        let messages: Vec<Bitstring> = (0..4u64)
            .map(|v| Bitstring::from_uint((v ^ (v >> 1)) & 1, 1))
            .collect();
        let table = table.with_messages(messages).unwrap();
        let x = Bitstring::parse("01").unwrap();
        assert_eq!(table.message(&x).unwrap().unwrap().to_string(), "1");
        // ragged message widths are rejected
        let bad = vec![
            Bitstring::zeros(1),
            Bitstring::zeros(2),
            Bitstring::zeros(1),
            Bitstring::zeros(1),
        ];
        assert!(StrategyTable::new(n, outputs.clone(), outputs)
            .unwrap()
            .with_messages(bad)
            .is_err());
    }

    #[test]
    fn game_spec_validation() {
        assert!(GameSpec::new(4, 0).is_err());
        assert!(GameSpec::new(4, 5).is_err());
        assert!(GameSpec::new(0, 0).is_err());
        let spec = GameSpec::new(11_697, 9_709).unwrap();
        assert!((spec.epsilon() - 0.021024896708236263).abs() < 1e-12);
    }
}
