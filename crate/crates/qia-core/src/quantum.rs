//! Honest quantum prover, simulated one EPR copy at a time.
//!
//! Per copy: Alice measures her half of (|00⟩+|11⟩)/√2 in the real basis at
//! angle θ_A(x_i). Her outcome is uniform, and Bob's half collapses onto the
//! real basis vector at θ_A(x_i) + a_i·π/2 — that collapsed qubit is the
//! memory carried from t₀ to t₁. At t₁ the memory is measured at θ_B(y_i)
//! with the Born rule. With the default angles every one of the four input
//! pairs wins with probability cos²(π/8).
//!
//! The classical simulation necessarily touches x_i when computing Bob's
//! outcome; that is simulator plumbing, not prover memory. The memory
//! register proper is the qubit list, and its x-conditional mixture is
//! exactly I/2 (`memory_density_given_x`), which is the no-signaling ground
//! for the I_max(X:M) = 0 claim. Session logs tag the two channels
//! separately so the distinction survives into the records.

use rand::Rng;

use crate::bits::Bitstring;
use crate::error::{Error, Result};

/// cos²(π/8), the single-copy quantum value.
pub fn optimal_win_probability() -> f64 {
    let c = std::f64::consts::FRAC_PI_8.cos();
    c * c
}

/// A pure qubit state. All states appearing in the honest strategy are real;
/// imaginary parts are stored for generality and asserted negligible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    /// (re, im) amplitude pairs for |0⟩ and |1⟩.
    amps: [(f64, f64); 2],
}

const UNIT_TOL: f64 = 1e-12;

impl QubitState {
    pub fn new(amps: [(f64, f64); 2]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|(re, im)| re * re + im * im).sum();
        if (norm2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParam(format!(
                "qubit state norm² = {norm2}, not 1"
            )));
        }
        Ok(QubitState { amps })
    }

    /// Real basis vector (cos θ, sin θ).
    pub fn real_basis(theta: f64) -> Self {
        QubitState {
            amps: [(theta.cos(), 0.0), (theta.sin(), 0.0)],
        }
    }

    pub fn amplitude(&self, i: usize) -> (f64, f64) {
        self.amps[i]
    }

    /// Born probability of outcome 0 when measured in the real basis at
    /// `theta`: |⟨v₀(θ)|ψ⟩|².
    pub fn born_p0(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let re = c * self.amps[0].0 + s * self.amps[1].0;
        let im = c * self.amps[0].1 + s * self.amps[1].1;
        debug_assert!(im.abs() <= UNIT_TOL, "honest states are real");
        re * re + im * im
    }

    pub fn max_imag(&self) -> f64 {
        self.amps.iter().map(|(_, im)| im.abs()).fold(0.0, f64::max)
    }
}

/// 2×2 density matrix, stored as complex entries (re, im).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: [[(f64, f64); 2]; 2],
}

impl DensityMatrix {
    pub fn new(m: [[(f64, f64); 2]; 2]) -> Result<Self> {
        let rho = DensityMatrix { m };
        let trace = m[0][0].0 + m[1][1].0;
        if (trace - 1.0).abs() > UNIT_TOL
            || m[0][0].1.abs() > UNIT_TOL
            || m[1][1].1.abs() > UNIT_TOL
        {
            return Err(Error::InvalidParam("density matrix trace != 1".into()));
        }
        // Hermiticity: m[1][0] = conj(m[0][1])
        if (m[0][1].0 - m[1][0].0).abs() > UNIT_TOL || (m[0][1].1 + m[1][0].1).abs() > UNIT_TOL {
            return Err(Error::InvalidParam("density matrix not Hermitian".into()));
        }
        let (lo, _) = rho.eigenvalues();
        if lo < -UNIT_TOL {
            return Err(Error::InvalidParam(format!(
                "density matrix not PSD (eigenvalue {lo})"
            )));
        }
        Ok(rho)
    }

    /// Mixture Σ w_i |ψ_i⟩⟨ψ_i| of pure states; weights must sum to 1.
    pub fn from_mixture(parts: &[(f64, QubitState)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParam("mixture weights must sum to 1".into()));
        }
        let mut m = [[(0.0, 0.0); 2]; 2];
        for (w, psi) in parts {
            for i in 0..2 {
                for j in 0..2 {
                    let (ar, ai) = psi.amplitude(i);
                    let (br, bi) = psi.amplitude(j);
                    // a_i * conj(a_j)
                    m[i][j].0 += w * (ar * br + ai * bi);
                    m[i][j].1 += w * (ai * br - ar * bi);
                }
            }
        }
        DensityMatrix::new(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: [[(0.5, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.5, 0.0)]],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> (f64, f64) {
        self.m[i][j]
    }

    /// Eigenvalues of the (Hermitian) matrix, ascending.
    fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].0;
        let d = self.m[1][1].0;
        let (br, bi) = self.m[0][1];
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + br * br + bi * bi).sqrt();
        (mid - disc, mid + disc)
    }

    /// Largest absolute entry difference (a cheap matrix norm).
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let dr = self.m[i][j].0 - other.m[i][j].0;
                let di = self.m[i][j].1 - other.m[i][j].1;
                worst = worst.max((dr * dr + di * di).sqrt());
            }
        }
        worst
    }

    /// Trace distance ½‖ρ − σ‖₁ via the eigenvalues of the difference.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let a = self.m[0][0].0 - other.m[0][0].0;
        let d = self.m[1][1].0 - other.m[1][1].0;
        let br = self.m[0][1].0 - other.m[0][1].0;
        let bi = self.m[0][1].1 - other.m[0][1].1;
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + br * br + bi * bi).sqrt();
        0.5 * ((mid - disc).abs() + (mid + disc).abs())
    }
}

/// Measurement bases, one angle per input bit and party.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasurementAngles {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
}

impl Default for MeasurementAngles {
    fn default() -> Self {
        MeasurementAngles {
            alice: [0.0, std::f64::consts::FRAC_PI_4],
            bob: [std::f64::consts::FRAC_PI_8, -std::f64::consts::FRAC_PI_8],
        }
    }
}

impl MeasurementAngles {
    /// Analytic win probability of input pair (x, y) for an exact EPR pair:
    /// cos²(θ_A − θ_B) when the predicate wants equal outcomes (x·y = 0),
    /// sin²(θ_A − θ_B) when it wants them to differ.
    pub fn win_probability(&self, x: u8, y: u8) -> f64 {
        let diff = self.alice[x as usize] - self.bob[y as usize];
        if x & y == 0 {
            diff.cos().powi(2)
        } else {
            diff.sin().powi(2)
        }
    }

    /// Calibration self-test: every input pair must win with the optimal
    /// probability cos²(π/8). Any real-basis quadruple that achieves this is
    /// accepted.
    pub fn verify_optimal(&self) -> Result<()> {
        let target = optimal_win_probability();
        for x in 0..2u8 {
            for y in 0..2u8 {
                let p = self.win_probability(x, y);
                if (p - target).abs() > 1e-9 {
                    return Err(Error::InvalidParam(format!(
                        "angles win pair ({x},{y}) with {p:.6}, need {target:.6}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// How the per-copy noise is realized. Both channels calibrate to the same
/// per-copy value; the protocol only constrains the value, not the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NoiseChannel {
    /// With probability q, Bob's measured bit is replaced by a fair coin.
    OutcomeCoin,
    /// With probability q, the memory qubit is depolarized to I/2 before
    /// Bob measures (realized by measuring a uniformly random real basis
    /// state instead).
    DepolarizeMemory,
}

/// Per-copy noise calibrated so the win probability is exactly
/// cos²(π/8) − γ: solving (1−q)·cos²(π/8) + q/2 = cos²(π/8) − γ gives
/// q = γ / (cos²(π/8) − ½).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseParams {
    gamma: f64,
    q: f64,
    pub channel: NoiseChannel,
}

impl NoiseParams {
    pub const MAX_GAMMA: f64 = 0.35;

    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_channel(gamma, NoiseChannel::OutcomeCoin)
    }

    pub fn with_channel(gamma: f64, channel: NoiseChannel) -> Result<Self> {
        if !(0.0..=Self::MAX_GAMMA).contains(&gamma) {
            return Err(Error::InvalidParam(format!(
                "gamma must lie in [0, {}], got {gamma}",
                Self::MAX_GAMMA
            )));
        }
        let q = gamma / (optimal_win_probability() - 0.5);
        Ok(NoiseParams { gamma, q, channel })
    }

    pub fn noiseless() -> Self {
        NoiseParams {
            gamma: 0.0,
            q: 0.0,
            channel: NoiseChannel::OutcomeCoin,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Probability that a copy is hit by the channel.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Calibrated per-copy win probability cos²(π/8) − γ.
    pub fn per_copy_win(&self) -> f64 {
        optimal_win_probability() - self.gamma
    }
}

/// The honest prover's simulator: angle set plus noise channel.
#[derive(Debug, Clone, Copy)]
pub struct QuantumSim {
    angles: MeasurementAngles,
    noise: NoiseParams,
}

impl QuantumSim {
    /// Runs the angle calibration self-test before accepting the config.
    pub fn new(angles: MeasurementAngles, noise: NoiseParams) -> Result<Self> {
        angles.verify_optimal()?;
        Ok(QuantumSim { angles, noise })
    }

    pub fn noiseless() -> Self {
        QuantumSim {
            angles: MeasurementAngles::default(),
            noise: NoiseParams::noiseless(),
        }
    }

    pub fn with_gamma(gamma: f64) -> Result<Self> {
        QuantumSim::new(MeasurementAngles::default(), NoiseParams::new(gamma)?)
    }

    pub fn angles(&self) -> &MeasurementAngles {
        &self.angles
    }

    pub fn noise(&self) -> &NoiseParams {
        &self.noise
    }

    /// Phase t₀: Alice measures each copy at θ_A(x_i). Outcomes are uniform
    /// and the returned qubits are Bob's collapsed halves — the memory.
    pub fn phase_t0<R: Rng + ?Sized>(
        &self,
        x: &Bitstring,
        rng: &mut R,
    ) -> (Bitstring, Vec<QubitState>) {
        let n = x.len();
        let mut a = Bitstring::zeros(n);
        let mut memory = Vec::with_capacity(n);
        // only four distinct post-measurement states exist
        let half_pi = std::f64::consts::FRAC_PI_2;
        let collapsed = [
            [
                QubitState::real_basis(self.angles.alice[0]),
                QubitState::real_basis(self.angles.alice[0] + half_pi),
            ],
            [
                QubitState::real_basis(self.angles.alice[1]),
                QubitState::real_basis(self.angles.alice[1] + half_pi),
            ],
        ];
        for i in 0..n {
            let outcome = rng.random::<bool>() as u8;
            a.set_bit(i, outcome);
            memory.push(collapsed[x.bit(i) as usize][outcome as usize]);
        }
        (a, memory)
    }

    /// Phase t₁: measures each memory qubit at θ_B(y_i) and applies the
    /// noise channel.
    pub fn phase_t1<R: Rng + ?Sized>(
        &self,
        y: &Bitstring,
        memory: &[QubitState],
        rng: &mut R,
    ) -> Result<Bitstring> {
        if memory.len() != y.len() {
            return Err(Error::LengthMismatch {
                expected: memory.len(),
                got: y.len(),
            });
        }
        let mut b = Bitstring::zeros(y.len());
        for i in 0..y.len() {
            let theta = self.angles.bob[y.bit(i) as usize];
            let noisy = self.noise.q > 0.0 && rng.random::<f64>() < self.noise.q;
            let outcome = match (self.noise.channel, noisy) {
                (_, false) => (rng.random::<f64>() >= memory[i].born_p0(theta)) as u8,
                (NoiseChannel::OutcomeCoin, true) => rng.random::<bool>() as u8,
                (NoiseChannel::DepolarizeMemory, true) => {
                    // I/2 as an even mixture over any basis: pick one at a
                    // uniformly random angle and measure that instead
                    let phi = rng.random::<f64>() * std::f64::consts::TAU;
                    let mixed = QubitState::real_basis(phi);
                    (rng.random::<f64>() >= mixed.born_p0(theta)) as u8
                }
            };
            b.set_bit(i, outcome);
        }
        Ok(b)
    }
}

/// The memory state conditioned on Alice's input bit, averaged over her
/// uniform outcome: ½|v₀⟩⟨v₀| + ½|v₁⟩⟨v₁| = I/2 for either x. This equality
/// is the no-signaling fact that pins I_max(X:M) to zero for the honest
/// prover.
pub fn memory_density_given_x(x_bit: u8, angles: &MeasurementAngles) -> DensityMatrix {
    assert!(x_bit <= 1);
    let theta = angles.alice[x_bit as usize];
    let v0 = QubitState::real_basis(theta);
    let v1 = QubitState::real_basis(theta + std::f64::consts::FRAC_PI_2);
    DensityMatrix::from_mixture(&[(0.5, v0), (0.5, v1)]).expect("orthonormal mixture")
}

/// Outcome of one complete in-process game against a seeded verifier.
#[derive(Debug, Clone)]
pub struct SimulatedGame {
    pub win_count: u32,
    pub accepted: bool,
}

/// Plays one full threshold game: uniform x and y, both phases, verdict.
pub fn run_session<R: Rng + ?Sized>(
    spec: &crate::game::GameSpec,
    sim: &QuantumSim,
    rng: &mut R,
) -> SimulatedGame {
    let n = spec.n() as usize;
    let x = Bitstring::random(n, rng);
    let (a, memory) = sim.phase_t0(&x, rng);
    let y = Bitstring::random(n, rng);
    let b = sim.phase_t1(&y, &memory, rng).expect("matched lengths");
    let wins = crate::game::win_count(&x, &y, &a, &b).expect("matched lengths");
    SimulatedGame {
        win_count: wins,
        accepted: wins >= spec.t(),
    }
}
