//! Prover clients: the simulated honest quantum prover and the classical
//! baseline strategies, speaking the framed wire protocol.
//!
//! A client engine is two callbacks with no channel between them except the
//! declared memory: `handle_x` runs at t₀ and may stash state, `handle_y`
//! runs at t₁. For the quantum engine the stashed state is the qubit list,
//! which is dropped as soon as B is sent.

use std::net::TcpStream;
use std::time::Duration;

use qia_core::classical::{strategy_by_name, ClassicalStrategy, Message, SharedRandomness};
use qia_core::quantum::{NoiseChannel, NoiseParams, QuantumSim, QubitState};
use qia_core::rng::stream_rng;
use qia_core::Bitstring;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ProtocolError, Result};
use crate::wire::{
    read_frame, write_frame, Accounting, Frame, HelloPayload, MemoryMeta, MsgType, SessionParams,
    VerdictPayload,
};

#[derive(Debug, Clone)]
pub enum ProverKind {
    QuantumSim { gamma: f64, channel: NoiseChannel },
    Classical { name: String },
}

impl ProverKind {
    pub fn parse(spec: &str, gamma: f64) -> Result<Self> {
        match spec {
            "quantum-sim" => Ok(ProverKind::QuantumSim {
                gamma,
                channel: NoiseChannel::OutcomeCoin,
            }),
            other => match other.strip_prefix("classical:") {
                Some(name) => Ok(ProverKind::Classical { name: name.into() }),
                None => Err(ProtocolError::Config(format!(
                    "unknown prover kind {spec:?} (use quantum-sim or classical:<name>)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub addr: String,
    pub kind: ProverKind,
    pub seed: u64,
    pub sessions: u64,
    pub timeout: Duration,
    /// Cross-checked against the n announced by the verifier when set.
    pub expected_n: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExitReport {
    pub prover: String,
    pub sessions: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub errors: u64,
    pub accept_rate: f64,
    pub memory_meta: MemoryMeta,
}

/// The two-phase interface a client engine implements. `handle_y` has no
/// access to x; whatever crosses t₀ → t₁ must live in the engine's own
/// declared memory.
pub trait ProverEngine {
    fn prover_name(&self) -> String;
    fn memory_meta(&self) -> MemoryMeta;
    fn handle_x(&mut self, x: &Bitstring) -> Bitstring;
    fn handle_y(&mut self, y: &Bitstring) -> Result<Bitstring>;
}

/// Honest quantum prover: memory is the collapsed qubit list.
pub struct QuantumEngine {
    sim: QuantumSim,
    rng: ChaCha8Rng,
    memory: Option<Vec<QubitState>>,
}

impl QuantumEngine {
    pub fn new(gamma: f64, channel: NoiseChannel, rng: ChaCha8Rng) -> Result<Self> {
        let sim = QuantumSim::new(
            qia_core::quantum::MeasurementAngles::default(),
            NoiseParams::with_channel(gamma, channel)?,
        )?;
        Ok(QuantumEngine {
            sim,
            rng,
            memory: None,
        })
    }
}

impl ProverEngine for QuantumEngine {
    fn prover_name(&self) -> String {
        "quantum-sim".into()
    }

    fn memory_meta(&self) -> MemoryMeta {
        // the model-level register carries zero bits about x; the classical
        // simulation of it necessarily routes x through t1 internals, which
        // is exactly what the plumbing tag flags
        MemoryMeta {
            declared_width: 0,
            accounting: Accounting::Plumbing,
        }
    }

    fn handle_x(&mut self, x: &Bitstring) -> Bitstring {
        let (a, memory) = self.sim.phase_t0(x, &mut self.rng);
        self.memory = Some(memory);
        a
    }

    fn handle_y(&mut self, y: &Bitstring) -> Result<Bitstring> {
        let memory = self
            .memory
            .take()
            .ok_or_else(|| ProtocolError::Aborted("no memory from phase t0".into()))?;
        let b = self.sim.phase_t1(y, &memory, &mut self.rng)?;
        drop(memory); // the quantum memory exists only between the phases
        Ok(b)
    }
}

/// Classical strategy adapter.
pub struct ClassicalEngine {
    strategy: Box<dyn ClassicalStrategy>,
    shared: SharedRandomness,
    message: Option<Message>,
}

impl ClassicalEngine {
    pub fn new(strategy: Box<dyn ClassicalStrategy>, shared: SharedRandomness) -> Self {
        ClassicalEngine {
            strategy,
            shared,
            message: None,
        }
    }
}

impl ProverEngine for ClassicalEngine {
    fn prover_name(&self) -> String {
        format!("classical:{}", self.strategy.name())
    }

    fn memory_meta(&self) -> MemoryMeta {
        MemoryMeta {
            declared_width: self.strategy.memory_width() as u32,
            accounting: Accounting::Model,
        }
    }

    fn handle_x(&mut self, x: &Bitstring) -> Bitstring {
        let (a, m) = self.strategy.phase_t0(x, &self.shared);
        self.message = Some(m);
        a
    }

    fn handle_y(&mut self, y: &Bitstring) -> Result<Bitstring> {
        let m = self
            .message
            .take()
            .ok_or_else(|| ProtocolError::Aborted("no message from phase t0".into()))?;
        Ok(self.strategy.phase_t1(&m, y, &self.shared))
    }
}

pub struct SessionOutcome {
    pub session_id: String,
    pub params: SessionParams,
    pub accepted: bool,
    pub win_count: u32,
}

fn expect_reply(stream: &mut TcpStream, expected: MsgType) -> Result<Frame> {
    let frame = read_frame(stream)?;
    if frame.msg_type == MsgType::Error {
        let reason = frame
            .decode_payload::<crate::wire::ErrorPayload>()
            .map(|p| p.reason)
            .unwrap_or_else(|_| "unreadable error frame".into());
        return Err(ProtocolError::Aborted(format!("verifier error: {reason}")));
    }
    if frame.msg_type != expected {
        return Err(ProtocolError::PhaseViolation {
            expected: format!("{expected:?}"),
            got: format!("{:?}", frame.msg_type),
        });
    }
    Ok(frame)
}

impl ProverKind {
    fn hello_payload(&self) -> HelloPayload {
        match self {
            ProverKind::QuantumSim { .. } => HelloPayload {
                prover: "quantum-sim".into(),
                memory_meta: MemoryMeta {
                    declared_width: 0,
                    accounting: Accounting::Plumbing,
                },
            },
            ProverKind::Classical { name } => HelloPayload {
                prover: format!("classical:{name}"),
                memory_meta: MemoryMeta {
                    declared_width: name
                        .split_once(':')
                        .and_then(|(_, w)| w.parse().ok())
                        .unwrap_or(0),
                    accounting: Accounting::Model,
                },
            },
        }
    }

    /// Engine construction is deferred until the verifier announces n.
    fn build_engine(&self, n: u32, seed: u64, session: u64) -> Result<Box<dyn ProverEngine>> {
        match self {
            ProverKind::QuantumSim { gamma, channel } => Ok(Box::new(QuantumEngine::new(
                *gamma,
                *channel,
                stream_rng(seed, session),
            )?)),
            ProverKind::Classical { name } => {
                let strategy = strategy_by_name(name, n as usize)?;
                Ok(Box::new(ClassicalEngine::new(
                    strategy,
                    SharedRandomness::new(seed.wrapping_add(session)),
                )))
            }
        }
    }
}

/// Drives one full session: HELLO exchange, engine construction with the
/// announced parameters, then the X→A→Y→B→VERDICT ladder.
pub fn run_one_session(
    mut stream: TcpStream,
    kind: &ProverKind,
    seed: u64,
    session: u64,
    expected_n: Option<u32>,
) -> Result<SessionOutcome> {
    stream.set_nodelay(true).ok();
    write_frame(&mut stream, &Frame::hello("", &kind.hello_payload()))?;
    let hello = expect_reply(&mut stream, MsgType::Hello)?;
    let params: SessionParams = hello.decode_payload()?;
    let session_id = hello.session_id.clone();
    if let Some(n) = expected_n {
        if n != params.n {
            return Err(ProtocolError::Config(format!(
                "verifier plays n = {}, client expected {n}",
                params.n
            )));
        }
    }
    let n = params.n as usize;
    let mut engine = kind.build_engine(params.n, seed, session)?;

    let x = expect_reply(&mut stream, MsgType::X)?.decode_bits(n)?;
    let a = engine.handle_x(&x);
    write_frame(&mut stream, &Frame::bits(MsgType::A, &session_id, &a))?;

    let y = expect_reply(&mut stream, MsgType::Y)?.decode_bits(n)?;
    let b = engine.handle_y(&y)?;
    write_frame(&mut stream, &Frame::bits(MsgType::B, &session_id, &b))?;

    let payload: VerdictPayload = expect_reply(&mut stream, MsgType::Verdict)?.decode_payload()?;
    Ok(SessionOutcome {
        session_id,
        params,
        accepted: payload.verdict == "accept",
        win_count: payload.win_count,
    })
}

/// Connects for `sessions` independent sessions and aggregates verdicts.
pub fn run_client(cfg: &ClientConfig) -> Result<ExitReport> {
    let mut accepts = 0u64;
    let mut rejects = 0u64;
    let mut errors = 0u64;
    let mut expected_n = cfg.expected_n;

    for session in 0..cfg.sessions {
        let stream = TcpStream::connect(&cfg.addr)?;
        stream.set_read_timeout(Some(cfg.timeout))?;
        match run_one_session(stream, &cfg.kind, cfg.seed, session, expected_n) {
            Ok(o) => {
                expected_n = Some(o.params.n);
                if o.accepted {
                    accepts += 1;
                } else {
                    rejects += 1;
                }
            }
            Err(ProtocolError::Config(e)) => return Err(ProtocolError::Config(e)),
            Err(_) => errors += 1,
        }
    }

    let hello = cfg.kind.hello_payload();
    let decided = accepts + rejects;
    Ok(ExitReport {
        prover: hello.prover,
        sessions: cfg.sessions,
        accepts,
        rejects,
        errors,
        accept_rate: if decided > 0 {
            accepts as f64 / decided as f64
        } else {
            0.0
        },
        memory_meta: hello.memory_meta,
    })
}
