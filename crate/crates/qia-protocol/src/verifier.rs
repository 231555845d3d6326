//! The verifier service: one TCP connection per session, strict phase order.
//!
//! Per session the state machine is HELLO → X → A → Y → B → VERDICT. The
//! inputs are sampled lazily: x only after the HELLO, y only after A has
//! arrived — there is no code path on which y exists while a is still
//! pending, which is the time separation the protocol is built on. Any
//! out-of-order or malformed frame draws an ERROR reply and aborts the
//! session, recorded as a reject with the reason.

use std::io::ErrorKind;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use qia_core::rng::stream_rng;
use qia_core::{Bitstring, GameSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ProtocolError, Result};
use crate::log::{SessionLog, SessionRecord, Verdict};
use crate::wire::{
    encode_bits, read_frame, write_frame, Accounting, Frame, HelloPayload, MemoryMeta, MsgType,
    SessionParams,
};

#[derive(Debug, Clone)]
pub struct VerifierConfig {
    pub spec: GameSpec,
    /// Seeded transcripts when set; system entropy otherwise.
    pub seed: Option<u64>,
    /// Per-phase read timeout.
    pub timeout: Duration,
    /// NDJSON session log destination, if any.
    pub log_path: Option<PathBuf>,
    /// Stop after this many sessions; `None` serves forever.
    pub max_sessions: Option<u64>,
}

impl VerifierConfig {
    pub fn new(spec: GameSpec) -> Self {
        VerifierConfig {
            spec,
            seed: None,
            timeout: Duration::from_millis(30_000),
            log_path: None,
            max_sessions: None,
        }
    }
}

/// A bound verifier, ready to serve. Binding is separated from serving so
/// callers can learn the ephemeral port before any client connects.
pub struct Verifier {
    config: VerifierConfig,
    listener: TcpListener,
    log: Option<Arc<SessionLog>>,
    started: Instant,
}

impl Verifier {
    pub fn bind(addr: &str, config: VerifierConfig) -> Result<Self> {
        let listener = TcpListener::bind(addr)?;
        let log = match &config.log_path {
            Some(path) => Some(Arc::new(SessionLog::create(path)?)),
            None => None,
        };
        Ok(Verifier {
            config,
            listener,
            log,
            started: Instant::now(),
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        Ok(self.listener.local_addr()?)
    }

    /// Accept loop. Each connection runs its session on its own thread;
    /// returns all session records once `max_sessions` have finished.
    pub fn run(self) -> Result<Vec<SessionRecord>> {
        let records = Arc::new(Mutex::new(Vec::new()));
        let mut handles = Vec::new();
        let mut accepted = 0u64;
        loop {
            if let Some(max) = self.config.max_sessions {
                if accepted >= max {
                    break;
                }
            }
            let (stream, _) = self.listener.accept()?;
            let session_index = accepted;
            accepted += 1;
            let config = self.config.clone();
            let log = self.log.clone();
            let records = Arc::clone(&records);
            let started = self.started;
            handles.push(std::thread::spawn(move || {
                let record = run_session(stream, &config, session_index, started);
                if let Some(log) = &log {
                    // log failures must not take the verifier down
                    let _ = log.append(&record);
                }
                records.lock().expect("records lock").push(record);
            }));
        }
        for h in handles {
            let _ = h.join();
        }
        let records = Arc::try_unwrap(records)
            .map_err(|_| ProtocolError::Aborted("session threads leaked".into()))?
            .into_inner()
            .expect("records lock");
        Ok(records)
    }
}

/// Runs a verifier on a background thread; returns (addr, join handle).
pub fn spawn_verifier(
    addr: &str,
    config: VerifierConfig,
) -> Result<(SocketAddr, std::thread::JoinHandle<Result<Vec<SessionRecord>>>)> {
    let verifier = Verifier::bind(addr, config)?;
    let local = verifier.local_addr()?;
    let handle = std::thread::spawn(move || verifier.run());
    Ok((local, handle))
}

struct SessionIo {
    stream: TcpStream,
    session_id: String,
}

impl SessionIo {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        write_frame(&mut self.stream, frame)
    }

    fn fail(&mut self, reason: &str) -> ProtocolError {
        let _ = self.send(&Frame::error(&self.session_id, reason));
        ProtocolError::Aborted(reason.into())
    }

    /// Reads the next frame and insists on one message type.
    fn expect(&mut self, expected: MsgType) -> Result<Frame> {
        let frame = match read_frame(&mut self.stream) {
            Ok(f) => f,
            Err(ProtocolError::Io(e))
                if e.kind() == ErrorKind::WouldBlock || e.kind() == ErrorKind::TimedOut =>
            {
                return Err(self.fail("timeout"));
            }
            Err(e) => return Err(e),
        };
        if frame.msg_type != expected {
            return Err(self.fail("phase violation"));
        }
        if !self.session_id.is_empty()
            && frame.msg_type != MsgType::Hello
            && frame.session_id != self.session_id
        {
            return Err(self.fail("session mismatch"));
        }
        Ok(frame)
    }

    fn expect_bits(&mut self, expected: MsgType, n: usize) -> Result<Bitstring> {
        let frame = self.expect(expected)?;
        match frame.decode_bits(n) {
            Ok(bits) => Ok(bits),
            Err(_) => Err(self.fail("length mismatch")),
        }
    }
}

fn session_rng(config: &VerifierConfig, session_index: u64) -> ChaCha8Rng {
    match config.seed {
        Some(seed) => stream_rng(seed, session_index),
        None => {
            // system entropy, folded into the per-session stream layout
            let seed: u64 = rand::rng().random();
            stream_rng(seed, session_index)
        }
    }
}

fn run_session(
    stream: TcpStream,
    config: &VerifierConfig,
    session_index: u64,
    started: Instant,
) -> SessionRecord {
    let spec = config.spec;
    let mut rng = session_rng(config, session_index);
    let session_id: String = {
        let bytes: [u8; 16] = rng.random();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    };

    let _ = stream.set_read_timeout(Some(config.timeout));
    let _ = stream.set_nodelay(true);
    let mut io = SessionIo {
        stream,
        session_id: session_id.clone(),
    };

    let mut record = SessionRecord {
        session_id,
        n: spec.n(),
        t: spec.t(),
        x: None,
        a: None,
        y: None,
        b: None,
        verdict: Verdict::Reject,
        win_count: None,
        reason: None,
        t0_ns: None,
        t1_ns: None,
        memory_meta: MemoryMeta {
            declared_width: 0,
            accounting: Accounting::Model,
        },
    };

    match drive_session(&mut io, spec, &mut rng, started, &mut record) {
        Ok(()) => {}
        Err(e) => {
            record.verdict = Verdict::Reject;
            record.reason = Some(e.to_string());
        }
    }
    record
}

fn drive_session(
    io: &mut SessionIo,
    spec: GameSpec,
    rng: &mut ChaCha8Rng,
    started: Instant,
    record: &mut SessionRecord,
) -> Result<()> {
    let n = spec.n() as usize;

    // HELLO: the prover declares itself
    let hello = io.expect(MsgType::Hello)?;
    match hello.decode_payload::<HelloPayload>() {
        Ok(payload) => record.memory_meta = payload.memory_meta,
        Err(_) => return Err(io.fail("malformed hello")),
    }
    io.send(&Frame::hello_reply(
        &io.session_id.clone(),
        &SessionParams {
            n: spec.n(),
            t: spec.t(),
        },
    ))?;

    // t0: sample x, send, await a
    let x = Bitstring::random(n, rng);
    record.t0_ns = Some(started.elapsed().as_nanos() as u64);
    record.x = Some(encode_bits(&x));
    io.send(&Frame::bits(MsgType::X, &io.session_id.clone(), &x))?;
    let a = io.expect_bits(MsgType::A, n)?;
    record.a = Some(encode_bits(&a));

    // t1: only now does y come into existence
    let y = Bitstring::random(n, rng);
    record.t1_ns = Some(started.elapsed().as_nanos() as u64);
    record.y = Some(encode_bits(&y));
    io.send(&Frame::bits(MsgType::Y, &io.session_id.clone(), &y))?;
    let b = io.expect_bits(MsgType::B, n)?;
    record.b = Some(encode_bits(&b));

    let wins = qia_core::game::win_count(&x, &y, &a, &b)?;
    let accept = wins >= spec.t();
    record.win_count = Some(wins);
    record.verdict = if accept { Verdict::Accept } else { Verdict::Reject };
    io.send(&Frame::verdict(&io.session_id.clone(), accept, wins))?;
    Ok(())
}
