//! Networked runtime for the two-phase interactive protocol: a verifier
//! service and prover clients over a framed TCP wire, with append-only
//! NDJSON session logs and a replay checker.

pub mod error;
pub mod log;
pub mod prover;
pub mod verifier;
pub mod wire;

pub use error::{ProtocolError, Result};
pub use log::{read_log, replay_check, SessionRecord, Verdict};
pub use prover::{ClientConfig, ExitReport, ProverKind};
pub use verifier::{spawn_verifier, Verifier, VerifierConfig};
