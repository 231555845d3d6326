//! Frame and payload encoding.
//!
//! Every message is one frame: a 4-byte big-endian length prefix followed
//! by that many bytes of UTF-8 JSON. The JSON object has exactly three
//! fields: `type` (HELLO, X, A, Y, B, VERDICT, ERROR), `session_id` (32 hex
//! chars once assigned, empty in the client's opening HELLO), and `payload`.
//!
//! Bitstring payloads are hex encoded most-significant-bit-first: hex digit
//! k carries bits 4k..4k+3 with bit 4k in the digit's MSB position, and the
//! final digit is zero-padded on the low side. The bit length itself is
//! carried by the session parameters (`n`), never inferred from the hex.

use std::io::{Read, Write};

use qia_core::Bitstring;
use serde::{Deserialize, Serialize};

use crate::error::{ProtocolError, Result};

/// Frames larger than this are rejected before allocation.
pub const MAX_FRAME_BYTES: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MsgType {
    #[serde(rename = "HELLO")]
    Hello,
    X,
    A,
    Y,
    B,
    #[serde(rename = "VERDICT")]
    Verdict,
    #[serde(rename = "ERROR")]
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Frame {
    #[serde(rename = "type")]
    pub msg_type: MsgType,
    pub session_id: String,
    pub payload: serde_json::Value,
}

/// Client's opening payload: what it claims to be and what memory register
/// it declares.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HelloPayload {
    pub prover: String,
    pub memory_meta: MemoryMeta,
}

/// Declared memory accounting, copied verbatim into the session record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryMeta {
    /// Bits of information about x the declared memory register may carry
    /// (the message width for classical provers, 0 for the honest quantum
    /// prover).
    pub declared_width: u32,
    /// `model`: the declared register is the memory, full stop.
    /// `plumbing`: the prover is a classical *simulation* of quantum memory
    /// whose internals necessarily touch x at t₁; the declared width speaks
    /// about the model-level register (the qubits), not the simulator.
    pub accounting: Accounting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Accounting {
    Model,
    Plumbing,
}

/// Server's HELLO reply: the game parameters for this session.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionParams {
    pub n: u32,
    pub t: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictPayload {
    pub verdict: String, // "accept" | "reject"
    pub win_count: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub reason: String,
}

impl Frame {
    pub fn hello(session_id: &str, payload: &HelloPayload) -> Frame {
        Frame {
            msg_type: MsgType::Hello,
            session_id: session_id.into(),
            payload: serde_json::to_value(payload).expect("static shape"),
        }
    }

    pub fn hello_reply(session_id: &str, params: &SessionParams) -> Frame {
        Frame {
            msg_type: MsgType::Hello,
            session_id: session_id.into(),
            payload: serde_json::to_value(params).expect("static shape"),
        }
    }

    pub fn bits(msg_type: MsgType, session_id: &str, bits: &Bitstring) -> Frame {
        Frame {
            msg_type,
            session_id: session_id.into(),
            payload: serde_json::Value::String(encode_bits(bits)),
        }
    }

    pub fn verdict(session_id: &str, accept: bool, win_count: u32) -> Frame {
        Frame {
            msg_type: MsgType::Verdict,
            session_id: session_id.into(),
            payload: serde_json::to_value(VerdictPayload {
                verdict: if accept { "accept" } else { "reject" }.into(),
                win_count,
            })
            .expect("static shape"),
        }
    }

    pub fn error(session_id: &str, reason: &str) -> Frame {
        Frame {
            msg_type: MsgType::Error,
            session_id: session_id.into(),
            payload: serde_json::to_value(ErrorPayload {
                reason: reason.into(),
            })
            .expect("static shape"),
        }
    }

    /// Decodes a bitstring payload of exactly `n` bits.
    pub fn decode_bits(&self, n: usize) -> Result<Bitstring> {
        let hex = self
            .payload
            .as_str()
            .ok_or_else(|| ProtocolError::Frame("payload is not a hex string".into()))?;
        decode_bits(hex, n)
    }

    pub fn decode_payload<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        serde_json::from_value(self.payload.clone())
            .map_err(|e| ProtocolError::Frame(format!("payload shape: {e}")))
    }
}

/// Hex encoding, MSB-first, low-side zero padding.
pub fn encode_bits(bits: &Bitstring) -> String {
    let n = bits.len();
    let mut out = String::with_capacity(n.div_ceil(4));
    for k in 0..n.div_ceil(4) {
        let mut digit = 0u8;
        for offset in 0..4 {
            let i = 4 * k + offset;
            let bit = if i < n { bits.bit(i) } else { 0 };
            digit = (digit << 1) | bit;
        }
        out.push(char::from_digit(digit as u32, 16).expect("nibble"));
    }
    out
}

/// Inverse of `encode_bits`; enforces the exact digit count and zero padding.
pub fn decode_bits(hex: &str, n: usize) -> Result<Bitstring> {
    let expect_digits = n.div_ceil(4);
    if hex.len() != expect_digits {
        return Err(ProtocolError::LengthMismatch {
            expected_bits: n,
            got: format!("{} hex digits (need {expect_digits})", hex.len()),
        });
    }
    let mut bits = Vec::with_capacity(expect_digits * 4);
    for ch in hex.chars() {
        let digit = ch
            .to_digit(16)
            .ok_or_else(|| ProtocolError::Frame(format!("invalid hex digit {ch:?}")))? as u8;
        for offset in (0..4).rev() {
            bits.push((digit >> offset) & 1);
        }
    }
    if bits[n..].iter().any(|&b| b != 0) {
        return Err(ProtocolError::Frame("nonzero padding bits".into()));
    }
    bits.truncate(n);
    Bitstring::from_bits(&bits).map_err(|e| ProtocolError::Frame(e.to_string()))
}

/// Writes one length-prefixed frame.
pub fn write_frame<W: Write>(w: &mut W, frame: &Frame) -> Result<()> {
    let body = serde_json::to_vec(frame)?;
    if body.len() as u32 > MAX_FRAME_BYTES {
        return Err(ProtocolError::Frame(format!(
            "frame of {} bytes exceeds cap",
            body.len()
        )));
    }
    w.write_all(&(body.len() as u32).to_be_bytes())?;
    w.write_all(&body)?;
    w.flush()?;
    Ok(())
}

/// Reads one length-prefixed frame.
pub fn read_frame<R: Read>(r: &mut R) -> Result<Frame> {
    let mut len_bytes = [0u8; 4];
    r.read_exact(&mut len_bytes)?;
    let len = u32::from_be_bytes(len_bytes);
    if len > MAX_FRAME_BYTES {
        return Err(ProtocolError::Frame(format!(
            "declared frame length {len} exceeds cap"
        )));
    }
    let mut body = vec![0u8; len as usize];
    r.read_exact(&mut body)?;
    Ok(serde_json::from_slice(&body)?)
}
