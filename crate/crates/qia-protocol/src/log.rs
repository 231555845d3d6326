//! Append-only session logs and the replay checker.
//!
//! One JSON object per line. Bitstrings are stored in the same hex encoding
//! as the wire (`wire::encode_bits`), so a record replays byte-for-byte
//! against the frames that produced it.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

use qia_core::game::win_count;
use qia_core::GameSpec;
use serde::{Deserialize, Serialize};

use crate::error::{ProtocolError, Result};
use crate::wire::{decode_bits, MemoryMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

/// One verifier-side session, complete or aborted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionRecord {
    pub session_id: String,
    pub n: u32,
    pub t: u32,
    /// Hex-encoded strings; absent where the session aborted first.
    pub x: Option<String>,
    pub a: Option<String>,
    pub y: Option<String>,
    pub b: Option<String>,
    pub verdict: Verdict,
    pub win_count: Option<u32>,
    /// Abort reason for sessions that never reached a verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Monotonic nanoseconds (since verifier start) at which X and Y were
    /// sent; the gap is recorded, not asserted.
    pub t0_ns: Option<u64>,
    pub t1_ns: Option<u64>,
    pub memory_meta: MemoryMeta,
}

impl SessionRecord {
    pub fn spec(&self) -> Result<GameSpec> {
        Ok(GameSpec::new(self.n, self.t)?)
    }
}

/// Serialized appends from concurrent session threads.
pub struct SessionLog {
    writer: Mutex<BufWriter<File>>,
}

impl SessionLog {
    pub fn create(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(SessionLog {
            writer: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn append(&self, record: &SessionRecord) -> Result<()> {
        let line = serde_json::to_string(record)?;
        let mut w = self.writer.lock().expect("log writer poisoned");
        writeln!(w, "{line}")?;
        w.flush()?;
        Ok(())
    }
}

pub fn read_log(path: &Path) -> Result<Vec<SessionRecord>> {
    let file = File::open(path)?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SessionRecord = serde_json::from_str(&line)
            .map_err(|e| ProtocolError::Frame(format!("log line {}: {e}", i + 1)))?;
        records.push(record);
    }
    Ok(records)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub total: usize,
    pub complete: usize,
    pub aborted: usize,
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes every complete session's verdict from its logged strings and
/// compares against what the runtime decided. Aborted sessions must have
/// been recorded as rejects.
pub fn replay_check(records: &[SessionRecord]) -> ReplayReport {
    let mut report = ReplayReport {
        total: records.len(),
        complete: 0,
        aborted: 0,
        mismatches: Vec::new(),
    };
    for rec in records {
        match (&rec.x, &rec.a, &rec.y, &rec.b) {
            (Some(x), Some(a), Some(y), Some(b)) => {
                report.complete += 1;
                let n = rec.n as usize;
                let recount = (|| -> Result<u32> {
                    let x = decode_bits(x, n)?;
                    let y = decode_bits(y, n)?;
                    let a = decode_bits(a, n)?;
                    let b = decode_bits(b, n)?;
                    win_count(&x, &y, &a, &b).map_err(ProtocolError::Core)
                })();
                match recount {
                    Ok(wins) => {
                        let verdict = if wins >= rec.t {
                            Verdict::Accept
                        } else {
                            Verdict::Reject
                        };
                        if Some(wins) != rec.win_count || verdict != rec.verdict {
                            report.mismatches.push(format!(
                                "{}: logged {:?}/{:?}, replay {:?}/{}",
                                rec.session_id, rec.verdict, rec.win_count, verdict, wins
                            ));
                        }
                    }
                    Err(e) => report
                        .mismatches
                        .push(format!("{}: undecodable ({e})", rec.session_id)),
                }
            }
            _ => {
                report.aborted += 1;
                if rec.verdict != Verdict::Reject {
                    report
                        .mismatches
                        .push(format!("{}: aborted but not a reject", rec.session_id));
                }
            }
        }
    }
    report
}
