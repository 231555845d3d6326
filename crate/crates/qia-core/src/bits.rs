//! Fixed-length bit vectors.
//!
//! Inputs, outputs and classical messages are all bitstrings. The length is
//! fixed at construction. Code indexes from 0; prose and logs follow the
//! usual convention of writing copies as i = 1..n.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A fixed-length sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstring {
    bits: Vec<u8>,
}

impl Bitstring {
    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "bitstrings have length >= 1");
        Bitstring { bits: vec![0; n] }
    }

    /// Builds from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParam("empty bitstring".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParam("bit values must be 0 or 1".into()));
        }
        Ok(Bitstring { bits: bits.to_vec() })
    }

    /// Parses a string of '0'/'1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    /// Uniformly random string of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1);
        Bitstring {
            bits: (0..n).map(|_| rng.random::<bool>() as u8).collect(),
        }
    }

    /// The low `n` bits of `value`, index 0 holding the most significant bit.
    pub fn from_uint(value: u64, n: usize) -> Self {
        assert!((1..=64).contains(&n));
        let bits = (0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect();
        Bitstring { bits }
    }

    /// Reads the string back as an integer, bit 0 most significant.
    pub fn to_uint(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set_bit(&mut self, i: usize, value: u8) {
        assert!(value <= 1);
        self.bits[i] = value;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// First `c` bits as a new string; `c = 0` is not representable, so this
    /// requires `1 <= c <= len`.
    pub fn prefix(&self, c: usize) -> Result<Self> {
        if c == 0 || c > self.len() {
            return Err(Error::InvalidParam(format!(
                "prefix length {c} out of range 1..={}",
                self.len()
            )));
        }
        Ok(Bitstring {
            bits: self.bits[..c].to_vec(),
        })
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}
