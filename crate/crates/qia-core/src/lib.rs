//! Core library for the CHSH-based quantum information advantage protocol:
//! the threshold game and its exact small-instance values, information
//! measures on classical joints, honest quantum and bounded-memory classical
//! prover simulators, and one-way message compression.
//!
//! The companion guide under `book/` walks through each piece; its code
//! snippets are compiled as doc-tests by the `qia-guide` crate.

pub mod binom;
pub mod bits;
pub mod classical;
pub mod compress;
pub mod error;
pub mod game;
pub mod info;
pub mod quantum;
pub mod rng;

pub use bits::Bitstring;
pub use error::{Error, Result};
pub use game::GameSpec;
pub use info::{JointDistribution, SmoothingBudget};
