//! Doc-test shim for the guide.
//!
//! mdbook does not compile the book's code fences against the workspace
//! crates, so each chapter is included here as a module doc: every Rust
//! snippet in `book/src/` becomes a doc-test of this crate, and
//! `cargo test -p qia-guide --doc` keeps the book honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/chsh-games.md")]
pub mod chsh_games {}

#[doc = include_str!("../../../book/src/information-measures.md")]
pub mod information_measures {}

#[doc = include_str!("../../../book/src/quantum-prover.md")]
pub mod quantum_prover {}

#[doc = include_str!("../../../book/src/classical-provers.md")]
pub mod classical_provers {}

#[doc = include_str!("../../../book/src/message-compression.md")]
pub mod message_compression {}

#[doc = include_str!("../../../book/src/wire-protocol.md")]
pub mod wire_protocol {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
