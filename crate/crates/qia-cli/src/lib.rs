//! Library surface of the experiment driver, shared between the `qia`
//! binary and its test suites.

pub mod audit;
pub mod checks;
pub mod config;
pub mod experiments;
pub mod report;
pub mod sweep;
