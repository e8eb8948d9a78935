//! Fixture corpus, file format, verification runner and brute-force oracles.

pub mod corpus;
pub mod format;
pub mod generators;
pub mod oracle;
pub mod runner;
