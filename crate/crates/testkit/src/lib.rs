//! Oracles, generators and fixtures shared by the test suites.

pub mod brute;
pub mod colimit;
pub mod fixtures;
pub mod gen;
pub mod invariants;
pub mod oracle;
pub mod suites;
