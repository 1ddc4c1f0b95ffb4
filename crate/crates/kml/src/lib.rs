//! Suite runner and report emitter for the kernel multiplier laboratory.

pub mod config;
pub mod report;
pub mod suites;
