//! Library side of the `bkss` binary: report builders and verification suites.

pub mod checks;
pub mod report;
