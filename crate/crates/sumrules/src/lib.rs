//! File formats, invariance scans, benchmarks, the acceptance suite and the
//! `sumrules` command line, built on [`sumrules_core`].

pub mod acceptance;
pub mod bench;
pub mod cli;
pub mod json;
pub mod scan;

pub use scan::{invariance_scan, ScanSummary};
