//! Support code for the `cmsoule` binary: the prime scan, configuration
//! files and report output.

pub mod config;
pub mod exit;
pub mod output;
pub mod scan;
