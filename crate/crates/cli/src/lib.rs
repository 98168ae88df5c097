//! Command-line front end for `nondegen-core`: argument parsing, report
//! assembly and rendering. The binary in `main.rs` only does process I/O.

pub mod commands;
pub mod job;
pub mod report;

pub use commands::{run, Outcome};
pub use job::{Cli, JobSpec};
