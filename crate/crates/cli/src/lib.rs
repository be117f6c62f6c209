//! Library surface of the batch CLI: the JSON job format, report emission,
//! and the job runner. The binary in `main.rs` adds argument parsing and
//! batch dispatch on top.

pub mod job;
pub mod report;
pub mod run;

pub use job::{Format, JobSpec, Mode, SpecError};
pub use report::Report;
pub use run::{run, JobOutcome, RunError};
