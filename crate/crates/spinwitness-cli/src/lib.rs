//! Command-line front end for the spinwitness library: parses flags and
//! config files into a plan, runs it, and renders deterministic text or
//! CSV output.

pub mod exec;
pub mod grid;
pub mod plan;

pub use exec::{run, RunError};
pub use plan::{parse_command, Plan, UsageError};
