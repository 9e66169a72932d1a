//! Experiment drivers built on top of the core types: adversarial worst-case
//! search for a single policy, batch sweeps that write deterministic CSV,
//! side-by-side comparison of measurement classes, and the command-line
//! front end.

pub mod cli;
pub mod compare;
pub mod search;
pub mod sweep;

pub use compare::{compare_settings, write_compare_csv, CompareRow};
pub use search::{estimate_worst_error, ErrorReport, SearchConfig};
pub use sweep::{run_sweep, write_sweep_csv, SweepRow};
