//! Command-line front end for the biexciton-cascade simulator.
//!
//! Three entry points, mirrored by the `cascade-sim` binary:
//!
//! * [`figures::run_figure`] — named figure-reproduction runs with pinned
//!   parameter sets, emitting CSV/JSON tables.
//! * [`sweep::run_sweep`] — generic parameter sweeps over
//!   `{phi, S, sigma, epsilon, tau}`.
//! * [`verify::run_all`] — the verification suite (one check per acceptance
//!   criterion) with a machine-readable report.

pub mod config;
pub mod figures;
pub mod output;
pub mod sweep;
pub mod verify;

pub use config::{FileConfig, ResolvedConfig};
pub use output::{format_g, OutputFormat, Table};
