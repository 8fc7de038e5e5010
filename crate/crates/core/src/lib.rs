//! Grouped-subcarrier and power allocation for the downlink of an OFDMA cell.
//!
//! The band of `M` subcarriers is split into `M_g` interleaved groups of
//! `N_g` subcarriers. Each user reports the groups whose within-group gain
//! spread is small; the base station then hands out groups in two passes:
//!
//! 1. users are served in descending order of the variance of their reported
//!    group rates, each taking their best remaining group, until the
//!    proportional quota `floor(alpha_k * M_g)` is used up;
//! 2. the leftover groups go, one at a time, to the user with the lowest
//!    `R_k / alpha_k` among the `L` best reporters of that group.
//!
//! Power is then split equally over every assigned subcarrier.
//!
//! Modules:
//!
//! - [`channel`]: group maps, multipath frequency responses, i.i.d. exponential SNR draws
//! - [`link`]: SNR gap, transmissible rate, per-group statistics and the reporting rule
//! - [`allocator`]: the variance-ordered allocator, baselines, power split, exhaustive oracle
//! - [`sim`]: slot-level Monte-Carlo driver, aggregation, Jain index, sweeps
//! - [`cli`]: the `ofdma-sim` command line (run, sweep, example, validate)
//!
//! See the `examples/` directory of this crate for one runnable program per capability.

pub mod allocator;
pub mod channel;
pub mod cli;
pub mod error;
pub mod link;
pub mod sim;

pub use error::{Error, Result};
