//! Multi-user chirp spread spectrum simulation toolkit.
//!
//! Builds sets of N orthogonal linear up/down chirps (and a quartic nonlinear
//! variant) in complex baseband, evaluates their cross-correlations under
//! quasi-synchronous timing offsets, runs them through canonical fading
//! channels and an air-ground tapped-delay-line channel, and measures BER
//! with a seeded, parallel Monte Carlo engine.
//!
//! The crate is organized around five modules:
//!
//! - [`waveform`] — chirp set construction, delayed waveforms, TF traces
//! - [`correlation`] — pairwise and load-averaged cross-correlation vs delay
//! - [`channel`] — AWGN, flat Ricean (memoryless and fast), AG tapped delay line
//! - [`receiver`] — correlator-bank up/down detection
//! - [`montecarlo`] — BER experiments over Eb/N0 grids
//!
//! Every randomized operation takes an explicit RNG or seed, and Monte Carlo
//! results are byte-identical for a fixed seed regardless of worker count.
//!
//! See the `examples/` directory for one runnable program per capability, and
//! the `chirpsim` binary for CSV-emitting command line access.

pub mod channel;
pub mod cli;
pub mod correlation;
pub mod montecarlo;
pub mod receiver;
pub mod waveform;

use thiserror::Error;

/// Errors reported by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("user index {index} out of range for a set of {n_signals} signals")]
    UserIndex { index: usize, n_signals: usize },

    #[error("{what} = {value} outside [{lo}, {hi})")]
    OutOfWindow {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("signal mismatch: {0}")]
    SignalMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("profile error at line {line}, key `{key}`: {msg}")]
    Profile {
        line: usize,
        key: String,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use channel::{
    ag_realization, apply_tdl, awgn, delay_spread, fast_fading_series, ricean_gain,
    ChannelRealization, ChannelSpec, TapFading, TapProfileSet, TapSpec,
};
pub use correlation::{average_crosscorr_vs_delay, inner_product, pair_crosscorr, CorrCurve};
pub use montecarlo::{
    compose_rx_symbol, draw_offsets, run_ber, ActiveUser, BerPoint, SimConfig, Stopping,
};
pub use receiver::{detect_bit, up_down_crosstalk, DetectorMode};
pub use waveform::{ChirpFamily, ChirpSet, Direction, Signal, TfTrace};
