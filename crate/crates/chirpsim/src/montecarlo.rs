//! Seeded, parallel BER experiments.
//!
//! A run sweeps an Eb/N0 grid; at each point it simulates one-bit symbols
//! (binary up/down chirps) until enough bit errors accumulate or a bit budget
//! runs out. Work is split into fixed-size trials of [`SYMBOLS_PER_TRIAL`]
//! symbols; every trial derives its own ChaCha stream from the run seed, the
//! grid index, and the trial index, so results are bit-identical for a fixed
//! seed no matter how many workers execute the trials.
//!
//! Per symbol window the desired user is symbol-synchronous (offset zero) and
//! every interferer gets a fresh Gaussian offset wrapped into [0, T), fresh
//! i.i.d. data including the straddling previous symbol, and fresh fading.
//! Noise is calibrated against the desired user's energy per bit, so Eb/N0
//! keeps its single-user meaning regardless of loading.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{
    ag_realization, fast_fading_series, ricean_gain, ChannelSpec,
};
use crate::correlation::inner_product_slices;
use crate::receiver::{decide, DetectorMode};
use crate::waveform::{ChirpSet, Direction, Signal};
use crate::{Error, Result};

/// Symbols (= bits) per Monte Carlo trial, the unit of parallel work.
pub const SYMBOLS_PER_TRIAL: usize = 256;

const TRIALS_PER_ROUND: u64 = 32;

/// Stopping rule per Eb/N0 point: stop after `min_bit_errors` or once
/// `max_bits` have been simulated, whichever comes first. Bits are counted
/// in whole trials of [`SYMBOLS_PER_TRIAL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stopping {
    pub min_bit_errors: u64,
    pub max_bits: u64,
}

impl Default for Stopping {
    fn default() -> Self {
        // ~10% relative error down to BER 1e-5 at desk scale
        Self {
            min_bit_errors: 200,
            max_bits: 20_000_000,
        }
    }
}

/// Full description of one BER experiment.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub set: ChirpSet,
    /// Number of active users K (desired plus K-1 interferers).
    pub n_active_users: usize,
    /// Timing-offset standard deviation as a fraction of T.
    pub offset_sigma_frac: f64,
    pub channel: ChannelSpec,
    pub mode: DetectorMode,
    pub ebn0_grid_db: Vec<f64>,
    pub stopping: Stopping,
    pub seed: u64,
    /// Which set index the receiver is synchronized to. Index 0 unless a
    /// calibration wants a user with negligible up/down crosstalk.
    pub desired_user: usize,
}

impl SimConfig {
    /// Single-user AWGN calibration config.
    pub fn awgn_single_user(set: ChirpSet, mode: DetectorMode, ebn0_grid_db: Vec<f64>, seed: u64) -> Self {
        Self {
            set,
            n_active_users: 1,
            offset_sigma_frac: 0.0,
            channel: ChannelSpec::Awgn,
            mode,
            ebn0_grid_db,
            stopping: Stopping::default(),
            seed,
            desired_user: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.set.n_signals();
        if self.n_active_users == 0 || self.n_active_users > n {
            return Err(Error::InvalidConfig(format!(
                "active users must be in 1..={n}, got {}",
                self.n_active_users
            )));
        }
        if self.desired_user >= n {
            return Err(Error::UserIndex {
                index: self.desired_user,
                n_signals: n,
            });
        }
        if !self.offset_sigma_frac.is_finite() || self.offset_sigma_frac < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "offset sigma must be >= 0, got {}",
                self.offset_sigma_frac
            )));
        }
        if self.ebn0_grid_db.is_empty() {
            return Err(Error::InvalidConfig("empty Eb/N0 grid".into()));
        }
        if self.ebn0_grid_db.iter().any(|e| e.is_nan()) {
            return Err(Error::InvalidConfig("NaN in Eb/N0 grid".into()));
        }
        if self.stopping.max_bits == 0 || self.stopping.min_bit_errors == 0 {
            return Err(Error::InvalidConfig(
                "stopping thresholds must be positive".into(),
            ));
        }
        self.channel.validate()?;
        match (&self.channel, self.mode) {
            (ChannelSpec::RiceanFast { .. }, DetectorMode::Coherent)
            | (ChannelSpec::AgTdl { .. }, DetectorMode::Coherent) => {
                return Err(Error::InvalidConfig(
                    "coherent detection needs a scalar channel gain; use noncoherent for \
                     fast-fading and tapped-delay-line channels"
                        .into(),
                ));
            }
            _ => {}
        }
        if let ChannelSpec::AgTdl { profile, .. } = &self.channel {
            let t = self.set.symbol_duration();
            if let Some(bad) = profile.taps.iter().find(|tap| tap.delay_s >= t) {
                return Err(Error::InvalidConfig(format!(
                    "tap delay {} s is not below the symbol duration {} s",
                    bad.delay_s, t
                )));
            }
        }
        Ok(())
    }
}

/// One measured point of a BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub wilson_95_halfwidth: f64,
}

impl BerPoint {
    fn new(ebn0_db: f64, bits_simulated: u64, bit_errors: u64) -> Self {
        let n = bits_simulated as f64;
        let p = if bits_simulated > 0 {
            bit_errors as f64 / n
        } else {
            0.0
        };
        let z = 1.959963984540054_f64; // 97.5% normal quantile
        let hw = if bits_simulated > 0 {
            let z2 = z * z;
            z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
        } else {
            0.0
        };
        Self {
            ebn0_db,
            bits_simulated,
            bit_errors,
            ber: p,
            wilson_95_halfwidth: hw,
        }
    }
}

/// Quasi-synchronous offsets for one symbol window: the desired user (slot 0)
/// gets exactly zero; each interferer draws Normal(0, (sigma_frac*T)^2)
/// wrapped into [0, T).
pub fn draw_offsets<R: Rng + ?Sized>(
    n_users: usize,
    sigma_frac: f64,
    symbol_duration: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = vec![0.0; n_users];
    if sigma_frac > 0.0 {
        let sigma = sigma_frac * symbol_duration;
        for slot in out.iter_mut().skip(1) {
            let x: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
            *slot = x.rem_euclid(symbol_duration);
        }
    }
    out
}

/// One active transmitter in a composed symbol window.
#[derive(Debug, Clone, Copy)]
pub struct ActiveUser {
    /// Set index of the waveform.
    pub index: usize,
    /// Direction of the symbol currently in the window.
    pub current: Direction,
    /// Direction of the previous symbol whose tail straddles in when
    /// `offset_s > 0`.
    pub previous: Direction,
    /// Timing offset in seconds, within [0, T).
    pub offset_s: f64,
    /// Flat complex channel gain (1 for no fading).
    pub gain: Complex64,
}

/// Superpose the delayed, flat-faded waveforms of all active users over one
/// receiver window. Equal transmit powers; no noise (see
/// [`crate::channel::awgn`]).
pub fn compose_rx_symbol(set: &ChirpSet, users: &[ActiveUser]) -> Result<Signal> {
    if users.is_empty() {
        return Err(Error::InvalidConfig("no active users".into()));
    }
    let t = set.symbol_duration();
    for u in users {
        if u.index >= set.n_signals() {
            return Err(Error::UserIndex {
                index: u.index,
                n_signals: set.n_signals(),
            });
        }
        if !u.offset_s.is_finite() || u.offset_s < 0.0 || u.offset_s >= t {
            return Err(Error::OutOfWindow {
                what: "offset",
                value: u.offset_s,
                lo: 0.0,
                hi: t,
            });
        }
    }
    let mut rx = vec![Complex64::new(0.0, 0.0); set.samples_per_symbol()];
    for u in users {
        set.accumulate_delayed(u.index, u.offset_s, u.current, u.previous, u.gain, &mut rx);
    }
    Signal::new(rx, set.sample_interval())
}

/// Run the BER experiment over the configured Eb/N0 grid.
///
/// Deterministic for a fixed seed independent of how many rayon workers are
/// active: trials are scheduled in fixed rounds and reduced in trial order
/// with integer counters.
pub fn run_ber(config: &SimConfig) -> Result<Vec<BerPoint>> {
    config.validate()?;
    let bits_per_trial = SYMBOLS_PER_TRIAL as u64;
    let trial_cap = (config.stopping.max_bits / bits_per_trial).max(1);

    let refs = DesiredRefs::new(&config.set, config.desired_user)?;
    let interferers = interferer_indices(
        config.set.n_signals(),
        config.desired_user,
        config.n_active_users,
    );

    let mut points = Vec::with_capacity(config.ebn0_grid_db.len());
    for (point_idx, &ebn0_db) in config.ebn0_grid_db.iter().enumerate() {
        let mut bits = 0u64;
        let mut errors = 0u64;
        let mut next_trial = 0u64;
        while next_trial < trial_cap && errors < config.stopping.min_bit_errors {
            let n_round = TRIALS_PER_ROUND.min(trial_cap - next_trial);
            let round: Vec<u64> = (0..n_round)
                .into_par_iter()
                .map(|j| run_trial(config, &refs, &interferers, point_idx, ebn0_db, next_trial + j))
                .collect::<Result<_>>()?;
            for e in round {
                errors += e;
                bits += bits_per_trial;
            }
            next_trial += n_round;
        }
        points.push(BerPoint::new(ebn0_db, bits, errors));
    }
    Ok(points)
}

/// Clean correlator references for the desired user.
struct DesiredRefs {
    up: Vec<Complex64>,
    down: Vec<Complex64>,
    dt: f64,
}

impl DesiredRefs {
    fn new(set: &ChirpSet, desired: usize) -> Result<Self> {
        Ok(Self {
            up: set.gen_chirp(desired, Direction::Up)?.into_samples(),
            down: set.gen_chirp(desired, Direction::Down)?.into_samples(),
            dt: set.sample_interval(),
        })
    }
}

fn interferer_indices(n: usize, desired: usize, active: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != desired).take(active - 1).collect()
}

fn stream_id(point_idx: usize, trial_idx: u64) -> u64 {
    ((point_idx as u64) << 40) ^ trial_idx
}

fn random_bit<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    if rng.random::<bool>() {
        Direction::Up
    } else {
        Direction::Down
    }
}

/// Simulate one trial of SYMBOLS_PER_TRIAL symbols; returns the desired
/// user's bit-error count.
fn run_trial(
    config: &SimConfig,
    refs: &DesiredRefs,
    interferers: &[usize],
    point_idx: usize,
    ebn0_db: f64,
    trial_idx: u64,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream_id(point_idx, trial_idx));

    let set = &config.set;
    let spp = set.samples_per_symbol();
    let dt = set.sample_interval();
    let t_sym = set.symbol_duration();
    let eb = t_sym; // unit envelope, one bit per symbol
    let desired = config.desired_user;
    let n_users = 1 + interferers.len();

    let mut rx = vec![Complex64::new(0.0, 0.0); spp];
    let mut errors = 0u64;

    match &config.channel {
        ChannelSpec::Awgn | ChannelSpec::RiceanMemoryless { .. } => {
            let k_db = match &config.channel {
                ChannelSpec::RiceanMemoryless { k_db } => Some(*k_db),
                _ => None,
            };
            for _ in 0..SYMBOLS_PER_TRIAL {
                let offsets = draw_offsets(n_users, config.offset_sigma_frac, t_sym, &mut rng);
                let desired_bit = random_bit(&mut rng);
                let int_bits: Vec<(Direction, Direction)> = interferers
                    .iter()
                    .map(|_| (random_bit(&mut rng), random_bit(&mut rng)))
                    .collect();
                let gains: Vec<Complex64> = (0..n_users)
                    .map(|_| match k_db {
                        Some(k) => ricean_gain(k, &mut rng),
                        None => Complex64::new(1.0, 0.0),
                    })
                    .collect();

                rx.fill(Complex64::new(0.0, 0.0));
                set.accumulate_delayed(desired, 0.0, desired_bit, desired_bit, gains[0], &mut rx);
                for (slot, (&idx, &(cur, prev))) in
                    interferers.iter().zip(&int_bits).enumerate()
                {
                    set.accumulate_delayed(idx, offsets[slot + 1], cur, prev, gains[slot + 1], &mut rx);
                }
                crate::channel::add_awgn_with_eb(&mut rx, dt, eb, ebn0_db, &mut rng)?;

                let decision = detect_window(&rx, refs, config.mode, Some(gains[0]))?;
                if decision != desired_bit {
                    errors += 1;
                }
            }
        }
        ChannelSpec::RiceanFast { k_db, fd_t } => {
            // One continuous Doppler process per user for the whole trial.
            let series: Vec<Vec<Complex64>> = (0..n_users)
                .map(|_| fast_fading_series(*k_db, *fd_t, SYMBOLS_PER_TRIAL, spp, &mut rng))
                .collect();
            let mut scratch = vec![Complex64::new(0.0, 0.0); spp];
            for sym in 0..SYMBOLS_PER_TRIAL {
                let offsets = draw_offsets(n_users, config.offset_sigma_frac, t_sym, &mut rng);
                let desired_bit = random_bit(&mut rng);
                let int_bits: Vec<(Direction, Direction)> = interferers
                    .iter()
                    .map(|_| (random_bit(&mut rng), random_bit(&mut rng)))
                    .collect();

                rx.fill(Complex64::new(0.0, 0.0));
                let window = sym * spp..(sym + 1) * spp;
                for (slot, user) in std::iter::once((0usize, desired))
                    .chain(
                        interferers
                            .iter()
                            .enumerate()
                            .map(|(j, &idx)| (j + 1, idx)),
                    )
                {
                    let (cur, prev, eps) = if slot == 0 {
                        (desired_bit, desired_bit, 0.0)
                    } else {
                        let (c, p) = int_bits[slot - 1];
                        (c, p, offsets[slot])
                    };
                    scratch.fill(Complex64::new(0.0, 0.0));
                    set.accumulate_delayed(user, eps, cur, prev, Complex64::new(1.0, 0.0), &mut scratch);
                    let g = &series[slot][window.clone()];
                    for i in 0..spp {
                        rx[i] += g[i] * scratch[i];
                    }
                }
                crate::channel::add_awgn_with_eb(&mut rx, dt, eb, ebn0_db, &mut rng)?;
                let decision = detect_window(&rx, refs, config.mode, None)?;
                if decision != desired_bit {
                    errors += 1;
                }
            }
        }
        ChannelSpec::AgTdl { profile, k_db } => {
            let realization = ag_realization(profile, *k_db, SYMBOLS_PER_TRIAL, &mut rng)?;
            let delays: Vec<usize> = realization
                .tap_delays_s()
                .iter()
                .map(|&d| (d / dt).round() as usize)
                .collect();
            let max_delay = *delays.iter().max().unwrap_or(&0);
            let scale = 1.0 / profile.expected_mean_power().sqrt();
            let n_taps = delays.len();

            let mut scratch = vec![Complex64::new(0.0, 0.0); spp];
            let mut spread = vec![Complex64::new(0.0, 0.0); spp + max_delay];
            let mut carry = vec![Complex64::new(0.0, 0.0); max_delay];
            for sym in 0..SYMBOLS_PER_TRIAL {
                let offsets = draw_offsets(n_users, config.offset_sigma_frac, t_sym, &mut rng);
                let desired_bit = random_bit(&mut rng);
                let int_bits: Vec<(Direction, Direction)> = interferers
                    .iter()
                    .map(|_| (random_bit(&mut rng), random_bit(&mut rng)))
                    .collect();
                // users share the trial realization; each gets its own LOS
                // tap phase
                let los_phases: Vec<Complex64> = (0..n_users)
                    .map(|_| {
                        Complex64::from_polar(
                            1.0,
                            rng.random_range(0.0..2.0 * std::f64::consts::PI),
                        )
                    })
                    .collect();

                spread.fill(Complex64::new(0.0, 0.0));
                let taps = realization.gains(sym);
                for (slot, user) in std::iter::once((0usize, desired))
                    .chain(
                        interferers
                            .iter()
                            .enumerate()
                            .map(|(j, &idx)| (j + 1, idx)),
                    )
                {
                    let (cur, prev, eps) = if slot == 0 {
                        (desired_bit, desired_bit, 0.0)
                    } else {
                        let (c, p) = int_bits[slot - 1];
                        (c, p, offsets[slot])
                    };
                    scratch.fill(Complex64::new(0.0, 0.0));
                    set.accumulate_delayed(user, eps, cur, prev, Complex64::new(1.0, 0.0), &mut scratch);
                    for ti in 0..n_taps {
                        let mut g = taps[ti] * scale;
                        if ti == 0 {
                            g *= los_phases[slot];
                        }
                        if g == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let di = delays[ti];
                        for i in 0..spp {
                            spread[i + di] += g * scratch[i];
                        }
                    }
                }
                // fold in last symbol's tail, save this symbol's
                rx.copy_from_slice(&spread[..spp]);
                for i in 0..max_delay.min(spp) {
                    rx[i] += carry[i];
                }
                carry.copy_from_slice(&spread[spp..]);

                crate::channel::add_awgn_with_eb(&mut rx, dt, eb, ebn0_db, &mut rng)?;
                let decision = detect_window(&rx, refs, config.mode, None)?;
                if decision != desired_bit {
                    errors += 1;
                }
            }
        }
    }
    Ok(errors)
}

fn detect_window(
    rx: &[Complex64],
    refs: &DesiredRefs,
    mode: DetectorMode,
    gain: Option<Complex64>,
) -> Result<Direction> {
    let z_up = inner_product_slices(rx, &refs.up, refs.dt);
    let z_dn = inner_product_slices(rx, &refs.down, refs.dt);
    decide(z_up, z_dn, mode, gain)
}
