//! Channel models: AWGN, flat Ricean fading (memoryless and fast), and the
//! air-ground tapped-delay-line channel with intermittent multipath.
//!
//! All fading generators are unit mean power so Eb/N0 accounting stays
//! channel-independent, and all take an explicit RNG: independent streams per
//! trial make parallel Monte Carlo deterministic.

mod profile;

pub use profile::{Intermittency, TapFading, TapProfileSet, TapSpec};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::waveform::Signal;
use crate::{Error, Result};

/// Which channel a simulation runs through.
#[derive(Debug, Clone)]
pub enum ChannelSpec {
    /// Additive white Gaussian noise only.
    Awgn,
    /// Flat Ricean, one independent gain per symbol.
    RiceanMemoryless { k_db: f64 },
    /// Flat Ricean with intra-symbol variation at normalized Doppler fd_t.
    RiceanFast { k_db: f64, fd_t: f64 },
    /// Air-ground tapped delay line with Ricean LOS tap.
    AgTdl { profile: TapProfileSet, k_db: f64 },
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Awgn => Ok(()),
            ChannelSpec::RiceanMemoryless { k_db } => {
                // -inf is the Rayleigh sentinel
                if k_db.is_nan() || *k_db == f64::INFINITY {
                    Err(Error::InvalidConfig(format!("k_db must be finite or -inf, got {k_db}")))
                } else {
                    Ok(())
                }
            }
            ChannelSpec::RiceanFast { k_db, fd_t } => {
                if k_db.is_nan() || *k_db == f64::INFINITY {
                    return Err(Error::InvalidConfig(format!(
                        "k_db must be finite or -inf, got {k_db}"
                    )));
                }
                if !fd_t.is_finite() || *fd_t <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "fd_t must be positive, got {fd_t}"
                    )));
                }
                Ok(())
            }
            ChannelSpec::AgTdl { profile, k_db } => {
                if k_db.is_nan() || !k_db.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "k_db must be finite, got {k_db}"
                    )));
                }
                profile.validate()
            }
        }
    }

    /// Short label for CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            ChannelSpec::Awgn => "awgn",
            ChannelSpec::RiceanMemoryless { .. } => "ricean-mem",
            ChannelSpec::RiceanFast { .. } => "ricean-fast",
            ChannelSpec::AgTdl { .. } => "ag-tdl",
        }
    }

    /// Profile name for CSV output; "-" when no profile applies.
    pub fn profile_label(&self) -> &str {
        match self {
            ChannelSpec::AgTdl { profile, .. } => &profile.name,
            _ => "-",
        }
    }
}

fn standard_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // CN(0,1): each quadrature N(0, 1/2)
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Add circularly-symmetric Gaussian noise calibrated to hit `ebn0_db` for a
/// bit energy of `eb`. Per-sample complex noise variance is N0/dt.
pub(crate) fn add_awgn_with_eb<R: Rng + ?Sized>(
    samples: &mut [Complex64],
    sample_interval: f64,
    eb: f64,
    ebn0_db: f64,
    rng: &mut R,
) -> Result<()> {
    if ebn0_db.is_nan() {
        return Err(Error::InvalidConfig("Eb/N0 must not be NaN".into()));
    }
    if ebn0_db == f64::INFINITY {
        return Ok(()); // no-noise mode
    }
    if !ebn0_db.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "Eb/N0 must be finite or +inf, got {ebn0_db}"
        )));
    }
    let n0 = eb / 10f64.powf(ebn0_db / 10.0);
    let sigma = (n0 / sample_interval).sqrt(); // complex std, per-quadrature sigma/sqrt(2)
    for s in samples.iter_mut() {
        *s += sigma * standard_complex_gaussian(rng);
    }
    Ok(())
}

/// AWGN channel: Eb is taken from the signal's own energy divided by
/// `bits_per_symbol`. `ebn0_db = +inf` is the no-noise sentinel.
pub fn awgn<R: Rng + ?Sized>(
    sig: &Signal,
    ebn0_db: f64,
    bits_per_symbol: u32,
    rng: &mut R,
) -> Result<Signal> {
    if bits_per_symbol == 0 {
        return Err(Error::InvalidConfig("bits_per_symbol must be >= 1".into()));
    }
    let eb = sig.energy() / bits_per_symbol as f64;
    let mut samples = sig.samples().to_vec();
    add_awgn_with_eb(&mut samples, sig.sample_interval(), eb, ebn0_db, rng)?;
    Signal::new(samples, sig.sample_interval())
}

/// One flat Ricean gain: sqrt(K/(K+1)) + sqrt(1/(K+1)) CN(0,1), unit mean
/// power. `k_db >= 100` collapses to the pure-LOS gain 1; `k_db = -inf` is
/// the Rayleigh sentinel.
pub fn ricean_gain<R: Rng + ?Sized>(k_db: f64, rng: &mut R) -> Complex64 {
    if k_db >= 100.0 {
        return Complex64::new(1.0, 0.0);
    }
    if k_db == f64::NEG_INFINITY {
        return standard_complex_gaussian(rng);
    }
    let k = 10f64.powf(k_db / 10.0);
    let los = (k / (k + 1.0)).sqrt();
    let diffuse = (1.0 / (k + 1.0)).sqrt();
    los + diffuse * standard_complex_gaussian(rng)
}

const JAKES_SINUSOIDS: usize = 64;

/// Per-sample complex gains over `n_symbols` symbols of `samples_per_symbol`
/// samples for a flat channel with normalized Doppler `fd_t` = f_D * T.
///
/// The diffuse part is a Gaussian-weighted sum of sinusoids with Jakes-like
/// Doppler frequencies f_D cos(alpha), which gives Rayleigh statistics and an
/// autocorrelation following J0(2 pi f_D tau). It rides on the constant LOS
/// term with the Ricean power split; overall mean power is 1.
pub fn fast_fading_series<R: Rng + ?Sized>(
    k_db: f64,
    fd_t: f64,
    n_symbols: usize,
    samples_per_symbol: usize,
    rng: &mut R,
) -> Vec<Complex64> {
    let total = n_symbols * samples_per_symbol;
    let (los, diffuse_scale) = if k_db >= 100.0 {
        (1.0, 0.0)
    } else if k_db == f64::NEG_INFINITY {
        (0.0, 1.0)
    } else {
        let k = 10f64.powf(k_db / 10.0);
        ((k / (k + 1.0)).sqrt(), (1.0 / (k + 1.0)).sqrt())
    };

    // Per-oscillator Gaussian amplitudes, Jakes frequencies, random phases.
    let mut amps = [Complex64::new(0.0, 0.0); JAKES_SINUSOIDS];
    let mut rot = [Complex64::new(0.0, 0.0); JAKES_SINUSOIDS];
    let mut step = [Complex64::new(0.0, 0.0); JAKES_SINUSOIDS];
    for i in 0..JAKES_SINUSOIDS {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        amps[i] = Complex64::new(a, b);
        let alpha: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let phase0: f64 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        // phase advance per sample, in symbols: fd_t * cos(alpha) / spp
        let dphi = 2.0 * std::f64::consts::PI * fd_t * alpha.cos() / samples_per_symbol as f64;
        rot[i] = Complex64::from_polar(1.0, phase0);
        step[i] = Complex64::from_polar(1.0, dphi);
    }
    let norm = diffuse_scale / (2.0 * JAKES_SINUSOIDS as f64).sqrt();

    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        let mut d = Complex64::new(0.0, 0.0);
        for i in 0..JAKES_SINUSOIDS {
            d += amps[i] * rot[i];
            rot[i] *= step[i];
        }
        out.push(Complex64::new(los, 0.0) + norm * d);
    }
    out
}

/// Per-symbol tap gains and on/off states over a trial.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    tap_delays_s: Vec<f64>,
    /// gains[symbol][tap]; off taps are exactly zero.
    gains: Vec<Vec<Complex64>>,
    profile_name: String,
}

impl ChannelRealization {
    /// A single unit tap at zero delay, constant over `n_symbols`.
    pub fn identity(n_symbols: usize) -> Self {
        Self {
            tap_delays_s: vec![0.0],
            gains: vec![vec![Complex64::new(1.0, 0.0)]; n_symbols],
            profile_name: "identity".into(),
        }
    }

    pub fn n_symbols(&self) -> usize {
        self.gains.len()
    }

    pub fn tap_delays_s(&self) -> &[f64] {
        &self.tap_delays_s
    }

    pub fn gains(&self, symbol_index: usize) -> &[Complex64] {
        &self.gains[symbol_index]
    }

    pub fn profile_name(&self) -> &str {
        &self.profile_name
    }

    /// Time-averaged power per tap.
    pub fn time_averaged_pdp(&self) -> Vec<(f64, f64)> {
        let n = self.gains.len() as f64;
        self.tap_delays_s
            .iter()
            .enumerate()
            .map(|(ti, &d)| {
                let p = self.gains.iter().map(|g| g[ti].norm_sqr()).sum::<f64>() / n;
                (d, p)
            })
            .collect()
    }
}

/// Draw per-symbol tap gains for the AG channel: Ricean LOS tap, always-on
/// second ray, and intermittent taps 3..6 toggling with geometric on/off
/// persistence and fresh Rayleigh gains while on.
pub fn ag_realization<R: Rng + ?Sized>(
    profile: &TapProfileSet,
    k_db: f64,
    n_symbols: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    profile.validate()?;
    if n_symbols == 0 {
        return Err(Error::InvalidConfig("n_symbols must be >= 1".into()));
    }
    let n_taps = profile.taps.len();

    // Initial on/off states from the stationary occupancy.
    let mut on: Vec<bool> = profile
        .taps
        .iter()
        .map(|t| match &t.intermittency {
            Some(im) => rng.random::<f64>() < im.on_probability,
            None => true,
        })
        .collect();

    let mut gains = Vec::with_capacity(n_symbols);
    for sym in 0..n_symbols {
        let mut row = Vec::with_capacity(n_taps);
        for (ti, tspec) in profile.taps.iter().enumerate() {
            if let Some(im) = &tspec.intermittency {
                if sym > 0 {
                    // geometric persistence: leave the current state with
                    // probability 1/mean_duration per symbol
                    let leave = if on[ti] {
                        1.0 / im.mean_on_symbols
                    } else {
                        1.0 / im.mean_off_symbols
                    };
                    if rng.random::<f64>() < leave {
                        on[ti] = !on[ti];
                    }
                }
                if !on[ti] {
                    row.push(Complex64::new(0.0, 0.0));
                    continue;
                }
            }
            let amp = tspec.power_linear().sqrt();
            let g = match tspec.fading {
                TapFading::LosRicean => ricean_gain(k_db, rng),
                TapFading::Rayleigh => standard_complex_gaussian(rng),
                TapFading::Fixed => Complex64::new(1.0, 0.0),
            };
            row.push(amp * g);
        }
        gains.push(row);
    }
    Ok(ChannelRealization {
        tap_delays_s: profile.taps.iter().map(|t| t.delay_s).collect(),
        gains,
        profile_name: profile.name.clone(),
    })
}

/// Convolve one symbol with the active taps of `realization` at
/// `symbol_index`. Tap delays are rounded to the nearest sample; the output
/// is longer than the input by the largest tap delay, and the tail carries
/// the energy leaking into the next symbol window.
pub fn apply_tdl(
    sig: &Signal,
    realization: &ChannelRealization,
    symbol_index: usize,
) -> Result<Signal> {
    let dt = sig.sample_interval();
    let t_sym = sig.duration();
    let delays: Vec<usize> = realization
        .tap_delays_s
        .iter()
        .map(|&d| {
            if d >= t_sym {
                Err(Error::OutOfWindow {
                    what: "tap delay",
                    value: d,
                    lo: 0.0,
                    hi: t_sym,
                })
            } else {
                Ok((d / dt).round() as usize)
            }
        })
        .collect::<Result<_>>()?;
    if symbol_index >= realization.n_symbols() {
        return Err(Error::InvalidConfig(format!(
            "symbol index {symbol_index} beyond realization length {}",
            realization.n_symbols()
        )));
    }
    let gains = realization.gains(symbol_index);
    let max_delay = *delays.iter().max().unwrap_or(&0);
    let mut out = vec![Complex64::new(0.0, 0.0); sig.len() + max_delay];
    for (tap, (&di, &g)) in delays.iter().zip(gains).enumerate() {
        let _ = tap;
        if g == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (i, &s) in sig.samples().iter().enumerate() {
            out[i + di] += g * s;
        }
    }
    Signal::new(out, dt)
}

/// RMS delay spread of the realization's time-averaged power delay profile.
pub fn delay_spread(realization: &ChannelRealization) -> Result<f64> {
    let pdp = realization.time_averaged_pdp();
    let total: f64 = pdp.iter().map(|&(_, p)| p).sum();
    if total <= 0.0 {
        return Err(Error::InvalidConfig(
            "all-zero power delay profile".into(),
        ));
    }
    let mean = pdp.iter().map(|&(d, p)| d * p).sum::<f64>() / total;
    let second = pdp.iter().map(|&(d, p)| d * d * p).sum::<f64>() / total;
    Ok((second - mean * mean).max(0.0).sqrt())
}
