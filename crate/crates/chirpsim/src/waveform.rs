//! Chirp waveform synthesis.
//!
//! A [`ChirpSet`] holds the family parameters (N, T, oversampling, linear or
//! quartic nonlinearity) and generates the N user waveforms analytically at
//! sample instants. The m-th linear up-chirp in complex baseband is
//!
//! ```text
//! s_m(t) = exp(j*pi/4) * exp(j*(pi*N/T^2) * (t + m*T/N)^2),   0 <= t < T
//! ```
//!
//! with the down-chirp obtained by negating the sign of the second exponent.
//! The set occupies total bandwidth B = 2N/T and the N waveforms are mutually
//! orthogonal when perfectly synchronized.
//!
//! The quartic family adds a user-dependent phase term Psi_m(t) inside the
//! second exponent, which bends each time-frequency trace so that delayed
//! waveforms from different users decorrelate faster than the linear set.
//! Delayed waveforms are always regenerated analytically at the sample
//! instants; nothing is ever resampled or interpolated.

use num_complex::Complex64;

use crate::{Error, Result};

/// Which nonlinearity applies to the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChirpFamily {
    /// Classic linear frequency sweep, slope N/T^2.
    Linear,
    /// Quartic phase nonlinearity on top of the linear sweep.
    Quartic,
}

impl ChirpFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChirpFamily::Linear => "linear",
            ChirpFamily::Quartic => "quartic",
        }
    }
}

/// Sweep direction of one binary symbol: up-chirp or down-chirp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// Sign applied to the quadratic/nonlinear exponent.
    fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

/// A finite complex-baseband sample sequence with its sample interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    sample_interval: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, sample_interval: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::SignalMismatch("signal must be non-empty".into()));
        }
        if !sample_interval.is_finite() || sample_interval <= 0.0 {
            return Err(Error::SignalMismatch(format!(
                "sample interval must be positive and finite, got {sample_interval}"
            )));
        }
        Ok(Self {
            samples,
            sample_interval,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample_interval(&self) -> f64 {
        self.sample_interval
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.sample_interval
    }

    /// Energy = sum |s[i]|^2 * dt.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.sample_interval
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }
}

/// Instantaneous-frequency trace of one user over a symbol, as (t, f) pairs.
#[derive(Debug, Clone)]
pub struct TfTrace {
    points: Vec<(f64, f64)>,
}

impl TfTrace {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Family parameters defining all N user waveforms.
#[derive(Debug, Clone)]
pub struct ChirpSet {
    n_signals: usize,
    symbol_duration: f64,
    oversampling: usize,
    family: ChirpFamily,
    nonlinearity_gain: f64,
    curvature: Vec<f64>,
}

/// Quartic phase shape: q(x) = 4.5 x^2 (2 - x^2) on x = t/T in [0, 1].
///
/// Its derivative q'(x) = 18 x (1 - x^2) vanishes at both symbol ends, so the
/// band-edge frequencies of the quartic set match the linear grid, and is
/// one-signed inside the symbol, so each trace bows monotonically up or down
/// by an amount set by the user's curvature weight.
fn quartic_shape(x: f64) -> f64 {
    4.5 * x * x * (2.0 - x * x)
}

fn quartic_shape_deriv(x: f64) -> f64 {
    18.0 * x * (1.0 - x * x)
}

/// Per-user curvature weights in [-1, 1], antisymmetric about the set middle.
///
/// The lower half receives the graded magnitudes (N-1-2j)/(N-1) in an
/// interleaved order so that users adjacent in index sit far apart in
/// curvature; the upper half mirrors with opposite sign. Adjacent-index users
/// are the ones whose delayed waveforms align under small timing offsets, so
/// spreading them apart in curvature is what suppresses the worst
/// multiple-access interference peaks.
fn curvature_weights(n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0; n];
    }
    let half = n / 2;
    let mags: Vec<f64> = (0..half)
        .map(|j| (n - 1 - 2 * j) as f64 / (n - 1) as f64)
        .collect();
    let mut weights = vec![0.0; n];
    for i in 0..half {
        let idx = if i % 2 == 0 {
            i / 2
        } else {
            half.div_ceil(2) + i / 2
        };
        weights[i] = -mags[idx];
        weights[n - 1 - i] = mags[idx];
    }
    weights
}

impl ChirpSet {
    /// Default oversampling factor: sample rate = 4 * B.
    pub const DEFAULT_OVERSAMPLING: usize = 4;
    /// Default quartic nonlinearity gain.
    pub const DEFAULT_NONLINEARITY_GAIN: f64 = 0.15;

    pub fn new(
        n_signals: usize,
        symbol_duration: f64,
        oversampling: usize,
        family: ChirpFamily,
        nonlinearity_gain: f64,
    ) -> Result<Self> {
        if n_signals == 0 {
            return Err(Error::InvalidConfig("n_signals must be >= 1".into()));
        }
        if !symbol_duration.is_finite() || symbol_duration <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "symbol duration must be positive, got {symbol_duration}"
            )));
        }
        if oversampling == 0 {
            return Err(Error::InvalidConfig("oversampling must be >= 1".into()));
        }
        if !nonlinearity_gain.is_finite() || nonlinearity_gain < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "nonlinearity gain must be >= 0, got {nonlinearity_gain}"
            )));
        }
        Ok(Self {
            n_signals,
            symbol_duration,
            oversampling,
            family,
            nonlinearity_gain,
            curvature: curvature_weights(n_signals),
        })
    }

    /// Linear set with the default oversampling.
    pub fn linear(n_signals: usize, symbol_duration: f64) -> Result<Self> {
        Self::new(
            n_signals,
            symbol_duration,
            Self::DEFAULT_OVERSAMPLING,
            ChirpFamily::Linear,
            0.0,
        )
    }

    /// Quartic set with the default oversampling and nonlinearity gain.
    pub fn quartic(n_signals: usize, symbol_duration: f64) -> Result<Self> {
        Self::new(
            n_signals,
            symbol_duration,
            Self::DEFAULT_OVERSAMPLING,
            ChirpFamily::Quartic,
            Self::DEFAULT_NONLINEARITY_GAIN,
        )
    }

    pub fn n_signals(&self) -> usize {
        self.n_signals
    }

    pub fn symbol_duration(&self) -> f64 {
        self.symbol_duration
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    pub fn family(&self) -> ChirpFamily {
        self.family
    }

    pub fn nonlinearity_gain(&self) -> f64 {
        self.nonlinearity_gain
    }

    /// Total bandwidth occupied by the set: B = 2N/T.
    pub fn bandwidth(&self) -> f64 {
        2.0 * self.n_signals as f64 / self.symbol_duration
    }

    /// Sample rate f_s = oversampling * B.
    pub fn sample_rate(&self) -> f64 {
        self.oversampling as f64 * self.bandwidth()
    }

    /// Samples per symbol = oversampling * 2N.
    pub fn samples_per_symbol(&self) -> usize {
        self.oversampling * 2 * self.n_signals
    }

    pub fn sample_interval(&self) -> f64 {
        self.symbol_duration / self.samples_per_symbol() as f64
    }

    /// Curvature weight c_m of user `m` (zero for the linear family).
    pub fn curvature_weight(&self, m: usize) -> Result<f64> {
        self.check_user(m)?;
        Ok(match self.family {
            ChirpFamily::Linear => 0.0,
            ChirpFamily::Quartic => self.curvature[m],
        })
    }

    fn check_user(&self, m: usize) -> Result<()> {
        if m >= self.n_signals {
            return Err(Error::UserIndex {
                index: m,
                n_signals: self.n_signals,
            });
        }
        Ok(())
    }

    /// Effective gamma * c_m for user m, folding in the family switch.
    fn psi_weight(&self, m: usize) -> f64 {
        match self.family {
            ChirpFamily::Linear => 0.0,
            ChirpFamily::Quartic => self.nonlinearity_gain * self.curvature[m],
        }
    }

    /// Total phase of user `m` at time `t` within the symbol, including the
    /// pi/4 origin term. No argument checks; `t` may lie outside [0, T) when
    /// evaluating a straddling previous symbol.
    fn phase_at(&self, m: usize, t: f64, direction: Direction) -> f64 {
        let n = self.n_signals as f64;
        let tt = self.symbol_duration;
        let x = t / tt;
        let base = t + m as f64 * tt / n;
        let psi = self.psi_weight(m) * tt * tt * quartic_shape(x);
        std::f64::consts::FRAC_PI_4
            + direction.sign() * std::f64::consts::PI * n / (tt * tt) * (base * base + psi)
    }

    /// One full symbol of user `m`, sampled at t = i/f_s.
    pub fn gen_chirp(&self, m: usize, direction: Direction) -> Result<Signal> {
        self.check_user(m)?;
        let dt = self.sample_interval();
        let samples = (0..self.samples_per_symbol())
            .map(|i| Complex64::from_polar(1.0, self.phase_at(m, i as f64 * dt, direction)))
            .collect();
        Signal::new(samples, dt)
    }

    /// User `k`'s stream delayed by `eps`, restricted to the receiver window
    /// [0, T). For t >= eps the current symbol is evaluated at t - eps; for
    /// t < eps the previous symbol's tail is evaluated at t - eps + T. Both
    /// segments are generated analytically, so fractional-sample delays are
    /// exact.
    pub fn gen_delayed_chirp(
        &self,
        k: usize,
        eps: f64,
        current: Direction,
        previous: Direction,
    ) -> Result<Signal> {
        self.check_user(k)?;
        self.check_delay(eps)?;
        let dt = self.sample_interval();
        let samples = (0..self.samples_per_symbol())
            .map(|i| {
                let t = i as f64 * dt;
                let ph = if t >= eps {
                    self.phase_at(k, t - eps, current)
                } else {
                    self.phase_at(k, t - eps + self.symbol_duration, previous)
                };
                Complex64::from_polar(1.0, ph)
            })
            .collect();
        Signal::new(samples, dt)
    }

    fn check_delay(&self, eps: f64) -> Result<()> {
        if !eps.is_finite() || eps < 0.0 || eps >= self.symbol_duration {
            return Err(Error::OutOfWindow {
                what: "delay",
                value: eps,
                lo: 0.0,
                hi: self.symbol_duration,
            });
        }
        Ok(())
    }

    /// Accumulate `gain * delayed chirp of user k` into `out`, without
    /// allocating. `out` must be one symbol long.
    pub(crate) fn accumulate_delayed(
        &self,
        k: usize,
        eps: f64,
        current: Direction,
        previous: Direction,
        gain: Complex64,
        out: &mut [Complex64],
    ) {
        debug_assert_eq!(out.len(), self.samples_per_symbol());
        let dt = self.sample_interval();
        let tt = self.symbol_duration;
        for (i, o) in out.iter_mut().enumerate() {
            let t = i as f64 * dt;
            let ph = if t >= eps {
                self.phase_at(k, t - eps, current)
            } else {
                self.phase_at(k, t - eps + tt, previous)
            };
            *o += gain * Complex64::from_polar(1.0, ph);
        }
    }

    /// Instantaneous frequency of user `m` at time `t` in [0, T).
    ///
    /// Linear: (N/T^2) t + m/T. Quartic: adds (N/(2 T^2)) Psi_m'(t).
    pub fn instantaneous_frequency(&self, m: usize, t: f64) -> Result<f64> {
        self.check_user(m)?;
        if !t.is_finite() || t < 0.0 || t >= self.symbol_duration {
            return Err(Error::OutOfWindow {
                what: "time",
                value: t,
                lo: 0.0,
                hi: self.symbol_duration,
            });
        }
        let n = self.n_signals as f64;
        let tt = self.symbol_duration;
        let linear = n / (tt * tt) * t + m as f64 / tt;
        // Psi_m'(t) = psi_weight * T * q'(t/T)
        let psi_deriv = self.psi_weight(m) * tt * quartic_shape_deriv(t / tt);
        Ok(linear + n / (2.0 * tt * tt) * psi_deriv)
    }

    /// Instantaneous frequency sampled on a uniform grid of `n_points` over
    /// [0, T).
    pub fn tf_trace(&self, m: usize, n_points: usize) -> Result<TfTrace> {
        self.check_user(m)?;
        if n_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "trace needs at least 2 points, got {n_points}"
            )));
        }
        let step = self.symbol_duration / n_points as f64;
        let points = (0..n_points)
            .map(|i| {
                let t = i as f64 * step;
                let f = self
                    .instantaneous_frequency(m, t)
                    .expect("grid time within window");
                (t, f)
            })
            .collect();
        Ok(TfTrace { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_envelope_error(sig: &Signal) -> f64 {
        sig.samples()
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn sample_at_origin_is_pi_over_4() {
        // m = 0, t = 0: quadratic and quartic terms vanish.
        let set = ChirpSet::linear(10, 1.0).unwrap();
        let sig = set.gen_chirp(0, Direction::Up).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((sig.samples()[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn phase_at_origin_matches_closed_form_for_m3() {
        // Independently evaluated: pi/4 + pi*N*(m/N)^2 = pi/4 + 0.9*pi for N=10, m=3.
        let set = ChirpSet::linear(10, 1.0).unwrap();
        let sig = set.gen_chirp(3, Direction::Up).unwrap();
        let want = std::f64::consts::FRAC_PI_4 + 0.9 * std::f64::consts::PI;
        let got = sig.samples()[0].arg();
        // compare modulo 2*pi
        let diff = (got - want).rem_euclid(2.0 * std::f64::consts::PI);
        let diff = diff.min(2.0 * std::f64::consts::PI - diff);
        assert!(diff < 1e-12, "phase diff {diff}");
    }

    #[test]
    fn constant_envelope_both_families() {
        for set in [
            ChirpSet::linear(10, 1.0).unwrap(),
            ChirpSet::quartic(10, 1.0).unwrap(),
        ] {
            for m in 0..set.n_signals() {
                for dir in [Direction::Up, Direction::Down] {
                    let sig = set.gen_chirp(m, dir).unwrap();
                    assert!(max_envelope_error(&sig) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn user_index_out_of_range_is_error() {
        let set = ChirpSet::linear(4, 1.0).unwrap();
        assert!(matches!(
            set.gen_chirp(4, Direction::Up),
            Err(Error::UserIndex { index: 4, .. })
        ));
        assert!(set.instantaneous_frequency(7, 0.1).is_err());
    }

    #[test]
    fn delay_out_of_window_is_error() {
        let set = ChirpSet::linear(4, 1.0).unwrap();
        assert!(set
            .gen_delayed_chirp(0, 1.0, Direction::Up, Direction::Up)
            .is_err());
        assert!(set
            .gen_delayed_chirp(0, -0.1, Direction::Up, Direction::Up)
            .is_err());
    }

    #[test]
    fn zero_delay_equals_gen_chirp() {
        for set in [
            ChirpSet::linear(10, 1.0).unwrap(),
            ChirpSet::quartic(10, 1.0).unwrap(),
        ] {
            let a = set.gen_chirp(3, Direction::Up).unwrap();
            let b = set
                .gen_delayed_chirp(3, 0.0, Direction::Up, Direction::Down)
                .unwrap();
            for (x, y) in a.samples().iter().zip(b.samples()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn delayed_chirp_keeps_unit_envelope() {
        let set = ChirpSet::quartic(10, 1.0).unwrap();
        let sig = set
            .gen_delayed_chirp(4, 0.237, Direction::Up, Direction::Down)
            .unwrap();
        assert!(max_envelope_error(&sig) < 1e-12);
    }

    #[test]
    fn instantaneous_frequency_linear_endpoints() {
        let set = ChirpSet::linear(10, 1.0).unwrap();
        assert_eq!(set.instantaneous_frequency(0, 0.0).unwrap(), 0.0);
        // t -> T: (N/T^2) t + m/T
        let t = 1.0 - 1e-9;
        let f0 = set.instantaneous_frequency(0, t).unwrap();
        let f9 = set.instantaneous_frequency(9, t).unwrap();
        assert!((f0 - 10.0).abs() < 1e-6);
        assert!((f9 - 19.0).abs() < 1e-6);
    }

    #[test]
    fn quartic_zero_gain_matches_linear() {
        let lin = ChirpSet::linear(10, 1.0).unwrap();
        let qua = ChirpSet::new(10, 1.0, 4, ChirpFamily::Quartic, 0.0).unwrap();
        for m in [0, 3, 9] {
            for t in [0.0, 0.25, 0.5, 0.9] {
                assert_eq!(
                    lin.instantaneous_frequency(m, t).unwrap(),
                    qua.instantaneous_frequency(m, t).unwrap()
                );
            }
            let a = lin.gen_chirp(m, Direction::Up).unwrap();
            let b = qua.gen_chirp(m, Direction::Up).unwrap();
            assert_eq!(a.samples(), b.samples());
        }
    }

    #[test]
    fn gamma_continuity_near_zero() {
        // Sample-wise convergence to the linear set as gamma -> 0. The phase
        // perturbation is bounded by pi*N*gamma*max|q| = 4.5*pi*N*gamma, so
        // the sample difference must shrink linearly with gamma.
        let lin = ChirpSet::linear(10, 1.0).unwrap();
        for gamma in [1e-6, 1e-8] {
            let qua = ChirpSet::new(10, 1.0, 4, ChirpFamily::Quartic, gamma).unwrap();
            let mut worst = 0.0f64;
            for m in 0..10 {
                let a = lin.gen_chirp(m, Direction::Up).unwrap();
                let b = qua.gen_chirp(m, Direction::Up).unwrap();
                for (x, y) in a.samples().iter().zip(b.samples()) {
                    worst = worst.max((x - y).norm());
                }
            }
            let bound = 4.5 * std::f64::consts::PI * 10.0 * gamma;
            assert!(worst <= bound * 1.01, "gamma {gamma}: worst {worst} > {bound}");
        }
    }

    #[test]
    fn linear_trace_is_affine() {
        let set = ChirpSet::linear(10, 1.0).unwrap();
        let trace = set.tf_trace(4, 64).unwrap();
        let pts = trace.points();
        let d0 = pts[1].1 - pts[0].1;
        for w in pts.windows(2) {
            let d = w[1].1 - w[0].1;
            assert!((d - d0).abs() / d0.abs() < 1e-9);
        }
    }

    #[test]
    fn quartic_trace_deviates_mid_symbol() {
        // Psi_m'(T/2) != 0 for users with nonzero curvature weight, so the
        // quartic trace separates from the affine one at mid-symbol.
        let lin = ChirpSet::linear(10, 1.0).unwrap();
        let qua = ChirpSet::quartic(10, 1.0).unwrap();
        for m in 0..10 {
            let dev = (qua.instantaneous_frequency(m, 0.5).unwrap()
                - lin.instantaneous_frequency(m, 0.5).unwrap())
            .abs();
            assert!(dev > 0.0, "user {m} trace does not deviate at T/2");
        }
        // And the band edges still match the linear grid exactly.
        for m in 0..10 {
            assert!(
                (qua.instantaneous_frequency(m, 0.0).unwrap()
                    - lin.instantaneous_frequency(m, 0.0).unwrap())
                .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn trace_times_strictly_increasing_within_window() {
        let set = ChirpSet::quartic(7, 2e-5).unwrap();
        let trace = set.tf_trace(2, 33).unwrap();
        let pts = trace.points();
        assert!(pts.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(pts.iter().all(|p| p.0 >= 0.0 && p.0 < 2e-5));
    }

    #[test]
    fn frequency_containment_default_gamma() {
        // With the default gamma the whole quartic set stays inside
        // [-0.05 B, 1.05 B].
        let set = ChirpSet::quartic(10, 1.0).unwrap();
        let b = set.bandwidth();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for m in 0..set.n_signals() {
            for i in 0..2000 {
                let t = i as f64 / 2000.0;
                let f = set.instantaneous_frequency(m, t).unwrap();
                lo = lo.min(f);
                hi = hi.max(f);
            }
        }
        assert!(lo >= -0.05 * b, "min frequency {lo} below -0.05 B");
        assert!(hi <= 1.05 * b, "max frequency {hi} above 1.05 B");
    }

    #[test]
    fn up_down_phase_sum_is_pi_over_2_for_m0_linear() {
        let set = ChirpSet::linear(10, 1.0).unwrap();
        let up = set.gen_chirp(0, Direction::Up).unwrap();
        let dn = set.gen_chirp(0, Direction::Down).unwrap();
        for (u, d) in up.samples().iter().zip(dn.samples()) {
            let sum = u.arg() + d.arg();
            let diff = (sum - std::f64::consts::FRAC_PI_2).rem_euclid(2.0 * std::f64::consts::PI);
            let diff = diff.min(2.0 * std::f64::consts::PI - diff);
            assert!(diff < 1e-9);
        }
    }

    #[test]
    fn curvature_weights_are_antisymmetric_and_bounded() {
        for n in [1usize, 2, 3, 4, 7, 10, 16] {
            let w = curvature_weights(n);
            for i in 0..n {
                assert!((w[i] + w[n - 1 - i]).abs() < 1e-15);
                assert!(w[i].abs() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn signal_energy_of_unit_envelope_is_duration() {
        let set = ChirpSet::linear(10, 1.0).unwrap();
        let sig = set.gen_chirp(5, Direction::Down).unwrap();
        assert!((sig.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn signal_constructor_rejects_bad_input() {
        assert!(Signal::new(vec![], 0.1).is_err());
        assert!(Signal::new(vec![Complex64::new(1.0, 0.0)], 0.0).is_err());
        assert!(Signal::new(vec![Complex64::new(1.0, 0.0)], f64::NAN).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn envelope_is_unit_for_random_params(
            n in 2usize..12,
            m_frac in 0.0f64..1.0,
            eps_frac in 0.0f64..0.999,
            quartic in proptest::bool::ANY,
        ) {
            let t = 1e-5;
            let set = if quartic {
                ChirpSet::quartic(n, t).unwrap()
            } else {
                ChirpSet::linear(n, t).unwrap()
            };
            let m = ((m_frac * n as f64) as usize).min(n - 1);
            let sig = set
                .gen_delayed_chirp(m, eps_frac * t, Direction::Down, Direction::Up)
                .unwrap();
            prop_assert!(max_envelope_error(&sig) < 1e-12);
        }

        #[test]
        fn delayed_matches_shifted_closed_form(
            eps_frac in 0.0f64..0.999,
            m in 0usize..10,
        ) {
            // The delayed waveform's current-symbol segment must equal the
            // undelayed waveform evaluated at (t - eps), exactly.
            let set = ChirpSet::quartic(10, 1.0).unwrap();
            let eps = eps_frac * set.symbol_duration();
            let sig = set.gen_delayed_chirp(m, eps, Direction::Up, Direction::Up).unwrap();
            let dt = set.sample_interval();
            for (i, s) in sig.samples().iter().enumerate() {
                let t = i as f64 * dt;
                if t >= eps {
                    let want = Complex64::from_polar(1.0, set.phase_at(m, t - eps, Direction::Up));
                    prop_assert!((s - want).norm() < 1e-12);
                }
            }
        }
    }
}
