//! Cross-correlation of delayed chirp waveforms.
//!
//! Correlations are evaluated numerically from the analytic waveforms; there
//! is no closed form for the quartic family. The headline quantity is the
//! normalized average absolute cross-correlation versus timing offset over a
//! fully loaded, equal-power set: at zero offset the linear set is orthogonal,
//! while certain offsets make one user's delayed chirp overlay another's
//! trace and drive the pair correlation close to 1.

use num_complex::Complex64;

use crate::waveform::{ChirpFamily, ChirpSet, Direction, Signal};
use crate::{Error, Result};

/// Discrete correlation kernel: sum a[i] * conj(b[i]) * dt.
pub fn inner_product(a: &Signal, b: &Signal) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::SignalMismatch(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.sample_interval() != b.sample_interval() {
        return Err(Error::SignalMismatch(format!(
            "sample interval mismatch: {} vs {}",
            a.sample_interval(),
            b.sample_interval()
        )));
    }
    Ok(inner_product_slices(
        a.samples(),
        b.samples(),
        a.sample_interval(),
    ))
}

pub(crate) fn inner_product_slices(a: &[Complex64], b: &[Complex64], dt: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x * y.conj();
    }
    acc * dt
}

/// |<delayed user n, user m>| / T, both waveforms up-chirps, the interferer
/// straddling with an up-chirp in both segments. Normalized to [0, 1].
pub fn pair_crosscorr(set: &ChirpSet, m: usize, n: usize, eps: f64) -> Result<f64> {
    // eps = T is allowed here (it wraps to a whole-symbol shift).
    let t_sym = set.symbol_duration();
    if !eps.is_finite() || eps < 0.0 || eps > t_sym {
        return Err(Error::OutOfWindow {
            what: "delay",
            value: eps,
            lo: 0.0,
            hi: t_sym,
        });
    }
    let eps = if eps == t_sym { 0.0 } else { eps };
    let delayed = set.gen_delayed_chirp(n, eps, Direction::Up, Direction::Up)?;
    let reference = set.gen_chirp(m, Direction::Up)?;
    let ip = inner_product(&delayed, &reference)?;
    Ok(ip.norm() / t_sym)
}

/// Normalized average absolute cross-correlation versus delay.
#[derive(Debug, Clone)]
pub struct CorrCurve {
    delays: Vec<f64>,
    values: Vec<f64>,
    family: ChirpFamily,
    n_signals: usize,
    loading: usize,
}

impl CorrCurve {
    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn family(&self) -> ChirpFamily {
        self.family
    }

    pub fn n_signals(&self) -> usize {
        self.n_signals
    }

    pub fn loading(&self) -> usize {
        self.loading
    }
}

/// Uniform delay grid over [0, T/2]; correlation curves are symmetric about
/// T/2 so only this half is usually evaluated.
pub fn default_delay_grid(set: &ChirpSet, n_points: usize) -> Vec<f64> {
    let half = set.symbol_duration() / 2.0;
    (0..n_points)
        .map(|i| i as f64 * half / (n_points - 1) as f64)
        .collect()
}

/// Load-averaged cross-correlation versus delay, equal received powers, the
/// same offset applied to every interferer.
///
/// Fully loaded (`loading == N`) averages |rho| over all N(N-1) ordered
/// (victim, interferer) pairs. For `loading = K < N` the value is the exact
/// expectation, over uniformly random K-user subsets, of the per-victim
/// aggregate interference normalized by the fully loaded interferer count:
/// (K-1)/(N-1) times the full pair mean. Aggregate interference therefore
/// shrinks monotonically as users are removed.
pub fn average_crosscorr_vs_delay(
    set: &ChirpSet,
    delays: &[f64],
    loading: usize,
) -> Result<CorrCurve> {
    if delays.is_empty() {
        return Err(Error::InvalidConfig("empty delay grid".into()));
    }
    let n = set.n_signals();
    if loading == 0 || loading > n {
        return Err(Error::InvalidConfig(format!(
            "loading must be in 1..={n}, got {loading}"
        )));
    }
    let t_sym = set.symbol_duration();
    for &eps in delays {
        if !eps.is_finite() || eps < 0.0 || eps > t_sym {
            return Err(Error::OutOfWindow {
                what: "delay",
                value: eps,
                lo: 0.0,
                hi: t_sym,
            });
        }
    }

    let load_factor = if n == 1 {
        0.0
    } else {
        (loading - 1) as f64 / (n - 1) as f64
    };

    // References are delay-independent; generate once.
    let refs: Vec<Signal> = (0..n)
        .map(|m| set.gen_chirp(m, Direction::Up))
        .collect::<Result<_>>()?;

    let values: Vec<f64> = delays
        .iter()
        .map(|&eps| {
            let eps = if eps == t_sym { 0.0 } else { eps };
            let mut sum = 0.0;
            for interferer in 0..n {
                let delayed = set.gen_delayed_chirp(interferer, eps, Direction::Up, Direction::Up)?;
                for (victim, reference) in refs.iter().enumerate() {
                    if victim != interferer {
                        sum += inner_product(&delayed, reference)?.norm() / t_sym;
                    }
                }
            }
            let pair_mean = if n > 1 {
                sum / (n * (n - 1)) as f64
            } else {
                0.0
            };
            Ok(pair_mean * load_factor)
        })
        .collect::<Result<_>>()?;

    Ok(CorrCurve {
        delays: delays.to_vec(),
        values,
        family: set.family(),
        n_signals: n,
        loading,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn linear_set() -> ChirpSet {
        ChirpSet::linear(10, 1.0).unwrap()
    }

    #[test]
    fn self_inner_product_is_duration() {
        let set = linear_set();
        let s = set.gen_chirp(2, Direction::Up).unwrap();
        let v = inner_product(&s, &s).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn distinct_linear_chirps_orthogonal_at_zero_offset() {
        let set = linear_set();
        let a = set.gen_chirp(0, Direction::Up).unwrap();
        let b = set.gen_chirp(1, Direction::Up).unwrap();
        let v = inner_product(&a, &b).unwrap().norm();
        assert!(v < 1e-3, "|<s0,s1>| = {v}");
    }

    #[test]
    fn inner_product_is_bilinear_in_first_argument() {
        let set = linear_set();
        let a = set.gen_chirp(0, Direction::Up).unwrap();
        let b = set.gen_chirp(1, Direction::Up).unwrap();
        let scaled = Signal::new(
            a.samples().iter().map(|s| 2.0 * s).collect(),
            a.sample_interval(),
        )
        .unwrap();
        let v1 = inner_product(&a, &b).unwrap();
        let v2 = inner_product(&scaled, &b).unwrap();
        assert!((v2 - 2.0 * v1).norm() < 1e-12);
    }

    #[test]
    fn inner_product_rejects_mismatched_signals() {
        let set = linear_set();
        let a = set.gen_chirp(0, Direction::Up).unwrap();
        let short = Signal::new(a.samples()[..10].to_vec(), a.sample_interval()).unwrap();
        assert!(inner_product(&a, &short).is_err());
        let other_dt = Signal::new(a.samples().to_vec(), a.sample_interval() * 2.0).unwrap();
        assert!(inner_product(&a, &other_dt).is_err());
    }

    #[test]
    fn autocorrelation_at_zero_lag_is_one() {
        let set = linear_set();
        let v = pair_crosscorr(&set, 4, 4, 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn adjacent_user_overlap_at_one_slot_delay() {
        // Delaying user 1 by T/10 overlays user 0's trace over the overlap
        // region; the straddle tail sums to exactly zero here, so the value
        // is (T - eps)/T = 0.9.
        let set = linear_set();
        let v = pair_crosscorr(&set, 0, 1, 0.1).unwrap();
        assert!((v - 0.9).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn delayed_self_correlation_matches_dense_oracle() {
        // |rho(0, 0, T/10)|: frozen from dense numerical integration of the
        // two closed-form segments (0.10929 in the continuum); the OSF=4
        // kernel sits within the discretization error of that value.
        let set = linear_set();
        let v = pair_crosscorr(&set, 0, 0, 0.1).unwrap();
        assert!((v - 0.1092924).abs() < 1e-3, "got {v}");
        assert!((v - 0.1087829365).abs() < 1e-9, "OSF=4 value drifted: {v}");
    }

    #[test]
    fn crosscorr_in_unit_interval_on_grid() {
        let set = ChirpSet::quartic(10, 1.0).unwrap();
        for m in [0, 3] {
            for n in [1, 7] {
                for eps in [0.0, 0.13, 0.5, 0.97, 1.0] {
                    let v = pair_crosscorr(&set, m, n, eps).unwrap();
                    assert!((-1e-9..=1.0 + 1e-9).contains(&v), "value {v}");
                }
            }
        }
    }

    #[test]
    fn fully_loaded_orthogonal_at_zero_offset() {
        let set = linear_set();
        let curve = average_crosscorr_vs_delay(&set, &[0.0], 10).unwrap();
        assert!(curve.values()[0] < 1e-3);
    }

    #[test]
    fn loading_scales_average_down() {
        let set = linear_set();
        let delays = [0.1, 0.33];
        let full = average_crosscorr_vs_delay(&set, &delays, 10).unwrap();
        let half = average_crosscorr_vs_delay(&set, &delays, 5).unwrap();
        let one = average_crosscorr_vs_delay(&set, &delays, 1).unwrap();
        for i in 0..delays.len() {
            assert!(half.values()[i] <= full.values()[i] + 2e-3);
            let want = full.values()[i] * 4.0 / 9.0;
            assert!((half.values()[i] - want).abs() < 1e-12);
            assert_eq!(one.values()[i], 0.0);
        }
    }

    #[test]
    fn subset_pair_average_matches_load_factor_expectation() {
        // Brute-force oracle: enumerate every 5-user subset, average the
        // per-victim aggregate normalized by (N-1) over subsets, and compare
        // with the closed-form (K-1)/(N-1) scaling the operation uses.
        let set = linear_set();
        let eps = 0.17;
        let n = 10usize;
        let k = 5usize;
        let pair: Vec<Vec<f64>> = (0..n)
            .map(|victim| {
                (0..n)
                    .map(|interferer| {
                        if victim != interferer {
                            pair_crosscorr(&set, victim, interferer, eps).unwrap()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let mut subset_sum = 0.0;
        let mut count = 0usize;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let mut acc = 0.0;
            for &v in &members {
                for &i in &members {
                    if v != i {
                        acc += pair[v][i];
                    }
                }
            }
            subset_sum += acc / (k as f64 * (n - 1) as f64);
            count += 1;
        }
        let oracle = subset_sum / count as f64;
        let curve = average_crosscorr_vs_delay(&set, &[eps], k).unwrap();
        assert!(
            (curve.values()[0] - oracle).abs() < 1e-12,
            "closed form {} vs subset enumeration {}",
            curve.values()[0],
            oracle
        );
    }

    #[test]
    fn symmetry_about_half_symbol_linear() {
        let set = linear_set();
        for frac in [0.1, 0.23, 0.37] {
            let a = average_crosscorr_vs_delay(&set, &[frac], 10).unwrap().values()[0];
            let b = average_crosscorr_vs_delay(&set, &[1.0 - frac], 10)
                .unwrap()
                .values()[0];
            assert!((a - b).abs() < 2e-3, "asymmetry at {frac}: {a} vs {b}");
        }
    }

    #[test]
    fn empty_grid_is_error() {
        let set = linear_set();
        assert!(average_crosscorr_vs_delay(&set, &[], 10).is_err());
    }

    #[test]
    fn scaled_inputs_keep_normalization() {
        // inner_product(2a, b) = 2 inner_product(a, b): amplitude scaling
        // passes straight through the kernel.
        let set = linear_set();
        let a = set.gen_chirp(2, Direction::Up).unwrap();
        let b = set.gen_chirp(5, Direction::Down).unwrap();
        let doubled = Signal::new(
            a.samples().iter().map(|s| s * Complex64::new(2.0, 0.0)).collect(),
            a.sample_interval(),
        )
        .unwrap();
        let v = inner_product(&a, &b).unwrap();
        let v2 = inner_product(&doubled, &b).unwrap();
        assert!((v2 - v * 2.0).norm() < 1e-12);
    }
}
