//! Single-user AWGN calibration against the binary-orthogonal closed forms.
//!
//! Coherent detection follows Q(sqrt(Eb/N0)); noncoherent envelope detection
//! follows 0.5 exp(-Eb/(2 N0)). The desired user is a mid-set index whose
//! up/down crosstalk is negligible, so the orthogonal-alphabet formulas
//! apply.
//!
//! Run with: cargo run --example ber_awgn

use chirpsim::montecarlo::{run_ber, SimConfig, Stopping};
use chirpsim::receiver::DetectorMode;
use chirpsim::waveform::ChirpSet;

fn q_function(x: f64) -> f64 {
    // Abramowitz & Stegun 7.1.26 erfc approximation
    let t = 1.0 / (1.0 + 0.3275911 * x / std::f64::consts::SQRT_2);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    0.5 * poly * (-x * x / 2.0).exp()
}

fn main() {
    let grid: Vec<f64> = vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0];
    for mode in [DetectorMode::Coherent, DetectorMode::Noncoherent] {
        let config = SimConfig {
            desired_user: 5,
            stopping: Stopping {
                min_bit_errors: 200,
                max_bits: 2_000_000,
            },
            ..SimConfig::awgn_single_user(
                ChirpSet::linear(10, 10e-6).unwrap(),
                mode,
                grid.clone(),
                42,
            )
        };
        let points = run_ber(&config).unwrap();

        println!("=== {} detection ===", mode.as_str());
        println!(
            "{:>8} {:>12} {:>12} {:>10} {:>12}",
            "Eb/N0", "measured", "theory", "errors", "ci95"
        );
        for p in &points {
            let g = 10f64.powf(p.ebn0_db / 10.0);
            let theory = match mode {
                DetectorMode::Coherent => q_function(g.sqrt()),
                DetectorMode::Noncoherent => 0.5 * (-g / 2.0).exp(),
            };
            println!(
                "{:>8.1} {:>12.4e} {:>12.4e} {:>10} {:>12.2e}",
                p.ebn0_db, p.ber, theory, p.bit_errors, p.wilson_95_halfwidth
            );
        }
        println!();
    }
}
