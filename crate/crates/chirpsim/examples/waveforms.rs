//! Build a chirp set and inspect its basic waveform properties.
//!
//! Run with: cargo run --example waveforms

use chirpsim::correlation::inner_product;
use chirpsim::waveform::{ChirpSet, Direction};

fn main() {
    let n = 10;
    let t_sym = 10e-6; // 10 us symbol -> B = 2 MHz
    let set = ChirpSet::linear(n, t_sym).unwrap();

    println!("=== Linear chirp set ===");
    println!("users:              {}", set.n_signals());
    println!("symbol duration:    {} us", set.symbol_duration() * 1e6);
    println!("total bandwidth:    {} MHz", set.bandwidth() / 1e6);
    println!("sample rate:        {} MHz", set.sample_rate() / 1e6);
    println!("samples per symbol: {}", set.samples_per_symbol());

    let up = set.gen_chirp(0, Direction::Up).unwrap();
    let worst_env = up
        .samples()
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    println!("\nuser 0 up-chirp: {} samples, energy {:.3e} (T = {:.3e})", up.len(), up.energy(), t_sym);
    println!("constant-envelope error: {worst_env:.2e}");
    println!(
        "first sample: {:.6} + {:.6}j (expected cos/sin of pi/4)",
        up.samples()[0].re,
        up.samples()[0].im
    );

    println!("\nzero-offset orthogonality |<s_m, s_n>|/T:");
    print!("      ");
    for m in 0..4 {
        print!("   m={m}    ");
    }
    println!();
    for a in 0..4 {
        print!("n={a}  ");
        for b in 0..4 {
            let ip = inner_product(
                &set.gen_chirp(b, Direction::Up).unwrap(),
                &set.gen_chirp(a, Direction::Up).unwrap(),
            )
            .unwrap();
            print!(" {:.2e}", ip.norm() / t_sym);
        }
        println!();
    }

    println!("\ndelayed waveform (eps = T/8) stays unit-envelope and exact:");
    let delayed = set
        .gen_delayed_chirp(3, t_sym / 8.0, Direction::Up, Direction::Down)
        .unwrap();
    let worst = delayed
        .samples()
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    println!("envelope error over {} samples: {worst:.2e}", delayed.len());
}
