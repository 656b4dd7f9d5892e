//! Fully loaded quasi-synchronous BER in flat Ricean fading.
//!
//! Ten users, Gaussian timing offsets with sigma = 0.1 T, K = 12 dB,
//! noncoherent detection. Compares the linear and quartic families over
//! both the memoryless and the fast-fading (fd_t = 0.01) channel.
//!
//! Run with: cargo run --example ber_ricean

use chirpsim::channel::ChannelSpec;
use chirpsim::montecarlo::{run_ber, SimConfig, Stopping};
use chirpsim::receiver::DetectorMode;
use chirpsim::waveform::{ChirpFamily, ChirpSet};

fn main() {
    let grid = vec![8.0, 12.0, 16.0];
    let channels = [
        ("memoryless", ChannelSpec::RiceanMemoryless { k_db: 12.0 }),
        (
            "fast fd_t=0.01",
            ChannelSpec::RiceanFast {
                k_db: 12.0,
                fd_t: 0.01,
            },
        ),
    ];

    println!("N = K = 10, sigma = 0.1 T, Ricean K = 12 dB, noncoherent\n");
    for (chan_name, channel) in channels {
        println!("=== {chan_name} ===");
        println!("{:>8} {:>12} {:>12} {:>8}", "Eb/N0", "linear", "quartic", "ratio");
        let mut results = Vec::new();
        for family in [ChirpFamily::Linear, ChirpFamily::Quartic] {
            let set = match family {
                ChirpFamily::Linear => ChirpSet::linear(10, 10e-6).unwrap(),
                ChirpFamily::Quartic => ChirpSet::quartic(10, 10e-6).unwrap(),
            };
            let config = SimConfig {
                set,
                n_active_users: 10,
                offset_sigma_frac: 0.1,
                channel: channel.clone(),
                mode: DetectorMode::Noncoherent,
                ebn0_grid_db: grid.clone(),
                stopping: Stopping {
                    min_bit_errors: 1_000,
                    max_bits: 200_000,
                },
                seed: 2024,
                desired_user: 0,
            };
            results.push(run_ber(&config).unwrap());
        }
        for (l, q) in results[0].iter().zip(&results[1]) {
            println!(
                "{:>8.1} {:>12.4e} {:>12.4e} {:>8.2}",
                l.ebn0_db,
                l.ber,
                q.ber,
                l.ber / q.ber
            );
        }
        println!();
    }
    println!("the quartic set suppresses the trace-overlay interference peaks,");
    println!("so it wins once timing offsets matter; fast fading averages a");
    println!("little of the per-symbol fade depth away");
}
