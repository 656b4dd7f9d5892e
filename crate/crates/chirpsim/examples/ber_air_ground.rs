//! BER over the hilly-suburban air-ground tapped-delay-line channel.
//!
//! T = 10 us and N = 10 put the set at B = 2 MHz. Both delay-spread cases
//! of the shipped profile are swept for both chirp families; the receiver
//! stays a plain correlator bank (no equalization, no rake). The canonical
//! offset spreads for this scenario are sigma = 0.05 T and 0.1 T; this
//! example runs the harsher 0.1 T (pass --sigma-frac to the CLI for the
//! other preset).
//!
//! Run with: cargo run --example ber_air_ground

use chirpsim::channel::{ChannelSpec, TapProfileSet};
use chirpsim::montecarlo::{run_ber, SimConfig, Stopping};
use chirpsim::receiver::DetectorMode;
use chirpsim::waveform::{ChirpFamily, ChirpSet};

fn main() {
    let grid = vec![10.0, 14.0];
    println!("AG hilly suburban TDL, N = K = 10, T = 10 us (B = 2 MHz), sigma = 0.1 T\n");
    println!(
        "{:>8} {:>9} {:>14} {:>14}",
        "family", "Eb/N0", "mean profile", "worst profile"
    );
    for family in [ChirpFamily::Linear, ChirpFamily::Quartic] {
        let mut per_profile = Vec::new();
        for profile in [
            TapProfileSet::hilly_suburban_mean(),
            TapProfileSet::hilly_suburban_worst(),
        ] {
            let set = match family {
                ChirpFamily::Linear => ChirpSet::linear(10, 10e-6).unwrap(),
                ChirpFamily::Quartic => ChirpSet::quartic(10, 10e-6).unwrap(),
            };
            let config = SimConfig {
                set,
                n_active_users: 10,
                offset_sigma_frac: 0.1,
                channel: ChannelSpec::AgTdl {
                    profile,
                    k_db: 12.0,
                },
                mode: DetectorMode::Noncoherent,
                ebn0_grid_db: grid.clone(),
                stopping: Stopping {
                    min_bit_errors: 1_000,
                    max_bits: 200_000,
                },
                seed: 77,
                desired_user: 0,
            };
            per_profile.push(run_ber(&config).unwrap());
        }
        for (i, &ebn0) in grid.iter().enumerate() {
            println!(
                "{:>8} {:>9.1} {:>14.4e} {:>14.4e}",
                match family {
                    ChirpFamily::Linear => "linear",
                    ChirpFamily::Quartic => "quartic",
                },
                ebn0,
                per_profile[0][i].ber,
                per_profile[1][i].ber
            );
        }
    }
    println!("\nthe quartic family keeps its interference advantage through the");
    println!("dispersive channel; the worst-case profile adds a little more");
    println!("self- and multi-user interference through its longer rays");
}
