//! Realize the air-ground channel and inspect its power delay profile.
//!
//! Shows per-symbol tap activity (the intermittent rays switching on and
//! off), the time-averaged PDP, and the RMS delay spreads of the mean and
//! worst-case profiles.
//!
//! Run with: cargo run --example channel_pdp

use chirpsim::channel::{ag_realization, delay_spread, TapProfileSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let profile = TapProfileSet::hilly_suburban_mean();
    let real = ag_realization(&profile, 12.0, 40, &mut rng).unwrap();

    println!("=== {} ===", real.profile_name());
    println!("tap delays (us): {:?}", real
        .tap_delays_s()
        .iter()
        .map(|d| d * 1e6)
        .collect::<Vec<_>>());

    println!("\nper-symbol tap activity (.=off, #=on), taps 3..6 are intermittent:");
    for ti in 0..real.tap_delays_s().len() {
        print!("tap {}: ", ti + 1);
        for sym in 0..40 {
            let on = real.gains(sym)[ti].norm_sqr() > 0.0;
            print!("{}", if on { '#' } else { '.' });
        }
        println!();
    }

    let long = ag_realization(&profile, 12.0, 20_000, &mut rng).unwrap();
    println!("\ntime-averaged PDP over 20000 symbols:");
    println!("{:>12} {:>12}", "delay (us)", "power (dB)");
    for (d, p) in long.time_averaged_pdp() {
        println!("{:>12.2} {:>12.2}", d * 1e6, 10.0 * p.log10());
    }

    let worst = ag_realization(
        &TapProfileSet::hilly_suburban_worst(),
        12.0,
        20_000,
        &mut rng,
    )
    .unwrap();
    println!(
        "\nRMS delay spread: mean profile {:.1} ns, worst profile {:.1} ns",
        delay_spread(&long).unwrap() * 1e9,
        delay_spread(&worst).unwrap() * 1e9
    );
}
