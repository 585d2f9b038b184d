//! Rebuild a speed profile from a driving log and compare it with the
//! bundled one.
//!
//! ```bash
//! cargo run -p speedctl --example build_profile
//! ```

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use speedctl::context::{ProfileSample, RoadContext, SpeedProfile, DENSITY_BIN_COUNT};
use speedctl::types::RoadType;

fn main() {
    // Synthesize a "human driving" log: slower with more people around,
    // noisy like real odometry. In production these samples come straight
    // from recorded frames (speed + person bbox count + road type).
    let mut rng = StdRng::seed_from_u64(14);
    let mut samples = Vec::new();
    for _ in 0..30_000 {
        let shared = rng.random_range(0..10) < 6;
        let count: usize = if shared { rng.random_range(0..14) } else { rng.random_range(0..5) };
        let base = if shared { 15.0 - 0.6 * count as f64 } else { 20.0 - 0.2 * count as f64 };
        samples.push(ProfileSample {
            speed_kph: (base + rng.random_range(-2.5..2.5)).max(0.0),
            pedestrian_count: count,
            road_type: if shared {
                if rng.random_range(0..2) == 0 { RoadType::Shared } else { RoadType::SemiShared }
            } else {
                RoadType::Regular
            },
        });
    }

    let rebuilt = SpeedProfile::build(&samples);
    let bundled = SpeedProfile::builtin();

    println!("{} samples folded into a profile\n", samples.len());
    println!("{:<10} {:>6} {:>14} {:>14} {:>9}", "context", "bin", "rebuilt mean", "bundled mean", "samples");
    for context in RoadContext::ALL {
        for bin in 0..DENSITY_BIN_COUNT {
            let cell = rebuilt.cell(context, bin);
            println!(
                "{:<10} {:>6} {:>14} {:>14} {:>9}",
                format!("{context:?}").to_lowercase(),
                bin,
                cell.mean_kph.map(|m| format!("{m:.2}")).unwrap_or_else(|| "-".into()),
                bundled.cell(context, bin).mean_kph.map(|m| format!("{m:.2}")).unwrap_or_else(|| "-".into()),
                cell.samples,
            );
        }
    }

    // The discretised tallies behind one cell (the data behind a stacked
    // speed histogram).
    println!("\nshared/bin 0 speed tallies (5 KPH bins):");
    for (i, count) in rebuilt.speed_tallies(RoadContext::Shared, 0).iter().enumerate() {
        if *count > 0 {
            println!("  [{:>2}-{:<2}) KPH: {:>5} {}", i * 5, (i + 1) * 5, count, "#".repeat((count / 40).max(1) as usize));
        }
    }
}
