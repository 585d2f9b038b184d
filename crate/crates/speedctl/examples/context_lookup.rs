//! Context-layer queries against the bundled speed profile.
//!
//! ```bash
//! cargo run -p speedctl --example context_lookup
//! ```

use speedctl::context::{density_bin, SpeedProfile};
use speedctl::types::RoadType;

fn main() {
    let profile = SpeedProfile::builtin();

    println!("pedestrians visible -> context speed (KPH)\n");
    println!("{:>11} {:>8} {:>12} {:>12}", "pedestrians", "bin", "shared", "regular");
    for count in [0, 1, 2, 3, 5, 6, 8, 9, 15, 40] {
        let bin = density_bin(count);
        let label = match bin.upper {
            Some(u) => format!("{}-{}", bin.lower, u),
            None => format!("{}+", bin.lower),
        };
        println!(
            "{:>11} {:>8} {:>12.1} {:>12.1}",
            count,
            label,
            profile.context_speed(RoadType::Shared, count).unwrap(),
            profile.context_speed(RoadType::Regular, count).unwrap(),
        );
    }

    // Semi-shared roads read the shared column.
    println!(
        "\nsemi-shared at 7 visible: {:.1} KPH (same as shared: {:.1})",
        profile.context_speed(RoadType::SemiShared, 7).unwrap(),
        profile.context_speed(RoadType::Shared, 7).unwrap(),
    );
}
