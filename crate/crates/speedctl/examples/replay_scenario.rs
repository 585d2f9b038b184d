//! The full controller over a synthetic scenario: generate, replay frame by
//! frame, and print the per-layer decisions.
//!
//! ```bash
//! cargo run -p speedctl --example replay_scenario
//! ```

use speedctl::context::SpeedProfile;
use speedctl::controller::{process_scenario, ControllerConfig};
use speedctl::fusion::{FusionParams, RangeHeightModel};
use speedctl::proximity::ProximityParams;
use speedctl::scenario::{evaluate, generate_scenario, truth_range_height_samples, GenSpec, Keyframe, PedestrianTrack, RandomPedestrians};
use speedctl::types::RoadType;

fn main() {
    // A shared space: one person crossing toward the path, background
    // crowd density varying frame to frame, driver easing from 14 to 9 KPH.
    let spec = GenSpec {
        duration_s: 6.0,
        frame_rate_hz: 5.0,
        road_type: RoadType::Shared,
        legal_kph: 40.0,
        seed: 99,
        camera: None,
        speed_script: vec![Keyframe { t: 0.0, value: 14.0 }, Keyframe { t: 3.0, value: 9.0 }],
        wheel_angle_script: Vec::new(),
        wheelbase_m: 2.5,
        pedestrians: vec![PedestrianTrack { start: [12.0, 4.0], velocity: [-0.8, -0.5] }],
        random_pedestrians: Some(RandomPedestrians {
            min_count: 0,
            max_count: 7,
            x_range: [5.0, 25.0],
            y_range: [-8.0, 8.0],
        }),
        obstacles: Vec::new(),
        point_jitter_sigma_m: 0.01,
        bbox_jitter_sigma_px: 1.0,
    };
    let scenario = generate_scenario(&spec);
    let model = RangeHeightModel::fit(&truth_range_height_samples(&scenario)).unwrap();
    let config = ControllerConfig::for_scenario(
        &scenario,
        SpeedProfile::builtin(),
        model,
        FusionParams::default(),
        ProximityParams::default(),
    );

    let decisions = process_scenario(&scenario, &config);
    println!("{:>5} {:>6} {:>8} {:>10} {:>7} {:>5} {:>5} {:>7}", "t", "legal", "context", "proximity", "final", "n2d", "n3d", "driver");
    for d in &decisions {
        println!(
            "{:5.1} {:6.1} {:8.1} {:>10} {:7.1} {:5} {:5} {:7.1}",
            d.timestamp_s,
            d.layers.legal_kph,
            d.layers.context_kph,
            d.layers.proximity_kph.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into()),
            d.final_kph,
            d.n_2d,
            d.n_3d,
            d.driver_kph.unwrap_or(f64::NAN),
        );
    }

    let report = evaluate(&decisions, &scenario).unwrap();
    println!("\n{}", report.summary_text());
}
