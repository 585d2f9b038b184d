//! 2D/3D fusion on one synthetic frame: cluster the cloud, project it, and
//! validate clusters against `person` bounding boxes.
//!
//! ```bash
//! cargo run -p speedctl --example detect_pedestrians
//! ```

use speedctl::fusion::{detect_pedestrians_3d, FusionParams, RangeHeightModel};
use speedctl::scenario::{generate_scenario, truth_range_height_samples, GenSpec, Keyframe, ObstacleSpec, PedestrianTrack};
use speedctl::types::RoadType;

fn main() {
    // Two pedestrians plus a lamppost; the post clusters like anything else
    // but no bbox validates it.
    let spec = GenSpec {
        duration_s: 0.3,
        frame_rate_hz: 10.0,
        road_type: RoadType::Shared,
        legal_kph: 40.0,
        seed: 21,
        camera: None,
        speed_script: vec![Keyframe { t: 0.0, value: 10.0 }],
        wheel_angle_script: Vec::new(),
        wheelbase_m: 2.5,
        pedestrians: vec![
            PedestrianTrack { start: [6.0, 0.5], velocity: [0.0, 0.0] },
            PedestrianTrack { start: [6.0, 2.6], velocity: [0.0, 0.0] },
            PedestrianTrack { start: [9.0, -2.0], velocity: [0.0, 0.0] },
            PedestrianTrack { start: [9.0, -4.3], velocity: [0.0, 0.0] },
        ],
        random_pedestrians: None,
        obstacles: vec![ObstacleSpec { position: [8.0, 3.0], radius_m: 0.06, height_m: 3.5 }],
        point_jitter_sigma_m: 0.005,
        bbox_jitter_sigma_px: 0.0,
    };
    let scenario = generate_scenario(&spec);
    let frame = &scenario.frames[0];

    // Height-vs-range sanity model fitted from the scenario's own ground
    // truth; real systems fit it from matched detections.
    let model = RangeHeightModel::fit(&truth_range_height_samples(&scenario)).unwrap();
    println!(
        "sanity model: height = {:.1}/range {}{:.1} px (residual std {:.2})",
        model.slope,
        if model.intercept < 0.0 { "- " } else { "+ " },
        model.intercept.abs(),
        model.residual_std
    );

    println!(
        "\nframe: {} points, {} bboxes ({} of them person)",
        frame.points.len(),
        frame.bboxes.len(),
        frame.person_count()
    );

    let detections = detect_pedestrians_3d(frame, &scenario.header.camera, &model, &FusionParams::default());
    println!("\n{} pedestrians detected in 3D:", detections.len());
    for d in &detections {
        println!(
            "  bbox {} -> position ({:5.2}, {:5.2}, {:4.2}), range {:5.2} m, {} validated points",
            d.source_bbox,
            d.position.x,
            d.position.y,
            d.position.z,
            d.range_m,
            d.points.len()
        );
    }
    for truth in scenario.truth_for_frame(0) {
        println!(
            "  truth ped {} at ({:5.2}, {:5.2}, {:4.2})",
            truth.pedestrian, truth.position.x, truth.position.y, truth.position.z
        );
    }
}
