//! Proximity-layer geometry: along/lateral decomposition, the lateral
//! scaling factor, and the TTC speed, on straight and curved paths.
//!
//! ```bash
//! cargo run -p speedctl --example proximity_speed
//! ```

use speedctl::fusion::PedestrianDetection3D;
use speedctl::proximity::{
    effective_range, path_relative, proximity_speed, PathModel, ProximityParams, SpeedLaw,
};
use speedctl::types::{Point3, VehicleState};

fn detection(x: f64, y: f64) -> PedestrianDetection3D {
    let position = Point3::new(x, y, 0.85);
    PedestrianDetection3D { position, range_m: position.norm(), source_bbox: 0, points: vec![position] }
}

fn main() {
    let straight = VehicleState { speed_kph: 15.0, wheel_angle_rad: 0.0, wheelbase_m: 2.5 };
    let params = ProximityParams::default(); // factor 3, ttc 3 s, 15 m horizon

    println!("straight path, scaling factor {}:", params.lateral_scaling_factor);
    for (x, y) in [(6.0, 0.0), (6.0, 1.0), (0.5, 3.0), (4.0, 2.0)] {
        let rel = path_relative(Point3::new(x, y, 0.85), &straight).unwrap();
        let eff = effective_range(&rel, &params);
        let speed = proximity_speed(&[detection(x, y)], &straight, &params);
        println!(
            "  pedestrian at ({x:4.1}, {y:4.1}): along {:4.1} m, lateral {:4.1} m -> effective {:4.1} m -> {}",
            rel.along_m,
            rel.lateral_m,
            eff,
            speed.map(|v| format!("{v:.1} KPH")).unwrap_or_else(|| "undefined".into()),
        );
    }

    // Steering left: the path curves and so does the geometry.
    let turning = VehicleState { speed_kph: 15.0, wheel_angle_rad: (0.1f64 * 2.5).atan(), wheelbase_m: 2.5 };
    println!("\nwheel angle {:.3} rad -> {:?}", turning.wheel_angle_rad, PathModel::from_vehicle(&turning));
    for (x, y) in [(5.0, 1.2), (5.0, -1.2)] {
        match path_relative(Point3::new(x, y, 0.85), &turning) {
            Ok(rel) => println!(
                "  pedestrian at ({x:4.1}, {y:4.1}): along {:4.2} m, lateral {:4.2} m (arc)",
                rel.along_m, rel.lateral_m
            ),
            Err(e) => println!("  pedestrian at ({x:4.1}, {y:4.1}): {e}"),
        }
    }

    // The nearest effective range governs; more people never raise the speed.
    let group = vec![detection(9.0, 0.0), detection(6.0, 0.0), detection(4.0, 3.0)];
    println!(
        "\ngroup of {}: {:.1} KPH (nearest effective range governs)",
        group.len(),
        proximity_speed(&group, &straight, &params).unwrap()
    );

    // Alternative speed law: constant-deceleration stopping distance.
    let braking = ProximityParams { speed_law: SpeedLaw::Braking, decel_mps2: 2.0, ..params };
    println!(
        "same group under the braking law: {:.1} KPH",
        proximity_speed(&group, &straight, &braking).unwrap()
    );

    // Nobody ahead: the layer is undefined, not zero.
    println!(
        "no detections: {:?}",
        proximity_speed(&[], &straight, &params)
    );
}
