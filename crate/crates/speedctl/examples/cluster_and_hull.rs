//! Euclidean clustering and ground-plane hulls on a synthetic cloud.
//!
//! ```bash
//! cargo run -p speedctl --example cluster_and_hull
//! ```

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use speedctl::fusion::{euclidean_cluster, ground_hull, HullParams};
use speedctl::types::Point3;

fn main() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut cloud = Vec::new();

    // Two people, a pole, and scattered noise returns.
    for (cx, cy, n) in [(5.0, 0.5, 45), (6.5, -1.0, 38)] {
        for _ in 0..n {
            cloud.push(Point3::new(
                cx + rng.random_range(-0.25..0.25),
                cy + rng.random_range(-0.25..0.25),
                rng.random_range(0.0..1.7),
            ));
        }
    }
    for i in 0..25 {
        cloud.push(Point3::new(
            9.0 + rng.random_range(-0.05..0.05),
            2.0 + rng.random_range(-0.05..0.05),
            i as f64 * 0.12,
        ));
    }
    for _ in 0..4 {
        cloud.push(Point3::new(rng.random_range(12.0..20.0), rng.random_range(-8.0..8.0), 0.1));
    }

    let clusters = euclidean_cluster(&cloud, 0.5, 5);
    println!("{} points -> {} clusters (noise dropped)\n", cloud.len(), clusters.len());
    for c in &clusters {
        println!(
            "cluster {}: {:3} points, centroid ({:5.2}, {:5.2}, {:4.2}), range {:5.2} m",
            c.id,
            c.points.len(),
            c.centroid.x,
            c.centroid.y,
            c.centroid.z,
            c.range_m
        );
        let convex = ground_hull(&c.points, &HullParams::default()).unwrap();
        let concave = ground_hull(&c.points, &HullParams::concave(8)).unwrap();
        println!("  convex hull {} vertices, concave hull {} vertices", convex.len(), concave.len());
        let outline: Vec<String> = convex.iter().map(|[x, y]| format!("({x:.2},{y:.2})")).collect();
        println!("  outline: {}", outline.join(" "));
    }
}
