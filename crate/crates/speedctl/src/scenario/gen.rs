//! Deterministic synthetic scenario generation with embedded ground truth.
//!
//! Each synthetic pedestrian contributes a point column filling a
//! 0.5 m x 1.7 m body envelope and, when visible, the bbox the envelope
//! projects to — so the generator's own geometry is the oracle for fusion:
//! every noiseless in-frustum pedestrian is recoverable exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::camera::CameraModel;
use crate::scenario::{GroundTruth, RoadSegment, ScenarioFile, ScenarioHeader};
use crate::types::{BBox2D, ClassLabel, Point3, RoadType, SceneFrame, VehicleState};

/// Pedestrian body envelope: a 0.5 m wide, 1.7 m tall column.
pub const BODY_RADIUS_M: f64 = 0.25;
pub const BODY_HEIGHT_M: f64 = 1.7;

/// A time-keyed value; scripts hold each value until the next keyframe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t: f64,
    pub value: f64,
}

/// A scripted pedestrian moving linearly in the body frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PedestrianTrack {
    /// Ground position (x, y) at t = 0, meters.
    pub start: [f64; 2],
    /// Ground velocity (vx, vy), m/s.
    #[serde(default)]
    pub velocity: [f64; 2],
}

/// Per-frame random pedestrians: a fresh count and fresh positions each
/// frame, for exercising the density layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomPedestrians {
    pub min_count: u32,
    pub max_count: u32,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
}

/// A static non-pedestrian column (pole, post); contributes points but
/// never a bbox.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSpec {
    pub position: [f64; 2],
    #[serde(default = "default_obstacle_radius")]
    pub radius_m: f64,
    #[serde(default = "default_obstacle_height")]
    pub height_m: f64,
}

fn default_obstacle_radius() -> f64 {
    0.06
}

fn default_obstacle_height() -> f64 {
    3.0
}

fn default_legal_kph() -> f64 {
    40.0
}

fn default_wheelbase() -> f64 {
    2.5
}

fn default_speed_kph() -> f64 {
    10.0
}

/// Everything that defines a synthetic scenario. Generation is a pure
/// function of this value (the seed included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub duration_s: f64,
    pub frame_rate_hz: f64,
    pub road_type: RoadType,
    #[serde(default = "default_legal_kph")]
    pub legal_kph: f64,
    #[serde(default)]
    pub seed: u64,
    /// `None` uses a forward-facing 640x480 camera.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraModel>,
    /// Piecewise-constant speed script, KPH; doubles as the reference
    /// driver speed. Empty means a constant 10 KPH.
    #[serde(default)]
    pub speed_script: Vec<Keyframe>,
    /// Piecewise-constant wheel angle script, radians; empty means straight.
    #[serde(default)]
    pub wheel_angle_script: Vec<Keyframe>,
    #[serde(default = "default_wheelbase")]
    pub wheelbase_m: f64,
    #[serde(default)]
    pub pedestrians: Vec<PedestrianTrack>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pedestrians: Option<RandomPedestrians>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleSpec>,
    /// Gaussian noise on each point coordinate, meters.
    #[serde(default)]
    pub point_jitter_sigma_m: f64,
    /// Gaussian noise on each bbox edge, pixels.
    #[serde(default)]
    pub bbox_jitter_sigma_px: f64,
}

impl GenSpec {
    pub fn frame_count(&self) -> usize {
        ((self.duration_s * self.frame_rate_hz).round() as usize).max(1)
    }
}

fn script_value(script: &[Keyframe], t: f64, default: f64) -> f64 {
    let mut value = None;
    for kf in script {
        if kf.t <= t {
            value = Some(kf.value);
        } else {
            break;
        }
    }
    value.or_else(|| script.first().map(|kf| kf.value)).unwrap_or(default)
}

/// One standard-normal draw (Box-Muller over the spec's seeded stream).
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Samples a point column around `(cx, cy)` on the ground. Heights are
/// stratified over the column (a LIDAR sweeps a body in bands, not iid), so
/// the column centroid sits close to the envelope center.
fn sample_column(
    rng: &mut ChaCha8Rng,
    cx: f64,
    cy: f64,
    radius: f64,
    height: f64,
    count: usize,
    jitter_sigma: f64,
) -> Vec<Point3> {
    (0..count)
        .map(|i| {
            let r = radius * rng.random_range(0.0f64..1.0).sqrt();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let z = (i as f64 + rng.random_range(0.0..1.0)) * height / count as f64;
            let mut p = Point3::new(cx + r * phi.cos(), cy + r * phi.sin(), z);
            if jitter_sigma > 0.0 {
                p.x += jitter_sigma * gauss(rng);
                p.y += jitter_sigma * gauss(rng);
                p.z += jitter_sigma * gauss(rng);
            }
            p
        })
        .collect()
}

/// Projects the pedestrian envelope at `(cx, cy)` to its image bbox.
/// `None` when any envelope corner is behind the camera or the box leaves
/// no visible area.
pub fn envelope_bbox(cam: &CameraModel, cx: f64, cy: f64) -> Option<(f64, f64, f64, f64)> {
    let mut u = (f64::INFINITY, f64::NEG_INFINITY);
    let mut v = (f64::INFINITY, f64::NEG_INFINITY);
    for dx in [-BODY_RADIUS_M, BODY_RADIUS_M] {
        for dy in [-BODY_RADIUS_M, BODY_RADIUS_M] {
            for dz in [0.0, BODY_HEIGHT_M] {
                let uv = cam.project_point(&Point3::new(cx + dx, cy + dy, dz))?;
                u = (u.0.min(uv.u), u.1.max(uv.u));
                v = (v.0.min(uv.v), v.1.max(uv.v));
            }
        }
    }
    // Clip to the image; drop boxes that end up degenerate.
    let (w, h) = (cam.image_width as f64, cam.image_height as f64);
    let clipped = (u.0.max(0.0), v.0.max(0.0), u.1.min(w), v.1.min(h));
    (clipped.0 < clipped.2 && clipped.1 < clipped.3).then_some(clipped)
}

/// Whether the whole pedestrian envelope at `(cx, cy)` projects inside the
/// image. Ground truth for recall checks considers only such pedestrians.
pub fn envelope_in_frustum(cam: &CameraModel, cx: f64, cy: f64) -> bool {
    for dx in [-BODY_RADIUS_M, BODY_RADIUS_M] {
        for dy in [-BODY_RADIUS_M, BODY_RADIUS_M] {
            for dz in [0.0, BODY_HEIGHT_M] {
                match cam.project_point(&Point3::new(cx + dx, cy + dy, dz)) {
                    Some(uv) if cam.in_image(&uv) => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Generates the scenario: deterministic under the spec's seed, with the
/// true pedestrian positions recorded in the header.
pub fn generate_scenario(spec: &GenSpec) -> ScenarioFile {
    assert!(spec.duration_s > 0.0, "duration must be positive");
    assert!(spec.frame_rate_hz > 0.0, "frame rate must be positive");

    let camera = spec
        .camera
        .clone()
        .unwrap_or_else(|| CameraModel::forward_facing(500.0, 500.0, 320.0, 240.0, 640, 480).expect("default camera"));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut frames = Vec::new();
    let mut ground_truth = Vec::new();
    for i in 0..spec.frame_count() {
        let t = i as f64 / spec.frame_rate_hz;
        let speed = script_value(&spec.speed_script, t, default_speed_kph());
        let wheel_angle = script_value(&spec.wheel_angle_script, t, 0.0);

        // Pedestrian centers this frame: scripted tracks, then random.
        let mut centers: Vec<(f64, f64)> =
            spec.pedestrians.iter().map(|p| (p.start[0] + p.velocity[0] * t, p.start[1] + p.velocity[1] * t)).collect();
        if let Some(random) = &spec.random_pedestrians {
            let count = rng.random_range(random.min_count..=random.max_count);
            for _ in 0..count {
                centers.push((
                    rng.random_range(random.x_range[0]..=random.x_range[1]),
                    rng.random_range(random.y_range[0]..=random.y_range[1]),
                ));
            }
        }

        let mut points = Vec::new();
        let mut bboxes = Vec::new();
        for (ped_id, &(cx, cy)) in centers.iter().enumerate() {
            let count = rng.random_range(20..=60);
            points.extend(sample_column(
                &mut rng,
                cx,
                cy,
                BODY_RADIUS_M,
                BODY_HEIGHT_M,
                count,
                spec.point_jitter_sigma_m,
            ));
            if let Some((mut u0, mut v0, mut u1, mut v1)) = envelope_bbox(&camera, cx, cy) {
                if spec.bbox_jitter_sigma_px > 0.0 {
                    u0 += spec.bbox_jitter_sigma_px * gauss(&mut rng);
                    v0 += spec.bbox_jitter_sigma_px * gauss(&mut rng);
                    u1 += spec.bbox_jitter_sigma_px * gauss(&mut rng);
                    v1 += spec.bbox_jitter_sigma_px * gauss(&mut rng);
                }
                if u0 < u1 && v0 < v1 {
                    let confidence = rng.random_range(0.7..1.0);
                    bboxes.push(BBox2D::new(u0, v0, u1, v1, ClassLabel::Person, confidence));
                }
            }
            ground_truth.push(GroundTruth {
                frame: i,
                pedestrian: ped_id as u32,
                position: Point3::new(cx, cy, BODY_HEIGHT_M / 2.0),
            });
        }
        for obstacle in &spec.obstacles {
            let count = rng.random_range(15..=40);
            points.extend(sample_column(
                &mut rng,
                obstacle.position[0],
                obstacle.position[1],
                obstacle.radius_m,
                obstacle.height_m,
                count,
                spec.point_jitter_sigma_m,
            ));
        }

        frames.push(SceneFrame {
            timestamp_s: t,
            vehicle: VehicleState { speed_kph: speed, wheel_angle_rad: wheel_angle, wheelbase_m: spec.wheelbase_m },
            road_type: spec.road_type,
            points,
            bboxes,
            driver_kph: Some(speed),
        });
    }

    ScenarioFile {
        header: ScenarioHeader {
            camera,
            segments: vec![RoadSegment { road_type: spec.road_type, legal_kph: spec.legal_kph }],
            seed: Some(spec.seed),
            ground_truth,
        },
        frames,
    }
}

/// Harvests exact (range, bbox height) pairs from a scenario's ground truth
/// for fitting a height-vs-range model against the same camera geometry.
pub fn truth_range_height_samples(scenario: &ScenarioFile) -> Vec<(f64, f64)> {
    let cam = &scenario.header.camera;
    let mut samples = Vec::new();
    for g in &scenario.header.ground_truth {
        if let Some((_, v0, _, v1)) = envelope_bbox(cam, g.position.x, g.position.y) {
            samples.push((g.position.norm(), v1 - v0));
        }
    }
    samples
}
