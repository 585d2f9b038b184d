//! 3D pedestrian detection by fusing point-cloud clusters with 2D person
//! bounding boxes.
//!
//! The stage is intentionally detector-free on the 3D side: the cloud is
//! clustered indiscriminately, clusters are projected into the image
//! (XYZUV), and a cluster becomes a pedestrian only when its projection
//! sufficiently overlaps a `person` bbox and its apparent size is plausible
//! for its range. Everything here is a pure function of one frame.

mod classify;
mod cluster;
mod hull;
mod range_height;

pub use classify::{
    bbox_overlap, classify_polygons, MatchKind, MatchResult, FULL_CLUSTER_OVERLAP,
    PARTIAL_POINTS_OVERLAP,
};
pub use cluster::{euclidean_cluster, Cluster};
pub use hull::{ground_hull, HullError, HullParams};
pub use range_height::{FitError, ModelFileError, RangeHeightModel};

use crate::camera::CameraModel;
use crate::types::{Point3, SceneFrame};

/// Knobs for the clustering + hull stage.
#[derive(Debug, Clone)]
pub struct FusionParams {
    /// Single-link hop distance, meters.
    pub distance_threshold_m: f64,
    /// Clusters smaller than this are noise.
    pub min_cluster_size: usize,
    pub hull: HullParams,
}

impl Default for FusionParams {
    fn default() -> Self {
        Self { distance_threshold_m: 0.5, min_cluster_size: 5, hull: HullParams::default() }
    }
}

/// A cluster validated as a person in 3D.
#[derive(Debug, Clone)]
pub struct PedestrianDetection3D {
    /// Centroid of the validated points, body frame.
    pub position: Point3,
    /// Euclidean distance from the body origin to `position`, meters, > 0.
    pub range_m: f64,
    /// Index of the validating bbox in the frame's bbox list.
    pub source_bbox: usize,
    pub points: Vec<Point3>,
}

/// Clusters the frame's cloud and prepares each cluster for matching
/// (ground hull, image projection).
pub fn prepare_clusters(points: &[Point3], cam: &CameraModel, params: &FusionParams) -> Vec<Cluster> {
    let mut clusters = euclidean_cluster(points, params.distance_threshold_m, params.min_cluster_size);
    for c in &mut clusters {
        c.compute_hull(&params.hull);
        c.project(cam);
    }
    clusters
}

/// The full per-frame fusion pipeline: cluster, hull, project, match
/// against `person` bboxes, and convert matches into 3D detections.
pub fn detect_pedestrians_3d(
    frame: &SceneFrame,
    cam: &CameraModel,
    model: &RangeHeightModel,
    params: &FusionParams,
) -> Vec<PedestrianDetection3D> {
    let clusters = prepare_clusters(&frame.points, cam, params);

    let mut original_index = Vec::new();
    let mut person_boxes = Vec::new();
    for (i, bbox) in frame.person_bboxes() {
        original_index.push(i);
        person_boxes.push(bbox.clone());
    }

    classify_polygons(&person_boxes, &clusters, model)
        .into_iter()
        .map(|m| {
            let n = m.validated_points.len() as f64;
            let position = Point3::new(
                m.validated_points.iter().map(|p| p.x).sum::<f64>() / n,
                m.validated_points.iter().map(|p| p.y).sum::<f64>() / n,
                m.validated_points.iter().map(|p| p.z).sum::<f64>() / n,
            );
            PedestrianDetection3D {
                position,
                range_m: position.norm(),
                source_bbox: original_index[m.bbox_index],
                points: m.validated_points,
            }
        })
        .collect()
}
