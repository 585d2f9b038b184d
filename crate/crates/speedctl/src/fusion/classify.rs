//! Matching of 2D bounding boxes against projected 3D clusters.
//!
//! Each bbox is matched independently against the cluster whose projected
//! points overlap it best, subject to the height-vs-range sanity gate.
//! Overlap above 0.8 validates the whole cluster; overlap above 0.3
//! validates just the overlapped points (the partial case covers merged
//! clusters spanning several people, so one cluster may validate several
//! bboxes while each bbox validates at most one cluster).

use crate::fusion::cluster::Cluster;
use crate::fusion::range_height::RangeHeightModel;
use crate::types::{BBox2D, Point3};

/// Overlap fraction above which the whole cluster is taken as one person.
pub const FULL_CLUSTER_OVERLAP: f64 = 0.8;
/// Overlap fraction above which the overlapped points alone are taken.
pub const PARTIAL_POINTS_OVERLAP: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    /// Overlap exceeded [`FULL_CLUSTER_OVERLAP`]; all cluster points validated.
    FullCluster,
    /// Overlap in ([`PARTIAL_POINTS_OVERLAP`], [`FULL_CLUSTER_OVERLAP`]];
    /// only the points projecting inside the bbox validated.
    PartialPoints,
}

/// One validated bbox-cluster pairing.
#[derive(Debug, Clone)]
pub struct MatchResult {
    /// Index into the bbox list given to [`classify_polygons`].
    pub bbox_index: usize,
    pub cluster_id: u32,
    /// Fraction of the cluster's projectable points inside the bbox, in [0, 1].
    pub overlap_fraction: f64,
    pub validated_points: Vec<Point3>,
    pub match_kind: MatchKind,
}

/// Fraction of the cluster's projectable points lying inside the bbox,
/// together with those points. Points with no projection (behind the
/// camera) never count; a cluster with no projectable points overlaps 0.
pub fn bbox_overlap(bbox: &BBox2D, cluster: &Cluster) -> (f64, Vec<Point3>) {
    debug_assert_eq!(cluster.projected.len(), cluster.points.len(), "cluster must be projected first");
    let mut projectable = 0usize;
    let mut inside = Vec::new();
    for (p, uv) in cluster.points.iter().zip(&cluster.projected) {
        if let Some(uv) = uv {
            projectable += 1;
            if bbox.contains(uv) {
                inside.push(*p);
            }
        }
    }
    if projectable == 0 {
        return (0.0, inside);
    }
    (inside.len() as f64 / projectable as f64, inside)
}

/// Matches every bbox against its best-overlapping cluster.
///
/// For each bbox independently, clusters failing the sanity gate are
/// skipped, the remaining cluster with the highest overlap fraction wins
/// (ties broken toward the lower cluster id, so cluster order is
/// irrelevant), and the threshold rules above decide full/partial/no match.
/// Output is ordered by bbox index; bboxes without a qualifying cluster are
/// absent.
pub fn classify_polygons(
    bboxes: &[BBox2D],
    clusters: &[Cluster],
    model: &RangeHeightModel,
) -> Vec<MatchResult> {
    let mut results = Vec::new();
    for (bbox_index, bbox) in bboxes.iter().enumerate() {
        let mut best: Option<(f64, &Cluster, Vec<Point3>)> = None;
        for cluster in clusters {
            if !model.bbox_in_bounds(bbox, cluster.range_m) {
                continue;
            }
            let (overlap, inside) = bbox_overlap(bbox, cluster);
            if overlap <= PARTIAL_POINTS_OVERLAP {
                continue;
            }
            let better = match &best {
                None => true,
                Some((best_overlap, best_cluster, _)) => {
                    overlap > *best_overlap
                        || (overlap == *best_overlap && cluster.id < best_cluster.id)
                }
            };
            if better {
                best = Some((overlap, cluster, inside));
            }
        }
        if let Some((overlap, cluster, inside)) = best {
            let (match_kind, validated_points) = if overlap > FULL_CLUSTER_OVERLAP {
                (MatchKind::FullCluster, cluster.points.clone())
            } else {
                (MatchKind::PartialPoints, inside)
            };
            results.push(MatchResult {
                bbox_index,
                cluster_id: cluster.id,
                overlap_fraction: overlap,
                validated_points,
                match_kind,
            });
        }
    }
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::{CameraModel, RigidTransform};
    use crate::types::ClassLabel;
    use proptest::prelude::*;

    fn person_bbox(u_min: f64, v_min: f64, u_max: f64, v_max: f64) -> BBox2D {
        BBox2D::new(u_min, v_min, u_max, v_max, ClassLabel::Person, 0.9)
    }

    fn identity_cam() -> CameraModel {
        CameraModel::new(100.0, 100.0, 50.0, 50.0, 100, 100, RigidTransform::identity()).unwrap()
    }

    /// A cluster of `n` points at depth z=1 whose first `inside` points
    /// project inside [40,60]x[40,60] and the rest far outside it.
    fn cluster_with_overlap(id: u32, n: usize, inside: usize) -> Cluster {
        let mut pts = Vec::new();
        for i in 0..n {
            if i < inside {
                pts.push(Point3::new(0.0, 0.0, 1.0)); // projects to (50, 50)
            } else {
                pts.push(Point3::new(3.0, 3.0, 1.0)); // projects to (350, 350)
            }
        }
        let mut c = Cluster::from_points(id, pts);
        c.project(&identity_cam());
        c
    }

    #[test]
    fn all_points_inside_gives_full_overlap() {
        let c = cluster_with_overlap(0, 10, 10);
        let (f, pts) = bbox_overlap(&person_bbox(40.0, 40.0, 60.0, 60.0), &c);
        assert_eq!(f, 1.0);
        assert_eq!(pts.len(), 10);
    }

    #[test]
    fn partial_overlap_counts_exactly() {
        let c = cluster_with_overlap(0, 10, 3);
        let (f, pts) = bbox_overlap(&person_bbox(40.0, 40.0, 60.0, 60.0), &c);
        assert!((f - 0.3).abs() < 1e-12);
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn cluster_behind_camera_overlaps_nothing() {
        let mut c = Cluster::from_points(0, vec![Point3::new(0.0, 0.0, -1.0); 5]);
        c.project(&identity_cam());
        let (f, pts) = bbox_overlap(&person_bbox(0.0, 0.0, 100.0, 100.0), &c);
        assert_eq!(f, 0.0);
        assert!(pts.is_empty());
    }

    #[test]
    fn high_overlap_validates_whole_cluster() {
        let c = cluster_with_overlap(0, 10, 9); // 0.9 > 0.8
        let out = classify_polygons(
            &[person_bbox(40.0, 40.0, 60.0, 60.0)],
            &[c],
            &RangeHeightModel::permissive(),
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].match_kind, MatchKind::FullCluster);
        assert_eq!(out[0].validated_points.len(), 10);
        assert!((out[0].overlap_fraction - 0.9).abs() < 1e-12);
    }

    #[test]
    fn mid_overlap_validates_only_overlapped_points() {
        let c = cluster_with_overlap(0, 10, 5); // 0.5 in (0.3, 0.8]
        let bbox = person_bbox(40.0, 40.0, 60.0, 60.0);
        let out = classify_polygons(std::slice::from_ref(&bbox), &[c], &RangeHeightModel::permissive());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].match_kind, MatchKind::PartialPoints);
        assert_eq!(out[0].validated_points.len(), 5);
        // Every validated point projects inside the bbox.
        let cam = identity_cam();
        for p in &out[0].validated_points {
            assert!(bbox.contains(&cam.project_point(p).unwrap()));
        }
    }

    #[test]
    fn low_overlap_matches_nothing() {
        let c = cluster_with_overlap(0, 10, 2); // 0.2 <= 0.3
        let out = classify_polygons(
            &[person_bbox(40.0, 40.0, 60.0, 60.0)],
            &[c],
            &RangeHeightModel::permissive(),
        );
        assert!(out.is_empty());
        // Exactly 0.3 is also below the strict threshold.
        let c = cluster_with_overlap(0, 10, 3);
        let out = classify_polygons(
            &[person_bbox(40.0, 40.0, 60.0, 60.0)],
            &[c],
            &RangeHeightModel::permissive(),
        );
        assert!(out.is_empty());
    }

    #[test]
    fn one_merged_cluster_can_validate_two_bboxes() {
        // Two point columns merged in one cluster; one bbox over each column.
        let mut pts = vec![Point3::new(-0.2, -0.2, 1.0); 5];
        pts.extend(vec![Point3::new(0.2, 0.2, 1.0); 5]);
        let mut c = Cluster::from_points(7, pts);
        c.project(&identity_cam());
        // Columns project to (30, 30) and (70, 70).
        let left = person_bbox(20.0, 20.0, 40.0, 40.0);
        let right = person_bbox(60.0, 60.0, 80.0, 80.0);
        let out = classify_polygons(&[left, right], &[c], &RangeHeightModel::permissive());
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].cluster_id, 7);
        assert_eq!(out[1].cluster_id, 7);
        assert_eq!(out[0].bbox_index, 0);
        assert_eq!(out[1].bbox_index, 1);
        // 0.5 overlap each: partial matches carrying each column's points.
        assert_eq!(out[0].match_kind, MatchKind::PartialPoints);
        assert_eq!(out[0].validated_points.len(), 5);
        assert_eq!(out[1].validated_points.len(), 5);
    }

    #[test]
    fn sanity_gate_excludes_out_of_bounds_clusters() {
        // Model expects 100px-high boxes at range 1; this bbox is 20px high
        // with zero tolerance, so the only cluster is rejected.
        let c = cluster_with_overlap(0, 10, 10);
        let model = RangeHeightModel { slope: 100.0, intercept: 0.0, residual_std: 0.0 };
        let out = classify_polygons(&[person_bbox(40.0, 40.0, 60.0, 60.0)], &[c], &model);
        assert!(out.is_empty());
    }

    #[test]
    fn equal_overlap_prefers_lower_cluster_id() {
        let a = cluster_with_overlap(3, 10, 9);
        let b = cluster_with_overlap(1, 10, 9);
        let out = classify_polygons(
            &[person_bbox(40.0, 40.0, 60.0, 60.0)],
            &[a, b],
            &RangeHeightModel::permissive(),
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].cluster_id, 1);
    }

    proptest! {
        // Cluster list order never changes the outcome.
        #[test]
        fn classification_is_cluster_order_invariant(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut clusters = Vec::new();
            for id in 0..6u32 {
                let n = rng.random_range(4..12);
                let inside = rng.random_range(0..=n);
                clusters.push(cluster_with_overlap(id, n, inside));
            }
            let bboxes = vec![
                person_bbox(40.0, 40.0, 60.0, 60.0),
                person_bbox(300.0, 300.0, 400.0, 400.0),
            ];
            let model = RangeHeightModel::permissive();
            let forward = classify_polygons(&bboxes, &clusters, &model);
            clusters.reverse();
            let reversed = classify_polygons(&bboxes, &clusters, &model);
            prop_assert_eq!(forward.len(), reversed.len());
            for (a, b) in forward.iter().zip(&reversed) {
                prop_assert_eq!(a.bbox_index, b.bbox_index);
                prop_assert_eq!(a.cluster_id, b.cluster_id);
                prop_assert_eq!(a.overlap_fraction, b.overlap_fraction);
            }
        }

        // Each bbox appears at most once and every fraction sits in the
        // band its kind demands.
        #[test]
        fn output_respects_threshold_bands(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut clusters = Vec::new();
            for id in 0..5u32 {
                let n = rng.random_range(1..15);
                let inside = rng.random_range(0..=n);
                clusters.push(cluster_with_overlap(id, n, inside));
            }
            let bboxes = vec![person_bbox(40.0, 40.0, 60.0, 60.0); 3];
            let out = classify_polygons(&bboxes, &clusters, &RangeHeightModel::permissive());
            let mut seen = std::collections::BTreeSet::new();
            for m in &out {
                prop_assert!(seen.insert(m.bbox_index), "bbox {} matched twice", m.bbox_index);
                match m.match_kind {
                    MatchKind::FullCluster => prop_assert!(m.overlap_fraction > 0.8),
                    MatchKind::PartialPoints => {
                        prop_assert!(m.overlap_fraction > 0.3 && m.overlap_fraction <= 0.8)
                    }
                }
            }
        }
    }
}
