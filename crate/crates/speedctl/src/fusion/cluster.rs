//! Single-link Euclidean clustering of the LIDAR point cloud.
//!
//! Two points belong to the same cluster iff they are connected by a chain
//! of hops each no longer than the distance threshold. A uniform voxel grid
//! (cell edge = threshold) limits neighbor candidates so a full frame stays
//! well inside the per-frame latency budget.

use std::collections::HashMap;

use crate::camera::CameraModel;
use crate::fusion::hull::{ground_hull, HullParams};
use crate::types::{Point3, PointUV};

/// A group of nearby 3D points, with its ground-plane hull, centroid, and
/// range from the vehicle.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub id: u32,
    pub points: Vec<Point3>,
    /// Per-point image-plane coordinates, parallel to `points`; `None` for
    /// points behind the camera. Empty until [`project`](Self::project) runs.
    pub projected: Vec<Option<PointUV>>,
    /// Ground-plane (x, y) polygon, counter-clockwise. Degenerate clusters
    /// (fewer than 3 distinct ground positions) carry the centroid alone.
    pub hull: Vec<[f64; 2]>,
    pub centroid: Point3,
    /// Euclidean distance from the body origin to the centroid, meters.
    pub range_m: f64,
}

impl Cluster {
    pub fn from_points(id: u32, points: Vec<Point3>) -> Self {
        assert!(!points.is_empty(), "cluster must contain at least one point");
        let n = points.len() as f64;
        let centroid = Point3::new(
            points.iter().map(|p| p.x).sum::<f64>() / n,
            points.iter().map(|p| p.y).sum::<f64>() / n,
            points.iter().map(|p| p.z).sum::<f64>() / n,
        );
        let range_m = centroid.norm();
        Self { id, points, projected: Vec::new(), hull: Vec::new(), centroid, range_m }
    }

    /// Computes the ground-plane hull, substituting the centroid for
    /// degenerate clusters.
    pub fn compute_hull(&mut self, params: &HullParams) {
        self.hull = match ground_hull(&self.points, params) {
            Ok(h) => h,
            Err(_) => vec![[self.centroid.x, self.centroid.y]],
        };
    }

    /// Fills `projected` with per-point UV coordinates.
    pub fn project(&mut self, cam: &CameraModel) {
        self.projected = self.points.iter().map(|p| cam.project_point(p)).collect();
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, i: u32) -> u32 {
        let mut root = i;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // Path compression.
        let mut cur = i;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the larger root index under the smaller so each
            // component's root is its smallest member.
            if ra < rb {
                self.parent[rb as usize] = ra;
            } else {
                self.parent[ra as usize] = rb;
            }
        }
    }
}

/// Packs a cell coordinate triple into one sortable key (21 bits per axis).
/// Coordinates far enough to wrap only share a bucket and cost extra
/// distance checks; they cannot merge distant points, the metric test does.
fn cell_key(cx: i64, cy: i64, cz: i64) -> u64 {
    const MASK: u64 = (1 << 21) - 1;
    ((cx as u64 & MASK) << 42) | ((cy as u64 & MASK) << 21) | (cz as u64 & MASK)
}

fn cell_of(p: &Point3, inv_cell: f64) -> (i64, i64, i64) {
    (
        (p.x * inv_cell).floor() as i64,
        (p.y * inv_cell).floor() as i64,
        (p.z * inv_cell).floor() as i64,
    )
}

/// The 13 neighbor offsets lexicographically above (0,0,0); the symmetric
/// half suffices because linking is bidirectional.
const FORWARD_OFFSETS: [(i64, i64, i64); 13] = [
    (0, 0, 1),
    (0, 1, -1),
    (0, 1, 0),
    (0, 1, 1),
    (1, -1, -1),
    (1, -1, 0),
    (1, -1, 1),
    (1, 0, -1),
    (1, 0, 0),
    (1, 0, 1),
    (1, 1, -1),
    (1, 1, 0),
    (1, 1, 1),
];

/// Partitions `points` into single-link clusters and drops those smaller
/// than `min_cluster_size`. Output is deterministic for a given input
/// order: each cluster's points keep input order and clusters are sorted by
/// their smallest member index.
pub fn euclidean_cluster(points: &[Point3], distance_threshold: f64, min_cluster_size: usize) -> Vec<Cluster> {
    assert!(distance_threshold > 0.0, "distance_threshold must be positive");
    assert!(min_cluster_size >= 1, "min_cluster_size must be at least 1");
    if points.is_empty() {
        return Vec::new();
    }

    // Bucket points by grid cell (edge = threshold), sorted by cell key so
    // each occupied cell is one contiguous run.
    let inv_cell = 1.0 / distance_threshold;
    let mut keyed: Vec<(u64, u32)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (cx, cy, cz) = cell_of(p, inv_cell);
            (cell_key(cx, cy, cz), i as u32)
        })
        .collect();
    keyed.sort_unstable();

    let mut cells: Vec<(u64, usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=keyed.len() {
        if i == keyed.len() || keyed[i].0 != keyed[start].0 {
            cells.push((keyed[start].0, start, i));
            start = i;
        }
    }

    let threshold_sq = distance_threshold * distance_threshold;
    let mut sets = DisjointSet::new(points.len());
    let link = |sets: &mut DisjointSet, a: u32, b: u32| {
        let (p, q) = (&points[a as usize], &points[b as usize]);
        let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
        if dx * dx + dy * dy + dz * dz <= threshold_sq {
            sets.union(a, b);
        }
    };
    for &(key, lo, hi) in &cells {
        for a in lo..hi {
            for b in (a + 1)..hi {
                link(&mut sets, keyed[a].1, keyed[b].1);
            }
        }
        // Cell coordinates of this run, recovered from any member point.
        let (cx, cy, cz) = cell_of(&points[keyed[lo].1 as usize], inv_cell);
        debug_assert_eq!(cell_key(cx, cy, cz), key);
        for (dx, dy, dz) in FORWARD_OFFSETS {
            let neighbor = cell_key(cx + dx, cy + dy, cz + dz);
            if let Ok(idx) = cells.binary_search_by_key(&neighbor, |&(k, _, _)| k) {
                let (_, nlo, nhi) = cells[idx];
                for a in lo..hi {
                    for b in nlo..nhi {
                        link(&mut sets, keyed[a].1, keyed[b].1);
                    }
                }
            }
        }
    }

    // Group members by root; roots are the smallest member index of each
    // component, so iterating point order yields clusters already sorted.
    let mut members: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut root_order: Vec<u32> = Vec::new();
    for i in 0..points.len() as u32 {
        let root = sets.find(i);
        let entry = members.entry(root).or_default();
        if entry.is_empty() {
            root_order.push(root);
        }
        entry.push(i);
    }

    let mut clusters = Vec::new();
    let mut next_id = 0u32;
    for root in root_order {
        let idxs = &members[&root];
        if idxs.len() < min_cluster_size {
            continue;
        }
        let pts = idxs.iter().map(|&i| points[i as usize]).collect();
        clusters.push(Cluster::from_points(next_id, pts));
        next_id += 1;
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    /// Brute-force oracle: transitive closure over the pairwise hop graph.
    pub(crate) fn brute_force_clusters(
        points: &[Point3],
        threshold: f64,
        min_size: usize,
    ) -> Vec<BTreeSet<usize>> {
        let n = points.len();
        let mut component: Vec<usize> = (0..n).collect();
        // Repeatedly merge any linked pair until a fixed point.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    if points[i].distance(&points[j]) <= threshold && component[i] != component[j] {
                        let (from, to) = (component[j].max(component[i]), component[j].min(component[i]));
                        for c in component.iter_mut() {
                            if *c == from {
                                *c = to;
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for (i, &c) in component.iter().enumerate() {
            groups.entry(c).or_default().insert(i);
        }
        groups.into_values().filter(|g| g.len() >= min_size).collect()
    }

    fn as_point_sets(clusters: &[Cluster]) -> BTreeSet<Vec<(i64, i64, i64)>> {
        clusters
            .iter()
            .map(|c| {
                let mut v: Vec<(i64, i64, i64)> = c
                    .points
                    .iter()
                    .map(|p| ((p.x * 1e9) as i64, (p.y * 1e9) as i64, (p.z * 1e9) as i64))
                    .collect();
                v.sort();
                v
            })
            .collect()
    }

    #[test]
    fn near_points_join_one_cluster() {
        let pts = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.1, 0.0, 0.0)];
        let clusters = euclidean_cluster(&pts, 0.5, 1);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].points.len(), 2);
    }

    #[test]
    fn far_points_stay_apart() {
        let pts = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(10.0, 0.0, 0.0)];
        let clusters = euclidean_cluster(&pts, 0.5, 1);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].points.len(), 1);
        // Same input with min size 2 keeps nothing.
        assert!(euclidean_cluster(&pts, 0.5, 2).is_empty());
    }

    #[test]
    fn threshold_is_inclusive() {
        let pts = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.5, 0.0, 0.0)];
        assert_eq!(euclidean_cluster(&pts, 0.5, 1).len(), 1);
        let pts = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.5000001, 0.0, 0.0)];
        assert_eq!(euclidean_cluster(&pts, 0.5, 1).len(), 2);
    }

    #[test]
    fn two_blobs_recovered_exactly() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut pts = Vec::new();
        for _ in 0..25 {
            pts.push(Point3::new(
                rng.random_range(-0.3..0.3),
                rng.random_range(-0.3..0.3),
                rng.random_range(0.0..1.7),
            ));
        }
        for _ in 0..25 {
            pts.push(Point3::new(
                8.0 + rng.random_range(-0.3..0.3),
                3.0 + rng.random_range(-0.3..0.3),
                rng.random_range(0.0..1.7),
            ));
        }
        let clusters = euclidean_cluster(&pts, 0.5, 1);
        let oracle = brute_force_clusters(&pts, 0.5, 1);
        assert_eq!(clusters.len(), oracle.len());
        let got: BTreeSet<BTreeSet<usize>> = clusters
            .iter()
            .map(|c| {
                c.points
                    .iter()
                    .map(|p| pts.iter().position(|q| q == p).unwrap())
                    .collect()
            })
            .collect();
        let want: BTreeSet<BTreeSet<usize>> = oracle.into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(42);
        for case in 0..60 {
            let n = rng.random_range(0..=120);
            let spread = rng.random_range(1.0..12.0);
            let pts: Vec<Point3> = (0..n)
                .map(|_| {
                    Point3::new(
                        rng.random_range(-spread..spread),
                        rng.random_range(-spread..spread),
                        rng.random_range(-spread..spread),
                    )
                })
                .collect();
            let threshold = rng.random_range(0.2..2.0);
            let min_size = rng.random_range(1..4);
            let got = euclidean_cluster(&pts, threshold, min_size);
            let want = brute_force_clusters(&pts, threshold, min_size);
            assert_eq!(got.len(), want.len(), "case {case}: cluster count");
            let got_sets: BTreeSet<_> = as_point_sets(&got);
            let want_sets: BTreeSet<_> = want
                .iter()
                .map(|g| {
                    let mut v: Vec<(i64, i64, i64)> = g
                        .iter()
                        .map(|&i| {
                            let p = pts[i];
                            ((p.x * 1e9) as i64, (p.y * 1e9) as i64, (p.z * 1e9) as i64)
                        })
                        .collect();
                    v.sort();
                    v
                })
                .collect();
            assert_eq!(got_sets, want_sets, "case {case}: membership");
        }
    }

    #[test]
    fn clusters_ordered_by_smallest_member_and_ids_sequential() {
        let pts = vec![
            Point3::new(5.0, 0.0, 0.0), // cluster containing point 0 comes first
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(5.1, 0.0, 0.0),
            Point3::new(0.1, 0.0, 0.0),
        ];
        let clusters = euclidean_cluster(&pts, 0.5, 1);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].id, 0);
        assert_eq!(clusters[1].id, 1);
        assert_eq!(clusters[0].points[0], pts[0]);
        assert_eq!(clusters[1].points[0], pts[1]);
    }

    #[test]
    fn centroid_and_range_follow_members() {
        let pts = vec![Point3::new(3.0, 4.0, 0.0), Point3::new(3.0, 4.0, 2.0)];
        let clusters = euclidean_cluster(&pts, 2.5, 1);
        assert_eq!(clusters.len(), 1);
        let c = &clusters[0];
        assert!((c.centroid.z - 1.0).abs() < 1e-12);
        assert!((c.range_m - (9.0f64 + 16.0 + 1.0).sqrt()).abs() < 1e-12);
    }
}
