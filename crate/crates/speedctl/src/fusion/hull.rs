//! Ground-plane hull extraction for point clusters.
//!
//! Clusters are flattened to (x, y) and outlined as a polygon. The default
//! is the convex hull (monotone chain). A k-nearest-neighbour concave hull
//! is available behind [`HullParams::concavity`]; it hugs the points more
//! tightly but never changes any speed output, so convex is the default.

use thiserror::Error;

use crate::types::Point3;

#[derive(Debug, Error, PartialEq)]
pub enum HullError {
    /// Fewer than 3 distinct ground-plane positions (or all collinear).
    #[error("cluster is degenerate on the ground plane")]
    DegenerateCluster,
}

/// Hull extraction knobs.
#[derive(Debug, Clone, Default)]
pub struct HullParams {
    /// `None` selects the convex hull. `Some(k)` selects a k-nearest-
    /// neighbour concave hull (k is clamped to at least 3); if the concave
    /// walk cannot close it falls back to the convex hull.
    pub concavity: Option<usize>,
}

impl HullParams {
    pub fn concave(k: usize) -> Self {
        Self { concavity: Some(k) }
    }
}

/// Outlines the cluster on the ground plane as a counter-clockwise polygon
/// starting from its lexicographically smallest vertex.
pub fn ground_hull(points: &[Point3], params: &HullParams) -> Result<Vec<[f64; 2]>, HullError> {
    let mut ground: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    ground.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ground.dedup();
    if ground.len() < 3 {
        return Err(HullError::DegenerateCluster);
    }

    let convex = convex_hull_sorted(&ground);
    if convex.len() < 3 {
        return Err(HullError::DegenerateCluster);
    }

    let hull = match params.concavity {
        None => convex,
        Some(k) => knn_concave_hull(&ground, k.max(3)).unwrap_or(convex),
    };
    Ok(canonicalize(hull))
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone chain over pre-sorted, deduplicated points; returns CCW order.
fn convex_hull_sorted(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = pts.len();
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * n);
    for &p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Rotates the polygon so its lexicographically smallest vertex comes first.
fn canonicalize(mut hull: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if signed_area(&hull) < 0.0 {
        hull.reverse();
    }
    let first = hull
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    hull.rotate_left(first);
    hull
}

pub(crate) fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc / 2.0
}

/// Point-in-polygon with boundary counted as inside (ray casting).
pub(crate) fn polygon_contains(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if on_segment(a, b, p) {
            return true;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x_at = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x_at {
                inside = !inside;
            }
        }
    }
    inside
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if cross.abs() > 1e-9 {
        return false;
    }
    p[0] >= a[0].min(b[0]) - 1e-12
        && p[0] <= a[0].max(b[0]) + 1e-12
        && p[1] >= a[1].min(b[1]) - 1e-12
        && p[1] <= a[1].max(b[1]) + 1e-12
}

/// Strict (interior) crossing test between segments ab and cd.
fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn direction(from: [f64; 2], to: [f64; 2]) -> f64 {
    (to[1] - from[1]).atan2(to[0] - from[0])
}

/// k-nearest-neighbour concave hull walk. Returns `None` when no simple
/// closed polygon containing every point is found up to k = n - 1.
fn knn_concave_hull(pts: &[[f64; 2]], k: usize) -> Option<Vec<[f64; 2]>> {
    let n = pts.len();
    if n == 3 {
        return Some(pts.to_vec());
    }
    let mut k = k.min(n - 1);
    loop {
        if let Some(hull) = concave_walk(pts, k) {
            return Some(hull);
        }
        if k >= n - 1 {
            return None;
        }
        k += 1;
    }
}

fn concave_walk(pts: &[[f64; 2]], k: usize) -> Option<Vec<[f64; 2]>> {
    let n = pts.len();
    let start = (0..n)
        .min_by(|&i, &j| (pts[i][1], pts[i][0]).partial_cmp(&(pts[j][1], pts[j][0])).unwrap())?;

    let mut available: Vec<usize> = (0..n).filter(|&i| i != start).collect();
    let mut hull: Vec<usize> = vec![start];
    let mut current = start;
    // Direction pointing back along the previous hull edge; the walk picks
    // the candidate with the largest clockwise rotation from it.
    let mut back_dir = 0.0f64;

    for step in 2..=(2 * n + 1) {
        if current == start && step > 2 {
            break;
        }
        if step == 5 {
            available.push(start);
        }
        let mut neighbours = available.clone();
        neighbours.sort_by(|&i, &j| {
            let di = dist2(pts[i], pts[current]);
            let dj = dist2(pts[j], pts[current]);
            di.partial_cmp(&dj).unwrap().then(i.cmp(&j))
        });
        neighbours.truncate(k);
        neighbours.sort_by(|&i, &j| {
            let ti = (back_dir - direction(pts[current], pts[i])).rem_euclid(std::f64::consts::TAU);
            let tj = (back_dir - direction(pts[current], pts[j])).rem_euclid(std::f64::consts::TAU);
            tj.partial_cmp(&ti).unwrap().then(i.cmp(&j))
        });

        let mut chosen = None;
        'candidates: for &cand in &neighbours {
            // Skip candidates whose edge would cross the hull so far. The
            // incoming edge (and the closing edge's shared start) only share
            // endpoints, which the strict test ignores.
            let last_check = hull.len().saturating_sub(1);
            for w in 0..last_check.saturating_sub(1) {
                if segments_cross(pts[current], pts[cand], pts[hull[w]], pts[hull[w + 1]]) {
                    continue 'candidates;
                }
            }
            chosen = Some(cand);
            break;
        }
        let next = chosen?;
        back_dir = direction(pts[next], pts[current]);
        hull.push(next);
        available.retain(|&i| i != next);
        current = next;
    }

    if current != start {
        return None;
    }
    hull.pop(); // drop the repeated start vertex
    if hull.len() < 3 {
        return None;
    }
    let poly: Vec<[f64; 2]> = hull.iter().map(|&i| pts[i]).collect();
    if pts.iter().any(|&p| !polygon_contains(&poly, p)) {
        return None;
    }
    Some(poly)
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}
