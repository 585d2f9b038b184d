//! Pinhole camera model and body-to-camera rigid transform.
//!
//! Camera frame convention: z forward (depth), x right, y down. Projection
//! is `u = fx * x/z + cx`, `v = fy * y/z + cy`; no lens distortion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Point3, PointUV};

#[derive(Debug, Error, PartialEq)]
pub enum CameraError {
    #[error("focal lengths must be positive (fx={fx}, fy={fy})")]
    NonPositiveFocalLength { fx: f64, fy: f64 },
    #[error("image dimensions must be positive ({width}x{height})")]
    EmptyImage { width: u32, height: u32 },
    #[error("extrinsic rotation is not orthonormal (max |R R^T - I| = {deviation:e})")]
    NonOrthonormalRotation { deviation: f64 },
    #[error("extrinsic rotation is left-handed (det = {det})")]
    LeftHandedRotation { det: f64 },
}

/// Rigid transform from the vehicle body frame into the camera frame:
/// `p_cam = R * p_body + t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    /// Row-major 3x3 rotation.
    pub rotation: [[f64; 3]; 3],
    /// Translation in meters.
    pub translation: [f64; 3],
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: [0.0, 0.0, 0.0],
        }
    }

    pub fn apply(&self, p: &Point3) -> [f64; 3] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + t[0],
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + t[1],
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + t[2],
        ]
    }

    /// Inverse map, camera frame back to body frame: `p_body = R^T (p_cam - t)`.
    pub fn apply_inverse(&self, c: [f64; 3]) -> Point3 {
        let r = &self.rotation;
        let d = [c[0] - self.translation[0], c[1] - self.translation[1], c[2] - self.translation[2]];
        Point3::new(
            r[0][0] * d[0] + r[1][0] * d[1] + r[2][0] * d[2],
            r[0][1] * d[0] + r[1][1] * d[1] + r[2][1] * d[2],
            r[0][2] * d[0] + r[1][2] * d[1] + r[2][2] * d[2],
        )
    }

    /// Largest absolute deviation of `R R^T` from the identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        let r = &self.rotation;
        let mut max_dev: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((dot - expected).abs());
            }
        }
        max_dev
    }

    pub fn determinant(&self) -> f64 {
        let r = &self.rotation;
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }
}

/// Calibrated pinhole camera: intrinsics, image size, and the body-to-camera
/// extrinsic transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub image_width: u32,
    pub image_height: u32,
    pub extrinsic: RigidTransform,
}

impl CameraModel {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        image_width: u32,
        image_height: u32,
        extrinsic: RigidTransform,
    ) -> Result<Self, CameraError> {
        let cam = Self { fx, fy, cx, cy, image_width, image_height, extrinsic };
        cam.validate()?;
        Ok(cam)
    }

    /// A camera at the body origin looking along body +x: camera x = -y_body
    /// (right), camera y = -z_body (down), camera z = +x_body (forward).
    pub fn forward_facing(fx: f64, fy: f64, cx: f64, cy: f64, width: u32, height: u32) -> Result<Self, CameraError> {
        let extrinsic = RigidTransform {
            rotation: [[0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]],
            translation: [0.0, 0.0, 0.0],
        };
        Self::new(fx, fy, cx, cy, width, height, extrinsic)
    }

    pub fn validate(&self) -> Result<(), CameraError> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(CameraError::NonPositiveFocalLength { fx: self.fx, fy: self.fy });
        }
        if self.image_width == 0 || self.image_height == 0 {
            return Err(CameraError::EmptyImage { width: self.image_width, height: self.image_height });
        }
        let deviation = self.extrinsic.orthonormality_deviation();
        if deviation > 1e-9 {
            return Err(CameraError::NonOrthonormalRotation { deviation });
        }
        let det = self.extrinsic.determinant();
        if det < 0.0 {
            return Err(CameraError::LeftHandedRotation { det });
        }
        Ok(())
    }

    /// Projects a body-frame point onto the image plane. Returns `None` when
    /// the point has non-positive camera-frame depth (at or behind the
    /// camera). Points projecting outside the image bounds are still
    /// returned; callers clip.
    pub fn project_point(&self, p: &Point3) -> Option<PointUV> {
        let [xc, yc, zc] = self.extrinsic.apply(p);
        if zc <= 0.0 {
            return None;
        }
        Some(PointUV::new(self.fx * (xc / zc) + self.cx, self.fy * (yc / zc) + self.cy))
    }

    /// Element-wise [`project_point`](Self::project_point); order and length
    /// of the input are preserved.
    pub fn project_cloud(&self, points: &[Point3]) -> Vec<(Point3, Option<PointUV>)> {
        points.iter().map(|p| (*p, self.project_point(p))).collect()
    }

    /// Inverse of [`project_point`](Self::project_point) given the
    /// camera-frame depth the point had.
    pub fn back_project(&self, uv: &PointUV, depth: f64) -> Point3 {
        let xc = (uv.u - self.cx) / self.fx * depth;
        let yc = (uv.v - self.cy) / self.fy * depth;
        self.extrinsic.apply_inverse([xc, yc, depth])
    }

    /// Whether a pixel coordinate falls inside the image.
    pub fn in_image(&self, uv: &PointUV) -> bool {
        uv.u >= 0.0 && uv.u < self.image_width as f64 && uv.v >= 0.0 && uv.v < self.image_height as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_cam() -> CameraModel {
        // Identity extrinsic: body frame coincides with camera frame.
        CameraModel::new(100.0, 100.0, 50.0, 50.0, 100, 100, RigidTransform::identity()).unwrap()
    }

    #[test]
    fn optical_axis_point_maps_to_principal_point() {
        let cam = unit_cam();
        let uv = cam.project_point(&Point3::new(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(uv.u, 50.0);
        assert_relative_eq!(uv.v, 50.0);
    }

    #[test]
    fn off_axis_point_scales_by_focal_length() {
        let cam = unit_cam();
        let uv = cam.project_point(&Point3::new(0.5, 0.0, 1.0)).unwrap();
        assert_relative_eq!(uv.u, 100.0);
        assert_relative_eq!(uv.v, 50.0);
    }

    #[test]
    fn point_behind_camera_projects_to_none() {
        let cam = unit_cam();
        assert!(cam.project_point(&Point3::new(0.0, 0.0, -1.0)).is_none());
        assert!(cam.project_point(&Point3::new(0.0, 0.0, 0.0)).is_none());
    }

    #[test]
    fn cloud_projection_preserves_order_and_length() {
        let cam = unit_cam();
        let pts = vec![
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(0.0, 0.0, -1.0),
            Point3::new(0.5, 0.0, 1.0),
        ];
        let out = cam.project_cloud(&pts);
        assert_eq!(out.len(), 3);
        assert!(out[0].1.is_some());
        assert!(out[1].1.is_none());
        assert_relative_eq!(out[2].1.unwrap().u, 100.0);
        assert_eq!(out[0].0, pts[0]);
        assert!(cam.project_cloud(&[]).is_empty());
    }

    #[test]
    fn forward_camera_sees_body_x_axis_at_principal_point() {
        let cam = CameraModel::forward_facing(500.0, 500.0, 320.0, 240.0, 640, 480).unwrap();
        let uv = cam.project_point(&Point3::new(10.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(uv.u, 320.0);
        assert_relative_eq!(uv.v, 240.0);
        // Left of the vehicle (+y) lands left of center; above (+z) lands higher.
        let left = cam.project_point(&Point3::new(10.0, 1.0, 0.0)).unwrap();
        assert!(left.u < 320.0);
        let up = cam.project_point(&Point3::new(10.0, 0.0, 1.0)).unwrap();
        assert!(up.v < 240.0);
        // Behind the vehicle is behind the camera.
        assert!(cam.project_point(&Point3::new(-1.0, 0.0, 0.0)).is_none());
    }

    #[test]
    fn constructor_rejects_bad_calibrations() {
        let e = CameraModel::new(0.0, 1.0, 0.0, 0.0, 10, 10, RigidTransform::identity());
        assert!(matches!(e, Err(CameraError::NonPositiveFocalLength { .. })));
        let e = CameraModel::new(1.0, 1.0, 0.0, 0.0, 0, 10, RigidTransform::identity());
        assert!(matches!(e, Err(CameraError::EmptyImage { .. })));
        let skew = RigidTransform {
            rotation: [[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: [0.0; 3],
        };
        let e = CameraModel::new(1.0, 1.0, 0.0, 0.0, 10, 10, skew);
        assert!(matches!(e, Err(CameraError::NonOrthonormalRotation { .. })));
        let mirror = RigidTransform {
            rotation: [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: [0.0; 3],
        };
        let e = CameraModel::new(1.0, 1.0, 0.0, 0.0, 10, 10, mirror);
        assert!(matches!(e, Err(CameraError::LeftHandedRotation { .. })));
    }

    proptest! {
        // Scaling a camera-frame point along its viewing ray leaves UV fixed.
        #[test]
        fn projection_is_scale_invariant_along_rays(
            x in -5.0f64..5.0, y in -5.0f64..5.0, z in 0.1f64..50.0, k in 0.1f64..10.0,
        ) {
            let cam = unit_cam();
            let a = cam.project_point(&Point3::new(x, y, z)).unwrap();
            let b = cam.project_point(&Point3::new(k * x, k * y, k * z)).unwrap();
            prop_assert!((a.u - b.u).abs() < 1e-6, "u {} vs {}", a.u, b.u);
            prop_assert!((a.v - b.v).abs() < 1e-6, "v {} vs {}", a.v, b.v);
        }

        // Project then back-project recovers the body-frame point.
        #[test]
        fn back_projection_round_trips(
            x in -20.0f64..20.0, y in -20.0f64..20.0, z in -5.0f64..5.0,
        ) {
            prop_assume!(x > 0.1); // in front of the forward camera
            let cam = CameraModel::forward_facing(500.0, 450.0, 320.0, 240.0, 640, 480).unwrap();
            let p = Point3::new(x, y, z);
            let uv = cam.project_point(&p).unwrap();
            let depth = x; // camera-frame z of a forward camera is body x
            let back = cam.back_project(&uv, depth);
            prop_assert!(back.distance(&p) < 1e-6, "{:?} vs {:?}", back, p);
        }
    }
}
