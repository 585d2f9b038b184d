//! Domain types shared by every stage of the pipeline.
//!
//! The vehicle body frame is x-forward, y-left, z-up, in meters. Image
//! coordinates are continuous pixels with u rightward and v downward.

use serde::{Deserialize, Serialize};

/// A 3D point in the vehicle body frame (x forward, y left, z up), meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Euclidean distance from the body-frame origin.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Self { x: a[0], y: a[1], z: a[2] }
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

/// A continuous image-plane coordinate in pixels. May lie outside the image
/// bounds; callers clip where it matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PointUV {
    pub u: f64,
    pub v: f64,
}

impl PointUV {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

impl From<[f64; 2]> for PointUV {
    fn from(a: [f64; 2]) -> Self {
        Self { u: a[0], v: a[1] }
    }
}

impl From<PointUV> for [f64; 2] {
    fn from(p: PointUV) -> Self {
        [p.u, p.v]
    }
}

/// Detector class of a 2D bounding box. Only `person` boxes are consumed by
/// the pipeline; everything else is carried through untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassLabel {
    Person,
    Other(String),
}

impl ClassLabel {
    pub fn as_str(&self) -> &str {
        match self {
            ClassLabel::Person => "person",
            ClassLabel::Other(s) => s,
        }
    }
}

impl From<&str> for ClassLabel {
    fn from(s: &str) -> Self {
        if s == "person" {
            ClassLabel::Person
        } else {
            ClassLabel::Other(s.to_string())
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ClassLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(ClassLabel::from(s.as_str()))
    }
}

/// An axis-aligned 2D detection box in pixel coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BBox2D {
    pub u_min: f64,
    pub v_min: f64,
    pub u_max: f64,
    pub v_max: f64,
    pub class: ClassLabel,
    pub confidence: f64,
}

impl BBox2D {
    pub fn new(u_min: f64, v_min: f64, u_max: f64, v_max: f64, class: ClassLabel, confidence: f64) -> Self {
        Self { u_min, v_min, u_max, v_max, class, confidence }
    }

    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn height(&self) -> f64 {
        self.v_max - self.v_min
    }

    /// Boundary-inclusive containment test.
    pub fn contains(&self, p: &PointUV) -> bool {
        p.u >= self.u_min && p.u <= self.u_max && p.v >= self.v_min && p.v <= self.v_max
    }

    pub fn is_person(&self) -> bool {
        self.class == ClassLabel::Person
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if ![self.u_min, self.v_min, self.u_max, self.v_max].iter().all(|v| v.is_finite()) {
            return Err(format!("bbox coordinates finite violated ({self:?})"));
        }
        if self.u_min >= self.u_max {
            return Err(format!("bbox u_min < u_max violated ({} >= {})", self.u_min, self.u_max));
        }
        if self.v_min >= self.v_max {
            return Err(format!("bbox v_min < v_max violated ({} >= {})", self.v_min, self.v_max));
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(format!("bbox confidence not in [0,1] ({})", self.confidence));
        }
        Ok(())
    }
}

/// Road environment of the current frame. `Shared` and `SemiShared` use the
/// same speed-profile column; `Regular` has its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadType {
    Shared,
    SemiShared,
    Regular,
}

/// Instantaneous vehicle state used for path projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    /// Longitudinal speed, KPH, >= 0.
    pub speed_kph: f64,
    /// Steering wheel angle in radians, positive left, |angle| < pi/2.
    pub wheel_angle_rad: f64,
    /// Distance between axles, meters, > 0.
    pub wheelbase_m: f64,
}

impl VehicleState {
    pub(crate) fn validate(&self) -> Result<(), String> {
        if !(self.speed_kph.is_finite() && self.speed_kph >= 0.0) {
            return Err(format!("vehicle speed_kph >= 0 violated ({})", self.speed_kph));
        }
        if !(self.wheel_angle_rad.is_finite() && self.wheel_angle_rad.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(format!("vehicle |wheel_angle_rad| < pi/2 violated ({})", self.wheel_angle_rad));
        }
        if !(self.wheelbase_m.is_finite() && self.wheelbase_m > 0.0) {
            return Err(format!("vehicle wheelbase_m > 0 violated ({})", self.wheelbase_m));
        }
        Ok(())
    }
}

/// One time step of a driving log: everything the controller sees at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFrame {
    /// Seconds, strictly increasing across a log.
    pub timestamp_s: f64,
    pub vehicle: VehicleState,
    pub road_type: RoadType,
    /// LIDAR returns in the body frame.
    #[serde(default)]
    pub points: Vec<Point3>,
    /// 2D detector output for the matching camera image.
    #[serde(default)]
    pub bboxes: Vec<BBox2D>,
    /// Speed the human driver held at this instant, when the log has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driver_kph: Option<f64>,
}

impl SceneFrame {
    pub fn person_bboxes(&self) -> impl Iterator<Item = (usize, &BBox2D)> {
        self.bboxes.iter().enumerate().filter(|(_, b)| b.is_person())
    }

    pub fn person_count(&self) -> usize {
        self.bboxes.iter().filter(|b| b.is_person()).count()
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if !self.timestamp_s.is_finite() {
            return Err(format!("frame timestamp_s finite violated ({})", self.timestamp_s));
        }
        self.vehicle.validate()?;
        if let Some(p) = self.points.iter().find(|p| !p.is_finite()) {
            return Err(format!("point coordinates finite violated ({:?})", p));
        }
        for b in &self.bboxes {
            b.validate()?;
        }
        if let Some(d) = self.driver_kph {
            if !(d.is_finite() && d >= 0.0) {
                return Err(format!("frame driver_kph >= 0 violated ({})", d));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_label_round_trips_through_strings() {
        assert_eq!(ClassLabel::from("person"), ClassLabel::Person);
        assert_eq!(ClassLabel::from("bicycle").as_str(), "bicycle");
        let json = serde_json::to_string(&ClassLabel::Person).unwrap();
        assert_eq!(json, "\"person\"");
        let back: ClassLabel = serde_json::from_str("\"car\"").unwrap();
        assert_eq!(back, ClassLabel::Other("car".into()));
    }

    #[test]
    fn bbox_containment_is_boundary_inclusive() {
        let b = BBox2D::new(10.0, 20.0, 30.0, 40.0, ClassLabel::Person, 0.9);
        assert!(b.contains(&PointUV::new(10.0, 20.0)));
        assert!(b.contains(&PointUV::new(30.0, 40.0)));
        assert!(!b.contains(&PointUV::new(9.999, 25.0)));
        assert_eq!(b.width(), 20.0);
        assert_eq!(b.height(), 20.0);
    }

    #[test]
    fn bbox_validation_rejects_inverted_edges() {
        let b = BBox2D::new(30.0, 20.0, 10.0, 40.0, ClassLabel::Person, 0.9);
        assert!(b.validate().is_err());
        let b = BBox2D::new(10.0, 20.0, 30.0, 40.0, ClassLabel::Person, 1.5);
        assert!(b.validate().is_err());
    }

    #[test]
    fn vehicle_validation_bounds_wheel_angle() {
        let ok = VehicleState { speed_kph: 10.0, wheel_angle_rad: 0.3, wheelbase_m: 2.5 };
        assert!(ok.validate().is_ok());
        let bad = VehicleState { wheel_angle_rad: 1.6, ..ok };
        assert!(bad.validate().is_err());
        let bad = VehicleState { speed_kph: -1.0, ..ok };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn point_serde_uses_compact_arrays() {
        let p = Point3::new(1.5, -2.0, 0.25);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1.5,-2.0,0.25]");
        let back: Point3 = serde_json::from_str("[1.5,-2.0,0.25]").unwrap();
        assert_eq!(back, p);
    }
}
