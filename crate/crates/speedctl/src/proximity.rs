//! Path-relative pedestrian geometry and the Proximity-layer speed.
//!
//! The vehicle path is the arc the current wheel angle projects forward
//! (bicycle model). Each 3D detection is decomposed into distance along
//! that path and unsigned lateral distance from it; the lateral part is
//! folded into an effective along-path range through a tunable scaling
//! factor (people beside the path may step into it, so they are treated as
//! if further down the path). The layer speed is the one that reaches the
//! nearest effective range in a fixed time-to-collision budget.

use thiserror::Error;

use crate::fusion::PedestrianDetection3D;
use crate::types::{Point3, VehicleState};

/// Curvature magnitudes below this are treated as a straight path; the arc
/// math loses precision as the radius blows up.
const STRAIGHT_CURVATURE_EPS: f64 = 1e-9;

pub const MPS_TO_KPH: f64 = 3.6;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    /// The detection projects onto the path at or behind the vehicle.
    #[error("detection is behind the vehicle")]
    BehindVehicle,
}

/// Forward path implied by the instantaneous wheel angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathModel {
    Straight,
    /// Constant-curvature arc; positive curves left. The turn center sits
    /// at (0, 1/curvature) in the body frame.
    Arc { curvature: f64 },
}

impl PathModel {
    /// Bicycle model: curvature = tan(wheel angle) / wheelbase.
    pub fn from_vehicle(vehicle: &VehicleState) -> Self {
        let curvature = vehicle.wheel_angle_rad.tan() / vehicle.wheelbase_m;
        if curvature.abs() < STRAIGHT_CURVATURE_EPS {
            PathModel::Straight
        } else {
            PathModel::Arc { curvature }
        }
    }

    pub fn curvature(&self) -> f64 {
        match self {
            PathModel::Straight => 0.0,
            PathModel::Arc { curvature } => *curvature,
        }
    }
}

/// A detection's position decomposed relative to the vehicle path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathRelativePosition {
    /// Arc length from the vehicle to the foot of the perpendicular onto
    /// the path, meters, >= 0.
    pub along_m: f64,
    /// Unsigned distance from the path, meters, >= 0.
    pub lateral_m: f64,
}

/// Decomposes a body-frame position into (along, lateral) relative to the
/// path the vehicle's wheel angle projects. Positions at or behind the
/// vehicle's path-start are rejected.
pub fn path_relative(position: Point3, vehicle: &VehicleState) -> Result<PathRelativePosition, PathError> {
    match PathModel::from_vehicle(vehicle) {
        PathModel::Straight => {
            if position.x <= 0.0 {
                return Err(PathError::BehindVehicle);
            }
            Ok(PathRelativePosition { along_m: position.x, lateral_m: position.y.abs() })
        }
        PathModel::Arc { curvature } => {
            let center_y = 1.0 / curvature;
            let radius = center_y.abs();
            // Vector from the turn center to the point, ground plane.
            let vx = position.x;
            let vy = position.y - center_y;
            let dist_to_center = (vx * vx + vy * vy).sqrt();
            if dist_to_center < 1e-12 {
                // At the turn center every path point is equidistant; there
                // is no defined foot, treat as not ahead.
                return Err(PathError::BehindVehicle);
            }
            // Signed CCW angle from the center->vehicle ray to the
            // center->point ray; travel direction flips with turn side.
            let v0x = 0.0;
            let v0y = -center_y;
            let cross = v0x * vy - v0y * vx;
            let dot = v0x * vx + v0y * vy;
            let ccw_angle = cross.atan2(dot);
            let travel_angle = if curvature > 0.0 { ccw_angle } else { -ccw_angle };
            if travel_angle <= 0.0 {
                return Err(PathError::BehindVehicle);
            }
            Ok(PathRelativePosition {
                along_m: radius * travel_angle,
                lateral_m: (dist_to_center - radius).abs(),
            })
        }
    }
}

/// How the Proximity speed is derived from the effective range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedLaw {
    /// Constant time-to-collision: v = range / ttc.
    Ttc,
    /// Constant-deceleration stopping distance: v = sqrt(2 * decel * range).
    Braking,
}

/// How lateral distance folds into the effective range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeForm {
    /// along + factor * lateral.
    Additive,
    /// factor * lateral alone for off-path targets (on-path targets keep
    /// their along distance). Kept for experimentation; note it ignores how
    /// far ahead an off-path target stands.
    Replacement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityParams {
    /// Multiplier converting lateral offset into extra along-path range.
    /// Larger is less conservative.
    pub lateral_scaling_factor: f64,
    /// Time-to-collision budget, seconds.
    pub ttc_s: f64,
    /// Detections whose effective range exceeds this are left to the
    /// Context layer.
    pub max_considered_range_m: f64,
    pub speed_law: SpeedLaw,
    /// Deceleration for [`SpeedLaw::Braking`], m/s^2.
    pub decel_mps2: f64,
    pub range_form: RangeForm,
}

impl Default for ProximityParams {
    fn default() -> Self {
        Self {
            lateral_scaling_factor: 3.0,
            ttc_s: 3.0,
            max_considered_range_m: 15.0,
            speed_law: SpeedLaw::Ttc,
            decel_mps2: 2.0,
            range_form: RangeForm::Additive,
        }
    }
}

/// Effective along-path range of a detection: its along distance plus the
/// scaled lateral offset (a person 3 m beside the path with factor 3 reads
/// as 9 m further down it).
pub fn effective_range(rel: &PathRelativePosition, params: &ProximityParams) -> f64 {
    match params.range_form {
        RangeForm::Additive => rel.along_m + params.lateral_scaling_factor * rel.lateral_m,
        RangeForm::Replacement => {
            if rel.lateral_m > 0.0 {
                params.lateral_scaling_factor * rel.lateral_m
            } else {
                rel.along_m
            }
        }
    }
}

/// The Proximity-layer speed in KPH, or `None` when no detection is ahead
/// and within range (the layer is undefined, not zero).
pub fn proximity_speed(
    detections: &[PedestrianDetection3D],
    vehicle: &VehicleState,
    params: &ProximityParams,
) -> Option<f64> {
    let governing_range = detections
        .iter()
        .filter_map(|d| path_relative(d.position, vehicle).ok())
        .map(|rel| effective_range(&rel, params))
        .filter(|&r| r <= params.max_considered_range_m)
        .fold(None::<f64>, |acc, r| Some(acc.map_or(r, |a| a.min(r))))?;

    let speed_mps = match params.speed_law {
        SpeedLaw::Ttc => governing_range / params.ttc_s,
        SpeedLaw::Braking => (2.0 * params.decel_mps2 * governing_range).sqrt(),
    };
    Some(MPS_TO_KPH * speed_mps)
}
