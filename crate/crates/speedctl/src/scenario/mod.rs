//! Scenario logs: file format, synthetic generation, and evaluation.
//!
//! A scenario is line-delimited JSON: one header record (camera
//! calibration, road segments with legal limits, generation seed and ground
//! truth when synthetic) followed by one record per frame, timestamps
//! strictly increasing. The format streams and diffs cleanly; see
//! [`ScenarioFile::load`] and [`ScenarioFile::save`].

mod eval;
mod format;
mod gen;

pub use eval::{evaluate, write_report, EvalReport, LayerActivation};
pub use format::ScenarioError;
pub use gen::{
    envelope_bbox, envelope_in_frustum, generate_scenario, truth_range_height_samples, GenSpec,
    Keyframe, ObstacleSpec, PedestrianTrack, RandomPedestrians, BODY_HEIGHT_M, BODY_RADIUS_M,
};

use serde::{Deserialize, Serialize};

use crate::camera::CameraModel;
use crate::types::{Point3, RoadType, SceneFrame};

/// A road segment the scenario drives through and its posted limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoadSegment {
    pub road_type: RoadType,
    pub legal_kph: f64,
}

/// True pedestrian position for one frame of a synthetic scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub frame: usize,
    pub pedestrian: u32,
    /// Body-frame center of the pedestrian envelope.
    pub position: Point3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioHeader {
    pub camera: CameraModel,
    pub segments: Vec<RoadSegment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ground_truth: Vec<GroundTruth>,
}

/// A fully validated in-memory scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub header: ScenarioHeader,
    pub frames: Vec<SceneFrame>,
}

impl ScenarioFile {
    /// Ground-truth entries for one frame.
    pub fn truth_for_frame(&self, frame: usize) -> impl Iterator<Item = &GroundTruth> {
        self.header.ground_truth.iter().filter(move |g| g.frame == frame)
    }
}
