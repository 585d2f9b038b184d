//! Per-frame composition of the Legal, Context, and Proximity layers.
//!
//! Every frame yields a `SpeedDecision` holding each layer's output and
//! their minimum. The Context layer always produces a value (zero visible
//! people falls in the lowest density bin), so the final speed is defined
//! even with no perception input; the Proximity layer stays undefined until
//! a detection is ahead and in range.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::camera::CameraModel;
use crate::context::SpeedProfile;
use crate::fusion::{detect_pedestrians_3d, FusionParams, RangeHeightModel};
use crate::proximity::{proximity_speed, ProximityParams};
use crate::scenario::{RoadSegment, ScenarioFile};
use crate::types::{RoadType, SceneFrame};

/// Legal limit applied when a road type has no configured segment.
pub const DEFAULT_LEGAL_KPH: f64 = 40.0;

/// Posted limits per road type.
#[derive(Debug, Clone)]
pub struct LegalLimits {
    limits: BTreeMap<RoadType, f64>,
    default_kph: f64,
}

impl Default for LegalLimits {
    fn default() -> Self {
        Self { limits: BTreeMap::new(), default_kph: DEFAULT_LEGAL_KPH }
    }
}

impl LegalLimits {
    pub fn from_segments(segments: &[RoadSegment]) -> Self {
        let mut limits = BTreeMap::new();
        for seg in segments {
            limits.insert(seg.road_type, seg.legal_kph);
        }
        Self { limits, default_kph: DEFAULT_LEGAL_KPH }
    }

    /// The configured limit for this road type, or the default.
    pub fn limit_for(&self, road_type: RoadType) -> f64 {
        self.limits.get(&road_type).copied().unwrap_or(self.default_kph)
    }
}

/// The three layer outputs for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSpeeds {
    pub legal_kph: f64,
    pub context_kph: f64,
    /// Undefined when no pedestrian is ahead and in range.
    pub proximity_kph: Option<f64>,
}

/// Minimum over the present layer values.
pub fn compose_speed(layers: &LayerSpeeds) -> f64 {
    let mut v = layers.legal_kph.min(layers.context_kph);
    if let Some(p) = layers.proximity_kph {
        v = v.min(p);
    }
    v
}

/// The per-frame controller record: layer outputs, their minimum, and the
/// detection counts behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedDecision {
    pub timestamp_s: f64,
    pub layers: LayerSpeeds,
    pub final_kph: f64,
    /// Number of `person` bboxes visible in 2D.
    pub n_2d: usize,
    /// Number of pedestrians detected in 3D.
    pub n_3d: usize,
    pub driver_kph: Option<f64>,
}

/// Everything `process_frame` needs besides the frame itself.
#[derive(Debug, Clone)]
pub struct ControllerConfig {
    pub camera: CameraModel,
    pub profile: SpeedProfile,
    pub range_height: RangeHeightModel,
    pub fusion: FusionParams,
    pub proximity: ProximityParams,
    pub legal: LegalLimits,
}

impl ControllerConfig {
    /// Config for a scenario: camera and legal limits from its header,
    /// everything else as given.
    pub fn for_scenario(
        scenario: &ScenarioFile,
        profile: SpeedProfile,
        range_height: RangeHeightModel,
        fusion: FusionParams,
        proximity: ProximityParams,
    ) -> Self {
        Self {
            camera: scenario.header.camera.clone(),
            profile,
            range_height,
            fusion,
            proximity,
            legal: LegalLimits::from_segments(&scenario.header.segments),
        }
    }
}

/// Runs the three layers on one frame and composes the result. Missing data
/// degrades instead of erroring: no bboxes queries the profile at count 0,
/// no points leaves the Proximity layer undefined, and a profile bin with
/// no samples falls back to the legal limit (no context constraint).
pub fn process_frame(frame: &SceneFrame, config: &ControllerConfig) -> SpeedDecision {
    let legal_kph = config.legal.limit_for(frame.road_type);
    let n_2d = frame.person_count();
    let context_kph = config.profile.context_speed(frame.road_type, n_2d).unwrap_or(legal_kph);

    let detections = detect_pedestrians_3d(frame, &config.camera, &config.range_height, &config.fusion);
    let n_3d = detections.len();
    let proximity_kph = proximity_speed(&detections, &frame.vehicle, &config.proximity);

    let layers = LayerSpeeds { legal_kph, context_kph, proximity_kph };
    SpeedDecision {
        timestamp_s: frame.timestamp_s,
        final_kph: compose_speed(&layers),
        layers,
        n_2d,
        n_3d,
        driver_kph: frame.driver_kph,
    }
}

/// Processes every frame of a scenario in timestamp order.
pub fn process_scenario(scenario: &ScenarioFile, config: &ControllerConfig) -> Vec<SpeedDecision> {
    scenario.frames.iter().map(|f| process_frame(f, config)).collect()
}

#[derive(Debug, Error)]
pub enum DecisionCsvError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("decision csv line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub const DECISION_CSV_HEADER: &str = "t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph";

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the decision stream as CSV, one row per frame, absent layer
/// values as empty fields. Output is byte-deterministic for equal input.
pub fn write_decisions_csv<W: Write>(decisions: &[SpeedDecision], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DECISION_CSV_HEADER}")?;
    for d in decisions {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            d.timestamp_s,
            d.layers.legal_kph,
            d.layers.context_kph,
            opt_field(d.layers.proximity_kph),
            d.final_kph,
            d.n_2d,
            d.n_3d,
            opt_field(d.driver_kph),
        )?;
    }
    Ok(())
}

/// Reads a decision stream written by [`write_decisions_csv`].
pub fn read_decisions_csv<R: BufRead>(input: R) -> Result<Vec<SpeedDecision>, DecisionCsvError> {
    let mut decisions = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 {
            if trimmed != DECISION_CSV_HEADER {
                return Err(DecisionCsvError::Parse {
                    line: 1,
                    message: format!("unexpected header `{trimmed}`"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 8 {
            return Err(DecisionCsvError::Parse {
                line: idx + 1,
                message: format!("expected 8 fields, got {}", fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64, DecisionCsvError> {
            fields[i].parse().map_err(|e| DecisionCsvError::Parse {
                line: idx + 1,
                message: format!("field {}: {e}", i + 1),
            })
        };
        let opt_num = |i: usize| -> Result<Option<f64>, DecisionCsvError> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let count = |i: usize| -> Result<usize, DecisionCsvError> {
            fields[i].parse().map_err(|e| DecisionCsvError::Parse {
                line: idx + 1,
                message: format!("field {}: {e}", i + 1),
            })
        };
        let layers = LayerSpeeds {
            legal_kph: num(1)?,
            context_kph: num(2)?,
            proximity_kph: opt_num(3)?,
        };
        decisions.push(SpeedDecision {
            timestamp_s: num(0)?,
            layers,
            final_kph: num(4)?,
            n_2d: count(5)?,
            n_3d: count(6)?,
            driver_kph: opt_num(7)?,
        });
    }
    Ok(decisions)
}
