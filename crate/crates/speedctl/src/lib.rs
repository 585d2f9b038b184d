//! A layered speed controller for driving among pedestrians.
//!
//! The controller limits vehicle speed with three independent layers and
//! takes the minimum of whatever they produce on each frame:
//!
//! 1. **Legal** — the posted limit of the current road segment.
//! 2. **Context** — a speed looked up from the number of people visible in
//!    the camera frame, using a profile built from human driving logs.
//! 3. **Proximity** — a time-to-collision speed from 3D pedestrian
//!    detections near the projected vehicle path.
//!
//! Pedestrians are detected in 3D without a learned 3D detector: the point
//! cloud is clustered, clusters are projected into the image, and clusters
//! whose projections sufficiently overlap a 2D `person` bounding box are
//! validated (with a height-vs-range sanity gate rejecting mismatches).
//!
//! The crate ships as a library plus a thin `speedctl` binary. Each major
//! capability has a runnable example:
//!
//! ```text
//! cargo run -p speedctl --example project_cloud     # camera projection, XYZUV points
//! cargo run -p speedctl --example cluster_and_hull  # point-cloud clustering + hulls
//! cargo run -p speedctl --example detect_pedestrians# 2D/3D fusion on a synthetic frame
//! cargo run -p speedctl --example context_lookup    # density -> speed profile queries
//! cargo run -p speedctl --example proximity_speed   # path geometry + TTC speeds
//! cargo run -p speedctl --example build_profile     # rebuild a profile from a log
//! cargo run -p speedctl --example replay_scenario   # full controller over a scenario
//! cargo run -p speedctl --example scaling_sweep     # conservativeness vs scaling factor
//! ```
//!
//! Scenario logs are line-delimited JSON (one header record, then one record
//! per frame); see [`scenario`] for the format and a deterministic synthetic
//! generator with embedded ground truth.

pub mod camera;
pub mod context;
pub mod controller;
pub mod fusion;
pub mod proximity;
pub mod scenario;
pub mod types;

pub use camera::{CameraError, CameraModel, RigidTransform};
pub use context::{density_bin, speed_bin, DensityBin, ProfileError, ProfileSample, RoadContext, SpeedProfile};
pub use controller::{
    compose_speed, process_frame, process_scenario, ControllerConfig, LayerSpeeds, LegalLimits,
    SpeedDecision, DEFAULT_LEGAL_KPH,
};
pub use fusion::{
    classify_polygons, detect_pedestrians_3d, euclidean_cluster, ground_hull, Cluster, FitError,
    FusionParams, HullError, HullParams, MatchKind, MatchResult, PedestrianDetection3D,
    RangeHeightModel,
};
pub use proximity::{
    effective_range, path_relative, proximity_speed, PathError, PathModel, PathRelativePosition,
    ProximityParams, RangeForm, SpeedLaw,
};
pub use scenario::{
    evaluate, generate_scenario, EvalReport, GenSpec, RoadSegment, ScenarioError, ScenarioFile,
    ScenarioHeader,
};
pub use types::{BBox2D, ClassLabel, Point3, PointUV, RoadType, SceneFrame, VehicleState};
