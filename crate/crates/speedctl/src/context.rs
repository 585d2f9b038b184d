//! Pedestrian-density speed lookup (the Context layer).
//!
//! Human driving logs are folded into a `SpeedProfile`: for each road
//! context and each pedestrian-density bin (width 3: 0-2, 3-5, 6-8, 9+),
//! the mean of the raw recorded speeds. Live queries map the current count
//! of visible people to the bin mean. Shared and semi-shared roads use one
//! column; regular roads another. A profile built from campus driving logs
//! ships as the default so the controller runs without any log data.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::types::RoadType;

/// Number of pedestrian-density bins.
pub const DENSITY_BIN_COUNT: usize = 4;
/// Width of the closed density bins.
pub const DENSITY_BIN_WIDTH: usize = 3;
/// Width of the speed discretisation used for tallies, KPH.
pub const SPEED_BIN_KPH: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("no samples for context {context:?}, density bin {bin}")]
    MissingBin { context: RoadContext, bin: usize },
    #[error("profile file io error: {0}")]
    Io(String),
    #[error("profile file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The two driving contexts the profile distinguishes. Shared and
/// semi-shared roads behave alike and share a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoadContext {
    Shared,
    Regular,
}

impl RoadContext {
    pub const ALL: [RoadContext; 2] = [RoadContext::Shared, RoadContext::Regular];

    fn index(self) -> usize {
        match self {
            RoadContext::Shared => 0,
            RoadContext::Regular => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            RoadContext::Shared => "shared",
            RoadContext::Regular => "regular",
        }
    }
}

impl RoadType {
    /// The speed-profile context this road type falls under.
    pub fn context(self) -> RoadContext {
        match self {
            RoadType::Shared | RoadType::SemiShared => RoadContext::Shared,
            RoadType::Regular => RoadContext::Regular,
        }
    }
}

/// One pedestrian-density bin: `[lower, upper]` counts, open-ended last bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityBin {
    pub index: usize,
    pub lower: usize,
    /// `None` for the open 9+ bin.
    pub upper: Option<usize>,
}

/// Maps a pedestrian count to its density bin. Count 0 shares the 0-2 bin
/// (with nobody visible the legal layer effectively governs anyway).
pub fn density_bin(count: usize) -> DensityBin {
    let index = (count / DENSITY_BIN_WIDTH).min(DENSITY_BIN_COUNT - 1);
    DensityBin {
        index,
        lower: index * DENSITY_BIN_WIDTH,
        upper: (index < DENSITY_BIN_COUNT - 1).then_some(index * DENSITY_BIN_WIDTH + DENSITY_BIN_WIDTH - 1),
    }
}

/// Discretises a speed into 5 KPH bins: bin `b` covers `[5b, 5b + 5)`.
pub fn speed_bin(speed_kph: f64) -> usize {
    assert!(speed_kph >= 0.0, "speed must be non-negative");
    (speed_kph / SPEED_BIN_KPH).floor() as usize
}

/// One log observation feeding the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub speed_kph: f64,
    /// Number of `person` bboxes visible in the frame.
    pub pedestrian_count: usize,
    pub road_type: RoadType,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileCell {
    /// Mean of raw (undiscretised) speeds, KPH. Absent when the bin never
    /// received a sample (the bundled profile has all means but no counts).
    pub mean_kph: Option<f64>,
    pub samples: u64,
}

/// The density-to-speed lookup, per road context, plus the discretised
/// speed tallies behind each mean (kept for histogram emission).
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedProfile {
    cells: [[ProfileCell; DENSITY_BIN_COUNT]; 2],
    tallies: [[Vec<u64>; DENSITY_BIN_COUNT]; 2],
}

impl SpeedProfile {
    pub fn empty() -> Self {
        Self { cells: Default::default(), tallies: Default::default() }
    }

    /// The profile bundled with the crate, built from logged human driving
    /// around a university campus.
    pub fn builtin() -> Self {
        let mut p = Self::empty();
        let shared = [14.7, 13.0, 11.1, 8.5];
        let regular = [20.0, 19.7, 18.2, 18.8];
        for bin in 0..DENSITY_BIN_COUNT {
            p.cells[0][bin] = ProfileCell { mean_kph: Some(shared[bin]), samples: 0 };
            p.cells[1][bin] = ProfileCell { mean_kph: Some(regular[bin]), samples: 0 };
        }
        p
    }

    /// Folds log samples into a profile: group by (context, density bin),
    /// mean the raw speeds, and tally the 5 KPH discretised speeds.
    pub fn build(samples: &[ProfileSample]) -> Self {
        let mut sums = [[0.0f64; DENSITY_BIN_COUNT]; 2];
        let mut profile = Self::empty();
        for s in samples {
            let ctx = s.road_type.context().index();
            let bin = density_bin(s.pedestrian_count).index;
            sums[ctx][bin] += s.speed_kph;
            profile.cells[ctx][bin].samples += 1;
            let sb = speed_bin(s.speed_kph);
            let tally = &mut profile.tallies[ctx][bin];
            if tally.len() <= sb {
                tally.resize(sb + 1, 0);
            }
            tally[sb] += 1;
        }
        for (ctx_sums, ctx_cells) in sums.iter().zip(profile.cells.iter_mut()) {
            for (sum, cell) in ctx_sums.iter().zip(ctx_cells.iter_mut()) {
                if cell.samples > 0 {
                    cell.mean_kph = Some(sum / cell.samples as f64);
                }
            }
        }
        profile
    }

    /// The Context-layer speed for a frame with `pedestrian_count` visible
    /// people on a road of `road_type`.
    pub fn context_speed(&self, road_type: RoadType, pedestrian_count: usize) -> Result<f64, ProfileError> {
        let context = road_type.context();
        let bin = density_bin(pedestrian_count).index;
        self.cells[context.index()][bin]
            .mean_kph
            .ok_or(ProfileError::MissingBin { context, bin })
    }

    pub fn cell(&self, context: RoadContext, bin: usize) -> &ProfileCell {
        &self.cells[context.index()][bin]
    }

    /// Discretised speed tallies behind a cell, indexed by 5 KPH speed bin.
    pub fn speed_tallies(&self, context: RoadContext, bin: usize) -> &[u64] {
        &self.tallies[context.index()][bin]
    }

    /// Writes the lookup as a plain text table:
    /// `context bin_lower bin_upper_or_+ mean_kph_or_- sample_count`.
    pub fn save(&self, path: &Path) -> Result<(), ProfileError> {
        let mut out = String::from("# speedctl speed profile\n# context lower upper mean_kph samples\n");
        for context in RoadContext::ALL {
            for bin_idx in 0..DENSITY_BIN_COUNT {
                let bin = density_bin(bin_idx * DENSITY_BIN_WIDTH);
                let cell = self.cell(context, bin_idx);
                let upper = bin.upper.map(|u| u.to_string()).unwrap_or_else(|| "+".into());
                let mean = cell.mean_kph.map(|m| m.to_string()).unwrap_or_else(|| "-".into());
                out.push_str(&format!(
                    "{} {} {} {} {}\n",
                    context.name(),
                    bin.lower,
                    upper,
                    mean,
                    cell.samples
                ));
            }
        }
        fs::write(path, out).map_err(|e| ProfileError::Io(e.to_string()))
    }

    /// Loads a profile table written by [`save`](Self::save). Speed tallies
    /// are not part of the file format and come back empty.
    pub fn load(path: &Path) -> Result<Self, ProfileError> {
        let body = fs::read_to_string(path).map_err(|e| ProfileError::Io(e.to_string()))?;
        let mut profile = Self::empty();
        for (idx, raw) in body.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 5 {
                return Err(ProfileError::Parse {
                    line: idx + 1,
                    message: format!("expected 5 fields, got {}", parts.len()),
                });
            }
            let context = match parts[0] {
                "shared" => RoadContext::Shared,
                "regular" => RoadContext::Regular,
                other => {
                    return Err(ProfileError::Parse {
                        line: idx + 1,
                        message: format!("unknown context `{other}`"),
                    })
                }
            };
            let lower: usize = parts[1].parse().map_err(|e| ProfileError::Parse {
                line: idx + 1,
                message: format!("bad lower bound: {e}"),
            })?;
            let bin = density_bin(lower).index;
            let mean_kph = if parts[3] == "-" {
                None
            } else {
                let mean: f64 = parts[3].parse().map_err(|e| ProfileError::Parse {
                    line: idx + 1,
                    message: format!("bad mean: {e}"),
                })?;
                if !(mean.is_finite() && mean >= 0.0) {
                    return Err(ProfileError::Parse {
                        line: idx + 1,
                        message: format!("mean speed must be finite and >= 0, got {mean}"),
                    });
                }
                Some(mean)
            };
            let samples: u64 = parts[4].parse().map_err(|e| ProfileError::Parse {
                line: idx + 1,
                message: format!("bad sample count: {e}"),
            })?;
            profile.cells[context.index()][bin] = ProfileCell { mean_kph, samples };
        }
        Ok(profile)
    }
}
