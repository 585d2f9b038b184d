//! Scenario load/save: line-delimited JSON with full validation on load.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{ScenarioFile, ScenarioHeader};
use crate::types::SceneFrame;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("scenario invariant violated: {invariant}")]
    Validation { invariant: String },
    #[error("decision stream does not match scenario: {detail}")]
    MismatchedStreams { detail: String },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record {
    Header(ScenarioHeader),
    Frame(SceneFrame),
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::read(BufReader::new(File::open(path)?))
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, ScenarioError> {
        let mut header: Option<ScenarioHeader> = None;
        let mut frames = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let record: Record = serde_json::from_str(trimmed).map_err(|e| ScenarioError::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
            match record {
                Record::Header(h) => {
                    if header.is_some() {
                        return Err(ScenarioError::Parse {
                            line: idx + 1,
                            message: "second header record".into(),
                        });
                    }
                    if !frames.is_empty() {
                        return Err(ScenarioError::Parse {
                            line: idx + 1,
                            message: "header must precede all frames".into(),
                        });
                    }
                    header = Some(h);
                }
                Record::Frame(f) => {
                    if header.is_none() {
                        return Err(ScenarioError::Parse {
                            line: idx + 1,
                            message: "frame before header".into(),
                        });
                    }
                    frames.push(f);
                }
            }
        }
        let header = header.ok_or(ScenarioError::Parse { line: 0, message: "missing header record".into() })?;
        let scenario = ScenarioFile { header, frames };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Checks every invariant the format promises; [`load`](Self::load)
    /// runs this, generators must keep it true by construction.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.header
            .camera
            .validate()
            .map_err(|e| ScenarioError::Validation { invariant: format!("camera: {e}") })?;
        for seg in &self.header.segments {
            if !(seg.legal_kph.is_finite() && seg.legal_kph >= 0.0) {
                return Err(ScenarioError::Validation {
                    invariant: format!("segment legal_kph >= 0 violated ({})", seg.legal_kph),
                });
            }
        }
        let mut last_t = f64::NEG_INFINITY;
        for (i, frame) in self.frames.iter().enumerate() {
            frame
                .validate()
                .map_err(|invariant| ScenarioError::Validation { invariant: format!("frame {i}: {invariant}") })?;
            if frame.timestamp_s <= last_t {
                return Err(ScenarioError::Validation {
                    invariant: format!(
                        "timestamps strictly increasing violated at frame {i} ({} after {})",
                        frame.timestamp_s, last_t
                    ),
                });
            }
            last_t = frame.timestamp_s;
        }
        for g in &self.header.ground_truth {
            if g.frame >= self.frames.len() {
                return Err(ScenarioError::Validation {
                    invariant: format!("ground truth references missing frame {}", g.frame),
                });
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), ScenarioError> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write(&mut out)
    }

    pub fn write<W: Write>(&self, out: &mut W) -> Result<(), ScenarioError> {
        let to_line = |r: &Record| -> Result<String, ScenarioError> {
            serde_json::to_string(r).map_err(|e| ScenarioError::Parse { line: 0, message: e.to_string() })
        };
        writeln!(out, "{}", to_line(&Record::Header(self.header.clone()))?)?;
        for frame in &self.frames {
            writeln!(out, "{}", to_line(&Record::Frame(frame.clone()))?)?;
        }
        Ok(())
    }
}
