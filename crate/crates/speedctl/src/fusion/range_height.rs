//! Height-vs-range sanity model for bbox/cluster matches.
//!
//! A pedestrian's bbox pixel height shrinks with range roughly as
//! `height = slope / range + intercept` (pinhole geometry predicts the 1/range
//! form). The model is fit by least squares on matched (range, height)
//! samples; matches whose bbox height deviates from the prediction by more
//! than two residual standard deviations are rejected as mismatches.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::types::BBox2D;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 3 (range, height) samples, got {got}")]
    InsufficientSamples { got: usize },
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("model file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Linear fit of bbox pixel height against inverse range, plus the residual
/// spread used by the 2-sigma gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeHeightModel {
    /// Pixels per (1/meter).
    pub slope: f64,
    /// Pixels.
    pub intercept: f64,
    /// Standard deviation of fit residuals, pixels, >= 0.
    pub residual_std: f64,
}

impl RangeHeightModel {
    /// Least-squares fit of `height ~ slope * (1/range) + intercept` over
    /// `(range_m, height_px)` samples. All ranges must be positive.
    pub fn fit(samples: &[(f64, f64)]) -> Result<Self, FitError> {
        if samples.len() < 3 {
            return Err(FitError::InsufficientSamples { got: samples.len() });
        }
        assert!(samples.iter().all(|&(r, _)| r > 0.0), "ranges must be positive");

        let n = samples.len() as f64;
        let xs: Vec<f64> = samples.iter().map(|&(r, _)| 1.0 / r).collect();
        let mean_x = xs.iter().sum::<f64>() / n;
        let mean_y = samples.iter().map(|&(_, h)| h).sum::<f64>() / n;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (x, &(_, y)) in xs.iter().zip(samples) {
            sxx += (x - mean_x) * (x - mean_x);
            sxy += (x - mean_x) * (y - mean_y);
        }
        // All samples at one range: fall back to the mean height.
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let intercept = mean_y - slope * mean_x;

        let ss_res: f64 = xs
            .iter()
            .zip(samples)
            .map(|(x, &(_, y))| {
                let r = y - (slope * x + intercept);
                r * r
            })
            .sum();
        let residual_std = (ss_res / n).sqrt();
        Ok(Self { slope, intercept, residual_std })
    }

    /// A model that accepts every match (the sanity gate wide open). Used
    /// when no calibration data is available.
    pub fn permissive() -> Self {
        Self { slope: 0.0, intercept: 0.0, residual_std: f64::INFINITY }
    }

    /// Expected bbox pixel height for a pedestrian at `range_m` meters.
    pub fn predicted_height(&self, range_m: f64) -> f64 {
        self.slope / range_m + self.intercept
    }

    /// The 2-sigma sanity gate: true iff the bbox height is within two
    /// residual standard deviations of the prediction for this range. With a
    /// zero residual spread, only (numerically) exact heights pass.
    pub fn bbox_in_bounds(&self, bbox: &BBox2D, range_m: f64) -> bool {
        let residual = (bbox.height() - self.predicted_height(range_m)).abs();
        if self.residual_std == 0.0 {
            residual <= 1e-6
        } else {
            residual <= 2.0 * self.residual_std
        }
    }

    /// Writes the model as a small key-value text record.
    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        let body = format!(
            "slope {}\nintercept {}\nresidual_std {}\n",
            self.slope, self.intercept, self.residual_std
        );
        fs::write(path, body)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let body = fs::read_to_string(path)?;
        let mut slope = None;
        let mut intercept = None;
        let mut residual_std = None;
        for (idx, raw) in body.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let value: f64 = parts
                .next()
                .ok_or_else(|| ModelFileError::Parse { line: idx + 1, message: "missing value".into() })?
                .parse()
                .map_err(|e| ModelFileError::Parse { line: idx + 1, message: format!("bad number: {e}") })?;
            match key {
                "slope" => slope = Some(value),
                "intercept" => intercept = Some(value),
                "residual_std" => residual_std = Some(value),
                other => {
                    return Err(ModelFileError::Parse {
                        line: idx + 1,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        match (slope, intercept, residual_std) {
            (Some(slope), Some(intercept), Some(residual_std)) if residual_std >= 0.0 => {
                Ok(Self { slope, intercept, residual_std })
            }
            (Some(_), Some(_), Some(bad)) => Err(ModelFileError::Parse {
                line: 0,
                message: format!("residual_std must be >= 0, got {bad}"),
            }),
            _ => Err(ModelFileError::Parse { line: 0, message: "missing slope/intercept/residual_std".into() }),
        }
    }
}
