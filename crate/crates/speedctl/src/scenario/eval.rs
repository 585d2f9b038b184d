//! Evaluation of a decision stream against its scenario.
//!
//! The headline metric is the histogram of (controller final - driver
//! speed) in 1 KPH bins: mass left of zero is conservative behaviour.
//! Activation fractions show which layer actually governed each frame.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::controller::{write_decisions_csv, SpeedDecision};
use crate::scenario::{ScenarioError, ScenarioFile};

/// Fraction of frames on which each layer equals the final speed. Ties
/// count for every tied layer, so the fractions may sum past 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerActivation {
    pub legal: f64,
    pub context: f64,
    pub proximity: f64,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub decisions: Vec<SpeedDecision>,
    /// Count of frames with `floor(final - driver)` falling in each 1 KPH
    /// bin `[k, k+1)`; total mass equals `frames_with_driver`.
    pub histogram: BTreeMap<i64, u64>,
    pub frames_with_driver: usize,
    pub mean_diff_kph: Option<f64>,
    pub median_diff_kph: Option<f64>,
    /// Fraction of driver-present frames where the controller was slower.
    pub fraction_conservative: Option<f64>,
    pub activation: LayerActivation,
}

/// Compares a decision stream with the scenario it was produced from.
/// Frame counts and timestamps must line up exactly.
pub fn evaluate(decisions: &[SpeedDecision], scenario: &ScenarioFile) -> Result<EvalReport, ScenarioError> {
    if decisions.len() != scenario.frames.len() {
        return Err(ScenarioError::MismatchedStreams {
            detail: format!("{} decisions vs {} frames", decisions.len(), scenario.frames.len()),
        });
    }
    for (i, (d, f)) in decisions.iter().zip(&scenario.frames).enumerate() {
        if d.timestamp_s != f.timestamp_s {
            return Err(ScenarioError::MismatchedStreams {
                detail: format!("timestamp mismatch at frame {i}: {} vs {}", d.timestamp_s, f.timestamp_s),
            });
        }
    }

    let mut histogram: BTreeMap<i64, u64> = BTreeMap::new();
    let mut diffs = Vec::new();
    for (d, f) in decisions.iter().zip(&scenario.frames) {
        if let Some(driver) = f.driver_kph {
            let diff = d.final_kph - driver;
            diffs.push(diff);
            *histogram.entry(diff.floor() as i64).or_insert(0) += 1;
        }
    }

    let (mean, median, conservative) = if diffs.is_empty() {
        (None, None, None)
    } else {
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let mut sorted = diffs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
        };
        let conservative = diffs.iter().filter(|&&d| d < 0.0).count() as f64 / diffs.len() as f64;
        (Some(mean), Some(median), Some(conservative))
    };

    let n = decisions.len().max(1) as f64;
    let activation = LayerActivation {
        legal: decisions.iter().filter(|d| d.layers.legal_kph == d.final_kph).count() as f64 / n,
        context: decisions.iter().filter(|d| d.layers.context_kph == d.final_kph).count() as f64 / n,
        proximity: decisions.iter().filter(|d| d.layers.proximity_kph == Some(d.final_kph)).count() as f64 / n,
    };

    Ok(EvalReport {
        decisions: decisions.to_vec(),
        histogram,
        frames_with_driver: diffs.len(),
        mean_diff_kph: mean,
        median_diff_kph: median,
        fraction_conservative: conservative,
        activation,
    })
}

impl EvalReport {
    pub fn summary_text(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "n/a".into());
        format!(
            "frames                {}\n\
             frames_with_driver    {}\n\
             mean_diff_kph         {}\n\
             median_diff_kph       {}\n\
             fraction_conservative {}\n\
             activation_legal      {:.3}\n\
             activation_context    {:.3}\n\
             activation_proximity  {:.3}\n",
            self.decisions.len(),
            self.frames_with_driver,
            fmt_opt(self.mean_diff_kph),
            fmt_opt(self.median_diff_kph),
            fmt_opt(self.fraction_conservative),
            self.activation.legal,
            self.activation.context,
            self.activation.proximity,
        )
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_lower_kph,count\n");
        for (bin, count) in &self.histogram {
            out.push_str(&format!("{bin},{count}\n"));
        }
        out
    }
}

/// Gnuplot script plotting the decision traces and the difference
/// histogram from the CSVs next to it.
const PLOT_SCRIPT: &str = r#"# Render with: gnuplot plot.gp
set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 1200,500

set output "speed_trace.png"
set xlabel "time [s]"
set ylabel "speed [KPH]"
plot "decisions.csv" using 1:8 with lines lw 2 title "driver", \
     "decisions.csv" using 1:3 with lines title "context", \
     "decisions.csv" using 1:4 with points pt 7 ps 0.3 title "proximity", \
     "decisions.csv" using 1:5 with lines lw 2 title "final"

set output "difference_histogram.png"
set style fill solid 0.6
set xlabel "final - driver [KPH]"
set ylabel "frames"
plot "histogram.csv" using ($1 + 0.5):2 with boxes notitle
"#;

/// Writes `decisions.csv`, `histogram.csv`, `summary.txt`, and `plot.gp`
/// into `out_dir` (created if needed).
pub fn write_report(report: &EvalReport, out_dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut decisions = BufWriter::new(File::create(out_dir.join("decisions.csv"))?);
    write_decisions_csv(&report.decisions, &mut decisions)?;
    decisions.flush()?;
    fs::write(out_dir.join("histogram.csv"), report.histogram_csv())?;
    fs::write(out_dir.join("summary.txt"), report.summary_text())?;
    fs::write(out_dir.join("plot.gp"), PLOT_SCRIPT)?;
    Ok(())
}
