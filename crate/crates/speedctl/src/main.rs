//! Thin CLI over the speedctl library.
//!
//! Exit codes: 0 on success, 2 on any input validation or parse failure.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use speedctl::context::{ProfileSample, SpeedProfile, DENSITY_BIN_COUNT};
use speedctl::controller::{process_scenario, write_decisions_csv, read_decisions_csv, ControllerConfig};
use speedctl::fusion::{FusionParams, RangeHeightModel};
use speedctl::proximity::{ProximityParams, RangeForm, SpeedLaw};
use speedctl::scenario::{evaluate, generate_scenario, write_report, GenSpec, ScenarioFile};
use speedctl::RoadContext;

#[derive(Parser)]
#[command(name = "speedctl", version, about = "Layered pedestrian-aware speed controller")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpeedLawArg {
    Ttc,
    Braking,
}

#[derive(Clone, Copy, ValueEnum)]
enum RangeFormArg {
    Additive,
    Replacement,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario through the controller and write the decision CSV.
    Run {
        /// Scenario log to replay.
        #[arg(long)]
        scenario: PathBuf,
        /// Speed profile table; defaults to the bundled profile.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Height-vs-range model record; defaults to a permissive model
        /// (sanity gate wide open).
        #[arg(long)]
        range_height_model: Option<PathBuf>,
        /// Lateral scaling factor (larger is less conservative).
        #[arg(long, default_value_t = 3.0)]
        scaling_factor: f64,
        /// Time-to-collision budget, seconds.
        #[arg(long, default_value_t = 3.0)]
        ttc: f64,
        #[arg(long, value_enum, default_value = "ttc")]
        speed_law: SpeedLawArg,
        /// Deceleration for the braking speed law, m/s^2.
        #[arg(long, default_value_t = 2.0)]
        decel: f64,
        /// Ignore detections beyond this effective range, meters.
        #[arg(long, default_value_t = 15.0)]
        max_range: f64,
        /// How lateral offsets fold into the effective range.
        #[arg(long, value_enum, default_value = "additive")]
        range_form: RangeFormArg,
        /// Output decision CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic scenario from a generation spec (JSON).
    GenScenario {
        /// Generation spec file.
        #[arg(long)]
        spec: PathBuf,
        /// Output scenario path.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build a speed profile from a scenario log of human driving.
    BuildProfile {
        /// Input scenario log.
        #[arg(long)]
        input: PathBuf,
        /// Output profile table.
        #[arg(long, alias = "output")]
        out: PathBuf,
        /// Also write the discretised speed tallies behind each bin.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Evaluate a decision CSV against its scenario and write a report.
    Compare {
        /// Decision CSV produced by `run`.
        #[arg(long)]
        decisions: PathBuf,
        /// The scenario those decisions came from.
        #[arg(long)]
        scenario: PathBuf,
        /// Report directory (created if needed).
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run {
            scenario,
            profile,
            range_height_model,
            scaling_factor,
            ttc,
            speed_law,
            decel,
            max_range,
            range_form,
            out,
        } => {
            let scenario = ScenarioFile::load(&scenario).map_err(|e| e.to_string())?;
            let profile = match profile {
                Some(path) => SpeedProfile::load(&path).map_err(|e| e.to_string())?,
                None => SpeedProfile::builtin(),
            };
            let range_height = match range_height_model {
                Some(path) => RangeHeightModel::load(&path).map_err(|e| e.to_string())?,
                None => RangeHeightModel::permissive(),
            };
            if scaling_factor <= 0.0 || ttc <= 0.0 || decel <= 0.0 || max_range <= 0.0 {
                return Err("scaling factor, ttc, decel, and max range must all be positive".into());
            }
            let proximity = ProximityParams {
                lateral_scaling_factor: scaling_factor,
                ttc_s: ttc,
                max_considered_range_m: max_range,
                speed_law: match speed_law {
                    SpeedLawArg::Ttc => SpeedLaw::Ttc,
                    SpeedLawArg::Braking => SpeedLaw::Braking,
                },
                decel_mps2: decel,
                range_form: match range_form {
                    RangeFormArg::Additive => RangeForm::Additive,
                    RangeFormArg::Replacement => RangeForm::Replacement,
                },
            };
            let config = ControllerConfig::for_scenario(
                &scenario,
                profile,
                range_height,
                FusionParams::default(),
                proximity,
            );
            let decisions = process_scenario(&scenario, &config);
            let mut writer = BufWriter::new(File::create(&out).map_err(|e| e.to_string())?);
            write_decisions_csv(&decisions, &mut writer).map_err(|e| e.to_string())?;
            writer.flush().map_err(|e| e.to_string())?;
            eprintln!("wrote {} decisions to {}", decisions.len(), out.display());
            Ok(())
        }
        Command::GenScenario { spec, out, seed } => {
            let body = std::fs::read_to_string(&spec).map_err(|e| e.to_string())?;
            let mut spec: GenSpec = serde_json::from_str(&body).map_err(|e| e.to_string())?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            if spec.duration_s <= 0.0 || spec.frame_rate_hz <= 0.0 {
                return Err("duration and frame rate must be positive".into());
            }
            let scenario = generate_scenario(&spec);
            scenario.save(&out).map_err(|e| e.to_string())?;
            eprintln!("wrote {} frames to {}", scenario.frames.len(), out.display());
            Ok(())
        }
        Command::BuildProfile { input, out, histogram } => {
            let scenario = ScenarioFile::load(&input).map_err(|e| e.to_string())?;
            let samples: Vec<ProfileSample> = scenario
                .frames
                .iter()
                .map(|f| ProfileSample {
                    speed_kph: f.vehicle.speed_kph,
                    pedestrian_count: f.person_count(),
                    road_type: f.road_type,
                })
                .collect();
            let profile = SpeedProfile::build(&samples);
            profile.save(&out).map_err(|e| e.to_string())?;
            if let Some(path) = histogram {
                // Fractions are normalised within each density bin so
                // differently-sized bins plot on one axis.
                let mut text = String::from("context,density_bin,speed_bin_lower_kph,count,fraction\n");
                for context in RoadContext::ALL {
                    let name = match context {
                        RoadContext::Shared => "shared",
                        RoadContext::Regular => "regular",
                    };
                    for bin in 0..DENSITY_BIN_COUNT {
                        let tallies = profile.speed_tallies(context, bin);
                        let total: u64 = tallies.iter().sum();
                        for (sb, count) in tallies.iter().enumerate() {
                            if *count > 0 {
                                text.push_str(&format!(
                                    "{name},{bin},{},{count},{}\n",
                                    sb as f64 * 5.0,
                                    *count as f64 / total as f64
                                ));
                            }
                        }
                    }
                }
                std::fs::write(&path, text).map_err(|e| e.to_string())?;
            }
            eprintln!("wrote profile from {} samples to {}", samples.len(), out.display());
            Ok(())
        }
        Command::Compare { decisions, scenario, out } => {
            let decision_stream = read_decisions_csv(BufReader::new(
                File::open(&decisions).map_err(|e| e.to_string())?,
            ))
            .map_err(|e| e.to_string())?;
            let scenario = ScenarioFile::load(&scenario).map_err(|e| e.to_string())?;
            let report = evaluate(&decision_stream, &scenario).map_err(|e| e.to_string())?;
            write_report(&report, &out).map_err(|e| e.to_string())?;
            eprint!("{}", report.summary_text());
            eprintln!("report written to {}", out.display());
            Ok(())
        }
    }
}
