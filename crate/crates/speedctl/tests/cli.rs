//! End-to-end checks of the `speedctl` binary: the four subcommands, their
//! file formats, and the exit-code contract (0 success, 2 validation).

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_speedctl")
}

fn work_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("speedctl-cli-tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_gen_spec(path: &Path) {
    let spec = r#"{
        "duration_s": 3.0,
        "frame_rate_hz": 10.0,
        "road_type": "shared",
        "legal_kph": 40.0,
        "seed": 11,
        "speed_script": [{"t": 0.0, "value": 12.0}, {"t": 1.5, "value": 8.0}],
        "pedestrians": [{"start": [7.0, 1.0]}],
        "random_pedestrians": {"min_count": 1, "max_count": 5, "x_range": [4.0, 18.0], "y_range": [-5.0, 5.0]},
        "obstacles": [{"position": [9.0, -4.0]}]
    }"#;
    std::fs::write(path, spec).unwrap();
}

#[test]
fn full_pipeline_through_the_binary() {
    let dir = work_dir("pipeline");
    let spec = dir.join("spec.json");
    let scenario = dir.join("scene.jsonl");
    let decisions = dir.join("decisions.csv");
    let report = dir.join("report");
    write_gen_spec(&spec);

    let status = Command::new(bin())
        .args(["gen-scenario", "--spec", spec.to_str().unwrap(), "--out", scenario.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let status = Command::new(bin())
        .args([
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--scaling-factor",
            "3",
            "--ttc",
            "3",
            "--out",
            decisions.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let csv = std::fs::read_to_string(&decisions).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph"
    );
    assert_eq!(lines.count(), 30);

    let status = Command::new(bin())
        .args([
            "compare",
            "--decisions",
            decisions.to_str().unwrap(),
            "--scenario",
            scenario.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["decisions.csv", "histogram.csv", "summary.txt", "plot.gp"] {
        assert!(report.join(file).exists(), "missing report file {file}");
    }
    let summary = std::fs::read_to_string(report.join("summary.txt")).unwrap();
    assert!(summary.contains("frames                30"));
    assert!(summary.contains("frames_with_driver    30"));
}

#[test]
fn build_profile_from_generated_log() {
    let dir = work_dir("profile");
    let spec = dir.join("spec.json");
    let scenario = dir.join("scene.jsonl");
    let profile = dir.join("profile.txt");
    let tallies = dir.join("tallies.csv");
    write_gen_spec(&spec);

    for cmd in [
        vec!["gen-scenario", "--spec", spec.to_str().unwrap(), "--out", scenario.to_str().unwrap()],
        vec![
            "build-profile",
            "--input",
            scenario.to_str().unwrap(),
            "--out",
            profile.to_str().unwrap(),
            "--histogram",
            tallies.to_str().unwrap(),
        ],
    ] {
        let status = Command::new(bin()).args(&cmd).status().unwrap();
        assert!(status.success(), "command failed: {cmd:?}");
    }

    let text = std::fs::read_to_string(&profile).unwrap();
    assert!(text.lines().any(|l| l.starts_with("shared 0 2 ")));
    assert!(text.lines().any(|l| l.starts_with("regular 9 + ")));
    assert!(tallies.exists());

    // The emitted profile feeds straight back into `run`.
    let decisions = dir.join("decisions.csv");
    let status = Command::new(bin())
        .args([
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--profile",
            profile.to_str().unwrap(),
            "--out",
            decisions.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn validation_failures_exit_with_code_2() {
    let dir = work_dir("validation");

    // Non-monotonic timestamps.
    let scenario = dir.join("bad.jsonl");
    let header = r#"{"record":"header","camera":{"fx":500.0,"fy":500.0,"cx":320.0,"cy":240.0,"image_width":640,"image_height":480,"extrinsic":{"rotation":[[0.0,-1.0,0.0],[0.0,0.0,-1.0],[1.0,0.0,0.0]],"translation":[0.0,0.0,0.0]}},"segments":[]}"#;
    let frame = r#"{"record":"frame","timestamp_s":TS,"vehicle":{"speed_kph":10.0,"wheel_angle_rad":0.0,"wheelbase_m":2.5},"road_type":"shared"}"#;
    let body = format!("{header}\n{}\n{}\n", frame.replace("TS", "1.0"), frame.replace("TS", "0.5"));
    std::fs::write(&scenario, body).unwrap();
    let out = dir.join("out.csv");
    let status = Command::new(bin())
        .args(["run", "--scenario", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Unparseable scenario.
    let garbled = dir.join("garbled.jsonl");
    std::fs::write(&garbled, "{nope\n").unwrap();
    let status = Command::new(bin())
        .args(["run", "--scenario", garbled.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Mismatched decision stream for compare.
    let good = dir.join("good.jsonl");
    let body = format!("{header}\n{}\n", frame.replace("TS", "0.0"));
    std::fs::write(&good, body).unwrap();
    let decisions = dir.join("short.csv");
    std::fs::write(&decisions, "t,legal_kph,context_kph,proximity_kph,final_kph,n_2d,n_3d,driver_kph\n").unwrap();
    let status = Command::new(bin())
        .args([
            "compare",
            "--decisions",
            decisions.to_str().unwrap(),
            "--scenario",
            good.to_str().unwrap(),
            "--out",
            dir.join("report").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Bad proximity parameters.
    let status = Command::new(bin())
        .args([
            "run",
            "--scenario",
            good.to_str().unwrap(),
            "--ttc",
            "0",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_spec_seed() {
    let dir = work_dir("seed");
    let spec = dir.join("spec.json");
    write_gen_spec(&spec);
    let a = dir.join("a.jsonl");
    let b = dir.join("b.jsonl");
    let c = dir.join("c.jsonl");
    for (path, seed) in [(&a, "123"), (&b, "123"), (&c, "124")] {
        let status = Command::new(bin())
            .args([
                "gen-scenario",
                "--spec",
                spec.to_str().unwrap(),
                "--out",
                path.to_str().unwrap(),
                "--seed",
                seed,
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b, "same seed must reproduce the file bytes");
    assert_ne!(a, c, "different seed must change the scenario");
}

#[test]
fn run_accepts_speed_law_and_range_form_flags() {
    let dir = work_dir("flags");
    let spec = dir.join("spec.json");
    let scenario = dir.join("scene.jsonl");
    write_gen_spec(&spec);
    let status = Command::new(bin())
        .args(["gen-scenario", "--spec", spec.to_str().unwrap(), "--out", scenario.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    // A hand-written sanity model record, loaded through the flag.
    let model = dir.join("model.txt");
    std::fs::write(&model, "slope 900.0\nintercept 1.5\nresidual_std 25.0\n").unwrap();

    let ttc = dir.join("ttc.csv");
    let braking = dir.join("braking.csv");
    let replacement = dir.join("replacement.csv");
    let gated = dir.join("gated.csv");
    for (out, extra) in [
        (&ttc, vec![]),
        (&braking, vec!["--speed-law", "braking", "--decel", "1.5"]),
        (&replacement, vec!["--range-form", "replacement"]),
        (&gated, vec!["--range-height-model", model.to_str().unwrap()]),
    ] {
        let mut args = vec![
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--max-range",
            "15",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend(extra);
        let status = Command::new(bin()).args(&args).status().unwrap();
        assert!(status.success());
    }
    // The law changes the numbers.
    assert_ne!(std::fs::read(&ttc).unwrap(), std::fs::read(&braking).unwrap());
}
