//! Black-box tests of the `centerline` binary: exit-code contract, format
//! validation, determinism, and config-file precedence.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use centerline_cli::synth::synthetic_scene;
use centerline_core::grid::GridSpec;
use centerline_core::io::SceneFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_centerline"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_scene(path: &Path, scene: &SceneFile) {
    scene.save(path).unwrap();
}

fn small_scene(seed: u64) -> SceneFile {
    let spec = GridSpec::new(120, 80, 0.5, [0.0, 0.0], -10.0, 10.0).unwrap();
    synthetic_scene(&spec, seed, 3)
}

#[test]
fn malformed_scene_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let out = run(&[
        "targets",
        "--gt",
        bad.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn empty_instance_list_warns_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let scene = SceneFile {
        spec: GridSpec::bev_default(),
        instances: vec![],
        edges: vec![],
        footprint: None,
    };
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &scene);
    let out_dir = dir.path().join("targets");
    let out = run(&[
        "targets",
        "--gt",
        gt.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(!out_dir.exists() || fs::read_dir(&out_dir).unwrap().next().is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no instances"));
}

#[test]
fn off_grid_instance_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut scene = small_scene(3);
    // push one centerline far outside the grid footprint
    let far =
        centerline_core::polyline::Polyline3D::new(vec![[500.0, 500.0, 0.0], [520.0, 500.0, 0.0]])
            .unwrap();
    scene.instances[0].polyline = far;
    scene.instances[0].bezier_cp = None;
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &scene);
    let out = run(&[
        "targets",
        "--gt",
        gt.to_str().unwrap(),
        "--out",
        dir.path().join("t").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance 0"));
}

#[test]
fn targets_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &small_scene(5));
    for name in ["a", "b"] {
        let out = run(&[
            "targets",
            "--gt",
            gt.to_str().unwrap(),
            "--out",
            dir.path().join(name).to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    for entry in fs::read_dir(dir.path().join("a")).unwrap() {
        let entry = entry.unwrap();
        let other = dir.path().join("b").join(entry.file_name());
        assert_eq!(
            fs::read(entry.path()).unwrap(),
            fs::read(&other).unwrap(),
            "{:?} differs between runs",
            entry.file_name()
        );
    }

    // byte sizes follow the header arithmetic: header line + newline +
    // 4·h·w·c payload bytes
    for entry in fs::read_dir(dir.path().join("a")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("grid") {
            continue;
        }
        let bytes = fs::read(&path).unwrap();
        let newline = bytes.iter().position(|&b| b == b'\n').unwrap();
        let header: serde_json::Value = serde_json::from_slice(&bytes[..newline]).unwrap();
        let expected = newline
            + 1
            + 4 * (header["h"].as_u64().unwrap()
                * header["w"].as_u64().unwrap()
                * header["c"].as_u64().unwrap()) as usize;
        assert_eq!(bytes.len(), expected, "{} size mismatch", path.display());
    }
}

#[test]
fn reconstruct_contract_points_and_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &small_scene(9));
    let targets = dir.path().join("targets");
    assert_eq!(
        code(&run(&[
            "targets",
            "--gt",
            gt.to_str().unwrap(),
            "--out",
            targets.to_str().unwrap(),
        ])),
        0
    );

    let rec = dir.path().join("rec.json");
    let out = run(&[
        "reconstruct",
        "--pred",
        targets.to_str().unwrap(),
        "--out",
        rec.to_str().unwrap(),
        "--points",
        "11",
    ]);
    assert_eq!(code(&out), 0);
    let scene = SceneFile::load(&rec).unwrap();
    assert_eq!(scene.instances.len(), 3);
    for inst in &scene.instances {
        assert_eq!(inst.polyline.len(), 11);
    }

    // missing manifest directory
    let out = run(&[
        "reconstruct",
        "--pred",
        dir.path().join("nope").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &small_scene(11));
    let targets = dir.path().join("targets");
    assert_eq!(
        code(&run(&[
            "targets",
            "--gt",
            gt.to_str().unwrap(),
            "--out",
            targets.to_str().unwrap(),
        ])),
        0
    );

    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"pred": "{}", "points": 5}}"#,
            targets.to_str().unwrap().replace('\\', "/")
        ),
    )
    .unwrap();

    // config alone: 5 points
    let rec = dir.path().join("rec5.json");
    let out = run(&[
        "reconstruct",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        rec.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        SceneFile::load(&rec).unwrap().instances[0].polyline.len(),
        5
    );

    // explicit flag beats the config value
    let rec = dir.path().join("rec9.json");
    let out = run(&[
        "reconstruct",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        rec.to_str().unwrap(),
        "--points",
        "9",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        SceneFile::load(&rec).unwrap().instances[0].polyline.len(),
        9
    );
}

#[test]
fn evaluate_empty_predictions_exits_zero_with_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.json");
    write_scene(&gt, &small_scene(13));
    let empty = dir.path().join("empty.json");
    write_scene(
        &empty,
        &SceneFile {
            spec: GridSpec::bev_default(),
            instances: vec![],
            edges: vec![],
            footprint: None,
        },
    );
    let out = run(&[
        "evaluate",
        "--pred",
        empty.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["det_l"], 0.0);
    assert_eq!(report["det_l_ch"], 0.0);
}

#[test]
fn split_audit_missing_footprint_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut scene = small_scene(17);
    scene.footprint = None;
    let p = dir.path().join("nofp.json");
    write_scene(&p, &scene);
    let out = run(&[
        "split-audit",
        "--train",
        p.to_str().unwrap(),
        "--val",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("footprint"));
}
