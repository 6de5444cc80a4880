use std::path::Path;
use std::process::{Command, Output};

use subplanck_cli::output::{parse_csv, Sidecar};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subplanck")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn wigner_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["wigner", "--group", "hw", "--x0", "8", "--state", "compass", "--grid", "-2:2:41,-2:2:41", "--out", "w"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("w.csv")).unwrap()).unwrap();
    assert_eq!(rows.value.len(), 41 * 41);
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert_eq!(side.state, "compass");
    assert_eq!(side.field_max, 1.0);
    let peak = rows.value.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(peak, side.field_max);
    // x slow, p fast
    assert_eq!((rows.x[0], rows.p[0], rows.p[1]), (-2.0, -2.0, -1.9));
}

#[test]
fn su2_cat_wigner_has_two_lobes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["wigner", "--group", "su2", "--j", "30", "--state", "cat_h", "--grid", "-2:2:41,-2:2:41", "--out", "cat"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("cat.csv")).unwrap()).unwrap();
    let at = |x: f64, p: f64| {
        let k = rows.x.iter().zip(&rows.p).position(|(a, b)| (a - x).abs() < 1e-9 && (b - p).abs() < 1e-9).unwrap();
        rows.value[k]
    };
    assert!((at(1.0, 0.0) - 1.0).abs() < 1e-6 && (at(-1.0, 0.0) - 1.0).abs() < 1e-6);
    assert!(at(0.0, 0.0).abs() > 0.0);
}

#[test]
fn overlap_field_is_unit_at_origin_and_bounded() {
    let dir = tempfile::tempdir().unwrap();
    for (group, scale_flag, scale) in [("hw", "--x0", "8"), ("su2", "--j", "10")] {
        for state in ["cat_h", "compass", "cat_mixture"] {
            let out = format!("{group}_{state}");
            let o = run(dir.path(), &["overlap", "--group", group, scale_flag, scale, "--state", state, "--grid", "-3:3:31,-3:3:31", "--out", &out]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            let rows = parse_csv(&std::fs::read_to_string(dir.path().join(format!("{out}.csv"))).unwrap()).unwrap();
            let k = rows.x.iter().zip(&rows.p).position(|(a, b)| *a == 0.0 && *b == 0.0).unwrap();
            assert!((rows.value[k] - 1.0).abs() < 1e-12, "{out}");
            assert!(rows.value.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)), "{out}");
        }
    }
}

#[test]
fn hw_cat_overlap_stripes_in_axis_units() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["overlap", "--group", "hw", "--x0", "8", "--state", "cat_h", "--grid", "-4:4:17,-4:4:17", "--out", "cat"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("cat.csv")).unwrap()).unwrap();
    for k in 0..rows.value.len() {
        let odd = rows.p[k].abs() % 2.0 == 1.0;
        if odd {
            assert!(rows.value[k] < 1e-12, "({}, {})", rows.x[k], rows.p[k]);
        }
    }
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cat.json")).unwrap()).unwrap();
    assert_eq!(side.axis_unit_label.as_deref(), Some("pi/x0"));
}

#[test]
fn overlap_scan_reports_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["overlap", "--group", "su2", "--j", "10", "--state", "cat_h", "--grid", "-2:2:21,-2:2:21", "--scan", "--out", "s"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let scan: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.scan.json")).unwrap()).unwrap();
    assert!(scan[0]["min_zero_magnitude"].is_null());
    let z = scan[2]["min_zero_magnitude"].as_f64().unwrap();
    assert!((z - (std::f64::consts::PI / 40.0).tan()).abs() < 1e-9);
    assert!(dir.path().join("s.scan.csv").is_file());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = run(dir.path(), &["wigner", "--group", "su2", "--j", "5/2", "--state", "compass", "--grid", "-1:1:33,-1:1:33", "--out", out]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for ext in ["csv", "json"] {
        let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scene.toml"), "group = \"hw\"\nx0 = 6.0\nstate = \"cat_h\"\ngrid = \"-1:1:17,-1:1:17\"\nnormalize = \"raw\"\n").unwrap();
    let o = run(dir.path(), &["wigner", "--config", "scene.toml", "--x0", "8", "--out", "f"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(side.scale.x0, Some(8.0));
    assert!(side.field_max < 1.0, "raw normalization keeps the 1/(2π) scale");
}

#[test]
fn custom_state_from_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pair.toml"), "name = \"pair\"\n[[terms]]\nlabel = [1.0, 0.0]\n[[terms]]\nweight = [0.0, 1.0]\nlabel = [-1.0, 0.5]\n").unwrap();
    let o = run(dir.path(), &["overlap", "--group", "su2", "--j", "3", "--state", "pair.toml", "--grid", "-1:1:17,-1:1:17", "--out", "p"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(side.state, "pair");
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "group = \"hw\"\nx0 = \"eight\"\nstate = \"compass\"\n").unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["wigner", "--config", "bad.toml"], "x0"),
        (&["wigner", "--group", "hw", "--j", "3", "--state", "compass"], "j"),
        (&["wigner", "--group", "su2", "--state", "compass"], "j"),
        (&["wigner", "--group", "hw", "--x0", "8", "--state", "nope"], "state"),
        (&["overlap", "--group", "hw", "--x0", "8", "--state", "cat_h", "--grid", "-1:1:4,-1:1:20"], "grid"),
        (&["wigner", "--group", "hw", "--x0", "8", "--state", "cat_h", "--format", "png"], "format"),
    ];
    for (args, field) in cases {
        let o = run(dir.path(), args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn scaling_report_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["scaling", "--group", "hw", "--state", "compass", "--scales", "6,8,10,12", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let exponent = r["tiles"]["fit"]["exponent"].as_f64().unwrap();
    assert!((exponent + 2.0).abs() < 0.1, "{exponent}");
    assert_eq!(r["enhancement"]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn validate_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", "--level", "quick", "--out", "v.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    assert!(dir.path().join("v.json").is_file());
}

#[test]
fn coherent_center_accepts_negative_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["wigner", "--group", "hw", "--x0", "1", "--state", "coherent", "--center", "-1,0.5", "--grid", "-3:3:31,-3:3:31", "--out", "c"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = parse_csv(&std::fs::read_to_string(dir.path().join("c.csv")).unwrap()).unwrap();
    let k = rows.value.iter().position(|v| *v == 1.0).unwrap();
    assert_eq!((rows.x[k], rows.p[k]), (-2.0, 1.0));
}
