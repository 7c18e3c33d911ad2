use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn morphglide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphglide"))
        .args(args)
        .env_remove("MORPHGLIDE_DATA")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let o = morphglide(args);
    assert!(
        o.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let o = morphglide(args);
    assert!(!o.status.success(), "{args:?} should fail");
    String::from_utf8(o.stderr).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Numeric rows of an emitted CSV, comments and header skipped.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn inflation_beyond_the_table_exits_nonzero() {
    let out = tempfile::tempdir().unwrap();
    let err = fails(&["deform", "--inflation", "200", "--out", s(out.path())]);
    assert!(err.contains("200"), "{err}");
}

#[test]
fn empty_alpha_grid_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[sweep]\nalphas_deg = []\n");
    let err = fails(&["polar", "--config", s(&cfg), "--out", s(dir.path())]);
    assert!(err.contains("alphas_deg"), "{err}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[sweep]\nalpha_deg = [1.0]\n");
    let err = fails(&["fit-pressure", "--config", s(&cfg), "--out", s(dir.path())]);
    assert!(err.contains("alpha_deg"), "{err}");
}

#[test]
fn malformed_files_report_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "max_workers = 1\n[sweep\n");
    let err = fails(&["fit-pressure", "--config", s(&cfg), "--out", s(dir.path())]);
    assert!(err.contains("line 2"), "{err}");

    let scen = write(dir.path(), "g.toml", "n_cycles = 3\nspeed_mps = = 0.26\n");
    let err = fails(&["glide", "--scenario", s(&scen), "--out", s(dir.path())]);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_explicit_data_dir_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "data_dir = \"/nonexistent/morphglide\"\n");
    let err = fails(&["fit-pressure", "--config", s(&cfg), "--out", s(dir.path())]);
    assert!(err.contains("does not exist"), "{err}");
}

#[test]
fn pressure_fit_table_is_stamped() {
    let out = tempfile::tempdir().unwrap();
    ok(&["fit-pressure", "--out", s(out.path())]);
    let text = std::fs::read_to_string(out.path().join("pressure_fit.csv")).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with(&format!("# morphglide {} config_sha256=", env!("CARGO_PKG_VERSION"))));
    assert_eq!(rows(&out.path().join("pressure_fit.csv")).len(), 4);
}

#[test]
fn zero_inflation_profile_is_the_baseline_section() {
    let out = tempfile::tempdir().unwrap();
    ok(&["deform", "--inflation", "0", "--out", s(out.path())]);
    let camber = rows(&out.path().join("camber_infl0.csv"));
    assert!(!camber.is_empty());
    for r in camber {
        let y: f64 = r[1].parse().unwrap();
        assert!(y.abs() < 1e-12, "camber {y}");
    }
    let report = rows(&out.path().join("deform_report.csv"));
    assert_eq!(report[0][1], "0");
    assert_eq!(report[0][5], "", "no data, no rms");
}

#[test]
fn identical_glide_configurations_report_no_gain() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(
        dir.path(),
        "same.toml",
        "speed_mps = 0.26\ndepth_amplitude_m = 100.0\nn_cycles = 2\nrigid_inflation_ml = 15.0\ninitial_inflation_ml = 15.0\n\n[[schedule]]\ncycle = 0\ninflation_ml = 15.0\n",
    );
    ok(&["glide", "--scenario", s(&scen), "--out", s(dir.path()), "--format", "json"]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("glide_comparison.json")).unwrap()).unwrap();
    let c = &doc["data"]["comparison"];
    assert_eq!(c["eta_gain_pct"], 0.0);
    assert_eq!(c["range_gain_pct"], 0.0);
    assert_eq!(doc["data"]["path_range_gain_pct"], 0.0);
}

#[test]
fn default_polar_grid_at_one_speed() {
    let out = tempfile::tempdir().unwrap();
    ok(&["polar", "--speed", "0.26", "--out", s(out.path())]);
    let mut polars: Vec<_> = std::fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("polar_Re"))
        .collect();
    polars.sort();
    assert_eq!(polars.len(), 6, "{polars:?}");
    for v in [0, 15, 30, 60, 90, 120] {
        let name = format!("polar_Re59800_infl{v}.csv");
        assert!(polars.contains(&name), "{name} missing from {polars:?}");
        let r = rows(&out.path().join(&name));
        assert_eq!(r.len(), 17);
        let alphas: Vec<f64> = r.iter().map(|r| r[0].parse().unwrap()).collect();
        assert_eq!(alphas, (-8..=8).map(f64::from).collect::<Vec<_>>());
    }
}

#[test]
fn vehicle_tables_for_the_rigid_wing() {
    let out = tempfile::tempdir().unwrap();
    ok(&["vehicle", "--speed", "0.26", "--inflation", "0,15", "--out", s(out.path())]);
    let eff = rows(&out.path().join("efficiency_U0.26.csv"));
    let at_zero = eff.iter().find(|r| r[0] == "0" && r[1] == "0").unwrap();
    let eta: f64 = at_zero[6].parse().unwrap();
    assert!(eta.abs() < 1e-9, "rigid eta at zero incidence {eta}");

    let best = rows(&out.path().join("efficiency_max_U0.26.csv"));
    assert_eq!(best.len(), 2);

    let header = std::fs::read_to_string(out.path().join("pitch_U0.26.csv")).unwrap();
    let header = header.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.contains("m_alpha_Nm_per_deg") && header.contains("abs_m_alpha_Nm_per_deg"));

    let roll = rows(&out.path().join("roll_U0.26.csv"));
    assert_eq!(roll.len(), 4);
}

#[test]
fn json_tables_parse() {
    let out = tempfile::tempdir().unwrap();
    ok(&["fit-pressure", "--format", "json", "--out", s(out.path())]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("pressure_fit.json")).unwrap()).unwrap();
    assert_eq!(doc["columns"][0], "inflation_mL");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |dir: &Path, workers: &str| {
        vec![
            "vehicle".to_string(),
            "--speed".into(),
            "0.26".into(),
            "--max-workers".into(),
            workers.into(),
            "--out".into(),
            s(dir).into(),
        ]
    };
    let run = |v: Vec<String>| ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    run(args(a.path(), "1"));
    run(args(b.path(), "3"));
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        let x = std::fs::read(a.path().join(&n)).unwrap();
        let y = std::fs::read(b.path().join(&n)).unwrap();
        assert!(x == y, "{n:?} differs");
    }
}
