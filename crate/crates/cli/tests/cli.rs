use std::path::Path;
use std::process::{Command, Output};

fn decay(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decay"))
        .args(args)
        .current_dir(dir)
        .env("DECAY_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines
        .map(|l| l.split(',').nth(i).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn css_sweep_peaks_at_the_squeeze_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(
        &[
            "css", "--beta0", "0.8", "--theta", "0", "--k", "0.1", "--omega", "1", "--t-end", "8",
            "--points", "400", "--out", "run",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("run/css_witnesses.csv")).unwrap();
    assert!(csv
        .lines()
        .next()
        .unwrap()
        .contains("sigma_qq[1/(2omega) units]"));
    let t = column(&csv, "t[1/omega units]");
    let det = column(&csv, "det[hbar^2]");
    let i = (0..det.len())
        .max_by(|&a, &b| det[a].total_cmp(&det[b]))
        .unwrap();
    assert!((t[i] - 2.168).abs() < 0.03, "{}", t[i]);
    let kt = column(&csv, "kt");
    assert!((kt[i] - 0.1 * t[i]).abs() < 1e-15);
    for f in ["summary.json", "manifest.json", "config.json"] {
        assert!(dir.path().join("run").join(f).exists(), "{f}");
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for run in ["a", "b"] {
        let out = decay(
            &[
                "gss", "--r0", "1", "--nu0", "3", "--points", "60", "--out", run,
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }
    // the manifests differ only in the recorded output directory
    for f in ["gss_witnesses.csv", "summary.json"] {
        let a = std::fs::read_to_string(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read_to_string(dir.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = decay(
        &[
            "fidelity",
            "--beta0",
            "2",
            "--theta",
            "3.141592653589793",
            "--points",
            "50",
            "--out",
            "a",
        ],
        dir.path(),
    );
    assert!(first.status.success());
    let second = decay(
        &["fidelity", "--config", "a/config.json", "--out", "b"],
        dir.path(),
    );
    assert!(
        second.status.success(),
        "{}",
        String::from_utf8_lossy(&second.stderr)
    );
    let a = std::fs::read(dir.path().join("a/fidelity.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/fidelity.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_config_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"reservoir": {"omega": 1, "k": 0.1, "nbar": 0, "temperature": 3}}"#,
    )
    .unwrap();
    let out = decay(&["css", "--config", "bad.json"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("temperature"));
}

#[test]
fn invalid_flag_value_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(&["gss", "--points", "1"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("time.n_points"));
}

#[test]
fn unknown_figure_tag_lists_the_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(&["figure", "css-wigner-even-9"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("css-wigner-even-0.8"));
    let listed = decay(&["figure", "--list"], dir.path());
    assert_eq!(String::from_utf8_lossy(&listed.stdout).lines().count(), 21);
}

#[test]
fn figure_writes_grid_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(&["figure", "vacuum-fidelity", "--out", "figs"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("figs/vacuum-fidelity/vacuum_fidelity.csv"))
        .unwrap();
    assert_eq!(column(&csv, "vacuum_fidelity_odd")[0], 0.0);
    let manifest =
        std::fs::read_to_string(dir.path().join("figs/vacuum-fidelity/manifest.json")).unwrap();
    assert!(manifest.contains("\"version\"") && manifest.contains("\"beta0\""));
}

#[test]
fn validate_reports_selected_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(&["validate", "--criteria", "4,5", "--out", "v"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("criterion 4 PASS") && stdout.contains("criterion 5 PASS"));
    assert!(dir.path().join("v/report.json").exists());
}

#[test]
fn oracle_compare_on_configured_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = decay(
        &[
            "oracle-compare",
            "--beta0",
            "0.8",
            "--r0",
            "0.5",
            "--t-end",
            "10",
            "--points",
            "3",
            "--grid-points",
            "3",
            "--out",
            "cmp",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"pass\": true"));
}
