use std::path::Path;
use std::process::{Command, Output};

fn cartier(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartier"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn cartier")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn xi_exhaustive_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cartier(&["xi", "--p", "3", "--n", "2", "--exhaustive"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("48/48 pass"));
}

#[test]
fn tau_of_cusp_above_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let o = cartier(
        &["tau", "--p", "3", "--vars", "x,y", "--pair", "x^2+y^3:5/6"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tau = (x, y)"));
}

#[test]
fn raster_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "raster",
        "--p",
        "3",
        "--pair",
        "x+y:0",
        "--pair",
        "x*y:0",
        "--T",
        "1",
        "--depth",
        "2",
        "--out",
        "r.csv",
        "--svg",
        "r.svg",
        "--staircase",
        "--manifest",
        "m.json",
    ];
    let o = cartier(&args, dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t1_num,t1_den,t2_num,t2_den,class_hash"));
    assert_eq!(lines.count(), 100);
    assert!(std::fs::read_to_string(dir.path().join("r.svg"))
        .unwrap()
        .starts_with("<svg"));
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(m["p"], 3);
    assert_eq!(m["artifacts"].as_array().unwrap().len(), 2);
    assert!(m.get("wall_clock_ms").is_none());
}

#[test]
fn output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, out: &str| {
        let o = cartier(
            &[
                "raster",
                "--p",
                "3",
                "--pair",
                "x^2+y^3:0",
                "--T",
                "1",
                "--depth",
                "3",
                "--out",
                out,
                "--jobs",
                jobs,
                "--json",
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        (stdout(&o), std::fs::read(dir.path().join(out)).unwrap())
    };
    assert_eq!(run("1", "a.csv"), run("4", "b.csv"));
}

#[test]
fn json_document_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = cartier(
        &[
            "bracket-root",
            "--p",
            "3",
            "--e",
            "1",
            "--ideal",
            "x^4, y^5",
            "--json",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "bracket-root");
    assert_eq!(v["vars"], serde_json::json!(["x", "y"]));
    assert_eq!(v["result"]["basis"], "(x, y)");
    assert_eq!(v["hash"].as_str().unwrap().len(), 16);
}

#[test]
fn basis_change_reports_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let o = cartier(
        &[
            "basis-change",
            "--p",
            "3",
            "--laurent",
            "--old",
            "x",
            "--new",
            "x^-1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("xi = x^-4"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        cartier(&["tau", "--p", "3"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        cartier(
            &["tau", "--p", "4", "--vars", "x", "--pair", "x:1"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        cartier(&["xi", "--p", "3", "--n", "2"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        cartier(
            &["tau", "--p", "3", "--vars", "x", "--pair", "x:0.5"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
}
