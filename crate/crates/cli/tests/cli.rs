use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hgpprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgpprep"))
        .args(args)
        .env_remove("HGPPREP_WORKERS")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn construct_rep3(dir: &Path) -> String {
    let b = dir.join("b13");
    ok(&hgpprep(&["construct", "--classical", "rep:d=3", "--distance", "--out", b.to_str().unwrap()]));
    b.to_str().unwrap().to_string()
}

/// CSV text without the wall-time column.
fn strip_wall(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const GRID: &str = r#"{"code": {"bundle": "b13"}, "thickenings": ["rep:3"], "noise_grid": [0.01, 0.03],
    "trials": 100, "master_seed": 5}"#;

#[test]
fn verify_bounds_passes_on_small_surface_code() {
    let dir = tempfile::tempdir().unwrap();
    let b = construct_rep3(dir.path());
    let out = ok(&hgpprep(&["verify-bounds", "--bundle", &b, "--thickening", "rep:3"]));
    let reports: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(reports.len(), 4, "{out}");
    assert!(reports.iter().all(|l| l.starts_with("PASS") && l.contains("worst_ratio")), "{out}");
}

#[test]
fn simulate_writes_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    construct_rep3(dir.path());
    let cfg = write_config(dir.path(), GRID);
    let out = dir.path().join("run");
    ok(&hgpprep(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", "1"]));
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# schema: hgpprep-results/1");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].contains(",protocol,rep:3,x,0.01,100,"));
    assert!(lines[3].contains(",protocol,rep:3,x,0.03,100,"));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["trials"], 100);
    assert_eq!(manifest["config"]["noise_grid"][1], 0.03);
    assert_eq!(manifest["library_version"], env!("CARGO_PKG_VERSION"));
    assert!(fs::read_to_string(out.join("run.log")).unwrap().contains("failures="));
}

#[test]
fn reruns_and_manifests_reproduce_results() {
    let dir = tempfile::tempdir().unwrap();
    construct_rep3(dir.path());
    let cfg = write_config(dir.path(), GRID);
    let run = |name: &str, config: &str, workers: &str| {
        let out = dir.path().join(name);
        ok(&hgpprep(&["simulate", "--config", config, "--out", out.to_str().unwrap(), "--workers", workers]));
        out
    };
    let a = run("a", &cfg, "1");
    let b = run("b", &cfg, "3");
    let manifest = a.join("manifest.json");
    let c = run("c", manifest.to_str().unwrap(), "2");
    let reference = strip_wall(&a.join("results.csv"));
    assert_eq!(reference, strip_wall(&b.join("results.csv")));
    assert_eq!(reference, strip_wall(&c.join("results.csv")));
}

#[test]
fn worker_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    construct_rep3(dir.path());
    let cfg = write_config(dir.path(), GRID);
    let out = dir.path().join("run");
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_hgpprep"))
            .args(["simulate", "--config", &cfg, "--out", out.to_str().unwrap()])
            .env("HGPPREP_WORKERS", workers)
            .output()
            .unwrap()
    };
    ok(&run("2"));
    assert!(fs::read_to_string(out.join("run.log")).unwrap().contains("workers 2"));
    let bad = run("many");
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("HGPPREP_WORKERS"));
}

#[test]
fn malformed_configs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    construct_rep3(dir.path());
    for (body, field) in [
        (GRID.replace("[0.01, 0.03]", "[]"), "noise_grid"),
        (GRID.replace("\"trials\": 100", "\"trials\": 0"), "trials"),
        (GRID.replace("rep:3", "cube:3"), "thickenings"),
        (GRID.replace("b13", "missing"), "code.bundle"),
        (GRID.replace("\"trials\"", "\"trails\""), "trails"),
    ] {
        let cfg = write_config(dir.path(), &body);
        let out = hgpprep(&["simulate", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
        assert!(!out.status.success(), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "expected {field} in {err}");
    }
}

#[test]
fn plot_data_groups_series() {
    let dir = tempfile::tempdir().unwrap();
    construct_rep3(dir.path());
    let body = GRID
        .replace("[\"rep:3\"]", "[\"rep:1\", \"rep:3\"]")
        .replace("\"trials\": 100", "\"trials\": 20, \"baseline\": true");
    let cfg = write_config(dir.path(), &body);
    let out = dir.path().join("run");
    ok(&hgpprep(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", "1"]));
    let plot = ok(&hgpprep(&["plot-data", "--results", out.join("results.csv").to_str().unwrap()]));
    let rows: Vec<&str> = plot.lines().skip(2).collect();
    assert_eq!(rows.len(), 8);
    let mut series: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    series.dedup();
    assert_eq!(series.len(), 4, "{plot}");

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# schema: hgpprep-results/1\nrun_id,code_id,kind,thickening,experiment,p,trials,failures_x,failures_z,failures,rate,stderr,wall_ms\n").unwrap();
    let o = hgpprep(&["plot-data", "--results", empty.to_str().unwrap()]);
    assert_eq!(ok(&o).lines().count(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    fs::write(&empty, "# schema: hgpprep-results/0\n").unwrap();
    assert!(!hgpprep(&["plot-data", "--results", empty.to_str().unwrap()]).status.success());
}

#[test]
fn decode_repairs_a_single_error() {
    let dir = tempfile::tempdir().unwrap();
    let b = construct_rep3(dir.path());
    let hz = Path::new(&b).join("hz.alist");
    // Column 4 of H_Z is qubit (1, 1) of the left sector.
    let hz_text = fs::read_to_string(&hz).unwrap();
    let h = hgpprep::gf2::io::read_alist(&hz_text).unwrap();
    let e = hgpprep::gf2::BinaryVector::from_support(13, &[4]).unwrap();
    let s = dir.path().join("s.txt");
    fs::write(&s, h.mul_vec(&e).to_bitstring()).unwrap();
    let out = ok(&hgpprep(&["decode", "--matrix", hz.to_str().unwrap(), "--syndrome", s.to_str().unwrap()]));
    let c = hgpprep::gf2::BinaryVector::from_bitstring(out.trim()).unwrap();
    assert_eq!(h.mul_vec(&c), h.mul_vec(&e));
    assert_eq!(c.weight(), 1);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0101").unwrap();
    let o = hgpprep(&["decode", "--matrix", hz.to_str().unwrap(), "--syndrome", bad.to_str().unwrap()]);
    assert!(!o.status.success());
}
