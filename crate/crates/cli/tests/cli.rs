use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wellcond(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wellcond"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_writes_factor_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = wellcond(&["generate", "--M", "2"], dir.path());
    assert!(out.status.success());
    let v = read_json(&dir.path().join("factors_M2.json"));
    let pairs: Vec<(u64, String)> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["r"].as_u64().unwrap(), f["s"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(pairs, [(8, "1/1".into()), (4, "49/1".into()), (4, "1/49".into())]);
    assert_eq!(v["provenance"]["precision_bits"], 256);
    assert_eq!(v["provenance"]["quadrature_margin"], 16);
}

#[test]
fn generate_csv_point_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["generate", "--M", "1", "--format", "csv"], dir.path()).status.success());
    let csv = std::fs::read_to_string(dir.path().join("points_M1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn generate_m3_has_36_points_on_5_parallels() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["generate", "--M", "3"], dir.path()).status.success());
    let v = read_json(&dir.path().join("points_M3.json"));
    assert_eq!(v["points"].as_array().unwrap().len(), 36);
    assert_eq!(v["parallels"].as_array().unwrap().len(), 5);
}

#[test]
fn cond_m1_is_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["cond", "--M", "1", "--route", "coeff"], dir.path()).status.success());
    let v = read_json(&dir.path().join("cond_M1.json"));
    let mu: f64 = v["reports"][0]["mu_max"].as_str().unwrap().parse().unwrap();
    assert!((mu - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn cond_both_routes_report_difference() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["cond", "--M", "5", "--route", "both"], dir.path()).status.success());
    let v = read_json(&dir.path().join("cond_M5.json"));
    let d: f64 = v["route_rel_diff"].as_str().unwrap().parse().unwrap();
    assert!(d <= 1e-6);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn cond_certify_m4() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["cond", "--M", "4", "--certify"], dir.path()).status.success());
    let v = read_json(&dir.path().join("cond_M4.json"));
    assert_eq!(v["reports"][0]["certified"], true);
    assert_eq!(v["reports"][0]["verdicts"]["le_N"], true);
}

#[test]
fn phases_rejected_for_coefficient_route() {
    let dir = tempfile::tempdir().unwrap();
    let phases = dir.path().join("p.txt");
    std::fs::write(&phases, "0").unwrap();
    let out = wellcond(&["cond", "--M", "1", "--phases", phases.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn phases_change_the_spherical_route() {
    let dir = tempfile::tempdir().unwrap();
    let phases = dir.path().join("p.json");
    std::fs::write(&phases, "[0.1, 0.0, 0.2]").unwrap();
    let out = wellcond(
        &["cond", "--M", "2", "--route", "sphere", "--phases", phases.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&dir.path().join("cond_M2.json"));
    assert_eq!(v["provenance"]["phases"][0], 0.1);
    let mu: f64 = v["reports"][0]["mu_max"].as_str().unwrap().parse().unwrap();
    assert!((mu - 2.9321315109311174).abs() > 1e-6);
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!wellcond(&["cond", "--M", "0"], dir.path()).status.success());
    assert!(!wellcond(&["cond", "--M", "2", "--precision", "32"], dir.path()).status.success());
    assert!(!wellcond(&["cond", "--M", "2", "--format", "xml"], dir.path()).status.success());
}

#[test]
fn verify_m5_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = wellcond(&["verify", "--M", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&dir.path().join("verify_M5.json"));
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 9);
    assert_eq!(read_json(&dir.path().join("sums.json"))["pass"], true);
}

#[test]
fn verify_m3_refuses_gated_suites_but_runs_sums() {
    let dir = tempfile::tempdir().unwrap();
    let out = wellcond(&["verify", "--M", "3"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let v = read_json(&dir.path().join("verify_M3.json"));
    assert!(v["refused"].as_str().unwrap().contains("M >= 5"));
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
    assert!(dir.path().join("sums.json").exists());

    let info = tempfile::tempdir().unwrap();
    let out = wellcond(&["verify", "--M", "3", "--informational"], info.path());
    assert_ne!(out.status.code(), Some(3));
    let v = read_json(&info.path().join("verify_M3.json"));
    assert_eq!(v["reports"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_is_byte_identical_for_a_fixed_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(wellcond(&["verify", "--M", "5", "--seed", "7", "--format", "csv"], d.path()).status.success());
    }
    for name in ["verify_M5.csv", "verify_summary_M5.csv", "sums.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn sweep_rows_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["sweep", "--M", "1..8", "--format", "csv"], dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        let m: u32 = row[0].parse().unwrap();
        let n: f64 = row[1].parse().unwrap();
        let mu: f64 = row[3].parse().unwrap();
        let ratio: f64 = row[4].parse().unwrap();
        if m >= 5 {
            assert!(ratio <= 9.5);
        }
        assert!(mu >= 0.454 * n.sqrt());
    }
}

#[test]
fn sweep_empty_range_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["sweep", "--M", "3..2", "--format", "csv"], dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(text, "M,N,precision_bits,mu_max,mu_over_sqrt_np1,log_energy_residual\n");
}

#[test]
fn csv_values_match_json_values() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wellcond(&["cond", "--M", "3", "--format", "csv"], dir.path()).status.success());
    assert!(wellcond(&["cond", "--M", "3"], dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("cond_M3.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    let v = read_json(&dir.path().join("cond_M3.json"));
    assert_eq!(&row[4], v["reports"][0]["mu_max"].as_str().unwrap());
    assert_eq!(&row[5], v["reports"][0]["log_mu_max"].as_str().unwrap());
}
