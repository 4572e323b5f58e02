use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/uma_normal.csv")
}

fn write_config(dir: &Path, scenario: &Path, extra: &str) -> PathBuf {
    let cfg = dir.join("smoke.ini");
    fs::write(
        &cfg,
        format!(
            "[scenario]\nfile = {}\n\n[generation]\npaths_per_cluster = 5\nlocal_paths = 5\n\n\
             [estimator]\neps_theta_deg = 1\neps_phi_deg = 1\n\n[sweep]\nalpha_deg = 30\n\n\
             [run]\nruns = 1\nseed = 5\noutput_dir = out\n{extra}",
            scenario.display()
        ),
    )
    .unwrap();
    cfg
}

fn aorsim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aorsim")).args(args).output().unwrap()
}

fn csvs(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn smoke_run_emits_five_csvs_and_spreads() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &scenario(), "");
    let out = aorsim(&["--config", cfg.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = csvs(&tmp.path().join("out"));
    assert_eq!(
        names,
        [
            "a30_h28.8_aoa_phi.csv",
            "a30_h28.8_aoa_theta.csv",
            "a30_h28.8_aor_phi.csv",
            "a30_h28.8_aor_theta.csv",
            "a30_h28.8_pas_joint.csv",
            "spreads.csv",
        ]
    );
    let spreads = fs::read_to_string(tmp.path().join("out/spreads.csv")).unwrap();
    assert!(spreads.contains(
        "alpha_deg,hpbw_theta_deg,hpbw_phi_deg,sigma_theta_deg,sigma_phi_deg,stderr_theta,stderr_phi,runs"
    ));
    assert!(tmp.path().join("out/run_log.txt").exists());
    let svg = fs::read_to_string(tmp.path().join("out/pdf_phi.svg")).unwrap();
    let hash = spreads.lines().find_map(|l| l.strip_prefix("# config_hash=")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(&format!("<!-- config_hash={hash} -->")));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &scenario(), "");
    let cfg = cfg.to_str().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = aorsim(&["--config", cfg, "--quiet", "--no-plots", "--runs", "3", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let names = csvs(&a);
    assert_eq!(names, csvs(&b));
    for n in &names {
        assert_eq!(fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap(), "{n}");
    }
    assert!(!a.join("pdf_phi.svg").exists());

    let c = tmp.path().join("c");
    aorsim(&["--config", cfg, "--quiet", "--no-plots", "--runs", "3", "--seed", "6", "--out", c.to_str().unwrap()]);
    assert_ne!(fs::read(a.join(&names[0])).unwrap(), fs::read(c.join(&names[0])).unwrap());
}

#[test]
fn missing_scenario_is_a_config_error_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &tmp.path().join("nope.csv"), "");
    let out = aorsim(&["--config", cfg.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn invalid_fields_are_all_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &scenario(), "jobs = many\n[rx]\nhpbw_phi_deg = -3\n");
    let out = aorsim(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("jobs") && err.contains("[rx]"), "{err}");
}

#[test]
fn runtime_failure_exits_two_and_cleans_up() {
    let tmp = tempfile::tempdir().unwrap();
    // a trace with no interior extremum is rejected after the config validates
    let flat = tmp.path().join("flat.csv");
    fs::write(&flat, "delay_ns,power_db\n0,-3\n10,-3\n20,-3\n").unwrap();
    let cfg = write_config(tmp.path(), &flat, "");
    let text = fs::read_to_string(&cfg).unwrap().replace("[scenario]\n", "[scenario]\nformat = pds\n");
    fs::write(&cfg, text).unwrap();
    let out = aorsim(&["--config", cfg.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tmp.path().join("out").exists());
}
