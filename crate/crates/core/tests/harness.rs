use std::fs;
use std::path::Path;

use aorsim_core::harness::{self, output, Overrides, RunOptions, SimConfig};

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/uma_short.csv");
    let path = dir.join("c.ini");
    fs::write(
        &path,
        format!(
            "[scenario]\nfile = {}\n[generation]\npaths_per_cluster = 8\nlocal_paths = 8\n\
             [estimator]\neps_theta_deg = 1.5\neps_phi_deg = 2.5\n\
             [sweep]\nalpha_deg = -60, 0\nhpbw_phi_deg = 20, 40\n[run]\nruns = 4\n{extra}",
            scenario.display()
        ),
    )
    .unwrap();
    path
}

fn load(text_extra: &str, dir: &Path) -> SimConfig {
    SimConfig::load(write_config(dir, text_extra)).unwrap()
}

#[test]
fn written_pdfs_integrate_to_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "");
    let opts = RunOptions {
        overrides: Overrides { output_dir: Some(tmp.path().join("o")), ..Default::default() },
        no_plots: true,
    };
    let a = harness::run(&cfg, &opts).unwrap();
    assert_eq!(a.points.len(), 4);
    let mut checked = 0;
    for f in &a.files {
        let name = f.file_name().unwrap().to_str().unwrap();
        if !(name.contains("_aor_") || name.contains("_aoa_")) {
            continue;
        }
        let rows = output::read_marginal_csv(&fs::read_to_string(f).unwrap()).unwrap();
        let width = if name.ends_with("theta.csv") { 3.0 } else { 5.0 };
        let integral: f64 = rows.iter().map(|r| r.1).sum::<f64>() * width;
        assert!((integral - 1.0).abs() < 1e-6, "{name}: {integral}");
        assert!((rows[1].0 - rows[0].0 - width).abs() < 1e-12);
        checked += 1;
    }
    assert_eq!(checked, 16);

    let joint = fs::read_to_string(tmp.path().join("o/a0_h40_pas_joint.csv")).unwrap();
    let body: Vec<&str> = joint.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "theta_deg,phi_deg,value");
    assert_eq!(body.len() - 1, 30 * 72);
    let power: f64 = body[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum::<f64>() * 15.0;
    assert!((power - a.points[3].result.received_power).abs() < 1e-9 * power, "{power}");

    let spreads = fs::read_to_string(tmp.path().join("o").join(output::SPREADS_FILE)).unwrap();
    assert!(spreads.contains(&format!("# config_hash={}", a.config_hash)));
    assert_eq!(spreads.lines().filter(|l| !l.starts_with('#')).count(), 5);
    let log = fs::read_to_string(tmp.path().join("o").join(output::LOG_FILE)).unwrap();
    assert!(log.contains(&a.config_hash));
}

#[test]
fn hash_tracks_simulation_inputs_only() {
    let tmp = tempfile::tempdir().unwrap();
    let base = load("", tmp.path()).hash().unwrap();
    assert_eq!(base, load("output_dir = elsewhere\njobs = 3\n", tmp.path()).hash().unwrap());
    assert_ne!(base, load("seed = 2\n", tmp.path()).hash().unwrap());
    assert_ne!(base, load("[geometry]\ndistance_m = 21\n", tmp.path()).hash().unwrap());
    assert_ne!(base, load("[rx]\nalpha_deg = 1\n", tmp.path()).hash().unwrap());
}

#[test]
fn duplicate_points_get_distinct_tags() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = load("", tmp.path());
    cfg.alpha_sweep = vec![0.0, 0.0];
    cfg.hpbw_phi_sweep.clear();
    cfg.runs = 1;
    let a = harness::simulate(&cfg).unwrap();
    assert_eq!(a.points[0].tag, "a0_h28.8");
    assert_eq!(a.points[1].tag, "a0_h28.8_1");
    // distinct substreams per point
    assert_ne!(a.points[0].result.aor_phi, a.points[1].result.aor_phi);
}
