//! CSV artifacts and the run log.
//!
//! Everything is rendered into memory first and written in one pass, so a
//! failed simulation leaves no files behind. Floats use Rust's shortest
//! round-trip formatting, which is deterministic and re-parses exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::estimator::{AngularSpectrumGrid, MarginalPdf};
use crate::montecarlo::PointResult;
use crate::spread::{OmegaKey, SpreadReport};

pub const SPREADS_FILE: &str = "spreads.csv";
pub const LOG_FILE: &str = "run_log.txt";
pub const SPREADS_HEADER: &str =
    "alpha_deg,hpbw_theta_deg,hpbw_phi_deg,sigma_theta_deg,sigma_phi_deg,stderr_theta,stderr_phi,runs";

/// One sweep point with its file-name tag.
#[derive(Debug, Clone)]
pub struct PointArtifact {
    pub tag: String,
    pub result: PointResult,
}

/// Results of a full `run`, plus the files written for it.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub config_hash: String,
    pub seed: u64,
    pub runs: usize,
    pub points: Vec<PointArtifact>,
    pub log: String,
    pub files: Vec<PathBuf>,
}

impl RunArtifacts {
    pub fn spreads(&self) -> Vec<SpreadReport> {
        self.points.iter().map(|p| p.result.aor.clone()).collect()
    }
}

/// File-name tag of a sweep point, e.g. `a-30_h28.8`.
pub fn point_tag(omega: &OmegaKey) -> String {
    format!("a{}_h{}", omega.alpha, omega.hpbw_phi)
}

fn header(a: &RunArtifacts, what: &str) -> String {
    format!(
        "# {what}\n# config_hash={}\n# seed={} runs={}\n",
        a.config_hash, a.seed, a.runs
    )
}

fn point_header(a: &RunArtifacts, p: &PointArtifact, what: &str) -> String {
    let o = &p.result.omega;
    format!(
        "{}# alpha_deg={} hpbw_theta_deg={} hpbw_phi_deg={}\n",
        header(a, what),
        o.alpha,
        o.hpbw_theta,
        o.hpbw_phi
    )
}

pub fn marginal_csv(head: &str, pdf: &MarginalPdf) -> String {
    let mut s = String::with_capacity(32 * pdf.values().len());
    s.push_str(head);
    s.push_str("angle_deg,value\n");
    for (c, v) in pdf.axis().centers().iter().zip(pdf.values()) {
        let _ = writeln!(s, "{c},{v}");
    }
    s
}

pub fn joint_csv(head: &str, grid: &AngularSpectrumGrid) -> String {
    let tc = grid.theta_axis().centers();
    let pc = grid.phi_axis().centers();
    let mut s = String::with_capacity(40 * tc.len() * pc.len());
    s.push_str(head);
    s.push_str("theta_deg,phi_deg,value\n");
    for (t, th) in tc.iter().enumerate() {
        for (p, ph) in pc.iter().enumerate() {
            let _ = writeln!(s, "{th},{ph},{}", grid.value(t, p));
        }
    }
    s
}

pub fn spreads_csv(head: &str, reports: &[SpreadReport]) -> String {
    let mut s = String::from(head);
    s.push_str(SPREADS_HEADER);
    s.push('\n');
    for r in reports {
        let o = &r.omega;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            o.alpha, o.hpbw_theta, o.hpbw_phi, r.sigma_theta, r.sigma_phi, r.stderr_theta, r.stderr_phi, r.runs
        );
    }
    s
}

/// All CSV files of a run as `(file name, contents)`, in a fixed order.
pub fn render_csvs(a: &RunArtifacts) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for p in &a.points {
        let r = &p.result;
        out.push((
            format!("{}_pas_joint.csv", p.tag),
            joint_csv(
                &point_header(a, p, "power angular spectrum P_R(theta, phi), run-averaged, power per deg^2"),
                &r.pas,
            ),
        ));
        for (suffix, what, pdf) in [
            ("aor_theta", "AOR elevation pdf, run-averaged, per deg", &r.aor_theta),
            ("aor_phi", "AOR azimuth pdf, run-averaged, per deg", &r.aor_phi),
            ("aoa_theta", "AOA elevation pdf (omnidirectional rx), run-averaged, per deg", &r.aoa_theta),
            ("aoa_phi", "AOA azimuth pdf (omnidirectional rx), run-averaged, per deg", &r.aoa_phi),
        ] {
            out.push((format!("{}_{suffix}.csv", p.tag), marginal_csv(&point_header(a, p, what), pdf)));
        }
    }
    let head = header(a, "AOR angle spreads: sigma from the run-averaged pdf, stderr of per-run sigma");
    out.push((SPREADS_FILE.into(), spreads_csv(&head, &a.spreads())));
    out
}

/// Parses an `angle_deg,value` CSV, skipping `#` comments and the header.
pub fn read_marginal_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header {
            header = true;
            continue;
        }
        let parse = |s: Option<&str>| {
            s.and_then(|x| x.trim().parse::<f64>().ok()).ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected two numbers, got '{line}'"),
            })
        };
        let mut it = line.split(',');
        out.push((parse(it.next())?, parse(it.next())?));
    }
    Ok(out)
}

pub fn run_log(a: &RunArtifacts) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "config_hash={}", a.config_hash);
    let _ = writeln!(s, "seed={} runs={} points={}", a.seed, a.runs, a.points.len());
    for p in &a.points {
        let r = &p.result;
        let total: f64 = r.run_seconds.iter().sum();
        let _ = writeln!(s, "\n[{}]", p.tag);
        let _ = writeln!(s, "aor sigma_theta={:.4} sigma_phi={:.4}", r.aor.sigma_theta, r.aor.sigma_phi);
        let _ = writeln!(s, "aoa sigma_theta={:.4} sigma_phi={:.4}", r.aoa.sigma_theta, r.aoa.sigma_phi);
        let _ = writeln!(s, "received_power={:.6e}", r.received_power);
        let _ = writeln!(s, "run_seconds total={total:.4}");
        let per: Vec<String> = r.run_seconds.iter().map(|t| format!("{t:.6}")).collect();
        let _ = writeln!(s, "run_seconds={}", per.join(","));
    }
    s
}

/// Writes `files` into `dir`. On any failure the files written so far are
/// removed, and so is `dir` if this call created it.
pub fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    let created = !dir.exists();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            remove_all(&written, created.then_some(dir));
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(written)
}

/// Best-effort removal of `files`, then of `dir` when it is empty.
pub fn remove_all(files: &[PathBuf], dir: Option<&Path>) {
    for f in files {
        let _ = fs::remove_file(f);
    }
    if let Some(d) = dir {
        let _ = fs::remove_dir(d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::AngleAxis;

    #[test]
    fn marginal_round_trip() {
        let axis = AngleAxis::theta(5.0).unwrap();
        let vals: Vec<f64> = (0..axis.len()).map(|k| (k as f64 + 0.5) / 81.0 / 10.0 * 2.0 / 2.0).collect();
        let total: f64 = vals.iter().sum::<f64>() * axis.bin_width();
        let vals: Vec<f64> = vals.iter().map(|v| v / total).collect();
        let pdf = MarginalPdf::from_values(axis, vals.clone(), 1.0).unwrap();
        let text = marginal_csv("# x\n", &pdf);
        assert!(!text.contains('\r'));
        let back = read_marginal_csv(&text).unwrap();
        assert_eq!(back.len(), axis.len());
        for ((c, v), (k, orig)) in back.iter().zip(vals.iter().enumerate()) {
            assert_eq!(*c, axis.center(k));
            assert_eq!(v, orig);
        }
    }

    #[test]
    fn malformed_rows_are_reported() {
        let err = read_marginal_csv("# c\nangle_deg,value\n1,2\nfoo\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn write_failure_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("fresh");
        let files = vec![
            ("a.csv".to_string(), b"x".to_vec()),
            ("missing/b.csv".to_string(), b"y".to_vec()),
        ];
        assert!(write_all(&out, &files).is_err());
        assert!(!out.exists());

        let ok = write_all(&out, &files[..1]).unwrap();
        assert_eq!(ok, vec![out.join("a.csv")]);
    }

    #[test]
    fn tags_are_filename_safe() {
        let t = point_tag(&OmegaKey { alpha: -30.0, hpbw_theta: 30.0, hpbw_phi: 28.8 });
        assert_eq!(t, "a-30_h28.8");
    }
}
