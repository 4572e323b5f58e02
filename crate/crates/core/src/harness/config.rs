//! INI-style simulation config.
//!
//! Every key is optional; unset keys take the defaults shown in the README.
//! Unknown sections or keys are reported as errors so typos do not pass
//! silently. Relative paths resolve against the config file's directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ini::Ini;
use sha2::{Digest, Sha256};

use crate::antenna::{AntennaPattern, NARROWBEAM, WIDEBEAM};
use crate::error::{Error, Result};
use crate::estimator::AngleAxis;
use crate::montecarlo::PointSpec;
use crate::paths::GenerationConfig;
use crate::pdp::{ClusterProfile, Profile, ProfileFormat};

/// Antenna parameter block of the `[tx]` / `[rx]` sections.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSpec {
    pub gain_dbi: f64,
    pub hpbw_theta_deg: f64,
    pub hpbw_phi_deg: f64,
    pub alpha_deg: f64,
    pub omnidirectional: bool,
}

impl PatternSpec {
    pub fn preset(name: &str) -> Option<Self> {
        let (g, ht, hp) = match name {
            "widebeam" => WIDEBEAM,
            "narrowbeam" => NARROWBEAM,
            "omni" | "omnidirectional" => {
                return Some(Self {
                    gain_dbi: 0.0,
                    hpbw_theta_deg: 180.0,
                    hpbw_phi_deg: 180.0,
                    alpha_deg: 0.0,
                    omnidirectional: true,
                })
            }
            _ => return None,
        };
        Some(Self {
            gain_dbi: g,
            hpbw_theta_deg: ht,
            hpbw_phi_deg: hp,
            alpha_deg: 0.0,
            omnidirectional: false,
        })
    }

    pub fn pattern(&self) -> Result<AntennaPattern> {
        if self.omnidirectional {
            AntennaPattern::omnidirectional(self.gain_dbi)
        } else {
            AntennaPattern::new(self.gain_dbi, self.hpbw_theta_deg, self.hpbw_phi_deg, self.alpha_deg)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpbwTarget {
    Rx,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario_file: PathBuf,
    pub format: ProfileFormat,
    /// When set, the scenario delay column holds normalized delays that are
    /// multiplied by this spread (seconds).
    pub delay_spread: Option<f64>,
    pub frequency_hz: f64,
    pub tx: PatternSpec,
    pub rx: PatternSpec,
    pub generation: GenerationConfig,
    pub eps_theta: f64,
    pub eps_phi: f64,
    pub alpha_sweep: Vec<f64>,
    pub hpbw_phi_sweep: Vec<f64>,
    pub hpbw_target: HpbwTarget,
    pub runs: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub jobs: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scenario_file: PathBuf::new(),
            format: ProfileFormat::ClusterTable,
            delay_spread: None,
            frequency_hz: 28e9,
            tx: PatternSpec::preset("widebeam").unwrap(),
            rx: PatternSpec::preset("widebeam").unwrap(),
            generation: GenerationConfig::default(),
            eps_theta: 0.5,
            eps_phi: 0.5,
            alpha_sweep: Vec::new(),
            hpbw_phi_sweep: Vec::new(),
            hpbw_target: HpbwTarget::Rx,
            runs: 200,
            seed: 1,
            output_dir: PathBuf::from("out"),
            jobs: 0,
        }
    }
}

/// Command-line overrides applied after the file is read.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
}

const KNOWN: &[(&str, &[&str])] = &[
    ("scenario", &["file", "format", "delay_spread_ns", "frequency_hz"]),
    ("geometry", &["distance_m"]),
    ("tx", &["preset", "gain_dbi", "hpbw_theta_deg", "hpbw_phi_deg", "alpha_deg", "omnidirectional"]),
    ("rx", &["preset", "gain_dbi", "hpbw_theta_deg", "hpbw_phi_deg", "alpha_deg", "omnidirectional"]),
    (
        "generation",
        &["paths_per_cluster", "local_paths", "kappa", "local_power_fraction", "local_elevation_deg", "local_elevation_spread_deg"],
    ),
    ("estimator", &["eps_theta_deg", "eps_phi_deg"]),
    ("sweep", &["alpha_deg", "hpbw_phi_deg", "hpbw_target"]),
    ("run", &["runs", "seed", "output_dir", "jobs"]),
];

struct Reader<'a> {
    ini: &'a Ini,
    errors: Vec<String>,
}

impl<'a> Reader<'a> {
    fn raw(&self, section: &str, key: &str) -> Option<&'a str> {
        self.ini
            .section(Some(section))
            .and_then(|s| s.get(key))
            .map(str::trim)
            .filter(|v| !v.is_empty())
    }

    fn parse<T: std::str::FromStr>(&mut self, section: &str, key: &str, slot: &mut T) {
        if let Some(v) = self.raw(section, key) {
            match v.parse() {
                Ok(x) => *slot = x,
                Err(_) => self.errors.push(format!("[{section}] {key}: cannot parse '{v}'")),
            }
        }
    }

    fn list(&mut self, section: &str, key: &str) -> Vec<f64> {
        let Some(v) = self.raw(section, key) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse() {
                Ok(x) => out.push(x),
                Err(_) => self.errors.push(format!("[{section}] {key}: cannot parse '{item}'")),
            }
        }
        out
    }

    fn pattern(&mut self, section: &str) -> PatternSpec {
        let mut spec = PatternSpec::preset("widebeam").unwrap();
        if let Some(name) = self.raw(section, "preset") {
            match PatternSpec::preset(name) {
                Some(p) => spec = p,
                None => self.errors.push(format!(
                    "[{section}] preset: unknown '{name}' (widebeam, narrowbeam, omni)"
                )),
            }
        }
        self.parse(section, "gain_dbi", &mut spec.gain_dbi);
        self.parse(section, "hpbw_theta_deg", &mut spec.hpbw_theta_deg);
        self.parse(section, "hpbw_phi_deg", &mut spec.hpbw_phi_deg);
        self.parse(section, "alpha_deg", &mut spec.alpha_deg);
        self.parse(section, "omnidirectional", &mut spec.omnidirectional);
        spec
    }
}

impl SimConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::from_str_in(&text, base)
    }

    /// Parses config text; relative paths are joined onto `base`.
    pub fn from_str_in(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))?;
        let mut r = Reader { ini: &ini, errors: Vec::new() };
        let mut cfg = SimConfig::default();

        for (section, props) in ini.iter() {
            let Some(section) = section else {
                for (k, _) in props.iter() {
                    r.errors.push(format!("key '{k}' outside any section"));
                }
                continue;
            };
            match KNOWN.iter().find(|(s, _)| *s == section) {
                None => r.errors.push(format!("unknown section [{section}]")),
                Some((_, keys)) => {
                    for (k, _) in props.iter() {
                        if !keys.contains(&k) {
                            r.errors.push(format!("[{section}] unknown key '{k}'"));
                        }
                    }
                }
            }
        }

        match r.raw("scenario", "file") {
            Some(f) => cfg.scenario_file = base.join(f),
            None => r.errors.push("[scenario] file is required".into()),
        }
        if let Some(f) = r.raw("scenario", "format") {
            match f {
                "clusters" => cfg.format = ProfileFormat::ClusterTable,
                "pds" => cfg.format = ProfileFormat::PdsTrace,
                other => r.errors.push(format!("[scenario] format: unknown '{other}' (clusters, pds)")),
            }
        }
        let mut ds_ns = f64::NAN;
        r.parse("scenario", "delay_spread_ns", &mut ds_ns);
        if !ds_ns.is_nan() {
            cfg.delay_spread = Some(ds_ns * 1e-9);
        }
        r.parse("scenario", "frequency_hz", &mut cfg.frequency_hz);
        r.parse("geometry", "distance_m", &mut cfg.generation.distance);
        cfg.tx = r.pattern("tx");
        cfg.rx = r.pattern("rx");

        let g = &mut cfg.generation;
        r.parse("generation", "paths_per_cluster", &mut g.paths_per_cluster);
        r.parse("generation", "local_paths", &mut g.local_paths);
        r.parse("generation", "kappa", &mut g.kappa);
        r.parse("generation", "local_power_fraction", &mut g.local_power_fraction);
        r.parse("generation", "local_elevation_deg", &mut g.local_elevation_deg);
        r.parse("generation", "local_elevation_spread_deg", &mut g.local_elevation_spread_deg);

        r.parse("estimator", "eps_theta_deg", &mut cfg.eps_theta);
        r.parse("estimator", "eps_phi_deg", &mut cfg.eps_phi);

        cfg.alpha_sweep = r.list("sweep", "alpha_deg");
        cfg.hpbw_phi_sweep = r.list("sweep", "hpbw_phi_deg");
        if let Some(t) = r.raw("sweep", "hpbw_target") {
            match t {
                "rx" => cfg.hpbw_target = HpbwTarget::Rx,
                "both" => cfg.hpbw_target = HpbwTarget::Both,
                other => r.errors.push(format!("[sweep] hpbw_target: unknown '{other}' (rx, both)")),
            }
        }

        r.parse("run", "runs", &mut cfg.runs);
        r.parse("run", "seed", &mut cfg.seed);
        if let Some(o) = r.raw("run", "output_dir") {
            cfg.output_dir = base.join(o);
        }
        r.parse("run", "jobs", &mut cfg.jobs);

        let mut errors = r.errors;
        errors.extend(cfg.violations());
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(n) = o.runs {
            self.runs = n;
        }
        if let Some(d) = &o.output_dir {
            self.output_dir = d.clone();
        }
        if let Some(j) = o.jobs {
            self.jobs = j;
        }
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    /// Every violated field, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.generation.violations();
        if self.runs == 0 {
            out.push("[run] runs must be >= 1".into());
        }
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            out.push(format!("[scenario] frequency_hz = {} must be > 0", self.frequency_hz));
        }
        if let Some(ds) = self.delay_spread {
            if !(ds.is_finite() && ds > 0.0) {
                out.push("[scenario] delay_spread_ns must be > 0".into());
            }
        }
        for (name, eps, axis) in [
            ("eps_theta_deg", self.eps_theta, AngleAxis::theta as fn(f64) -> Result<AngleAxis>),
            ("eps_phi_deg", self.eps_phi, AngleAxis::phi),
        ] {
            if let Err(e) = axis(eps) {
                out.push(format!("[estimator] {name}: {e}"));
            }
        }
        for (name, spec) in [("tx", &self.tx), ("rx", &self.rx)] {
            if let Err(e) = spec.pattern() {
                out.push(format!("[{name}] {e}"));
            }
        }
        for a in &self.alpha_sweep {
            if !a.is_finite() {
                out.push(format!("[sweep] alpha_deg value {a} is not finite"));
            }
        }
        for h in &self.hpbw_phi_sweep {
            if !(*h > 0.0 && *h <= 180.0) {
                out.push(format!("[sweep] hpbw_phi_deg value {h} outside (0, 180]"));
            }
        }
        if !self.hpbw_phi_sweep.is_empty() && self.rx.omnidirectional {
            out.push("[sweep] hpbw_phi_deg sweep needs a directional rx".into());
        }
        if self.hpbw_target == HpbwTarget::Both && self.tx.omnidirectional && !self.hpbw_phi_sweep.is_empty() {
            out.push("[sweep] hpbw_target = both needs a directional tx".into());
        }
        out
    }

    /// Loads the scenario and reduces it to the positive-delay, normalized
    /// cluster profile the generator consumes.
    pub fn load_profile(&self) -> Result<ClusterProfile> {
        if !self.scenario_file.is_file() {
            return Err(Error::Config(vec![format!(
                "[scenario] file {} does not exist",
                self.scenario_file.display()
            )]));
        }
        let profile = match crate::pdp::parse_profile(&self.scenario_file, self.format)? {
            Profile::Clusters(c) => c,
            Profile::Trace(t) => crate::pdp::extract_clusters(&t)?,
        };
        let profile = match self.delay_spread {
            // file delays were read as ns; undo that to recover the normalized values
            Some(ds) => profile.scale_delays(ds * 1e9)?,
            None => profile,
        };
        profile.delayed()
    }

    /// Sweep points: the cartesian product of the α and HPBW_φ lists, α
    /// outermost. An empty list contributes the `[rx]` value.
    pub fn points(&self) -> Result<Vec<PointSpec>> {
        let tx = self.tx.pattern()?;
        let rx = self.rx.pattern()?;
        let alphas = if self.alpha_sweep.is_empty() { vec![rx.alpha()] } else { self.alpha_sweep.clone() };
        let mut out = Vec::new();
        for &a in &alphas {
            let rx_a = rx.with_alpha(a)?;
            if self.hpbw_phi_sweep.is_empty() {
                out.push(PointSpec { tx: tx.clone(), rx: rx_a });
                continue;
            }
            for &h in &self.hpbw_phi_sweep {
                let tx_h = match self.hpbw_target {
                    HpbwTarget::Both => tx.with_hpbw_phi(h)?,
                    HpbwTarget::Rx => tx.clone(),
                };
                out.push(PointSpec { tx: tx_h, rx: rx_a.with_hpbw_phi(h)? });
            }
        }
        Ok(out)
    }

    /// Canonical text of every setting that affects results. Output
    /// location and thread count are excluded.
    pub fn canonical(&self) -> String {
        let mut m = BTreeMap::new();
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        m.insert("scenario.format", format!("{:?}", self.format));
        m.insert(
            "scenario.delay_spread_s",
            self.delay_spread.map_or("none".into(), |d| d.to_string()),
        );
        m.insert("scenario.frequency_hz", self.frequency_hz.to_string());
        for (name, p) in [("tx", &self.tx), ("rx", &self.rx)] {
            let v = format!(
                "{},{},{},{},{}",
                p.gain_dbi, p.hpbw_theta_deg, p.hpbw_phi_deg, p.alpha_deg, p.omnidirectional
            );
            m.insert(name, v);
        }
        let g = &self.generation;
        m.insert(
            "generation",
            format!(
                "{},{},{},{},{},{},{}",
                g.paths_per_cluster,
                g.local_paths,
                g.kappa,
                g.local_power_fraction,
                g.distance,
                g.local_elevation_deg,
                g.local_elevation_spread_deg
            ),
        );
        m.insert("estimator", format!("{},{}", self.eps_theta, self.eps_phi));
        m.insert("sweep.alpha_deg", list(&self.alpha_sweep));
        m.insert("sweep.hpbw_phi_deg", list(&self.hpbw_phi_sweep));
        m.insert("sweep.hpbw_target", format!("{:?}", self.hpbw_target));
        m.insert("run", format!("{},{}", self.runs, self.seed));
        let mut s = String::new();
        for (k, v) in m {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// SHA-256 over the canonical settings and the scenario file bytes.
    pub fn hash(&self) -> Result<String> {
        let scenario = std::fs::read(&self.scenario_file).map_err(|e| Error::io(&self.scenario_file, e))?;
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        h.update(&scenario);
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SimConfig> {
        SimConfig::from_str_in(text, Path::new("/cfg"))
    }

    #[test]
    fn minimal_config_takes_defaults() {
        let c = parse("[scenario]\nfile = s.csv\n").unwrap();
        assert_eq!(c.scenario_file, PathBuf::from("/cfg/s.csv"));
        assert_eq!(c.runs, 200);
        assert_eq!(c.rx, PatternSpec::preset("widebeam").unwrap());
        assert_eq!(c.generation, GenerationConfig::default());
        assert_eq!(c.points().unwrap().len(), 1);
    }

    #[test]
    fn presets_and_overrides() {
        let c = parse(
            "[scenario]\nfile = s.csv\n[rx]\npreset = narrowbeam\nalpha_deg = 30\n[tx]\npreset = omni\n\
             [sweep]\nalpha_deg = -30, 0, 60\nhpbw_phi_deg = 5,10\nhpbw_target = rx\n",
        )
        .unwrap();
        assert_eq!(c.rx.gain_dbi, 24.5);
        assert_eq!(c.rx.alpha_deg, 30.0);
        assert!(c.tx.omnidirectional);
        let pts = c.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[1].rx.alpha(), pts[1].rx.hpbw_phi()), (-30.0, 10.0));
        assert_eq!(pts[5].rx.alpha(), 60.0);
        assert!(pts[0].tx.is_omnidirectional());
    }

    #[test]
    fn every_violation_is_listed() {
        let err = parse(
            "[scenario]\nfile = s.csv\n[run]\nruns = 0\nseed = x\n[rx]\nhpbw_phi_deg = 400\n\
             [generation]\nkappa = -1\n[estimator]\neps_theta_deg = 2\n[bogus]\na = 1\n",
        )
        .unwrap_err();
        let Error::Config(list) = err else { panic!("{err}") };
        let joined = list.join("\n");
        for needle in ["runs", "seed", "[rx]", "kappa", "eps_theta_deg", "[bogus]"] {
            assert!(joined.contains(needle), "missing {needle} in\n{joined}");
        }
        assert!(list.len() >= 6);
    }

    #[test]
    fn missing_file_key_is_an_error() {
        assert!(matches!(parse("[run]\nruns = 3\n"), Err(Error::Config(_))));
        assert!(matches!(parse("runs = 3\n[scenario]\nfile = a\n"), Err(Error::Config(_))));
    }

    #[test]
    fn canonical_tracks_result_settings_only() {
        let mut a = parse("[scenario]\nfile = s.csv\n").unwrap();
        let base = a.canonical();
        a.output_dir = PathBuf::from("elsewhere");
        a.jobs = 7;
        assert_eq!(a.canonical(), base);
        a.seed += 1;
        assert_ne!(a.canonical(), base);
        a.apply(&Overrides { runs: Some(0), ..Default::default() }).unwrap_err();
    }
}
