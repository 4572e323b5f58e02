//! Power delay profiles and their time clusters.
//!
//! On disk a profile is a two-column CSV, `delay_ns,power_db`, with `#`
//! comment lines. In memory delays are seconds and powers are linear.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// One time cluster: excess delay in seconds and linear power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub delay: f64,
    pub power: f64,
}

/// Ordered time clusters that define the half-ellipsoids.
///
/// Delays are strictly increasing and non-negative, powers strictly positive,
/// and there is at least one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterProfile {
    clusters: Vec<Cluster>,
}

impl ClusterProfile {
    pub fn new(clusters: Vec<Cluster>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::EmptyInput("cluster profile has no clusters"));
        }
        for (k, c) in clusters.iter().enumerate() {
            if !c.delay.is_finite() || c.delay < 0.0 {
                return Err(Error::domain(format!("cluster {k}: delay {} s", c.delay)));
            }
            if !(c.power.is_finite() && c.power > 0.0) {
                return Err(Error::domain(format!("cluster {k}: power {}", c.power)));
            }
            if k > 0 && c.delay <= clusters[k - 1].delay {
                return Err(Error::Ordering {
                    line: k + 1,
                    delay_ns: c.delay * 1e9,
                });
            }
        }
        Ok(Self { clusters })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn total_power(&self) -> f64 {
        self.clusters.iter().map(|c| c.power).sum()
    }

    /// Powers rescaled so they sum to one.
    pub fn normalized(&self) -> Self {
        let total = self.total_power();
        Self {
            clusters: self
                .clusters
                .iter()
                .map(|c| Cluster {
                    delay: c.delay,
                    power: c.power / total,
                })
                .collect(),
        }
    }

    /// Multiplies normalized (dimensionless) delays by `delay_spread` seconds.
    pub fn scale_delays(&self, delay_spread: f64) -> Result<Self> {
        if !(delay_spread.is_finite() && delay_spread > 0.0) {
            return Err(Error::domain(format!(
                "delay spread must be positive, got {delay_spread}"
            )));
        }
        Self::new(
            self.clusters
                .iter()
                .map(|c| Cluster {
                    delay: c.delay * delay_spread,
                    power: c.power,
                })
                .collect(),
        )
    }

    /// Clusters with non-zero excess delay, renormalized to unit power.
    ///
    /// A zero-delay cluster lies on the direct Tx-Rx line and has no
    /// half-ellipsoid to scatter from.
    pub fn delayed(&self) -> Result<Self> {
        let kept: Vec<Cluster> = self
            .clusters
            .iter()
            .copied()
            .filter(|c| c.delay > 0.0)
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyInput("profile has no cluster with positive delay"));
        }
        Ok(Self::new(kept)?.normalized())
    }

    /// Serializes to the on-disk CSV layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delay_ns,power_db\n");
        for c in &self.clusters {
            let _ = writeln!(
                out,
                "{},{}",
                format_fixed(c.delay * 1e9),
                format_fixed(10.0 * c.power.log10())
            );
        }
        out
    }
}

/// One sample of a power delay spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdsSample {
    pub delay: f64,
    pub power: f64,
}

/// A sampled power delay spectrum: strictly increasing delays, powers >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PdsTrace {
    samples: Vec<PdsSample>,
}

impl PdsTrace {
    pub fn new(samples: Vec<PdsSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput("trace has no samples"));
        }
        for (k, s) in samples.iter().enumerate() {
            if !s.delay.is_finite() || !(s.power >= 0.0) || !s.power.is_finite() {
                return Err(Error::domain(format!(
                    "sample {k}: delay {} s, power {}",
                    s.delay, s.power
                )));
            }
            if k > 0 && s.delay <= samples[k - 1].delay {
                return Err(Error::Ordering {
                    line: k + 1,
                    delay_ns: s.delay * 1e9,
                });
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[PdsSample] {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFormat {
    ClusterTable,
    PdsTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Clusters(ClusterProfile),
    Trace(PdsTrace),
}

pub fn parse_profile(path: impl AsRef<Path>, format: ProfileFormat) -> Result<Profile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile_str(&text, format)
}

/// Parses CSV text. Errors carry 1-based line numbers of the source text.
pub fn parse_profile_str(text: &str, format: ProfileFormat) -> Result<Profile> {
    let mut header_seen = false;
    let mut rows: Vec<(f64, f64)> = Vec::new();
    let mut prev_delay: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if cols != ["delay_ns", "power_db"] {
                return Err(Error::Parse {
                    line,
                    message: format!("expected header `delay_ns,power_db`, found `{trimmed}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 columns, found {}", cols.len()),
            });
        }
        let delay_ns = parse_number(cols[0], line, "delay_ns")?;
        let power_db = parse_number(cols[1], line, "power_db")?;
        if let Some(prev) = prev_delay {
            if delay_ns <= prev {
                return Err(Error::Ordering { line, delay_ns });
            }
        }
        prev_delay = Some(delay_ns);
        rows.push((delay_ns, power_db));
    }

    if rows.is_empty() {
        return Err(Error::EmptyInput("no data rows"));
    }

    match format {
        ProfileFormat::ClusterTable => {
            let clusters = rows
                .iter()
                .map(|&(ns, pdb)| Cluster {
                    delay: ns * 1e-9,
                    power: lin_power(pdb),
                })
                .collect();
            ClusterProfile::new(clusters).map(Profile::Clusters)
        }
        ProfileFormat::PdsTrace => {
            let samples = rows
                .iter()
                .map(|&(ns, pdb)| PdsSample {
                    delay: ns * 1e-9,
                    power: lin_power(pdb),
                })
                .collect();
            PdsTrace::new(samples).map(Profile::Trace)
        }
    }
}

fn parse_number(field: &str, line: usize, column: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if !v.is_nan() && v != f64::INFINITY => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("{column}: `{field}` is not a number"),
        }),
    }
}

fn lin_power(power_db: f64) -> f64 {
    10f64.powf(power_db / 10.0)
}

/// Fixed six-decimal rendering with trailing zeros trimmed, so values on a
/// coarser decimal grid are written exactly as they were read.
fn format_fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        _ => s.to_string(),
    }
}

/// One cluster per local maximum of the power sequence.
///
/// Runs of equal power are treated as one plateau located at its first
/// sample. A plateau is a maximum when it exceeds every neighbouring
/// plateau; boundary plateaus have a single neighbour. Delays of the result
/// are measured from the first extracted cluster.
pub fn extract_clusters(trace: &PdsTrace) -> Result<ClusterProfile> {
    let samples = trace.samples();
    if samples.len() == 1 {
        return ClusterProfile::new(vec![Cluster {
            delay: 0.0,
            power: samples[0].power,
        }]);
    }

    // (first index, power) per plateau
    let mut plateaus: Vec<(usize, f64)> = Vec::new();
    for (k, s) in samples.iter().enumerate() {
        match plateaus.last() {
            Some(&(_, p)) if p == s.power => {}
            _ => plateaus.push((k, s.power)),
        }
    }
    if plateaus.len() == 1 {
        return Err(Error::DegenerateTrace);
    }

    let maxima: Vec<usize> = (0..plateaus.len())
        .filter(|&k| {
            let p = plateaus[k].1;
            let left = k == 0 || plateaus[k - 1].1 < p;
            let right = k + 1 == plateaus.len() || plateaus[k + 1].1 < p;
            left && right
        })
        .map(|k| plateaus[k].0)
        .collect();

    let origin = samples[maxima[0]].delay;
    ClusterProfile::new(
        maxima
            .into_iter()
            .map(|k| Cluster {
                delay: samples[k].delay - origin,
                power: samples[k].power,
            })
            .collect(),
    )
}
