//! Multipath generation: delayed cluster paths on half-ellipsoids plus
//! von Mises local scattering around the receiver.
//!
//! Cluster `i >= 1` draws its scatterers area-uniformly on the half-ellipsoid
//! of delay `τ_i` and keeps each one with probability `g_T²(departure)/G_T`.
//! Local scattering (`i = 0`) has a fixed elevation and von Mises azimuths
//! centred on `φ = 0`.

use std::f64::consts::PI;

use rand::Rng;

use crate::antenna::{wrap_deg, AntennaPattern};
use crate::error::{Error, Result};
use crate::geometry::{
    arrival_angles, departure_angles, ellipsoid_from_delay, sample_surface_point, LinkGeometry,
};
use crate::pdp::ClusterProfile;

/// Consecutive Tx-pattern rejections tolerated for a single path.
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

/// One propagation path. `cluster == 0` marks local scattering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    pub cluster: usize,
    pub index: usize,
    /// Zenith angle of arrival, degrees in `[0, 90]`.
    pub theta: f64,
    /// Azimuth of arrival, degrees in `[-180, 180)`.
    pub phi: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    components: Vec<PathComponent>,
    cluster_count: usize,
    /// Path counts per cluster, local scattering first.
    path_counts: Vec<usize>,
}

impl PathEnsemble {
    /// Wraps components as given, without renormalizing their powers.
    pub fn from_components(components: Vec<PathComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let cluster_count = components.iter().map(|c| c.cluster).max().unwrap_or(0);
        let mut path_counts = vec![0usize; cluster_count + 1];
        for c in &components {
            path_counts[c.cluster] += 1;
        }
        Ok(Self {
            components,
            cluster_count,
            path_counts,
        })
    }

    pub fn components(&self) -> &[PathComponent] {
        &self.components
    }

    /// Number of delayed clusters (N).
    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    /// `[M_0, M_1, ..., M_N]`.
    pub fn path_counts(&self) -> &[usize] {
        &self.path_counts
    }

    pub fn total_power(&self) -> f64 {
        self.components.iter().map(|c| c.power).sum()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub paths_per_cluster: usize,
    pub local_paths: usize,
    /// von Mises concentration of local-scattering azimuths.
    pub kappa: f64,
    /// Share of total power carried by local scattering, `[0, 1)`.
    pub local_power_fraction: f64,
    /// Tx-Rx distance in meters.
    pub distance: f64,
    /// Centre zenith angle of local-scattering paths, degrees.
    pub local_elevation_deg: f64,
    /// Half-width of the uniform zenith band around `local_elevation_deg`,
    /// clipped to `[0, 90]`. Zero puts every local path at the centre.
    pub local_elevation_spread_deg: f64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            paths_per_cluster: 50,
            local_paths: 100,
            kappa: 4.0,
            local_power_fraction: 0.05,
            distance: 20.0,
            local_elevation_deg: 88.0,
            local_elevation_spread_deg: 10.0,
        }
    }
}

impl GenerationConfig {
    /// Every violated constraint, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.paths_per_cluster == 0 {
            out.push("paths_per_cluster must be >= 1".into());
        }
        if self.local_paths == 0 {
            out.push("local_paths must be >= 1".into());
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            out.push(format!("kappa = {} must be finite and >= 0", self.kappa));
        }
        if !(0.0..1.0).contains(&self.local_power_fraction) {
            out.push(format!(
                "local_power_fraction = {} outside [0, 1)",
                self.local_power_fraction
            ));
        }
        if !(self.distance.is_finite() && self.distance > 0.0) {
            out.push(format!("distance = {} must be > 0", self.distance));
        }
        if !(0.0..=90.0).contains(&self.local_elevation_deg) {
            out.push(format!(
                "local_elevation_deg = {} outside [0, 90]",
                self.local_elevation_deg
            ));
        }
        if !(self.local_elevation_spread_deg.is_finite() && self.local_elevation_spread_deg >= 0.0) {
            out.push(format!(
                "local_elevation_spread_deg = {} must be finite and >= 0",
                self.local_elevation_spread_deg
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }
}

/// von Mises distribution on the circle, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
}

// Below this concentration the uniform envelope accepts almost every draw.
const SMALL_KAPPA: f64 = 1e-3;

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(mu.is_finite() && kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::domain(format!("von Mises mu = {mu}, kappa = {kappa}")));
        }
        Ok(Self { mu, kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Unnormalized density `exp(κ (cos(x - μ) - 1))`.
    pub fn kernel(&self, x: f64) -> f64 {
        (self.kappa * ((x - self.mu).cos() - 1.0)).exp()
    }

    /// Draws an angle in `(-π, π]` around `mu`, not wrapped.
    ///
    /// Rejection sampling: a uniform envelope for tiny κ, otherwise the
    /// wrapped-Cauchy envelope of Best and Fisher.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let k = self.kappa;
        if k == 0.0 {
            return self.mu + PI * (2.0 * rng.random::<f64>() - 1.0);
        }
        if k < SMALL_KAPPA {
            loop {
                let x = PI * (2.0 * rng.random::<f64>() - 1.0);
                if rng.random::<f64>() < (k * (x.cos() - 1.0)).exp() {
                    return self.mu + x;
                }
            }
        }
        let tau = 1.0 + (1.0 + 4.0 * k * k).sqrt();
        let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * k);
        let r = (1.0 + rho * rho) / (2.0 * rho);
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let u3: f64 = rng.random();
            let z = (PI * u1).cos();
            let f = (1.0 + r * z) / (r + z);
            let c = k * (r - f);
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let dev = f.clamp(-1.0, 1.0).acos();
                return self.mu + if u3 > 0.5 { dev } else { -dev };
            }
        }
    }
}

/// Delayed-cluster paths, shaped by the transmit pattern.
///
/// Paths are returned in cluster order; each gets `P_i / M` of its cluster
/// power. An omnidirectional Tx consumes no acceptance draws, so its output
/// follows the bare area-uniform sampling stream.
pub fn generate_cluster_paths<R: Rng + ?Sized>(
    profile: &ClusterProfile,
    geom: &LinkGeometry,
    tx: &AntennaPattern,
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<Vec<PathComponent>> {
    let m = cfg.paths_per_cluster;
    if m == 0 {
        return Err(Error::Config(vec!["paths_per_cluster must be >= 1".into()]));
    }
    let peak = tx.boresight_gain();
    let mut out = Vec::with_capacity(profile.len() * m);

    for (k, cluster) in profile.clusters().iter().enumerate() {
        let cluster_index = k + 1;
        let ellipsoid = ellipsoid_from_delay(geom, cluster.delay)?;
        let power = cluster.power / m as f64;
        for j in 1..=m {
            let mut rejections = 0u64;
            let point = loop {
                let p = sample_surface_point(&ellipsoid, rng)?;
                if tx.is_omnidirectional() {
                    break p;
                }
                let (dt, dp) = departure_angles(&p, geom)?;
                if rng.random::<f64>() * peak < tx.gain_unchecked(dt, dp) {
                    break p;
                }
                rejections += 1;
                if rejections > MAX_CONSECUTIVE_REJECTIONS {
                    return Err(Error::SamplingStall {
                        cluster: cluster_index,
                        rejections,
                    });
                }
            };
            let (theta, phi) = arrival_angles(&point, geom)?;
            out.push(PathComponent {
                cluster: cluster_index,
                index: j,
                theta,
                phi,
                power,
            });
        }
    }
    Ok(out)
}

/// Local-scattering paths (`cluster = 0`).
pub fn generate_local_scatter<R: Rng + ?Sized>(
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<Vec<PathComponent>> {
    let vm = VonMises::new(0.0, cfg.kappa)?;
    if cfg.local_paths == 0 {
        return Err(Error::Config(vec!["local_paths must be >= 1".into()]));
    }
    let power = cfg.local_power_fraction / cfg.local_paths as f64;
    let e = cfg.local_elevation_deg;
    let s = cfg.local_elevation_spread_deg;
    let (lo, hi) = ((e - s).max(0.0), (e + s).min(90.0));
    Ok((1..=cfg.local_paths)
        .map(|j| {
            let phi = wrap_deg(vm.sample(rng).to_degrees());
            let theta = if s > 0.0 { lo + (hi - lo) * rng.random::<f64>() } else { e };
            PathComponent {
                cluster: 0,
                index: j,
                theta,
                phi,
                power,
            }
        })
        .collect())
}

/// Joins both path sets and normalizes total power to one.
///
/// Cluster paths are scaled to carry `1 - local_power_fraction`, local paths
/// the remaining fraction. A zero fraction drops the local set; an empty
/// side hands its share to the other.
pub fn assemble_ensemble(
    cluster_paths: Vec<PathComponent>,
    local_paths: Vec<PathComponent>,
    local_power_fraction: f64,
) -> Result<PathEnsemble> {
    if !(0.0..1.0).contains(&local_power_fraction) {
        return Err(Error::domain(format!(
            "local_power_fraction {local_power_fraction} outside [0, 1)"
        )));
    }
    let local_paths = if local_power_fraction == 0.0 {
        Vec::new()
    } else {
        local_paths
    };
    if cluster_paths.is_empty() && local_paths.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let (cluster_share, local_share) = match (cluster_paths.is_empty(), local_paths.is_empty()) {
        (false, false) => (1.0 - local_power_fraction, local_power_fraction),
        (false, true) => (1.0, 0.0),
        _ => (0.0, 1.0),
    };

    let cluster_count = cluster_paths.iter().map(|c| c.cluster).max().unwrap_or(0);
    let mut path_counts = vec![0usize; cluster_count + 1];
    for c in cluster_paths.iter().chain(&local_paths) {
        path_counts[c.cluster] += 1;
    }

    let mut components = Vec::with_capacity(cluster_paths.len() + local_paths.len());
    for (paths, share) in [(local_paths, local_share), (cluster_paths, cluster_share)] {
        let sum: f64 = paths.iter().map(|c| c.power).sum();
        if paths.is_empty() {
            continue;
        }
        if !(sum > 0.0) {
            return Err(Error::DegenerateDistribution);
        }
        let scale = share / sum;
        components.extend(paths.into_iter().map(|c| PathComponent {
            power: c.power * scale,
            ..c
        }));
    }
    Ok(PathEnsemble {
        components,
        cluster_count,
        path_counts,
    })
}

/// Cluster paths, local scattering and assembly in the fixed stream order.
pub fn generate_ensemble<R: Rng + ?Sized>(
    profile: &ClusterProfile,
    geom: &LinkGeometry,
    tx: &AntennaPattern,
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<PathEnsemble> {
    let clusters = generate_cluster_paths(profile, geom, tx, cfg, rng)?;
    let local = generate_local_scatter(cfg, rng)?;
    assemble_ensemble(clusters, local, cfg.local_power_fraction)
}
