//! Angle-spread statistics of marginal PDFs and their aggregation over
//! Monte Carlo runs and parameter sweeps.
//!
//! Moments use rectangle-rule quadrature at bin centres, `Σ x^k f(x) Δx`,
//! on the linear angle domain (no circular statistics).

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::estimator::MarginalPdf;
use crate::montecarlo::{MonteCarlo, PointResult, PointSpec};

const NORMALIZATION_TOLERANCE: f64 = 1e-3;

/// Ω = (α, HPBW_θ, HPBW_φ) of the receive pattern, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaKey {
    pub alpha: f64,
    pub hpbw_theta: f64,
    pub hpbw_phi: f64,
}

impl OmegaKey {
    pub fn of(pattern: &AntennaPattern) -> Self {
        Self {
            alpha: pattern.alpha(),
            hpbw_theta: pattern.hpbw_theta(),
            hpbw_phi: pattern.hpbw_phi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadReport {
    pub omega: OmegaKey,
    /// σθ in degrees.
    pub sigma_theta: f64,
    /// σφ in degrees.
    pub sigma_phi: f64,
    /// Standard errors of the per-run spreads.
    pub stderr_theta: f64,
    pub stderr_phi: f64,
    pub runs: usize,
    pub per_run_theta: Vec<f64>,
    pub per_run_phi: Vec<f64>,
}

impl SpreadReport {
    /// Spreads as the mean of the per-run values.
    pub fn from_runs(omega: OmegaKey, per_run_theta: Vec<f64>, per_run_phi: Vec<f64>) -> Result<Self> {
        let (sigma_theta, stderr_theta) = aggregate_runs(&per_run_theta)?;
        let (sigma_phi, stderr_phi) = aggregate_runs(&per_run_phi)?;
        Ok(Self {
            omega,
            sigma_theta,
            sigma_phi,
            stderr_theta,
            stderr_phi,
            runs: per_run_theta.len(),
            per_run_theta,
            per_run_phi,
        })
    }

    /// Spreads of the run-averaged PDFs; standard errors still come from
    /// the per-run values.
    pub fn from_averaged(
        omega: OmegaKey,
        theta: &MarginalPdf,
        phi: &MarginalPdf,
        per_run_theta: Vec<f64>,
        per_run_phi: Vec<f64>,
    ) -> Result<Self> {
        let mut r = Self::from_runs(omega, per_run_theta, per_run_phi)?;
        r.sigma_theta = std_dev(theta)?;
        r.sigma_phi = std_dev(phi)?;
        Ok(r)
    }
}

fn moments(pdf: &MarginalPdf) -> Result<(f64, f64)> {
    let integral = pdf.integral();
    if (integral - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization { integral });
    }
    let dx = pdf.axis().bin_width();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (k, f) in pdf.values().iter().enumerate() {
        let x = pdf.axis().center(k);
        m1 += x * f * dx;
        m2 += x * x * f * dx;
    }
    Ok((m1, m2))
}

/// Mean angle of a normalized PDF, degrees.
pub fn mean(pdf: &MarginalPdf) -> Result<f64> {
    moments(pdf).map(|(m1, _)| m1)
}

/// Standard deviation of a normalized PDF, degrees.
pub fn std_dev(pdf: &MarginalPdf) -> Result<f64> {
    let (m1, m2) = moments(pdf)?;
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

/// Third central moment, degrees³. Its sign is the direction of skew.
pub fn third_central_moment(pdf: &MarginalPdf) -> Result<f64> {
    let m = mean(pdf)?;
    let dx = pdf.axis().bin_width();
    Ok(pdf
        .values()
        .iter()
        .enumerate()
        .map(|(k, f)| (pdf.axis().center(k) - m).powi(3) * f * dx)
        .sum())
}

/// Arithmetic mean and standard error (sample σ / √n) across runs.
/// A single run has standard error 0.
pub fn aggregate_runs(per_run: &[f64]) -> Result<(f64, f64)> {
    if per_run.is_empty() {
        return Err(Error::EmptyInput("no runs to aggregate"));
    }
    let n = per_run.len() as f64;
    let mean = per_run.iter().sum::<f64>() / n;
    if per_run.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = per_run.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Sweep points steering `rx` to each azimuth in `alphas`.
pub fn alpha_points(tx: &AntennaPattern, rx: &AntennaPattern, alphas: &[f64]) -> Result<Vec<PointSpec>> {
    alphas
        .iter()
        .map(|&a| {
            Ok(PointSpec {
                tx: tx.clone(),
                rx: rx.with_alpha(a)?,
            })
        })
        .collect()
}

/// Sweep points over the azimuth HPBW of `rx` (and of `tx` when
/// `include_tx` is set).
pub fn hpbw_points(
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    hpbw_phi: &[f64],
    include_tx: bool,
) -> Result<Vec<PointSpec>> {
    hpbw_phi
        .iter()
        .map(|&h| {
            Ok(PointSpec {
                tx: if include_tx { tx.with_hpbw_phi(h)? } else { tx.clone() },
                rx: rx.with_hpbw_phi(h)?,
            })
        })
        .collect()
}

/// Full Monte Carlo results for every sweep point, in order. Point `k` uses
/// random substreams keyed by `k`, so a sweep is reproducible from the seed.
pub fn sweep_points(mc: &MonteCarlo, points: &[PointSpec]) -> Result<Vec<PointResult>> {
    if points.is_empty() {
        return Err(Error::EmptyInput("sweep has no points"));
    }
    points
        .iter()
        .enumerate()
        .map(|(k, p)| mc.run_point(k as u64, p))
        .collect()
}

/// One AOR spread report per sweep point.
pub fn sweep(mc: &MonteCarlo, points: &[PointSpec]) -> Result<Vec<SpreadReport>> {
    Ok(sweep_points(mc, points)?.into_iter().map(|r| r.aor).collect())
}
