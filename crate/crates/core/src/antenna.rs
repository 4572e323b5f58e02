//! Gaussian-beam antenna power patterns.
//!
//! The pattern peaks on the horizon (zenith angle 90°) in the azimuth
//! direction `alpha`:
//!
//! ```text
//! g²(θ, φ) = G · exp(-(π/2 - θ)² / σθ²) · exp(-wrap(φ - α)² / σφ²)
//! ```
//!
//! with `σ = HPBW / (2·sqrt(ln 2))`, which puts the −3 dB points exactly at
//! ±HPBW/2 from boresight.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Boresight gain 15.0 dBi, HPBW 30.0° (elevation) × 28.8° (azimuth).
pub const WIDEBEAM: (f64, f64, f64) = (15.0, 30.0, 28.8);
/// Boresight gain 24.5 dBi, HPBW 8.6° (elevation) × 10.9° (azimuth).
pub const NARROWBEAM: (f64, f64, f64) = (24.5, 8.6, 10.9);

/// Wraps an angle in degrees into `[-180, 180)`. Values already in range are
/// returned unchanged.
pub fn wrap_deg(x: f64) -> f64 {
    if (-180.0..180.0).contains(&x) {
        return x;
    }
    let y = (x + 180.0).rem_euclid(360.0) - 180.0;
    if y >= 180.0 {
        y - 360.0
    } else {
        y
    }
}

/// Linear power ratio to decibels.
pub fn db(linear: f64) -> Result<f64> {
    if !(linear > 0.0) {
        return Err(Error::domain(format!("db of non-positive value {linear}")));
    }
    Ok(10.0 * linear.log10())
}

/// Decibels to linear power ratio.
pub fn lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn beam_sigma(hpbw_deg: f64) -> f64 {
    hpbw_deg.to_radians() / (2.0 * LN_2.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPattern {
    gain: f64,
    hpbw_theta: f64,
    hpbw_phi: f64,
    sigma_theta: f64,
    sigma_phi: f64,
    alpha: f64,
    omnidirectional: bool,
}

impl AntennaPattern {
    /// Directional Gaussian beam. HPBWs in degrees, `(0, 180]`.
    pub fn new(gain_dbi: f64, hpbw_theta: f64, hpbw_phi: f64, alpha: f64) -> Result<Self> {
        if !gain_dbi.is_finite() {
            return Err(Error::domain(format!("gain {gain_dbi} dBi is not finite")));
        }
        for (name, v) in [("hpbw_theta", hpbw_theta), ("hpbw_phi", hpbw_phi)] {
            if !(v > 0.0 && v <= 180.0) {
                return Err(Error::domain(format!("{name} = {v}° outside (0, 180]")));
            }
        }
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha {alpha} is not finite")));
        }
        Ok(Self {
            gain: lin(gain_dbi),
            hpbw_theta,
            hpbw_phi,
            sigma_theta: beam_sigma(hpbw_theta),
            sigma_phi: beam_sigma(hpbw_phi),
            alpha: wrap_deg(alpha),
            omnidirectional: false,
        })
    }

    /// Isotropic pattern with constant gain. Beamwidths are reported as 180°.
    pub fn omnidirectional(gain_dbi: f64) -> Result<Self> {
        let mut p = Self::new(gain_dbi, 180.0, 180.0, 0.0)?;
        p.omnidirectional = true;
        Ok(p)
    }

    pub fn widebeam(alpha: f64) -> Self {
        Self::new(WIDEBEAM.0, WIDEBEAM.1, WIDEBEAM.2, alpha).expect("valid preset")
    }

    pub fn narrowbeam(alpha: f64) -> Self {
        Self::new(NARROWBEAM.0, NARROWBEAM.1, NARROWBEAM.2, alpha).expect("valid preset")
    }

    /// Same pattern steered to a new azimuth.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha {alpha} is not finite")));
        }
        Ok(Self {
            alpha: wrap_deg(alpha),
            ..self.clone()
        })
    }

    /// Same pattern with a new azimuth beamwidth.
    pub fn with_hpbw_phi(&self, hpbw_phi: f64) -> Result<Self> {
        let mut p = Self::new(0.0, self.hpbw_theta, hpbw_phi, self.alpha)?;
        p.gain = self.gain;
        p.omnidirectional = self.omnidirectional;
        Ok(p)
    }

    /// Linear boresight gain.
    pub fn boresight_gain(&self) -> f64 {
        self.gain
    }

    pub fn hpbw_theta(&self) -> f64 {
        self.hpbw_theta
    }

    pub fn hpbw_phi(&self) -> f64 {
        self.hpbw_phi
    }

    /// Elevation-plane σ in radians.
    pub fn sigma_theta(&self) -> f64 {
        self.sigma_theta
    }

    /// Azimuth-plane σ in radians.
    pub fn sigma_phi(&self) -> f64 {
        self.sigma_phi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_omnidirectional(&self) -> bool {
        self.omnidirectional
    }

    /// Linear power gain toward zenith angle `theta` and azimuth `phi`
    /// (degrees). `theta` must lie in `[0, 90]`.
    pub fn gain(&self, theta: f64, phi: f64) -> Result<f64> {
        if !(0.0..=90.0).contains(&theta) {
            return Err(Error::domain(format!("zenith angle {theta}° outside [0, 90]")));
        }
        if !phi.is_finite() {
            return Err(Error::domain(format!("azimuth {phi} is not finite")));
        }
        Ok(self.gain_unchecked(theta, phi))
    }

    pub(crate) fn gain_unchecked(&self, theta: f64, phi: f64) -> f64 {
        if self.omnidirectional {
            return self.gain;
        }
        let de = (90.0 - theta).to_radians() / self.sigma_theta;
        let da = wrap_deg(phi - self.alpha).to_radians() / self.sigma_phi;
        self.gain * (-de * de).exp() * (-da * da).exp()
    }
}
