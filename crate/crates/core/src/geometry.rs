//! Link geometry and delay-defined half-ellipsoids.
//!
//! Tx sits at `(-D/2, 0, 0)` and Rx at `(+D/2, 0, 0)` in a right-handed frame
//! with `z` up; the ground plane is `z = 0`. A path with excess delay `τ` has
//! total length `D + c·τ`, so its scatterer lies on the prolate spheroid with
//! foci at Tx and Rx and semi-major axis `(D + c·τ)/2`. Only the upper half
//! (`z >= 0`) is used.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use rand::Rng;

use crate::antenna::wrap_deg;
use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        (*self - *other).norm()
    }

    /// Unit vector toward zenith angle `theta` and azimuth `phi` (degrees).
    pub fn unit(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.to_radians().sin_cos();
        let (sp, cp) = phi.to_radians().sin_cos();
        Self::new(st * cp, st * sp, ct)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    distance: f64,
}

impl LinkGeometry {
    pub fn new(distance: f64) -> Result<Self> {
        if !(distance.is_finite() && distance > 0.0) {
            return Err(Error::domain(format!("Tx-Rx distance {distance} m must be positive")));
        }
        Ok(Self { distance })
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn tx(&self) -> Point3 {
        Point3::new(-self.distance / 2.0, 0.0, 0.0)
    }

    pub fn rx(&self) -> Point3 {
        Point3::new(self.distance / 2.0, 0.0, 0.0)
    }
}

/// Upper half of a prolate spheroid centred at the origin, major axis on `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfEllipsoid {
    semi_major: f64,
    semi_minor: f64,
    focal_half: f64,
}

impl HalfEllipsoid {
    pub fn semi_major(&self) -> f64 {
        self.semi_major
    }

    pub fn semi_minor(&self) -> f64 {
        self.semi_minor
    }

    pub fn focal_half(&self) -> f64 {
        self.focal_half
    }

    /// Zero excess delay collapses the spheroid onto the Tx-Rx segment.
    pub fn is_degenerate(&self) -> bool {
        self.semi_minor == 0.0
    }

    /// `(x/a)² + (y/b)² + (z/b)² - 1`.
    pub fn surface_residual(&self, p: &Point3) -> f64 {
        let (a, b) = (self.semi_major, self.semi_minor);
        (p.x / a).powi(2) + (p.y / b).powi(2) + (p.z / b).powi(2) - 1.0
    }
}

pub fn ellipsoid_from_delay(geom: &LinkGeometry, tau: f64) -> Result<HalfEllipsoid> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("excess delay {tau} s must be >= 0")));
    }
    let focal_half = geom.distance() / 2.0;
    let semi_major = (geom.distance() + SPEED_OF_LIGHT * tau) / 2.0;
    // (a - f)(a + f) keeps precision for short delays
    let semi_minor = ((semi_major - focal_half) * (semi_major + focal_half)).sqrt();
    Ok(HalfEllipsoid {
        semi_major,
        semi_minor,
        focal_half,
    })
}

/// Area-uniform point on the half-ellipsoid surface.
///
/// Parametrised as `(a cos u, b sin u cos v, b sin u sin v)` with
/// `u ∈ [0, π]`, `v ∈ [0, π]` (the `z >= 0` half). The area element is
/// `b sin u · sqrt(a² sin²u + b² cos²u) du dv`, independent of `v`, so `v` is
/// drawn uniformly and `u` by rejection against the bound `a`.
pub fn sample_surface_point<R: Rng + ?Sized>(e: &HalfEllipsoid, rng: &mut R) -> Result<Point3> {
    if e.is_degenerate() {
        return Err(Error::DegenerateGeometry);
    }
    let (a, b) = (e.semi_major, e.semi_minor);
    let u = loop {
        let u = PI * rng.random::<f64>();
        let (su, cu) = u.sin_cos();
        let density = su * (a * a * su * su + b * b * cu * cu).sqrt();
        if rng.random::<f64>() * a < density {
            break u;
        }
    };
    let v = PI * rng.random::<f64>();
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    Ok(Point3::new(a * cu, b * su * cv, (b * su * sv).max(0.0)))
}

fn direction_angles(v: Point3) -> Result<(f64, f64)> {
    let r = v.norm();
    if r == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    if v.z < -1e-9 * r {
        return Err(Error::domain(format!("point below ground plane (z = {})", v.z)));
    }
    let theta = (v.z / r).clamp(-1.0, 1.0).acos().to_degrees().min(90.0);
    let phi = if v.x == 0.0 && v.y == 0.0 {
        0.0
    } else {
        wrap_deg(v.y.atan2(v.x).to_degrees())
    };
    Ok((theta, phi))
}

/// Zenith and azimuth (degrees) of the final leg, seen from Rx.
pub fn arrival_angles(p: &Point3, geom: &LinkGeometry) -> Result<(f64, f64)> {
    direction_angles(*p - geom.rx())
}

/// Zenith and azimuth (degrees) of the first leg, seen from Tx.
pub fn departure_angles(p: &Point3, geom: &LinkGeometry) -> Result<(f64, f64)> {
    direction_angles(*p - geom.tx())
}
