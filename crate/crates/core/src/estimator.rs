//! Receive-pattern weighting and binned estimators of the power angular
//! spectrum (PAS) and of the angle-of-reception PDFs.
//!
//! Bins are fixed half-open intervals `[c - ε, c + ε)` on a regular grid;
//! the last zenith bin is closed at 90°. Power sums per bin are divided by
//! the bin area `4·ε_θ·ε_φ` (joint) or width `2·ε` (marginal). PDFs are the
//! same sums divided by total received power, so they integrate to one under
//! the rectangle rule.

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::paths::{PathComponent, PathEnsemble};

/// Paths with powers replaced by `P_ij · g_R²(θ_ij, φ_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble {
    components: Vec<PathComponent>,
    total: f64,
}

impl WeightedEnsemble {
    pub fn components(&self) -> &[PathComponent] {
        &self.components
    }

    /// Received power `P_0`: the plain sum of weighted path powers.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Wraps already-weighted components.
    pub fn from_components(components: Vec<PathComponent>) -> Self {
        let total = components.iter().map(|c| c.power).sum();
        Self { components, total }
    }
}

pub fn apply_rx_pattern(ensemble: &PathEnsemble, rx: &AntennaPattern) -> WeightedEnsemble {
    WeightedEnsemble::from_components(
        ensemble
            .components()
            .iter()
            .map(|c| PathComponent {
                power: c.power * rx.gain_unchecked(c.theta, c.phi),
                ..*c
            })
            .collect(),
    )
}

/// A regular binning of one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleAxis {
    lo: f64,
    hi: f64,
    half_width: f64,
    bins: usize,
    closed_upper: bool,
}

impl AngleAxis {
    fn new(lo: f64, hi: f64, half_width: f64, closed_upper: bool, name: &str) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::GridSpec(format!("{name}: half-width {half_width} must be > 0")));
        }
        let count = (hi - lo) / (2.0 * half_width);
        let bins = count.round();
        if bins < 1.0 || (count - bins).abs() > 1e-9 * count.max(1.0) {
            return Err(Error::GridSpec(format!(
                "{name}: half-width {half_width}° gives {count} bins over [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            lo,
            hi,
            half_width,
            bins: bins as usize,
            closed_upper,
        })
    }

    /// Zenith axis over `[0°, 90°]`.
    pub fn theta(eps: f64) -> Result<Self> {
        Self::new(0.0, 90.0, eps, true, "eps_theta")
    }

    /// Azimuth axis over `[-180°, 180°)`.
    pub fn phi(eps: f64) -> Result<Self> {
        Self::new(-180.0, 180.0, eps, false, "eps_phi")
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn bin_width(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn len(&self) -> usize {
        self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins == 0
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn center(&self, k: usize) -> f64 {
        self.lo + (2 * k + 1) as f64 * self.half_width
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins).map(|k| self.center(k)).collect()
    }

    pub fn bin_index(&self, x: f64) -> Option<usize> {
        if self.closed_upper && x == self.hi {
            return Some(self.bins - 1);
        }
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        let k = ((x - self.lo) / self.bin_width()).floor() as usize;
        Some(k.min(self.bins - 1))
    }

    fn index_of(&self, x: f64, what: &str) -> Result<usize> {
        self.bin_index(x).ok_or_else(|| {
            Error::domain(format!("{what} {x}° outside [{}, {}]", self.lo, self.hi))
        })
    }
}

/// Additive per-bin power sums over a joint `(θ, φ)` grid.
///
/// Partial accumulators over disjoint path subsets merge by addition.
#[derive(Debug, Clone, PartialEq)]
pub struct BinAccumulator {
    theta: AngleAxis,
    phi: AngleAxis,
    sums: Vec<f64>,
}

impl BinAccumulator {
    pub fn new(theta: AngleAxis, phi: AngleAxis) -> Self {
        Self {
            theta,
            phi,
            sums: vec![0.0; theta.len() * phi.len()],
        }
    }

    pub fn add(&mut self, theta: f64, phi: f64, power: f64) -> Result<()> {
        let t = self.theta.index_of(theta, "zenith angle")?;
        let p = self.phi.index_of(phi, "azimuth")?;
        self.sums[t * self.phi.len() + p] += power;
        Ok(())
    }

    pub fn add_all(&mut self, paths: &[PathComponent]) -> Result<()> {
        paths.iter().try_for_each(|c| self.add(c.theta, c.phi, c.power))
    }

    pub fn merge(&mut self, other: &BinAccumulator) {
        assert!(self.theta == other.theta && self.phi == other.phi, "grid mismatch");
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn into_grid(self) -> AngularSpectrumGrid {
        let area = 4.0 * self.theta.half_width() * self.phi.half_width();
        let values = self.sums.iter().map(|s| s / area).collect();
        AngularSpectrumGrid {
            theta: self.theta,
            phi: self.phi,
            values,
        }
    }
}

/// Binned PAS, `P_R(θ, φ)`, in linear power per square degree.
/// Values are stored zenith-major: `values[t * phi_bins + p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrumGrid {
    theta: AngleAxis,
    phi: AngleAxis,
    values: Vec<f64>,
}

impl AngularSpectrumGrid {
    /// Builds a grid from per-bin densities, zenith-major.
    pub fn from_values(theta: AngleAxis, phi: AngleAxis, values: Vec<f64>) -> Result<Self> {
        if values.len() != theta.len() * phi.len() {
            return Err(Error::GridSpec(format!(
                "{} values for a {}x{} grid",
                values.len(),
                theta.len(),
                phi.len()
            )));
        }
        Ok(Self { theta, phi, values })
    }

    pub fn theta_axis(&self) -> &AngleAxis {
        &self.theta
    }

    pub fn phi_axis(&self) -> &AngleAxis {
        &self.phi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, t: usize, p: usize) -> f64 {
        self.values[t * self.phi.len() + p]
    }

    pub fn bin_area(&self) -> f64 {
        4.0 * self.theta.half_width() * self.phi.half_width()
    }

    /// Integral of the PAS over the whole domain: the total power.
    pub fn total_power(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.bin_area()
    }
}

pub fn estimate_pas(w: &WeightedEnsemble, eps_theta: f64, eps_phi: f64) -> Result<AngularSpectrumGrid> {
    let mut acc = BinAccumulator::new(AngleAxis::theta(eps_theta)?, AngleAxis::phi(eps_phi)?);
    acc.add_all(w.components())?;
    Ok(acc.into_grid())
}

/// Joint AOR density per square degree.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPdf {
    theta: AngleAxis,
    phi: AngleAxis,
    values: Vec<f64>,
    normalizer: f64,
}

impl JointPdf {
    pub fn theta_axis(&self) -> &AngleAxis {
        &self.theta
    }

    pub fn phi_axis(&self) -> &AngleAxis {
        &self.phi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, t: usize, p: usize) -> f64 {
        self.values[t * self.phi.len() + p]
    }

    /// `C_0`: the factor applied to the power ratio, `1 / (4 ε_θ ε_φ)`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * 4.0 * self.theta.half_width() * self.phi.half_width()
    }

    /// Zenith marginal obtained by integrating over azimuth.
    pub fn theta_marginal(&self) -> Vec<f64> {
        let w = self.phi.bin_width();
        self.values
            .chunks(self.phi.len())
            .map(|row| row.iter().sum::<f64>() * w)
            .collect()
    }
}

pub fn estimate_joint_pdf(grid: &AngularSpectrumGrid) -> Result<JointPdf> {
    let area = grid.bin_area();
    let total: f64 = grid.values.iter().map(|v| v * area).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateDistribution);
    }
    let normalizer = 1.0 / area;
    let values = grid.values.iter().map(|v| v * area / total * normalizer).collect();
    Ok(JointPdf {
        theta: grid.theta,
        phi: grid.phi,
        values,
        normalizer,
    })
}

/// One-dimensional AOR (or AOA) density per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPdf {
    axis: AngleAxis,
    values: Vec<f64>,
    normalizer: f64,
}

impl MarginalPdf {
    /// Wraps per-bin densities; `normalizer` is informational.
    pub fn from_values(axis: AngleAxis, values: Vec<f64>, normalizer: f64) -> Result<Self> {
        if values.len() != axis.len() {
            return Err(Error::GridSpec(format!(
                "{} values for {} bins",
                values.len(),
                axis.len()
            )));
        }
        Ok(Self {
            axis,
            values,
            normalizer,
        })
    }

    pub fn axis(&self) -> &AngleAxis {
        &self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `C_θ` or `C_φ`: `1 / (2 ε)`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.axis.bin_width()
    }

    /// Mean density over a set of PDFs on the same axis.
    pub fn average(pdfs: &[MarginalPdf]) -> Result<MarginalPdf> {
        let first = pdfs.first().ok_or(Error::EmptyInput("no PDFs to average"))?;
        let mut values = vec![0.0; first.values.len()];
        for p in pdfs {
            if p.axis != first.axis {
                return Err(Error::GridSpec("cannot average PDFs on different axes".into()));
            }
            for (acc, v) in values.iter_mut().zip(&p.values) {
                *acc += v;
            }
        }
        let n = pdfs.len() as f64;
        values.iter_mut().for_each(|v| *v /= n);
        Ok(MarginalPdf {
            axis: first.axis,
            values,
            normalizer: first.normalizer,
        })
    }
}

/// Marginal power spectrum `P_R(θ)` or `P_R(φ)`, power per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSpectrum {
    axis: AngleAxis,
    values: Vec<f64>,
}

impl MarginalSpectrum {
    pub fn from_values(axis: AngleAxis, values: Vec<f64>) -> Result<Self> {
        if values.len() != axis.len() {
            return Err(Error::GridSpec(format!(
                "{} values for {} bins",
                values.len(),
                axis.len()
            )));
        }
        Ok(Self { axis, values })
    }

    pub fn axis(&self) -> &AngleAxis {
        &self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_pdf(&self) -> Result<MarginalPdf> {
        let w = self.axis.bin_width();
        let total: f64 = self.values.iter().map(|v| v * w).sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateDistribution);
        }
        let values = self.values.iter().map(|v| v / total).collect();
        Ok(MarginalPdf {
            axis: self.axis,
            values,
            normalizer: 1.0 / w,
        })
    }
}

fn marginal_sums(paths: &[PathComponent], axis: &AngleAxis, pick: fn(&PathComponent) -> f64, what: &str) -> Result<Vec<f64>> {
    let mut sums = vec![0.0; axis.len()];
    for c in paths {
        sums[axis.index_of(pick(c), what)?] += c.power;
    }
    Ok(sums)
}

/// `(P_R(θ), P_R(φ))`.
pub fn estimate_marginal_spectra(
    w: &WeightedEnsemble,
    eps_theta: f64,
    eps_phi: f64,
) -> Result<(MarginalSpectrum, MarginalSpectrum)> {
    let theta = AngleAxis::theta(eps_theta)?;
    let phi = AngleAxis::phi(eps_phi)?;
    let spectrum = |axis: AngleAxis, pick: fn(&PathComponent) -> f64, what| -> Result<MarginalSpectrum> {
        let sums = marginal_sums(w.components(), &axis, pick, what)?;
        let width = axis.bin_width();
        Ok(MarginalSpectrum {
            axis,
            values: sums.into_iter().map(|s| s / width).collect(),
        })
    };
    Ok((
        spectrum(theta, |c| c.theta, "zenith angle")?,
        spectrum(phi, |c| c.phi, "azimuth")?,
    ))
}

/// Zenith and azimuth AOR densities, each integrating to one.
pub fn estimate_marginals(
    w: &WeightedEnsemble,
    eps_theta: f64,
    eps_phi: f64,
) -> Result<(MarginalPdf, MarginalPdf)> {
    let theta = AngleAxis::theta(eps_theta)?;
    let phi = AngleAxis::phi(eps_phi)?;
    if !(w.total() > 0.0) {
        return Err(Error::DegenerateDistribution);
    }
    let pdf = |axis: AngleAxis, pick: fn(&PathComponent) -> f64, what| -> Result<MarginalPdf> {
        let sums = marginal_sums(w.components(), &axis, pick, what)?;
        let total: f64 = sums.iter().sum();
        let normalizer = 1.0 / axis.bin_width();
        Ok(MarginalPdf {
            axis,
            values: sums.into_iter().map(|s| normalizer * s / total).collect(),
            normalizer,
        })
    };
    Ok((
        pdf(theta, |c| c.theta, "zenith angle")?,
        pdf(phi, |c| c.phi, "azimuth")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::assemble_ensemble;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn path(theta: f64, phi: f64, power: f64) -> PathComponent {
        PathComponent {
            cluster: 1,
            index: 1,
            theta,
            phi,
            power,
        }
    }

    fn single(theta: f64, phi: f64, power: f64) -> WeightedEnsemble {
        WeightedEnsemble::from_components(vec![path(theta, phi, power)])
    }

    #[test]
    fn identity_weighting_under_unit_omni() {
        let e = assemble_ensemble(vec![path(80.0, 10.0, 0.3), path(60.0, -100.0, 0.7)], vec![], 0.0)
            .unwrap();
        let w = apply_rx_pattern(&e, &AntennaPattern::omnidirectional(0.0).unwrap());
        assert_eq!(w.components(), e.components());
        assert_relative_eq!(w.total(), 1.0);
    }

    #[test]
    fn boresight_and_half_power_weighting() {
        let rx = AntennaPattern::widebeam(0.0);
        let e = PathEnsemble::from_components(vec![path(90.0, 0.0, 2.0)]).unwrap();
        let w = apply_rx_pattern(&e, &rx);
        assert_relative_eq!(w.components()[0].power, 63.245553203367585, max_relative = 1e-12);
        assert!(w.components()[0].power <= 2.0 * rx.boresight_gain());

        let e = assemble_ensemble(vec![path(90.0, 14.4, 1.0)], vec![], 0.0).unwrap();
        let w = apply_rx_pattern(&e, &rx);
        assert_relative_eq!(w.total(), rx.boresight_gain() / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn single_path_pas_bin() {
        let grid = estimate_pas(&single(90.0, 0.0, 1.0), 1.0, 1.0).unwrap();
        assert_eq!(grid.theta_axis().len(), 45);
        assert_eq!(grid.phi_axis().len(), 180);
        // θ = 90 lands in the closed last bin, φ = 0 in [0, 2)
        assert_eq!(grid.value(44, 90), 0.25);
        assert_eq!(grid.values().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn co_binned_paths_add() {
        let one = estimate_pas(&single(45.3, 12.2, 1.0), 1.0, 1.0).unwrap();
        let two = estimate_pas(
            &WeightedEnsemble::from_components(vec![path(45.1, 12.9, 0.5), path(45.9, 12.0, 0.5)]),
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn grid_specification_errors() {
        let w = single(45.0, 0.0, 1.0);
        assert!(matches!(estimate_pas(&w, 0.7, 1.0), Err(Error::GridSpec(_))));
        assert!(matches!(estimate_pas(&w, 1.0, 0.0), Err(Error::GridSpec(_))));
        assert!(matches!(estimate_marginals(&w, 1.0, 7.0), Err(Error::GridSpec(_))));
        assert!(AngleAxis::theta(45.0).is_ok());
        assert!(AngleAxis::theta(46.0).is_err());
    }

    #[test]
    fn joint_pdf_single_bin() {
        let grid = estimate_pas(&single(30.0, 30.0, 5.0), 1.0, 1.0).unwrap();
        let pdf = estimate_joint_pdf(&grid).unwrap();
        let t = grid.theta_axis().bin_index(30.0).unwrap();
        let p = grid.phi_axis().bin_index(30.0).unwrap();
        assert_relative_eq!(pdf.value(t, p), 0.25, max_relative = 1e-15);
        assert_relative_eq!(pdf.integral(), 1.0, max_relative = 1e-15);
        assert_eq!(pdf.normalizer(), 0.25);
    }

    #[test]
    fn joint_pdf_uniform() {
        let theta = AngleAxis::theta(1.0).unwrap();
        let phi = AngleAxis::phi(1.0).unwrap();
        let grid = AngularSpectrumGrid::from_values(theta, phi, vec![3.0; 45 * 180]).unwrap();
        let pdf = estimate_joint_pdf(&grid).unwrap();
        for v in pdf.values() {
            assert_relative_eq!(*v, 1.0 / (90.0 * 360.0), max_relative = 1e-12);
        }
        let zero = AngularSpectrumGrid::from_values(theta, phi, vec![0.0; 45 * 180]).unwrap();
        assert!(matches!(estimate_joint_pdf(&zero), Err(Error::DegenerateDistribution)));
    }

    #[test]
    fn marginal_single_path() {
        let (_, phi) = estimate_marginals(&single(70.0, 10.0, 1.0), 1.0, 1.0).unwrap();
        let k = phi.axis().bin_index(10.0).unwrap();
        assert_eq!(phi.values()[k], 0.5);
        assert_eq!(phi.values().iter().filter(|&&v| v != 0.0).count(), 1);
        assert!(matches!(
            estimate_marginals(&single(70.0, 10.0, 0.0), 1.0, 1.0),
            Err(Error::DegenerateDistribution)
        ));
    }

    #[test]
    fn symmetric_pair_has_zero_mean() {
        let e = assemble_ensemble(vec![path(80.0, 29.0, 0.5), path(80.0, -29.0, 0.5)], vec![], 0.0)
            .unwrap();
        let w = apply_rx_pattern(&e, &AntennaPattern::omnidirectional(0.0).unwrap());
        let (_, phi) = estimate_marginals(&w, 1.0, 1.0).unwrap();
        let w_bin = phi.axis().bin_width();
        let mean: f64 = phi
            .axis()
            .centers()
            .iter()
            .zip(phi.values())
            .map(|(c, v)| c * v * w_bin)
            .sum();
        assert!(mean.abs() < 1e-12);
        let lo = phi.axis().bin_index(-29.0).unwrap();
        let hi = phi.axis().bin_index(29.0).unwrap();
        assert_eq!(phi.values()[lo], phi.values()[hi]);
    }

    #[test]
    fn narrowbeam_bin_mass_ratio() {
        let rx = AntennaPattern::narrowbeam(0.0);
        let e = assemble_ensemble(vec![path(90.0, 0.0, 0.5), path(90.0, 60.0, 0.5)], vec![], 0.0)
            .unwrap();
        let w = apply_rx_pattern(&e, &rx);
        let (_, phi) = estimate_marginals(&w, 1.0, 1.0).unwrap();
        let a = phi.values()[phi.axis().bin_index(0.0).unwrap()];
        let b = phi.values()[phi.axis().bin_index(60.0).unwrap()];
        let expected = rx.gain(90.0, 0.0).unwrap() / rx.gain(90.0, 60.0).unwrap();
        assert_relative_eq!(a / b, expected, max_relative = 1e-9);
    }

    #[test]
    fn refinement_reaggregates_to_coarse() {
        let comps: Vec<PathComponent> = (0..300)
            .map(|k| {
                let x = k as f64;
                path((x * 7.31) % 90.0, ((x * 13.7) % 360.0) - 180.0, 1.0 + (x * 0.37) % 2.0)
            })
            .collect();
        let w = WeightedEnsemble::from_components(comps);
        let coarse = estimate_pas(&w, 1.0, 1.0).unwrap();
        let fine = estimate_pas(&w, 0.5, 0.5).unwrap();
        let np = coarse.phi_axis().len();
        for t in 0..coarse.theta_axis().len() {
            for p in 0..np {
                let sum: f64 = [(0, 0), (0, 1), (1, 0), (1, 1)]
                    .iter()
                    .map(|(dt, dp)| fine.value(2 * t + dt, 2 * p + dp))
                    .sum();
                assert_relative_eq!(coarse.value(t, p), sum / 4.0, max_relative = 1e-12);
            }
        }
    }

    fn arb_paths() -> impl Strategy<Value = Vec<PathComponent>> {
        prop::collection::vec(
            (0.0f64..=90.0, -180.0f64..180.0, 1e-3f64..10.0).prop_map(|(t, p, w)| path(t, p, w)),
            1..60,
        )
    }

    proptest! {
        #[test]
        fn pdfs_integrate_to_one(paths in arb_paths(), et in prop::sample::select(vec![0.5, 1.0, 5.0, 15.0]),
                                 ep in prop::sample::select(vec![0.5, 1.0, 6.0, 30.0])) {
            let w = WeightedEnsemble::from_components(paths);
            let grid = estimate_pas(&w, et, ep).unwrap();
            let joint = estimate_joint_pdf(&grid).unwrap();
            prop_assert!((joint.integral() - 1.0).abs() < 1e-12);
            let (t, p) = estimate_marginals(&w, et, ep).unwrap();
            prop_assert!((t.integral() - 1.0).abs() < 1e-12);
            prop_assert!((p.integral() - 1.0).abs() < 1e-12);
            prop_assert!(joint.values().iter().chain(t.values()).chain(p.values()).all(|&v| v >= 0.0));
            for (a, b) in joint.theta_marginal().iter().zip(t.values()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn gain_scale_invariance(paths in arb_paths(), k in 1e-3f64..1e3, alpha in -180.0f64..180.0) {
            let e = assemble_ensemble(paths, vec![], 0.0).unwrap();
            let base = AntennaPattern::new(10.0, 30.0, 28.8, alpha).unwrap();
            let scaled = AntennaPattern::new(10.0 + 10.0 * k.log10(), 30.0, 28.8, alpha).unwrap();
            let (t1, p1) = estimate_marginals(&apply_rx_pattern(&e, &base), 2.5, 2.5).unwrap();
            let (t2, p2) = estimate_marginals(&apply_rx_pattern(&e, &scaled), 2.5, 2.5).unwrap();
            for (a, b) in t1.values().iter().zip(t2.values()).chain(p1.values().iter().zip(p2.values())) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-15);
            }
        }

        #[test]
        fn partitioned_accumulation_matches_sequential(paths in arb_paths(), split in 1usize..8) {
            let theta = AngleAxis::theta(1.0).unwrap();
            let phi = AngleAxis::phi(1.0).unwrap();
            let mut seq = BinAccumulator::new(theta, phi);
            seq.add_all(&paths).unwrap();
            let mut merged = BinAccumulator::new(theta, phi);
            for chunk in paths.chunks(split).rev() {
                let mut part = BinAccumulator::new(theta, phi);
                part.add_all(chunk).unwrap();
                merged.merge(&part);
            }
            for (a, b) in seq.sums().iter().zip(merged.sums()) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300));
            }
        }
    }
}
