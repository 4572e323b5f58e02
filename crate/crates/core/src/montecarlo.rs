//! Seeded Monte Carlo evaluation of one sweep point.
//!
//! Run `r` of point `k` draws from ChaCha8 stream `(k << 32) | r` of the base
//! seed, so results depend only on `(seed, k, r)` and not on thread count or
//! completion order. Runs execute in parallel in fixed-size batches and are
//! folded in run-index order.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::estimator::{
    apply_rx_pattern, estimate_marginal_spectra, AngleAxis, AngularSpectrumGrid, BinAccumulator,
    MarginalPdf, MarginalSpectrum,
};
use crate::geometry::LinkGeometry;
use crate::paths::{generate_ensemble, GenerationConfig};
use crate::pdp::ClusterProfile;
use crate::spread::{self, OmegaKey, SpreadReport};

const BATCH: usize = 64;

/// Transmit and receive patterns of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSpec {
    pub tx: AntennaPattern,
    pub rx: AntennaPattern,
}

#[derive(Debug, Clone)]
pub struct MonteCarlo {
    profile: ClusterProfile,
    geometry: LinkGeometry,
    generation: GenerationConfig,
    eps_theta: f64,
    eps_phi: f64,
    runs: usize,
    seed: u64,
    jobs: usize,
}

/// Run-averaged estimates and per-run spreads for one sweep point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub omega: OmegaKey,
    pub aor: SpreadReport,
    /// Spreads of the unweighted ensemble (omnidirectional unit-gain Rx).
    pub aoa: SpreadReport,
    pub pas: AngularSpectrumGrid,
    pub aor_theta: MarginalPdf,
    pub aor_phi: MarginalPdf,
    pub aoa_theta: MarginalPdf,
    pub aoa_phi: MarginalPdf,
    /// Run-averaged `P_R(θ)` and `P_R(φ)`.
    pub pr_theta: MarginalSpectrum,
    pub pr_phi: MarginalSpectrum,
    /// Per-run third central moment of the azimuth AOR PDF.
    pub aor_phi_skew: Vec<f64>,
    /// Mean received power `P_0` over runs.
    pub received_power: f64,
    pub run_seconds: Vec<f64>,
}

struct RunOutcome {
    pas: BinAccumulator,
    pr_theta: MarginalSpectrum,
    pr_phi: MarginalSpectrum,
    aor_theta: MarginalPdf,
    aor_phi: MarginalPdf,
    aoa_theta: MarginalPdf,
    aoa_phi: MarginalPdf,
    sigmas: [f64; 4],
    skew: f64,
    received_power: f64,
    seconds: f64,
}

impl MonteCarlo {
    /// `profile` must already be restricted to positive delays and
    /// normalized (see [`ClusterProfile::delayed`]).
    pub fn new(
        profile: ClusterProfile,
        generation: GenerationConfig,
        eps_theta: f64,
        eps_phi: f64,
        runs: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut problems = generation.violations();
        if runs == 0 {
            problems.push("runs must be >= 1".into());
        }
        if let Err(e) = AngleAxis::theta(eps_theta) {
            problems.push(e.to_string());
        }
        if let Err(e) = AngleAxis::phi(eps_phi) {
            problems.push(e.to_string());
        }
        if profile.clusters().iter().any(|c| c.delay <= 0.0) {
            problems.push("profile contains a zero-delay cluster".into());
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(Self {
            profile,
            geometry: LinkGeometry::new(generation.distance)?,
            generation,
            eps_theta,
            eps_phi,
            runs,
            seed,
            jobs: 0,
        })
    }

    /// Worker threads; 0 uses the global rayon pool.
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs.max(1);
        self
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn profile(&self) -> &ClusterProfile {
        &self.profile
    }

    pub fn generation(&self) -> &GenerationConfig {
        &self.generation
    }

    pub fn eps(&self) -> (f64, f64) {
        (self.eps_theta, self.eps_phi)
    }

    /// The random stream of run `run` at sweep point `point`.
    pub fn rng(&self, point: u64, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((point << 32) | (run & 0xffff_ffff));
        rng
    }

    fn single_run(&self, point: u64, run: u64, spec: &PointSpec, omni: &AntennaPattern) -> Result<RunOutcome> {
        let start = Instant::now();
        let mut rng = self.rng(point, run);
        let ensemble = generate_ensemble(&self.profile, &self.geometry, &spec.tx, &self.generation, &mut rng)?;

        let weighted = apply_rx_pattern(&ensemble, &spec.rx);
        let baseline = apply_rx_pattern(&ensemble, omni);

        let mut pas = BinAccumulator::new(AngleAxis::theta(self.eps_theta)?, AngleAxis::phi(self.eps_phi)?);
        pas.add_all(weighted.components())?;

        let (pr_theta, pr_phi) = estimate_marginal_spectra(&weighted, self.eps_theta, self.eps_phi)?;
        let aor_theta = pr_theta.to_pdf()?;
        let aor_phi = pr_phi.to_pdf()?;
        let (aoa_t_spec, aoa_p_spec) = estimate_marginal_spectra(&baseline, self.eps_theta, self.eps_phi)?;
        let aoa_theta = aoa_t_spec.to_pdf()?;
        let aoa_phi = aoa_p_spec.to_pdf()?;

        let sigmas = [
            spread::std_dev(&aor_theta)?,
            spread::std_dev(&aor_phi)?,
            spread::std_dev(&aoa_theta)?,
            spread::std_dev(&aoa_phi)?,
        ];
        let skew = spread::third_central_moment(&aor_phi)?;
        Ok(RunOutcome {
            pas,
            pr_theta,
            pr_phi,
            aor_theta,
            aor_phi,
            aoa_theta,
            aoa_phi,
            sigmas,
            skew,
            received_power: weighted.total(),
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// All runs of one sweep point; `point` selects the random substreams.
    pub fn run_point(&self, point: u64, spec: &PointSpec) -> Result<PointResult> {
        let pool = match self.jobs {
            0 => None,
            n => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::domain(format!("thread pool: {e}")))?,
            ),
        };
        match &pool {
            Some(p) => p.install(|| self.run_point_inner(point, spec)),
            None => self.run_point_inner(point, spec),
        }
    }

    fn run_point_inner(&self, point: u64, spec: &PointSpec) -> Result<PointResult> {
        let omni = AntennaPattern::omnidirectional(0.0)?;
        let theta = AngleAxis::theta(self.eps_theta)?;
        let phi = AngleAxis::phi(self.eps_phi)?;

        let mut pas = BinAccumulator::new(theta, phi);
        let mut pr_theta = vec![0.0; theta.len()];
        let mut pr_phi = vec![0.0; phi.len()];
        let mut aor_theta = Vec::with_capacity(self.runs);
        let mut aor_phi = Vec::with_capacity(self.runs);
        let mut aoa_theta = Vec::with_capacity(self.runs);
        let mut aoa_phi = Vec::with_capacity(self.runs);
        let mut sig: [Vec<f64>; 4] = Default::default();
        let mut skew = Vec::with_capacity(self.runs);
        let mut power = 0.0;
        let mut seconds = Vec::with_capacity(self.runs);

        let runs: Vec<u64> = (0..self.runs as u64).collect();
        for batch in runs.chunks(BATCH) {
            let outcomes: Vec<RunOutcome> = batch
                .par_iter()
                .map(|&r| self.single_run(point, r, spec, &omni))
                .collect::<Result<_>>()?;
            for o in outcomes {
                pas.merge(&o.pas);
                for (acc, v) in pr_theta.iter_mut().zip(o.pr_theta.values()) {
                    *acc += v;
                }
                for (acc, v) in pr_phi.iter_mut().zip(o.pr_phi.values()) {
                    *acc += v;
                }
                aor_theta.push(o.aor_theta);
                aor_phi.push(o.aor_phi);
                aoa_theta.push(o.aoa_theta);
                aoa_phi.push(o.aoa_phi);
                for (s, v) in sig.iter_mut().zip(o.sigmas) {
                    s.push(v);
                }
                skew.push(o.skew);
                power += o.received_power;
                seconds.push(o.seconds);
            }
        }

        let n = self.runs as f64;
        let mut pas = pas.into_grid();
        let averaged: Vec<f64> = pas.values().iter().map(|v| v / n).collect();
        pas = AngularSpectrumGrid::from_values(theta, phi, averaged)?;
        pr_theta.iter_mut().for_each(|v| *v /= n);
        pr_phi.iter_mut().for_each(|v| *v /= n);

        let [s_aor_t, s_aor_p, s_aoa_t, s_aoa_p] = sig;
        let omega = OmegaKey::of(&spec.rx);
        let aor_theta = MarginalPdf::average(&aor_theta)?;
        let aor_phi = MarginalPdf::average(&aor_phi)?;
        let aoa_theta = MarginalPdf::average(&aoa_theta)?;
        let aoa_phi = MarginalPdf::average(&aoa_phi)?;
        Ok(PointResult {
            omega,
            aor: SpreadReport::from_averaged(omega, &aor_theta, &aor_phi, s_aor_t, s_aor_p)?,
            aoa: SpreadReport::from_averaged(OmegaKey::of(&omni), &aoa_theta, &aoa_phi, s_aoa_t, s_aoa_p)?,
            pas,
            aor_theta,
            aor_phi,
            aoa_theta,
            aoa_phi,
            pr_theta: MarginalSpectrum::from_values(theta, pr_theta)?,
            pr_phi: MarginalSpectrum::from_values(phi, pr_phi)?,
            aor_phi_skew: skew,
            received_power: power / n,
            run_seconds: seconds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdp::Cluster;

    fn mc(runs: usize) -> MonteCarlo {
        let profile = ClusterProfile::new(vec![
            Cluster { delay: 40e-9, power: 1.0 },
            Cluster { delay: 150e-9, power: 0.5 },
            Cluster { delay: 600e-9, power: 0.1 },
        ])
        .unwrap()
        .normalized();
        let generation = GenerationConfig {
            paths_per_cluster: 20,
            local_paths: 20,
            ..Default::default()
        };
        MonteCarlo::new(profile, generation, 1.0, 1.0, runs, 99).unwrap()
    }

    fn spec(alpha: f64) -> PointSpec {
        PointSpec {
            tx: AntennaPattern::widebeam(0.0),
            rx: AntennaPattern::widebeam(alpha),
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let a = mc(70).with_jobs(1).run_point(3, &spec(30.0)).unwrap();
        let b = mc(70).with_jobs(4).run_point(3, &spec(30.0)).unwrap();
        assert_eq!(a.aor, b.aor);
        assert_eq!(a.pas, b.pas);
        assert_eq!(a.aor_phi, b.aor_phi);
        assert_eq!(a.aor_phi_skew, b.aor_phi_skew);
    }

    #[test]
    fn points_use_distinct_streams() {
        let a = mc(2).run_point(0, &spec(0.0)).unwrap();
        let b = mc(2).run_point(1, &spec(0.0)).unwrap();
        assert_ne!(a.aoa.per_run_phi, b.aoa.per_run_phi);
    }

    #[test]
    fn averaged_pdfs_stay_normalized() {
        let r = mc(5).run_point(0, &spec(60.0)).unwrap();
        for pdf in [&r.aor_theta, &r.aor_phi, &r.aoa_theta, &r.aoa_phi] {
            assert!((pdf.integral() - 1.0).abs() < 1e-9);
        }
        assert_eq!(r.aor.runs, 5);
        assert_eq!(r.run_seconds.len(), 5);
        assert!((r.pas.total_power() - r.received_power).abs() < 1e-9 * r.received_power);
    }

    #[test]
    fn rejects_invalid_setup() {
        let p = ClusterProfile::new(vec![Cluster { delay: 0.0, power: 1.0 }]).unwrap();
        let err = MonteCarlo::new(p, GenerationConfig::default(), 0.7, 1.0, 0, 1).unwrap_err();
        let Error::Config(list) = err else { panic!() };
        assert_eq!(list.len(), 3, "{list:?}");
    }
}
