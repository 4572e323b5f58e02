//! Geometric-stochastic simulation of the angle of reception (AOR).
//!
//! Multipath arrival angles are generated on delay-defined half-ellipsoids
//! around a transmitter/receiver pair, re-weighted by a steerable Gaussian
//! beam at the receiver, and binned into power angular spectra and
//! probability densities. The crate is organised bottom-up:
//!
//! - [`pdp`]: power delay profile ingest and time-cluster extraction
//! - [`antenna`]: Gaussian-beam power patterns
//! - [`geometry`]: half-ellipsoid construction, surface sampling, angles
//! - [`paths`]: cluster and local-scattering path generation
//! - [`estimator`]: receive weighting, PAS and PDF estimators
//! - [`spread`]: angle-spread statistics and sweeps
//! - [`montecarlo`]: seeded, parallel Monte Carlo runs for one sweep point
//! - [`harness`]: config files, CSV/SVG artifacts, the `run` entry point

pub mod antenna;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod harness;
pub mod montecarlo;
pub mod paths;
pub mod pdp;
pub mod spread;

pub use antenna::{db, lin, wrap_deg, AntennaPattern};
pub use error::{Error, Result};
pub use estimator::{
    apply_rx_pattern, estimate_joint_pdf, estimate_marginals, estimate_pas, AngleAxis,
    AngularSpectrumGrid, JointPdf, MarginalPdf, WeightedEnsemble,
};
pub use geometry::{
    arrival_angles, departure_angles, ellipsoid_from_delay, sample_surface_point, HalfEllipsoid,
    LinkGeometry, Point3, SPEED_OF_LIGHT,
};
pub use montecarlo::{MonteCarlo, PointResult, PointSpec};
pub use paths::{
    assemble_ensemble, generate_cluster_paths, generate_local_scatter, GenerationConfig,
    PathComponent, PathEnsemble, VonMises,
};
pub use pdp::{extract_clusters, parse_profile, Cluster, ClusterProfile, PdsTrace, Profile, ProfileFormat};
pub use spread::{aggregate_runs, std_dev, OmegaKey, SpreadReport};
pub use estimator::MarginalSpectrum;
