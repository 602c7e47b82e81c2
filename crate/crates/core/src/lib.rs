//! Spectral laboratory for a relativistic point-like charge coupled to a
//! scalar wave field on a periodic box.

pub mod attraction;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod fields;
pub mod formfactor;
pub mod grid;
pub mod optimize;
pub mod quadrature;
pub mod snapshot;

pub use attraction::{
    attraction_experiment, dist_to_soliton_manifold, dist_to_stationary_set, energy_norm,
    local_energy_seminorm, DistanceResult, ExperimentConfig, ExperimentKind, SeminormSpec,
};
pub use dynamics::{IntegratorConfig, Integrator, Potential, TrajectoryPoint, TrajectoryRecord};
pub use energy::{
    audit_chain, counterexample_energy_free, counterexample_part_i, eps_star, hamiltonian,
    soliton_energy, AuditReport, EnergyBreakdown,
};
pub use error::{Error, Result};
pub use fields::{
    soliton_state, stationary_state, to_grid, to_spectral, FieldState, GridField, ParticleState,
    PhaseState, SolitonParams,
};
pub use formfactor::{FormFactor, Normalization, Profile, RadialSpectrum};
pub use grid::{GridSpec, Lattice};

/// Three-vector used for positions, momenta and wavevectors.
pub type Vec3 = nalgebra::Vector3<f64>;
