//! Run configuration. Every field has a default; unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use wavecharge::{
    ExperimentKind, FormFactor, GridSpec, IntegratorConfig, Normalization, Potential, Profile, Vec3,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seed for randomized checks; recorded with every output.
    pub seed: u64,
    pub formfactor: FormFactorConfig,
    pub grid: GridConfig,
    pub potential: Potential,
    pub integrator: IntegratorConfig,
    pub output: OutputConfig,
    pub scenario: ScenarioConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            formfactor: FormFactorConfig::default(),
            grid: GridConfig::default(),
            potential: Potential::Quadratic { c: 1.0 },
            integrator: IntegratorConfig {
                allow_wraparound: true,
                ..IntegratorConfig::default()
            },
            output: OutputConfig::default(),
            scenario: ScenarioConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// The configuration with every default spelled out.
    pub fn resolved_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn form_factor(&self) -> anyhow::Result<FormFactor> {
        let f = &self.formfactor;
        Ok(FormFactor::new(f.profile, f.radius, f.normalization)?)
    }

    pub fn grid_spec(&self) -> anyhow::Result<GridSpec> {
        Ok(GridSpec::new(self.grid.length, self.grid.points)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FormFactorConfig {
    pub profile: Profile,
    pub radius: f64,
    pub normalization: Normalization,
}

impl Default for FormFactorConfig {
    fn default() -> Self {
        Self {
            profile: Profile::Bump,
            radius: 1.0,
            normalization: Normalization::UnitIntegral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub length: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            length: 16.0,
            points: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// Also write flat binary field snapshots.
    pub snapshots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            snapshots: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub soliton: SolitonScenario,
    pub audit: AuditScenario,
    pub simulate: SimulateScenario,
    pub experiment: ExperimentScenario,
    pub convergence: ConvergenceScenario,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolitonScenario {
    pub v: Vec3,
    pub a: Vec3,
}

impl Default for SolitonScenario {
    fn default() -> Self {
        Self {
            v: Vec3::new(0.6, 0.0, 0.0),
            a: Vec3::zeros(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditScenario {
    pub speeds: Vec<f64>,
    pub direction: Vec3,
    /// Shift used for the unshifted-field cross term.
    pub shift: Vec3,
}

impl Default for AuditScenario {
    fn default() -> Self {
        Self {
            speeds: (0..10).map(|i| i as f64 / 10.0).collect(),
            direction: Vec3::new(1.0, 0.0, 0.0),
            shift: Vec3::new(0.5, 0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// Stationary field centred at `q`, particle at `q`.
    Stationary { q: Vec3 },
    /// Soliton with velocity `v` centred at `a`.
    Soliton { v: Vec3, a: Vec3 },
    /// `ψ = -eps·ρ(· - q)`, `π = 0`, particle at `q`.
    Density { eps: f64, q: Vec3 },
    /// Zero field, particle at `q`.
    Vacuum { q: Vec3 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateScenario {
    pub initial: InitialState,
    /// Added to the particle momentum of the initial state.
    pub p0: Vec3,
    /// Largest tolerated relative energy drift.
    pub drift_budget: f64,
}

impl Default for SimulateScenario {
    fn default() -> Self {
        Self {
            initial: InitialState::Stationary { q: Vec3::zeros() },
            p0: Vec3::new(0.05, 0.0, 0.0),
            drift_budget: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentScenario {
    pub kind: ExperimentKind,
    pub p0: Vec3,
    pub c: f64,
    pub eps: Option<f64>,
    pub ball_radius: f64,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
}

impl Default for ExperimentScenario {
    fn default() -> Self {
        let base = wavecharge::ExperimentConfig::default();
        Self {
            kind: base.kind,
            p0: base.p0,
            c: base.c,
            eps: base.eps,
            ball_radius: base.ball_radius,
            dt: base.integrator.dt,
            t_end: base.integrator.t_end,
            record_every: base.integrator.record_every,
        }
    }
}

impl ExperimentScenario {
    pub fn to_config(&self) -> wavecharge::ExperimentConfig {
        wavecharge::ExperimentConfig {
            kind: self.kind,
            p0: self.p0,
            c: self.c,
            eps: self.eps,
            ball_radius: self.ball_radius,
            integrator: IntegratorConfig {
                dt: self.dt,
                t_end: self.t_end,
                record_every: self.record_every,
                ..IntegratorConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceScenario {
    /// Step sizes, each run with the simulate scenario.
    pub dts: Vec<f64>,
}

impl Default for ConvergenceScenario {
    fn default() -> Self {
        Self { dts: vec![0.02, 0.01] }
    }
}
