//! Time integration of the coupled field–particle system.
//!
//! One step is a symmetric splitting: half kick of `p`, an exact spectral
//! field propagation with the source frozen at the midpoint position while
//! `q` drifts, and a closing half kick. Around the frozen equilibrium
//! `ψ̂* = -ρ̂ e^{-ik·q}/k²` each mode rotates with frequency `|k|`, so the
//! field substep has no stability limit and stationary states are fixed points.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::EnergyBreakdown;
use crate::error::{invalid, Error, Result};
use crate::fields::{velocity_of, FieldState, PhaseState};
use crate::formfactor::FormFactor;
use crate::grid::Lattice;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Potential {
    /// `V ≡ 0`.
    Zero,
    /// `V(q) = c·q²`.
    Quadratic { c: f64 },
    /// `V(q) = c·(q² - b²)²`.
    DoubleWell { c: f64, b: f64 },
}

impl Potential {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Potential::Zero => Ok(()),
            Potential::Quadratic { c } if c > 0.0 => Ok(()),
            Potential::DoubleWell { c, b } if c > 0.0 && b > 0.0 => Ok(()),
            _ => Err(invalid("potential", "parameters c and b must be positive")),
        }
    }

    pub fn value(&self, q: &Vec3) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Quadratic { c } => c * q.norm_squared(),
            Potential::DoubleWell { c, b } => c * (q.norm_squared() - b * b).powi(2),
        }
    }

    pub fn gradient(&self, q: &Vec3) -> Vec3 {
        match *self {
            Potential::Zero => Vec3::zeros(),
            Potential::Quadratic { c } => q * (2.0 * c),
            Potential::DoubleWell { c, b } => q * (4.0 * c * (q.norm_squared() - b * b)),
        }
    }

    pub fn is_confining(&self) -> bool {
        !matches!(self, Potential::Zero)
    }

    /// Largest `|q|` with `V(q) ≤ level`, for confining potentials.
    pub fn sublevel_radius(&self, level: f64) -> Option<f64> {
        let level = level.max(0.0);
        match *self {
            Potential::Zero => None,
            Potential::Quadratic { c } => Some((level / c).sqrt()),
            Potential::DoubleWell { c, b } => Some((b * b + (level / c).sqrt()).sqrt()),
        }
    }

    /// Critical points relevant near `q`. The double well's critical set is
    /// the origin plus the sphere `|q| = b`; the sphere is represented by the
    /// radial projection of `q` and the six axis points.
    pub fn critical_points_near(&self, q: &Vec3) -> Vec<Vec3> {
        match *self {
            Potential::Zero => Vec::new(),
            Potential::Quadratic { .. } => vec![Vec3::zeros()],
            Potential::DoubleWell { b, .. } => {
                let mut out = vec![Vec3::zeros()];
                if q.norm() > 0.0 {
                    out.push(q.normalize() * b);
                }
                for axis in 0..3 {
                    for sign in [1.0, -1.0] {
                        let mut e = Vec3::zeros();
                        e[axis] = sign * b;
                        out.push(e);
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Record every this many steps.
    pub record_every: usize,
    /// Permit horizons beyond the wrap-around budget.
    pub allow_wraparound: bool,
    /// Above this `|q̇|` the step is subdivided in proportion to `1 - |q̇|`.
    pub velocity_threshold: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 0.02,
            t_end: 20.0,
            record_every: 10,
            allow_wraparound: false,
            velocity_threshold: 0.99,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", format!("must be non-negative, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be at least 1"));
        }
        if !(self.velocity_threshold > 0.0 && self.velocity_threshold < 1.0) {
            return Err(invalid("velocity_threshold", "must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub q: Vec3,
    pub p: Vec3,
    pub energy: EnergyBreakdown,
    pub qdot_norm: f64,
    /// `|H(t) - H(0)| / |H(0)|`.
    pub drift: f64,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub points: Vec<TrajectoryPoint>,
    pub max_drift: f64,
    pub sup_qdot: f64,
    /// Steps that were subdivided because `|q̇|` crossed the threshold.
    pub reduced_steps: usize,
    /// Horizon allowed by the wrap-around rule for this run.
    pub horizon_budget: f64,
    pub final_state: PhaseState,
}

/// Wrap-around budget `L/2 - 2R - travel` for a run starting at `y0`.
///
/// `travel` bounds `|q(t) - q(0)|`: for confining potentials by the sublevel
/// set `V ≤ H(Y0) - 1 + δ_ρ/2` (the field part of the energy is at least
/// `-δ_ρ/2`), for `V ≡ 0` by ballistic motion at the initial speed.
pub fn horizon_budget(lattice: &Lattice, potential: &Potential, y0: &PhaseState, t_end: f64) -> f64 {
    let g = lattice.grid();
    let r = lattice.form_factor().radius();
    let travel = match potential.sublevel_radius(0.0) {
        Some(_) => {
            let h0 = lattice.hamiltonian(y0, potential).total;
            let level = h0 - 1.0 + 0.5 * lattice.form_factor().delta_rho();
            potential.sublevel_radius(level).unwrap_or(0.0) + y0.particle.q.norm()
        }
        None => y0.particle.velocity().norm() * t_end,
    };
    g.half_side() - 2.0 * r - travel
}

/// Propagator tables indexed by `|n|²` for one time step.
#[derive(Debug, Clone)]
struct Tables {
    dt: f64,
    cos: Vec<f64>,
    sinc: Vec<f64>,
    ksin: Vec<f64>,
}

impl Tables {
    fn new(lattice: &Lattice, dt: f64) -> Self {
        let g = lattice.grid();
        let half = g.points / 2;
        let dk = g.dk();
        let m_max = 3 * half * half;
        let mut cos = Vec::with_capacity(m_max + 1);
        let mut sinc = Vec::with_capacity(m_max + 1);
        let mut ksin = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            let k = dk * (m as f64).sqrt();
            let (s, c) = (k * dt).sin_cos();
            cos.push(c);
            sinc.push(if m == 0 { dt } else { s / k });
            ksin.push(k * s);
        }
        Self { dt, cos, sinc, ksin }
    }
}

/// Fixed-step integrator bound to one lattice and potential.
pub struct Integrator {
    lattice: Lattice,
    potential: Potential,
    tables: Tables,
    reduced: HashMap<usize, Tables>,
    n2: Vec<usize>,
}

impl Integrator {
    pub fn new(lattice: Lattice, potential: Potential, dt: f64) -> Result<Self> {
        potential.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
        let g = *lattice.grid();
        let n2 = (0..g.points)
            .map(|i| {
                let n = g.signed_index(i);
                (n * n) as usize
            })
            .collect();
        Ok(Self {
            tables: Tables::new(&lattice, dt),
            lattice,
            potential,
            reduced: HashMap::new(),
            n2,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn dt(&self) -> f64 {
        self.tables.dt
    }

    /// `-∇V(q) + ∫ψ ∇ρ(x - q) dx`.
    pub fn total_force(&self, y: &PhaseState) -> Result<Vec3> {
        Ok(self.lattice.force(&y.field, &y.particle.q)? - self.potential.gradient(&y.particle.q))
    }

    /// Advances `y` by one step of size `dt`.
    pub fn step(&mut self, y: &mut PhaseState) -> Result<()> {
        let f0 = self.total_force(y)?;
        self.step_with_force(y, f0, None).map(|_| ())
    }

    /// One step given the force at the current state; returns the force at
    /// the new state.
    fn step_with_force(&mut self, y: &mut PhaseState, f0: Vec3, substeps: Option<usize>) -> Result<Vec3> {
        let tables = match substeps {
            None => &self.tables,
            Some(m) => {
                let dt = self.tables.dt / m as f64;
                let lattice = &self.lattice;
                &*self.reduced.entry(m).or_insert_with(|| Tables::new(lattice, dt))
            }
        };
        let dt = tables.dt;
        let particle = &mut y.particle;
        particle.p += f0 * (0.5 * dt);
        let v = velocity_of(&particle.p);
        let q_mid = particle.q + v * (0.5 * dt);
        propagate_field(&self.lattice, &self.n2, tables, &mut y.field, &q_mid);
        particle.q += v * dt;
        let f1 = self.total_force(y)?;
        y.particle.p += f1 * (0.5 * dt);
        Ok(f1)
    }

    /// Integrates to `cfg.t_end`, calling `observe` at every record.
    pub fn run_observed<F>(&mut self, y0: &PhaseState, cfg: &IntegratorConfig, mut observe: F) -> Result<TrajectoryRecord>
    where
        F: FnMut(&TrajectoryPoint, &PhaseState) -> Result<()>,
    {
        cfg.validate()?;
        if (cfg.dt - self.dt()).abs() > 1e-15 * cfg.dt {
            return Err(invalid("dt", "integrator and configuration disagree"));
        }
        let budget = horizon_budget(&self.lattice, &self.potential, y0, cfg.t_end);
        if cfg.t_end > budget && !cfg.allow_wraparound {
            return Err(Error::HorizonExceeded {
                t_end: cfg.t_end,
                budget,
            });
        }
        let g = *self.lattice.grid();
        let radius = self.lattice.form_factor().radius();
        let q0 = y0.particle.q;
        let mut y = y0.clone();
        let h0 = self.lattice.hamiltonian(&y, &self.potential);
        let point = |t: f64, y: &PhaseState, e: EnergyBreakdown| TrajectoryPoint {
            t,
            q: y.particle.q,
            p: y.particle.p,
            energy: e,
            qdot_norm: y.particle.velocity().norm(),
            drift: (e.total - h0.total).abs() / h0.total.abs(),
        };
        let first = point(0.0, &y, h0);
        observe(&first, &y)?;
        let mut points = vec![first];
        let mut sup_qdot = first.qdot_norm;
        let mut max_drift = 0.0f64;
        let mut max_travel = 0.0f64;
        let mut reduced_steps = 0;
        let steps = cfg.steps();
        let mut force = self.total_force(&y)?;
        for n in 1..=steps {
            let speed = y.particle.velocity().norm();
            let substeps = if speed > cfg.velocity_threshold {
                reduced_steps += 1;
                Some(((1.0 - cfg.velocity_threshold) / (1.0 - speed)).ceil().max(2.0) as usize)
            } else {
                None
            };
            match substeps {
                None => force = self.step_with_force(&mut y, force, None)?,
                Some(m) => {
                    for _ in 0..m {
                        force = self.step_with_force(&mut y, force, Some(m))?;
                    }
                }
            }
            let t = n as f64 * cfg.dt;
            if !y.particle.is_finite() {
                return Err(Error::NonFinite {
                    t,
                    what: format!("particle q = {:?}, p = {:?}", y.particle.q, y.particle.p),
                });
            }
            sup_qdot = sup_qdot.max(y.particle.velocity().norm());
            max_travel = max_travel.max((y.particle.q - q0).norm());
            if !cfg.allow_wraparound && t > g.half_side() - 2.0 * radius - max_travel {
                return Err(Error::HorizonExceeded {
                    t_end: cfg.t_end,
                    budget: g.half_side() - 2.0 * radius - max_travel,
                });
            }
            if n % cfg.record_every == 0 || n == steps {
                let e = self.lattice.hamiltonian(&y, &self.potential);
                if !e.total.is_finite() {
                    return Err(Error::NonFinite {
                        t,
                        what: format!("energy {e:?}"),
                    });
                }
                let pt = point(t, &y, e);
                max_drift = max_drift.max(pt.drift);
                observe(&pt, &y)?;
                points.push(pt);
            }
        }
        Ok(TrajectoryRecord {
            points,
            max_drift,
            sup_qdot,
            reduced_steps,
            horizon_budget: budget,
            final_state: y,
        })
    }

    pub fn run(&mut self, y0: &PhaseState, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
        self.run_observed(y0, cfg, |_, _| Ok(()))
    }
}

/// Exact field propagation over `tables.dt` with the source frozen at `q`.
fn propagate_field(lattice: &Lattice, n2: &[usize], tables: &Tables, field: &mut FieldState, q: &Vec3) {
    let n = lattice.grid().points;
    let k = lattice.wavenumbers();
    let [px, py, pz] = lattice.shift_phases(q);
    let mut rho = vec![0.0; n];
    let (psi, pi) = field.spectra_mut();
    let psi = psi.as_slice_mut().expect("standard layout");
    let pi = pi.as_slice_mut().expect("standard layout");
    for i in 0..n {
        for j in 0..n {
            lattice.rho_row(i, j, &mut rho);
            let pij = px[i] * py[j];
            let k2_ij = k[i] * k[i] + k[j] * k[j];
            let m_ij = n2[i] + n2[j];
            let base = (i * n + j) * n;
            for l in 0..n {
                let m = m_ij + n2[l];
                let idx = base + l;
                let eq = if rho[l] == 0.0 {
                    Complex64::default()
                } else {
                    -(pij * pz[l] * rho[l]) / (k2_ij + k[l] * k[l])
                };
                let d = psi[idx] - eq;
                let p = pi[idx];
                psi[idx] = eq + d * tables.cos[m] + p * tables.sinc[m];
                pi[idx] = p * tables.cos[m] - d * tables.ksin[m];
            }
        }
    }
}

impl Lattice {
    fn check_particle(&self, q: &Vec3) -> Result<()> {
        let half = self.grid().half_side();
        let r = self.form_factor().radius();
        if q.iter().any(|c| !c.is_finite() || c.abs() + r > half) {
            return Err(Error::ParticleOutsideBox {
                q: [q.x, q.y, q.z],
                half_side: half,
            });
        }
        Ok(())
    }

    /// Interaction energy `∫ψ(x) ρ(x - q) dx` and force `∫ψ(x) ∇ρ(x - q) dx`
    /// in one pass, together with the imaginary residue of the force sum.
    fn coupling(&self, field: &FieldState, q: &Vec3) -> (f64, Vec3, f64, f64) {
        let n = self.grid().points;
        let k = self.wavenumbers();
        let [px, py, pz] = self.shift_phases(q);
        let psi = field.psi_hat().as_slice().expect("standard layout");
        let mut rho = vec![0.0; n];
        let mut energy = 0.0;
        let mut force = [0.0f64; 3];
        let mut residue = [0.0f64; 3];
        let mut scale = 0.0;
        for i in 0..n {
            for j in 0..n {
                self.rho_row(i, j, &mut rho);
                let pij = (px[i] * py[j]).conj();
                let base = (i * n + j) * n;
                for l in 0..n {
                    if rho[l] == 0.0 {
                        continue;
                    }
                    // z = ψ̂ · conj(ρ̂ e^{-ik·q})
                    let z = psi[base + l] * (pij * pz[l].conj()) * rho[l];
                    energy += z.re;
                    let kk = [k[i], k[j], k[l]];
                    for a in 0..3 {
                        force[a] += kk[a] * z.im;
                        residue[a] -= kk[a] * z.re;
                    }
                    scale += (kk[0].abs() + kk[1].abs() + kk[2].abs()) * z.norm();
                }
            }
        }
        let w = self.grid().mode_volume();
        let res = residue.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        (energy * w, Vec3::new(force[0], force[1], force[2]) * w, res * w, scale * w)
    }

    /// `∫ψ(x) ∇ρ(x - q) dx`, evaluated over the nonzero modes.
    pub fn force(&self, field: &FieldState, q: &Vec3) -> Result<Vec3> {
        self.check_particle(q)?;
        let (_, force, residue, scale) = self.coupling(field, q);
        if residue > 1e-12 * scale.max(1.0) {
            return Err(Error::NonHermitian { residue });
        }
        Ok(force)
    }

    /// `I(q) = ∫ψ(x) ρ(x - q) dx`.
    pub fn interaction(&self, field: &FieldState, q: &Vec3) -> f64 {
        self.coupling(field, q).0
    }
}

/// One step from `y` (convenience wrapper building fresh tables).
pub fn step(y: &PhaseState, potential: &Potential, f: &FormFactor, dt: f64) -> Result<PhaseState> {
    let lattice = Lattice::new(f, *y.field.grid())?;
    let mut integrator = Integrator::new(lattice, *potential, dt)?;
    let mut out = y.clone();
    integrator.step(&mut out)?;
    Ok(out)
}

pub fn run(y0: &PhaseState, potential: &Potential, f: &FormFactor, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
    let lattice = Lattice::new(f, *y0.field.grid())?;
    Integrator::new(lattice, *potential, cfg.dt)?.run(y0, cfg)
}

/// Force on `q` from the field, for callers without a lattice at hand.
pub fn force(field: &FieldState, f: &FormFactor, q: &Vec3) -> Result<Vec3> {
    Lattice::new(f, *field.grid())?.force(field, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ParticleState, SolitonParams};
    use crate::grid::GridSpec;

    fn setup(n: usize, l: f64) -> Lattice {
        Lattice::new(&FormFactor::bump(1.0).unwrap(), GridSpec::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn potential_gradients_match_finite_differences() {
        let q = Vec3::new(0.3, -0.7, 1.1);
        for pot in [
            Potential::Quadratic { c: 1.5 },
            Potential::DoubleWell { c: 0.5, b: 0.8 },
        ] {
            let g = pot.gradient(&q);
            for a in 0..3 {
                let mut e = Vec3::zeros();
                e[a] = 1e-6;
                let fd = (pot.value(&(q + e)) - pot.value(&(q - e))) / 2e-6;
                assert!((fd - g[a]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn potential_validation() {
        assert!(Potential::Quadratic { c: 0.0 }.validate().is_err());
        assert!(Potential::DoubleWell { c: 1.0, b: -1.0 }.validate().is_err());
        assert!(Potential::Zero.validate().is_ok());
        assert!(Potential::Quadratic { c: 1.0 }.is_confining());
        let r = Potential::DoubleWell { c: 2.0, b: 1.0 }.sublevel_radius(8.0).unwrap();
        assert!((Potential::DoubleWell { c: 2.0, b: 1.0 }.value(&Vec3::new(r, 0.0, 0.0)) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn double_well_critical_points_have_zero_gradient() {
        let pot = Potential::DoubleWell { c: 1.0, b: 1.3 };
        for c in pot.critical_points_near(&Vec3::new(0.2, 0.4, -0.1)) {
            assert!(pot.gradient(&c).norm() < 1e-12);
        }
    }

    #[test]
    fn stationary_field_exerts_no_force() {
        let lat = setup(32, 8.0);
        let q = Vec3::new(0.25, -0.5, 0.75);
        let y = lat.stationary_state(&q);
        assert!(lat.force(&y.field, &q).unwrap().norm() < 1e-10);
    }

    #[test]
    fn force_is_odd_in_offset() {
        let lat = setup(32, 8.0);
        let q = Vec3::new(0.1, 0.2, -0.3);
        let d = Vec3::new(0.05, -0.02, 0.03);
        let plus = lat.force(&lat.stationary_state(&(q + d)).field, &q).unwrap();
        let minus = lat.force(&lat.stationary_state(&(q - d)).field, &q).unwrap();
        assert!(plus.norm() > 1e-4);
        assert!((plus + minus).norm() < 1e-10);
    }

    #[test]
    fn force_rejects_particle_at_boundary() {
        let lat = setup(16, 8.0);
        let y = lat.stationary_state(&Vec3::zeros());
        assert!(matches!(
            lat.force(&y.field, &Vec3::new(3.5, 0.0, 0.0)),
            Err(Error::ParticleOutsideBox { .. })
        ));
    }

    #[test]
    fn stationary_state_is_a_fixed_point() {
        let lat = setup(32, 8.0);
        let y0 = lat.stationary_state(&Vec3::zeros());
        let mut it = Integrator::new(lat, Potential::Quadratic { c: 1.0 }, 0.02).unwrap();
        let mut y = y0.clone();
        for _ in 0..20 {
            it.step(&mut y).unwrap();
        }
        assert_eq!(y, y0);
    }

    fn soliton_errors(dt: f64) -> (f64, f64) {
        let lat = setup(32, 12.0);
        let s = SolitonParams::new(Vec3::new(0.5, 0.0, 0.0), Vec3::new(-2.0, 0.0, 0.0)).unwrap();
        let mut y = lat.soliton_state(&s);
        let mut it = Integrator::new(lat.clone(), Potential::Zero, dt).unwrap();
        let t = 2.0;
        for _ in 0..(t / dt).round() as usize {
            it.step(&mut y).unwrap();
        }
        let exact = lat.traveling_field(&s.v, &(s.a + s.v * t));
        let err = y.field.difference(&exact);
        let rel = (err.grad_norm_sq() + err.pi_l2_norm_sq()).sqrt()
            / (exact.grad_norm_sq() + exact.pi_l2_norm_sq()).sqrt();
        ((y.particle.q - (s.a + s.v * t)).norm(), rel)
    }

    #[test]
    fn soliton_is_tracked_to_second_order() {
        let (dq1, df1) = soliton_errors(0.05);
        let (dq2, df2) = soliton_errors(0.025);
        assert!(dq1 < 1e-4 && df1 < 1e-3, "{dq1} {df1}");
        assert!((3.0..5.0).contains(&(dq1 / dq2)), "{dq1} {dq2}");
        assert!((3.0..5.0).contains(&(df1 / df2)), "{df1} {df2}");
    }

    #[test]
    fn horizon_cap_is_enforced() {
        let lat = setup(16, 8.0);
        let y0 = lat.stationary_state(&Vec3::zeros());
        let cfg = IntegratorConfig {
            dt: 0.1,
            t_end: 3.0,
            ..Default::default()
        };
        let err = run(&y0, &Potential::Zero, lat.form_factor(), &cfg).unwrap_err();
        assert!(matches!(err, Error::HorizonExceeded { .. }));
        let ok = IntegratorConfig {
            allow_wraparound: true,
            ..cfg
        };
        assert!(run(&y0, &Potential::Zero, lat.form_factor(), &ok).is_ok());
    }

    #[test]
    fn fast_particles_get_subdivided_steps() {
        let lat = setup(16, 12.0);
        let mut y0 = lat.stationary_state(&Vec3::zeros());
        y0.particle = ParticleState::new(Vec3::new(-1.0, 0.0, 0.0), Vec3::new(20.0, 0.0, 0.0));
        let cfg = IntegratorConfig {
            dt: 0.05,
            t_end: 1.0,
            record_every: 5,
            allow_wraparound: true,
            ..Default::default()
        };
        let rec = run(&y0, &Potential::Zero, lat.form_factor(), &cfg).unwrap();
        assert!(rec.reduced_steps > 0);
        assert!(rec.sup_qdot < 1.0);
    }

    #[test]
    fn config_validation() {
        let bad = IntegratorConfig {
            dt: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig {
            record_every: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
