//! Energy-norm distances to the stationary set and the soliton manifold,
//! local field seminorms, and the two counterexample experiments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Integrator, IntegratorConfig, Potential};
use crate::energy::{counterexample_energy_free, eps_star, soliton_energy};
use crate::error::{invalid, Error, Result};
use crate::fields::{FieldState, ParticleState, PhaseState, SolitonParams};
use crate::grid::{GridSpec, Lattice};
use crate::formfactor::FormFactor;
use crate::optimize::nelder_mead;
use crate::Vec3;

/// Largest speed the manifold search may reach.
pub const SEARCH_MAX_SPEED: f64 = 1.0 - 1e-6;
/// Spread of simplex values at which the manifold search stops.
pub const SEARCH_FTOL: f64 = 1e-6;
pub const SEARCH_MAX_ITERS: u64 = 4000;
const PRESCAN_SPEEDS: [f64; 5] = [-0.8, -0.4, 0.0, 0.4, 0.8];

/// `‖∇ψ‖ + ‖π‖ + |q| + |p|`.
pub fn energy_norm(y: &PhaseState) -> f64 {
    y.field.grad_norm_sq().sqrt() + y.field.pi_l2_norm_sq().sqrt() + y.particle.q.norm() + y.particle.p.norm()
}

/// `‖y - z‖_E` for states on the same grid.
pub fn energy_distance(y: &PhaseState, z: &PhaseState) -> f64 {
    let d = y.field.difference(&z.field);
    d.grad_norm_sq().sqrt()
        + d.pi_l2_norm_sq().sqrt()
        + (y.particle.q - z.particle.q).norm()
        + (y.particle.p - z.particle.p).norm()
}

impl Lattice {
    /// `(‖∇(ψ - ψ_v(· - a))‖², ‖π - π_v(· - a)‖²)` without materializing the
    /// soliton field.
    pub fn traveling_mismatch(&self, field: &FieldState, v: &Vec3, a: &Vec3) -> (f64, f64) {
        let n = self.grid().points;
        let k = self.wavenumbers();
        let [px, py, pz] = self.shift_phases(a);
        let psi = field.psi_hat().as_slice().expect("standard layout");
        let pi = field.pi_hat().as_slice().expect("standard layout");
        let mut rho = vec![0.0; n];
        let (mut grad, mut mom) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                self.rho_row(i, j, &mut rho);
                let pij = px[i] * py[j];
                let kv_ij = k[i] * v.x + k[j] * v.y;
                let k2_ij = k[i] * k[i] + k[j] * k[j];
                let base = (i * n + j) * n;
                for l in 0..n {
                    let k2 = k2_ij + k[l] * k[l];
                    let (dpsi, dpi) = if rho[l] == 0.0 {
                        (psi[base + l], pi[base + l])
                    } else {
                        let kv = kv_ij + k[l] * v.z;
                        let src = pij * pz[l] * (rho[l] / (k2 - kv * kv));
                        (psi[base + l] + src, pi[base + l] - Complex64::new(0.0, kv) * src)
                    };
                    grad += k2 * dpsi.norm_sqr();
                    mom += dpi.norm_sqr();
                }
            }
        }
        let w = self.grid().mode_volume();
        (grad * w, mom * w)
    }

    /// `‖y - S(v, a)‖_E` for the soliton `S(v, a)`.
    pub fn soliton_distance(&self, y: &PhaseState, s: &SolitonParams) -> f64 {
        let (grad, mom) = self.traveling_mismatch(&y.field, &s.v, &s.a);
        grad.sqrt() + mom.sqrt() + (y.particle.q - s.a).norm() + (y.particle.p - s.momentum()).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Minimizer {
    Stationary { index: usize, q_star: Vec3 },
    Soliton { v: Vec3, a: Vec3 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub dist: f64,
    pub minimizer: Minimizer,
    pub iterations: u64,
    pub converged: bool,
    /// Objective at the starting point of the local search.
    pub seed_value: f64,
}

impl DistanceResult {
    pub fn soliton(&self) -> Option<SolitonParams> {
        match self.minimizer {
            Minimizer::Soliton { v, a } => Some(SolitonParams { v, a }),
            Minimizer::Stationary { .. } => None,
        }
    }
}

/// Minimum of `‖y - Y_{q*}‖_E` over the listed critical points.
pub fn dist_to_stationary_set(lattice: &Lattice, y: &PhaseState, criticals: &[Vec3]) -> Result<DistanceResult> {
    let mut best: Option<(usize, f64)> = None;
    for (index, q_star) in criticals.iter().enumerate() {
        let s = SolitonParams {
            v: Vec3::zeros(),
            a: *q_star,
        };
        let d = lattice.soliton_distance(y, &s);
        if best.map_or(true, |(_, b)| d < b) {
            best = Some((index, d));
        }
    }
    let (index, dist) = best.ok_or(Error::EmptyCriticalSet)?;
    Ok(DistanceResult {
        dist,
        minimizer: Minimizer::Stationary {
            index,
            q_star: criticals[index],
        },
        iterations: 0,
        converged: true,
        seed_value: dist,
    })
}

/// `v = tanh(|w|)·ŵ`, capped at [`SEARCH_MAX_SPEED`].
fn velocity_from(w: &Vec3) -> Vec3 {
    let r = w.norm();
    if r == 0.0 {
        return Vec3::zeros();
    }
    w * (r.tanh().min(SEARCH_MAX_SPEED) / r)
}

fn w_from(v: &Vec3) -> Vec3 {
    let s = v.norm().min(SEARCH_MAX_SPEED);
    if s == 0.0 {
        return Vec3::zeros();
    }
    v * (s.atanh() / v.norm())
}

/// Local projection of `y` onto the soliton manifold.
///
/// The search starts from the best of the natural seed `a = q`,
/// `v = p/√(1 + p²)` and a 5³ velocity prescan at `a = q`, then runs a
/// Nelder–Mead refinement in `(w, a)` with `v = tanh(|w|)·ŵ`. The reported
/// distance is the objective evaluated at the reported minimizer.
pub fn dist_to_soliton_manifold(lattice: &Lattice, y: &PhaseState) -> DistanceResult {
    let q = y.particle.q;
    let p = y.particle.p;
    let objective = |v: &Vec3, a: &Vec3| lattice.soliton_distance(y, &SolitonParams { v: *v, a: *a });
    let mut seed_v = p / (1.0 + p.norm_squared()).sqrt();
    let mut seed_value = objective(&seed_v, &q);
    for &vx in &PRESCAN_SPEEDS {
        for &vy in &PRESCAN_SPEEDS {
            for &vz in &PRESCAN_SPEEDS {
                let v = Vec3::new(vx, vy, vz);
                if v.norm() >= SEARCH_MAX_SPEED {
                    continue;
                }
                let g = objective(&v, &q);
                if g < seed_value {
                    seed_v = v;
                    seed_value = g;
                }
            }
        }
    }
    let w0 = w_from(&seed_v);
    let x0 = [w0.x, w0.y, w0.z, q.x, q.y, q.z];
    let step_a = 0.05 * lattice.form_factor().radius();
    let steps = [0.05, 0.05, 0.05, step_a, step_a, step_a];
    let unpack = |x: &[f64]| (velocity_from(&Vec3::new(x[0], x[1], x[2])), Vec3::new(x[3], x[4], x[5]));
    let m = nelder_mead(
        |x| {
            let (v, a) = unpack(x);
            objective(&v, &a)
        },
        &x0,
        &steps,
        SEARCH_FTOL,
        SEARCH_MAX_ITERS,
    );
    let (v, a) = if m.value <= seed_value { unpack(&m.x) } else { (seed_v, q) };
    DistanceResult {
        dist: objective(&v, &a),
        minimizer: Minimizer::Soliton { v, a },
        iterations: m.iterations,
        converged: m.converged,
        seed_value,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub center: Vec3,
    /// Ball radius; `f64::INFINITY` selects the whole box.
    pub radius: f64,
}

impl SeminormSpec {
    pub fn new(center: Vec3, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn whole_box() -> Self {
        Self {
            center: Vec3::zeros(),
            radius: f64::INFINITY,
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        let half = grid.half_side();
        let inside_center = self.center.iter().all(|c| c.abs() <= half);
        if !(self.radius >= 0.0) || !inside_center || (self.radius.is_finite() && self.radius > half) {
            return Err(Error::BallOutsideBox {
                center: [self.center.x, self.center.y, self.center.z],
                radius: self.radius,
            });
        }
        Ok(())
    }
}

/// `(∫_B |∇ψ|² + |π|² dx)^{1/2}` by grid quadrature over the points of the
/// (periodically wrapped) ball.
pub fn local_energy_seminorm(field: &FieldState, spec: &SeminormSpec) -> Result<f64> {
    let g = *field.grid();
    spec.check(&g)?;
    let grad = field.grad_psi();
    let pi = crate::fields::to_grid(field).pi;
    let r2 = spec.radius * spec.radius;
    let mut sum = 0.0;
    for ((i, j, l), p) in pi.indexed_iter() {
        let d = g.min_image(g.position(i, j, l) - spec.center);
        if spec.radius.is_infinite() || d.norm_squared() <= r2 {
            let gx = grad[0][[i, j, l]];
            let gy = grad[1][[i, j, l]];
            let gz = grad[2][[i, j, l]];
            sum += gx * gx + gy * gy + gz * gz + p * p;
        }
    }
    Ok((sum * g.cell_volume()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// `V = c·q²`, `Y0 = (ψ_0, 0, 0, p0)`.
    PartI,
    /// `V ≡ 0`, `Y0 = (-ερ, 0, 0, 0)`.
    PartIi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub p0: Vec3,
    /// Coefficient of the confining potential in part i.
    pub c: f64,
    /// Scale of the initial field in part ii; `None` selects `ε*`.
    pub eps: Option<f64>,
    /// Ball radius in units of the form factor radius.
    pub ball_radius: f64,
    pub integrator: IntegratorConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::PartI,
            p0: Vec3::new(1.0, 0.0, 0.0),
            c: 1.0,
            eps: None,
            ball_radius: 2.0,
            integrator: IntegratorConfig {
                dt: 0.02,
                t_end: 5.0,
                record_every: 25,
                ..IntegratorConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub t: f64,
    pub h_total: f64,
    pub drift: f64,
    pub dist_e: f64,
    pub v_star: Vec3,
    pub a_star: Vec3,
    /// Seminorm of the deviation from the reference field in the ball
    /// around `q(t)`.
    pub local_seminorm: f64,
    pub floor: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub kind: ExperimentKind,
    pub eps: Option<f64>,
    pub h0: f64,
    pub h_target: f64,
    pub floor: f64,
    pub horizon_budget: f64,
    pub t_end: f64,
    pub min_dist: f64,
    pub initial_seminorm: f64,
    pub final_seminorm: f64,
    pub max_drift: f64,
    pub sup_qdot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub rows: Vec<ExperimentRow>,
    pub summary: ExperimentSummary,
}

/// Initial state, potential and energy pair `(H(Y0), H_target)` of an experiment.
pub fn experiment_setup(lattice: &Lattice, cfg: &ExperimentConfig) -> (PhaseState, Potential, f64, f64) {
    let f = lattice.form_factor();
    match cfg.kind {
        ExperimentKind::PartI => {
            let potential = Potential::Quadratic { c: cfg.c };
            let star = lattice.stationary_state(&Vec3::zeros());
            let mut y0 = star.clone();
            y0.particle.p = cfg.p0;
            let h0 = lattice.hamiltonian(&y0, &potential).total;
            let h_star = lattice.hamiltonian(&star, &potential).total;
            (y0, potential, h0, h_star)
        }
        ExperimentKind::PartIi => {
            let eps = cfg.eps.unwrap_or_else(|| eps_star(f));
            let g = *lattice.grid();
            let psi = lattice.density_field(&Vec3::zeros(), -eps);
            let field = FieldState::from_psi(g, psi).expect("shape matches grid");
            let y0 = PhaseState {
                field,
                particle: ParticleState::at_rest(Vec3::zeros()),
            };
            let target = soliton_energy(f, &Vec3::zeros())
                .expect("zero velocity is admissible")
                .h_total;
            (y0, Potential::Zero, counterexample_energy_free(f, eps), target)
        }
    }
}

/// Runs one counterexample experiment and records distances along the way.
pub fn attraction_experiment(f: &FormFactor, grid: GridSpec, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if !(cfg.ball_radius > 0.0) {
        return Err(invalid("ball_radius", "must be positive"));
    }
    let lattice = Lattice::new(f, grid)?;
    let (y0, potential, h0, h_target) = experiment_setup(&lattice, cfg);
    let floor = (h0 - h_target).max(0.0);
    let radius = cfg.ball_radius * f.radius();
    let mut rows = Vec::new();
    let mut integrator = Integrator::new(lattice.clone(), potential, cfg.integrator.dt)?;
    let record = integrator.run_observed(&y0, &cfg.integrator, |pt, y| {
        let (dist, reference) = match cfg.kind {
            ExperimentKind::PartI => {
                let d = dist_to_stationary_set(&lattice, y, &potential.critical_points_near(&y.particle.q))?;
                let Minimizer::Stationary { q_star, .. } = d.minimizer else {
                    unreachable!("stationary search returns a stationary minimizer")
                };
                (d, SolitonParams { v: Vec3::zeros(), a: q_star })
            }
            ExperimentKind::PartIi => {
                let d = dist_to_soliton_manifold(&lattice, y);
                let comoving = SolitonParams::new(y.particle.velocity(), y.particle.q)?;
                (d, comoving)
            }
        };
        let deviation = y.field.difference(&lattice.traveling_field(&reference.v, &reference.a));
        let local = local_energy_seminorm(&deviation, &SeminormSpec::new(y.particle.q, radius))?;
        let (v_star, a_star) = match dist.minimizer {
            Minimizer::Soliton { v, a } => (v, a),
            Minimizer::Stationary { q_star, .. } => (Vec3::zeros(), q_star),
        };
        rows.push(ExperimentRow {
            t: pt.t,
            h_total: pt.energy.total,
            drift: pt.drift,
            dist_e: dist.dist,
            v_star,
            a_star,
            local_seminorm: local,
            floor,
            converged: dist.converged,
        });
        Ok(())
    })?;
    let summary = ExperimentSummary {
        kind: cfg.kind,
        eps: match cfg.kind {
            ExperimentKind::PartI => None,
            ExperimentKind::PartIi => Some(cfg.eps.unwrap_or_else(|| eps_star(f))),
        },
        h0,
        h_target,
        floor,
        horizon_budget: record.horizon_budget,
        t_end: cfg.integrator.t_end,
        min_dist: rows.iter().map(|r| r.dist_e).fold(f64::INFINITY, f64::min),
        initial_seminorm: rows.first().map_or(0.0, |r| r.local_seminorm),
        final_seminorm: rows.last().map_or(0.0, |r| r.local_seminorm),
        max_drift: record.max_drift,
        sup_qdot: record.sup_qdot,
    };
    Ok(ExperimentOutput { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice() -> Lattice {
        Lattice::new(&FormFactor::bump(1.0).unwrap(), GridSpec::new(8.0, 16).unwrap()).unwrap()
    }

    #[test]
    fn norm_of_particle_only_state() {
        let g = GridSpec::new(8.0, 8).unwrap();
        let y = PhaseState {
            field: FieldState::zeros(g),
            particle: ParticleState::at_rest(Vec3::new(3.0, 4.0, 0.0)),
        };
        assert_eq!(energy_norm(&y), 5.0);
    }

    #[test]
    fn velocity_reparameterization_round_trips() {
        let v = Vec3::new(0.3, -0.2, 0.5);
        assert!((velocity_from(&w_from(&v)) - v).norm() < 1e-15);
        assert!(velocity_from(&Vec3::new(100.0, 0.0, 0.0)).norm() < 1.0 - 5e-7);
    }

    #[test]
    fn mismatch_matches_materialized_difference() {
        let lat = lattice();
        let y = lat.soliton_state(&SolitonParams::new(Vec3::new(0.2, 0.1, 0.0), Vec3::new(0.3, 0.0, -0.2)).unwrap());
        let v = Vec3::new(-0.1, 0.4, 0.2);
        let a = Vec3::new(0.0, 0.5, 0.1);
        let (g, p) = lat.traveling_mismatch(&y.field, &v, &a);
        let d = y.field.difference(&lat.traveling_field(&v, &a));
        assert!((g - d.grad_norm_sq()).abs() < 1e-13 * g.max(1e-3));
        assert!((p - d.pi_l2_norm_sq()).abs() < 1e-13 * p.max(1e-3));
    }

    #[test]
    fn stationary_distance_picks_nearest() {
        let lat = lattice();
        let y = lat.stationary_state(&Vec3::new(0.5, 0.0, 0.0));
        let crit = [Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0)];
        let d = dist_to_stationary_set(&lat, &y, &crit).unwrap();
        assert!(d.dist < 1e-12);
        assert!(matches!(d.minimizer, Minimizer::Stationary { index: 1, .. }));
        assert!(matches!(dist_to_stationary_set(&lat, &y, &[]), Err(Error::EmptyCriticalSet)));
    }

    #[test]
    fn ball_must_fit() {
        let lat = lattice();
        let y = lat.stationary_state(&Vec3::zeros());
        assert!(local_energy_seminorm(&y.field, &SeminormSpec::new(Vec3::zeros(), 5.0)).is_err());
        assert!(local_energy_seminorm(&y.field, &SeminormSpec::new(Vec3::new(5.0, 0.0, 0.0), 1.0)).is_err());
    }
}
