//! Field and particle states, spectral/grid conversions, and the exact
//! stationary and traveling-wave constructors.

use ndarray::Array3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formfactor::{FormFactor, UNITARY_FACTOR};
use crate::grid::{Fft3, GridSpec, Lattice};
use crate::Vec3;

/// Largest admissible soliton speed.
pub const MAX_SPEED: f64 = 1.0 - 1e-9;

/// Field pair `(ψ, π)` held in its spectral representation.
///
/// Spectral values use the unitary normalization, so
/// `∫|ψ|² dx = Σ_k |ψ̂(k)|² (2π/L)³`. Real-space arrays are materialized
/// on demand by [`to_grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    grid: GridSpec,
    psi_hat: Array3<Complex64>,
    pi_hat: Array3<Complex64>,
}

/// Field pair `(ψ, π)` sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: GridSpec,
    pub psi: Array3<f64>,
    pub pi: Array3<f64>,
}

impl GridField {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.points;
        Self {
            grid,
            psi: Array3::zeros((n, n, n)),
            pi: Array3::zeros((n, n, n)),
        }
    }

    /// Samples `psi(x)` and `pi(x)` at the grid points.
    pub fn from_fn(grid: GridSpec, psi: impl Fn(&Vec3) -> f64, pi: impl Fn(&Vec3) -> f64) -> Self {
        let n = grid.points;
        Self {
            grid,
            psi: Array3::from_shape_fn((n, n, n), |(i, j, l)| psi(&grid.position(i, j, l))),
            pi: Array3::from_shape_fn((n, n, n), |(i, j, l)| pi(&grid.position(i, j, l))),
        }
    }

    /// `∫|ψ|² dx` by the grid rule.
    pub fn psi_l2_norm_sq(&self) -> f64 {
        self.psi.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn pi_l2_norm_sq(&self) -> f64 {
        self.pi.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()
    }
}

impl FieldState {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.points;
        Self {
            grid,
            psi_hat: Array3::zeros((n, n, n)),
            pi_hat: Array3::zeros((n, n, n)),
        }
    }

    pub fn from_spectral(
        grid: GridSpec,
        psi_hat: Array3<Complex64>,
        pi_hat: Array3<Complex64>,
    ) -> Result<Self> {
        grid.check_shape(&psi_hat)?;
        grid.check_shape(&pi_hat)?;
        Ok(Self {
            grid,
            psi_hat,
            pi_hat,
        })
    }

    /// Spectral `ψ̂` with `π = 0`.
    pub fn from_psi(grid: GridSpec, psi_hat: Array3<Complex64>) -> Result<Self> {
        Self::from_spectral(grid, psi_hat, Array3::zeros(grid.shape()))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn psi_hat(&self) -> &Array3<Complex64> {
        &self.psi_hat
    }

    pub fn pi_hat(&self) -> &Array3<Complex64> {
        &self.pi_hat
    }

    pub(crate) fn spectra_mut(&mut self) -> (&mut Array3<Complex64>, &mut Array3<Complex64>) {
        (&mut self.psi_hat, &mut self.pi_hat)
    }

    /// Removes the mean (`k = 0`) and the Nyquist modes from both fields.
    pub fn project_gauge(&mut self) {
        let g = self.grid;
        for arr in [&mut self.psi_hat, &mut self.pi_hat] {
            for ((i, j, l), v) in arr.indexed_iter_mut() {
                if (i, j, l) == (0, 0, 0) || g.is_nyquist(i) || g.is_nyquist(j) || g.is_nyquist(l) {
                    *v = Complex64::default();
                }
            }
        }
    }

    /// Largest `|f̂(k) - conj f̂(-k)|` over both fields.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.points;
        let neg = |i: usize| (n - i) % n;
        let mut worst = 0.0f64;
        for arr in [&self.psi_hat, &self.pi_hat] {
            for ((i, j, l), v) in arr.indexed_iter() {
                let w = arr[[neg(i), neg(j), neg(l)]];
                worst = worst.max((v - w.conj()).norm());
            }
        }
        worst
    }

    /// `‖ψ‖²_{L²}` from the spectrum.
    pub fn psi_l2_norm_sq(&self) -> f64 {
        self.psi_hat.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.mode_volume()
    }

    /// `‖π‖²_{L²}` from the spectrum.
    pub fn pi_l2_norm_sq(&self) -> f64 {
        self.pi_hat.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.mode_volume()
    }

    /// `‖∇ψ‖²_{L²} = Σ |k|² |ψ̂|² (2π/L)³`.
    pub fn grad_norm_sq(&self) -> f64 {
        let g = self.grid;
        let k: Vec<f64> = (0..g.points).map(|i| g.wavenumber(i)).collect();
        let total: f64 = self
            .psi_hat
            .indexed_iter()
            .map(|((i, j, l), v)| (k[i] * k[i] + k[j] * k[j] + k[l] * k[l]) * v.norm_sqr())
            .sum();
        total * g.mode_volume()
    }

    /// `self - other` (both on the same grid).
    pub fn difference(&self, other: &FieldState) -> FieldState {
        FieldState {
            grid: self.grid,
            psi_hat: &self.psi_hat - &other.psi_hat,
            pi_hat: &self.pi_hat - &other.pi_hat,
        }
    }

    pub fn scaled(&self, psi_factor: f64, pi_factor: f64) -> FieldState {
        FieldState {
            grid: self.grid,
            psi_hat: self.psi_hat.mapv(|v| v * psi_factor),
            pi_hat: self.pi_hat.mapv(|v| v * pi_factor),
        }
    }

    /// Spectral interpolant of `ψ` at an arbitrary point.
    pub fn psi_at(&self, x: &Vec3) -> f64 {
        let g = self.grid;
        let k: Vec<f64> = (0..g.points).map(|i| g.wavenumber(i)).collect();
        let ph = |c: f64| -> Vec<Complex64> {
            k.iter().map(|&kk| Complex64::from_polar(1.0, kk * c)).collect()
        };
        let (px, py, pz) = (ph(x.x), ph(x.y), ph(x.z));
        let sum: Complex64 = self
            .psi_hat
            .indexed_iter()
            .map(|((i, j, l), v)| v * px[i] * py[j] * pz[l])
            .sum();
        sum.re * UNITARY_FACTOR * g.mode_volume()
    }

    /// `∇ψ` on the grid (Nyquist derivatives set to zero).
    pub fn grad_psi(&self) -> [Array3<f64>; 3] {
        let g = self.grid;
        let fft = Fft3::new(g.points);
        let k: Vec<f64> = (0..g.points)
            .map(|i| if g.is_nyquist(i) { 0.0 } else { g.wavenumber(i) })
            .collect();
        let component = |axis: usize| {
            let mut a = Array3::from_shape_fn(g.shape(), |(i, j, l)| {
                let kk = [k[i], k[j], k[l]][axis];
                Complex64::new(0.0, kk) * self.psi_hat[[i, j, l]]
            });
            inverse_unitary(&fft, &g, &mut a)
        };
        [component(0), component(1), component(2)]
    }
}

fn forward_unitary(fft: &Fft3, g: &GridSpec, real: &Array3<f64>) -> Array3<Complex64> {
    let mut a = real.mapv(|v| Complex64::new(v, 0.0));
    fft.forward(&mut a);
    let scale = UNITARY_FACTOR * g.cell_volume();
    a.mapv_inplace(|v| v * scale);
    a
}

fn inverse_unitary(fft: &Fft3, g: &GridSpec, spec: &mut Array3<Complex64>) -> Array3<f64> {
    fft.inverse(spec);
    let scale = UNITARY_FACTOR * g.mode_volume();
    spec.mapv(|v| v.re * scale)
}

/// Grid arrays to spectral mirror. Lossless: no gauge projection.
pub fn to_spectral(field: &GridField) -> Result<FieldState> {
    let g = field.grid;
    g.check_shape(&field.psi)?;
    g.check_shape(&field.pi)?;
    let fft = Fft3::new(g.points);
    Ok(FieldState {
        grid: g,
        psi_hat: forward_unitary(&fft, &g, &field.psi),
        pi_hat: forward_unitary(&fft, &g, &field.pi),
    })
}

/// Spectral mirror to grid arrays; any anti-Hermitian residue is dropped.
pub fn to_grid(field: &FieldState) -> GridField {
    let g = field.grid;
    let fft = Fft3::new(g.points);
    GridField {
        grid: g,
        psi: inverse_unitary(&fft, &g, &mut field.psi_hat.clone()),
        pi: inverse_unitary(&fft, &g, &mut field.pi_hat.clone()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub q: Vec3,
    pub p: Vec3,
}

impl ParticleState {
    pub fn new(q: Vec3, p: Vec3) -> Self {
        Self { q, p }
    }

    pub fn at_rest(q: Vec3) -> Self {
        Self { q, p: Vec3::zeros() }
    }

    /// `q̇ = p/√(1+p²)`.
    pub fn velocity(&self) -> Vec3 {
        velocity_of(&self.p)
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(self.p.iter()).all(|c| c.is_finite())
    }
}

pub fn velocity_of(p: &Vec3) -> Vec3 {
    p / (1.0 + p.norm_squared()).sqrt()
}

/// A point `Y = (ψ, π, q, p)` of the phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub field: FieldState,
    pub particle: ParticleState,
}

/// Parameters `(v, a)` of a point on the soliton manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub v: Vec3,
    pub a: Vec3,
}

impl SolitonParams {
    pub fn new(v: Vec3, a: Vec3) -> Result<Self> {
        let s = v.norm();
        if !(s < MAX_SPEED) {
            return Err(Error::SpeedOutOfRange(s));
        }
        Ok(Self { v, a })
    }

    /// `λ = √(1 - v²)`.
    pub fn lambda(&self) -> f64 {
        (1.0 - self.v.norm_squared()).sqrt()
    }

    /// `p_v = v/√(1 - v²)`.
    pub fn momentum(&self) -> Vec3 {
        self.v / self.lambda()
    }
}

impl Lattice {
    /// `ψ̂ = -ρ̂ e^{-ik·a}/(k² - (k·v)²)` and `π̂ = i(k·v) ρ̂ e^{-ik·a}/(k² - (k·v)²)`.
    ///
    /// With `v = 0` this is the stationary field centred at `a`.
    pub fn traveling_field(&self, v: &Vec3, a: &Vec3) -> FieldState {
        let g = *self.grid();
        let n = g.points;
        let k = self.wavenumbers();
        let [px, py, pz] = self.shift_phases(a);
        let mut psi = Array3::<Complex64>::zeros((n, n, n));
        let mut pi = Array3::<Complex64>::zeros((n, n, n));
        let psi_s = psi.as_slice_mut().expect("standard layout");
        let pi_s = pi.as_slice_mut().expect("standard layout");
        let mut rho = vec![0.0; n];
        let moving = v.norm_squared() > 0.0;
        for i in 0..n {
            for j in 0..n {
                self.rho_row(i, j, &mut rho);
                let pij = px[i] * py[j];
                let kv_ij = k[i] * v.x + k[j] * v.y;
                let k2_ij = k[i] * k[i] + k[j] * k[j];
                let base = (i * n + j) * n;
                for l in 0..n {
                    if rho[l] == 0.0 {
                        continue;
                    }
                    let kv = kv_ij + k[l] * v.z;
                    let den = k2_ij + k[l] * k[l] - kv * kv;
                    let src = pij * pz[l] * rho[l];
                    psi_s[base + l] = -src / den;
                    if moving {
                        pi_s[base + l] = Complex64::new(0.0, kv) * src / den;
                    }
                }
            }
        }
        FieldState {
            grid: g,
            psi_hat: psi,
            pi_hat: pi,
        }
    }

    /// `(ψ_{q*}, 0, q*, 0)`.
    pub fn stationary_state(&self, q_star: &Vec3) -> PhaseState {
        PhaseState {
            field: self.traveling_field(&Vec3::zeros(), q_star),
            particle: ParticleState::at_rest(*q_star),
        }
    }

    /// `(ψ_v(· - a), π_v(· - a), a, p_v)`.
    pub fn soliton_state(&self, s: &SolitonParams) -> PhaseState {
        PhaseState {
            field: self.traveling_field(&s.v, &s.a),
            particle: ParticleState::new(s.a, s.momentum()),
        }
    }

    /// Band-limited `c·ρ(· - center)` as a spectral field (mean removed).
    pub fn density_field(&self, center: &Vec3, c: f64) -> Array3<Complex64> {
        let g = *self.grid();
        let [px, py, pz] = self.shift_phases(center);
        Array3::from_shape_fn(g.shape(), |(i, j, l)| {
            px[i] * py[j] * pz[l] * (c * self.rho_hat(i, j, l))
        })
    }
}

pub fn stationary_state(f: &FormFactor, q_star: &Vec3, grid: GridSpec) -> Result<PhaseState> {
    Ok(Lattice::new(f, grid)?.stationary_state(q_star))
}

pub fn soliton_state(f: &FormFactor, s: &SolitonParams, grid: GridSpec) -> Result<PhaseState> {
    SolitonParams::new(s.v, s.a)?;
    Ok(Lattice::new(f, grid)?.soliton_state(s))
}
