//! Periodic box, its wavenumber lattice and 3-D transforms.
//!
//! Grid point `i` along an axis sits at `i·dx`, wrapped into `[-L/2, L/2)`,
//! so index 0 is the origin of the box.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array3, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::formfactor::FormFactor;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Box side `L`.
    pub length: f64,
    /// Points per axis `N` (even).
    pub points: usize,
}

impl GridSpec {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid("length", format!("must be positive, got {length}")));
        }
        if points < 4 || points % 2 != 0 {
            return Err(invalid("points", format!("must be even and >= 4, got {points}")));
        }
        Ok(Self { length, points })
    }

    /// Default desk grid for a form factor: `N = 64`, `L = 16 R`.
    pub fn desk(f: &FormFactor) -> Self {
        Self {
            length: 16.0 * f.radius(),
            points: 64,
        }
    }

    /// Checks `L > 4 R`.
    pub fn check_fits(&self, f: &FormFactor) -> Result<()> {
        if self.length <= 4.0 * f.radius() {
            return Err(Error::GridTooSmall {
                length: self.length,
                radius: f.radius(),
            });
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn half_side(&self) -> f64 {
        0.5 * self.length
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Wavenumber spacing `2π/L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Volume element `(2π/L)³` of the wavenumber lattice.
    pub fn mode_volume(&self) -> f64 {
        self.dk().powi(3)
    }

    pub fn total_points(&self) -> usize {
        self.points.pow(3)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.points, self.points, self.points)
    }

    /// Signed mode number `n ∈ {-N/2, …, N/2 - 1}` of array index `i`.
    pub fn signed_index(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.dk() * self.signed_index(i) as f64
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        self.signed_index(i) == -(self.points as i64 / 2)
    }

    /// Position of grid index `i` in `[-L/2, L/2)`.
    pub fn coordinate(&self, i: usize) -> f64 {
        self.spacing() * self.signed_index(i) as f64
    }

    pub fn position(&self, i: usize, j: usize, l: usize) -> Vec3 {
        Vec3::new(self.coordinate(i), self.coordinate(j), self.coordinate(l))
    }

    /// Nearest grid index to coordinate `x` (periodically wrapped).
    pub fn nearest_index(&self, x: f64) -> usize {
        let n = self.points as i64;
        let i = (x / self.spacing()).round() as i64;
        i.rem_euclid(n) as usize
    }

    /// Minimum-image displacement `x - y` on the torus.
    pub fn min_image(&self, d: Vec3) -> Vec3 {
        d.map(|c| c - self.length * (c / self.length).round())
    }

    pub(crate) fn check_shape<T>(&self, a: &Array3<T>) -> Result<()> {
        let n = self.points;
        if a.shape() != [n, n, n] {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: a.shape().to_vec(),
            });
        }
        Ok(())
    }
}

/// Unnormalized forward and inverse 3-D FFT over `N³` arrays.
pub struct Fft3 {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(points: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        }
    }

    pub fn forward(&self, data: &mut Array3<Complex64>) {
        Self::apply(&*self.forward, data);
    }

    /// Inverse transform without the `1/N³` factor.
    pub fn inverse(&self, data: &mut Array3<Complex64>) {
        Self::apply(&*self.inverse, data);
    }

    fn apply(plan: &dyn Fft<f64>, data: &mut Array3<Complex64>) {
        let n = plan.len();
        let mut buffer = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        for axis in 0..3 {
            for mut lane in data.lanes_mut(Axis(axis)) {
                for (b, v) in buffer.iter_mut().zip(lane.iter()) {
                    *b = *v;
                }
                plan.process_with_scratch(&mut buffer, &mut scratch);
                for (v, b) in lane.iter_mut().zip(buffer.iter()) {
                    *v = *b;
                }
            }
        }
    }
}

/// Wavenumber lattice of a grid together with `ρ̂` sampled on it.
///
/// `ρ̂` is evaluated once per distinct `|n|²`. Modes with a Nyquist index on
/// any axis and the zero mode carry no source: the coupling density is
/// band-limited to `|n_a| < N/2` and the mean is projected out.
#[derive(Debug, Clone)]
pub struct Lattice {
    grid: GridSpec,
    form_factor: FormFactor,
    k: Vec<f64>,
    rho_by_norm2: Vec<f64>,
}

impl Lattice {
    pub fn new(form_factor: &FormFactor, grid: GridSpec) -> Result<Self> {
        grid.check_fits(form_factor)?;
        let half = grid.points / 2;
        let max_norm2 = 3 * half * half;
        let dk = grid.dk();
        let rho_by_norm2 = (0..=max_norm2)
            .map(|m| form_factor.rho_hat_unchecked(dk * (m as f64).sqrt()))
            .collect();
        let k = (0..grid.points).map(|i| grid.wavenumber(i)).collect();
        Ok(Self {
            grid,
            form_factor: *form_factor,
            k,
            rho_by_norm2,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn form_factor(&self) -> &FormFactor {
        &self.form_factor
    }

    /// Per-axis wavenumbers indexed by array index.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    fn n2(&self, i: usize) -> usize {
        let n = self.grid.signed_index(i);
        (n * n) as usize
    }

    /// Whether mode `(i, j, l)` couples to the particle.
    pub fn is_active(&self, i: usize, j: usize, l: usize) -> bool {
        let g = &self.grid;
        !(g.is_nyquist(i) || g.is_nyquist(j) || g.is_nyquist(l)) && (i, j, l) != (0, 0, 0)
    }

    /// `ρ̂(|k|)` on an active mode, zero otherwise.
    pub fn rho_hat(&self, i: usize, j: usize, l: usize) -> f64 {
        if self.is_active(i, j, l) {
            self.rho_by_norm2[self.n2(i) + self.n2(j) + self.n2(l)]
        } else {
            0.0
        }
    }

    /// `ρ̂` values per axis triple, for the innermost loop: returns the row
    /// `l ↦ ρ̂(i, j, l)`.
    pub(crate) fn rho_row(&self, i: usize, j: usize, out: &mut [f64]) {
        let g = &self.grid;
        let base = self.n2(i) + self.n2(j);
        let blocked = g.is_nyquist(i) || g.is_nyquist(j);
        for (l, o) in out.iter_mut().enumerate() {
            *o = if blocked || g.is_nyquist(l) || (i, j, l) == (0, 0, 0) {
                0.0
            } else {
                self.rho_by_norm2[base + self.n2(l)]
            };
        }
    }

    pub fn k_vec(&self, i: usize, j: usize, l: usize) -> Vec3 {
        Vec3::new(self.k[i], self.k[j], self.k[l])
    }

    pub fn k_norm2(&self, i: usize, j: usize, l: usize) -> f64 {
        self.k[i] * self.k[i] + self.k[j] * self.k[j] + self.k[l] * self.k[l]
    }

    /// Per-axis factors of `e^{-ik·a}`; the full phase of mode `(i, j, l)` is
    /// `x[i]·y[j]·z[l]`.
    pub fn shift_phases(&self, a: &Vec3) -> [Vec<Complex64>; 3] {
        let axis = |c: f64| -> Vec<Complex64> {
            self.k
                .iter()
                .map(|&k| Complex64::from_polar(1.0, -k * c))
                .collect()
        };
        [axis(a.x), axis(a.y), axis(a.z)]
    }
}
