//! Radial, compactly supported coupling densities and their Fourier profiles.
//!
//! Transforms use the unitary convention
//! `f̂(k) = (2π)^{-3/2} ∫ f(x) e^{-ik·x} dx`, so Plancherel carries no factors.
//! For a radial density the transform reduces to the one-dimensional integral
//! `(2π)^{-3/2} (4π/k) ∫₀^R r sin(kr) ρ₁(r) dr`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{Adaptive, GlRule};
use crate::Vec3;

/// `(2π)^{-3/2}`.
pub const UNITARY_FACTOR: f64 = 0.063_493_635_934_240_97;

/// Below `k·R` of this size `rho_hat` switches to its Taylor expansion.
pub const SMALL_K_THRESHOLD: f64 = 1e-4;

/// Exponent of the truncated polynomial profile `(1 - r²/R²)^4`.
pub const POLYNOMIAL_EXPONENT: i32 = 4;

/// Absolute tolerance of the adaptive quadrature behind [`FormFactor::delta_rho`].
pub const DELTA_RHO_ABS_TOL: f64 = 1e-13;

/// Upper wavenumber cut (in units of 1/R) for spectral integrals of `|ρ̂|²`.
pub const SPECTRAL_CUTOFF: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `exp(-1/(1 - r²/R²))` inside the support.
    Bump,
    /// `(1 - r²/R²)^4` inside the support.
    TruncatedPolynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `∫ρ dx = 1`.
    UnitIntegral,
    /// `ρ(0) = 1`.
    UnitAmplitude,
}

/// Transform convention carried by a [`RadialSpectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FourierConvention {
    Unitary,
}

/// Coupling density `ρ(x) = A·s(|x|/R)` with `s` vanishing for `|x| ≥ R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactor {
    profile: Profile,
    radius: f64,
    amplitude: f64,
    // moments ∫ r² ρ₁ dr and ∫ r⁴ ρ₁ dr, used by the small-k expansion
    moment2: f64,
    moment4: f64,
}

impl FormFactor {
    pub fn new(profile: Profile, radius: f64, normalization: Normalization) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("radius", format!("must be positive, got {radius}")));
        }
        let mut f = Self {
            profile,
            radius,
            amplitude: 1.0,
            moment2: 0.0,
            moment4: 0.0,
        };
        f.amplitude = match normalization {
            Normalization::UnitAmplitude => 1.0 / f.shape(0.0),
            Normalization::UnitIntegral => 1.0 / (4.0 * PI * f.radial_moment(2)),
        };
        f.moment2 = f.radial_moment(2);
        f.moment4 = f.radial_moment(4);
        Ok(f)
    }

    /// Unit-integral bump of support radius `radius`.
    pub fn bump(radius: f64) -> Result<Self> {
        Self::new(Profile::Bump, radius, Normalization::UnitIntegral)
    }

    /// The same profile multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            amplitude: self.amplitude * c,
            moment2: self.moment2 * c,
            moment4: self.moment4 * c,
            ..*self
        }
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    fn shape(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u * u;
        match self.profile {
            Profile::Bump => (-1.0 / w).exp(),
            Profile::TruncatedPolynomial => w.powi(POLYNOMIAL_EXPONENT),
        }
    }

    fn shape_derivative(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u * u;
        match self.profile {
            Profile::Bump => (-1.0 / w).exp() * (-2.0 * u / (w * w)),
            Profile::TruncatedPolynomial => {
                let m = POLYNOMIAL_EXPONENT;
                m as f64 * w.powi(m - 1) * (-2.0 * u)
            }
        }
    }

    /// `∫₀^R r^power ρ₁(r) dr` with the current amplitude.
    fn radial_moment(&self, power: i32) -> f64 {
        let rule = GlRule::new(32);
        let r = self.radius;
        rule.composite(0.0, r, 16, |s| s.powi(power) * self.radial(s))
    }

    /// Radial profile `ρ₁(r)`.
    pub fn radial(&self, r: f64) -> f64 {
        self.amplitude * self.shape(r.abs() / self.radius)
    }

    /// `dρ₁/dr`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        self.amplitude * self.shape_derivative(r.abs() / self.radius) / self.radius
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        self.radial(x.norm())
    }

    pub fn gradient(&self, x: &Vec3) -> Vec3 {
        let r = x.norm();
        if r == 0.0 {
            return Vec3::zeros();
        }
        x * (self.radial_derivative(r) / r)
    }

    /// `∫ρ dx`.
    pub fn total_charge(&self) -> f64 {
        4.0 * PI * self.moment2
    }

    /// `ρ̂(k)` in the unitary convention.
    pub fn rho_hat(&self, k: f64) -> Result<f64> {
        if k < 0.0 || k.is_nan() {
            return Err(Error::NegativeWavenumber(k));
        }
        Ok(self.rho_hat_unchecked(k))
    }

    pub(crate) fn rho_hat_unchecked(&self, k: f64) -> f64 {
        let r = self.radius;
        if k * r < SMALL_K_THRESHOLD {
            return UNITARY_FACTOR * 4.0 * PI * (self.moment2 - k * k * self.moment4 / 6.0);
        }
        // The bump's steep edge near r = R needs ~24 panels even at small k;
        // beyond that, two panels per half period of sin(kr).
        let panels = 24usize.max((2.0 * k * r / PI).ceil() as usize);
        let integral = rule16().composite(0.0, r, panels, |s| s * (k * s).sin() * self.radial(s));
        UNITARY_FACTOR * 4.0 * PI / k * integral
    }

    pub fn spectrum(&self) -> RadialSpectrum {
        RadialSpectrum {
            form_factor: *self,
            convention: FourierConvention::Unitary,
        }
    }

    /// `δ_ρ = ∫ |ρ̂(k)|²/k² dk = 4π ∫₀^∞ |ρ̂(k)|² dk`.
    ///
    /// The integral is truncated at `SPECTRAL_CUTOFF / R`; beyond it `|ρ̂|²`
    /// is below 1e-14 of its peak for every built-in profile.
    pub fn delta_rho(&self) -> f64 {
        let k_max = SPECTRAL_CUTOFF / self.radius;
        let q = Adaptive::new(DELTA_RHO_ABS_TOL / (4.0 * PI))
            .with_initial_panels(64)
            .integrate(0.0, k_max, |k| self.rho_hat_unchecked(k).powi(2));
        4.0 * PI * q.value
    }

    /// `‖ρ‖²_{L²}`.
    pub fn l2_norm_sq(&self) -> f64 {
        let r = self.radius;
        4.0 * PI * GlRule::new(32).composite(0.0, r, 16, |s| (s * self.radial(s)).powi(2))
    }

    /// `‖∇ρ‖²_{L²}`.
    pub fn grad_norm_sq(&self) -> f64 {
        let r = self.radius;
        4.0 * PI
            * GlRule::new(32).composite(0.0, r, 16, |s| (s * self.radial_derivative(s)).powi(2))
    }
}

fn rule16() -> &'static GlRule {
    use std::sync::OnceLock;
    static RULE: OnceLock<GlRule> = OnceLock::new();
    RULE.get_or_init(|| GlRule::new(16))
}

/// `ρ̂` as a function of the scalar wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSpectrum {
    form_factor: FormFactor,
    pub convention: FourierConvention,
}

impl RadialSpectrum {
    pub fn eval(&self, k: f64) -> Result<f64> {
        self.form_factor.rho_hat(k)
    }

    /// Value at the origin, `(2π)^{-3/2} ∫ρ dx`.
    pub fn at_origin(&self) -> f64 {
        UNITARY_FACTOR * self.form_factor.total_charge()
    }
}
