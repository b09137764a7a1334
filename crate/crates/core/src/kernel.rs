//! Gaussian radial-basis triggering kernels.
//!
//! A [`KernelBasis`] holds `L` Gaussian bumps `κ_l(Δt) = N(Δt; μ_l, σ_l²)`
//! over the time lag between a triggering event and the current time.
//! Every bump is hard-truncated at the shared horizon
//! `max_l (μ_l + 3σ_l)`: the density is exactly zero past it, and the
//! integrals saturate there. Mass at negative lags is ignored.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `L`-component Gaussian RBF basis. Times are in hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisRepr", into = "BasisRepr")]
pub struct KernelBasis {
    means: Vec<f64>,
    sigmas: Vec<f64>,
    horizon: f64,
    norm: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct BasisRepr {
    kernel_means: Vec<f64>,
    kernel_sigmas: Vec<f64>,
}

impl TryFrom<BasisRepr> for KernelBasis {
    type Error = Error;

    fn try_from(r: BasisRepr) -> Result<Self> {
        KernelBasis::new(r.kernel_means, r.kernel_sigmas)
    }
}

impl From<KernelBasis> for BasisRepr {
    fn from(b: KernelBasis) -> Self {
        BasisRepr {
            kernel_means: b.means,
            kernel_sigmas: b.sigmas,
        }
    }
}

impl KernelBasis {
    pub fn new(means: Vec<f64>, sigmas: Vec<f64>) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::input("kernel basis needs at least one component"));
        }
        if means.len() != sigmas.len() {
            return Err(Error::input(format!(
                "kernel_means has {} entries but kernel_sigmas has {}",
                means.len(),
                sigmas.len()
            )));
        }
        if sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::input("kernel widths must be finite and positive"));
        }
        if means.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::input("kernel means must be finite and non-negative"));
        }
        if means.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("kernel means must be strictly increasing"));
        }
        let horizon = means
            .iter()
            .zip(&sigmas)
            .map(|(m, s)| m + 3.0 * s)
            .fold(f64::NEG_INFINITY, f64::max);
        let norm = sigmas.iter().map(|s| 1.0 / (2.0 * PI * s * s).sqrt()).collect();
        Ok(Self {
            means,
            sigmas,
            horizon,
            norm,
        })
    }

    /// `{G(3;0.5), G(7;0.5), G(11;0.5)}`, the basis used to generate
    /// and fit the synthetic benchmarks.
    pub fn synthetic() -> Self {
        Self::new(vec![3.0, 7.0, 11.0], vec![0.5; 3]).expect("valid preset")
    }

    /// Gaussians centred at 0, 2, 4, 6 and 8 hours with unit width, used
    /// for the news-headline preset.
    pub fn news() -> Self {
        Self::new(vec![0.0, 2.0, 4.0, 6.0, 8.0], vec![1.0; 5]).expect("valid preset")
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    /// Lag past which every component is exactly zero.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Peak density of each component, `1/√(2πσ_l²)`.
    pub fn peaks(&self) -> &[f64] {
        &self.norm
    }

    /// Densities of all components at lag `dt`.
    pub fn kernel_value(&self, dt: f64) -> Result<Vec<f64>> {
        if !(dt >= 0.0) {
            return Err(Error::input(format!(
                "negative or undefined lag {dt}; events must be ordered in time"
            )));
        }
        let mut out = vec![0.0; self.len()];
        self.values_into(dt, &mut out);
        Ok(out)
    }

    /// Kernel mass of every component over the lag interval `[from, to]`.
    pub fn kernel_integral(&self, from: f64, to: f64) -> Result<Vec<f64>> {
        if !(from >= 0.0) || !(to >= from) {
            return Err(Error::input(format!(
                "kernel integral needs 0 <= from <= to, got [{from}, {to}]"
            )));
        }
        let mut out = vec![0.0; self.len()];
        self.integral_into(from, to, &mut out);
        Ok(out)
    }

    /// Writes `κ(dt)` into `out`. Caller guarantees `dt >= 0`.
    #[inline]
    pub(crate) fn values_into(&self, dt: f64, out: &mut [f64]) {
        if dt > self.horizon {
            out.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        for l in 0..self.means.len() {
            let z = (dt - self.means[l]) / self.sigmas[l];
            out[l] = self.norm[l] * (-0.5 * z * z).exp();
        }
    }

    /// Adds `κ(dt)` scaled by `scale` to `acc`.
    #[inline]
    pub(crate) fn accumulate_values(&self, dt: f64, acc: &mut [f64]) {
        if dt > self.horizon {
            return;
        }
        for l in 0..self.means.len() {
            let z = (dt - self.means[l]) / self.sigmas[l];
            acc[l] += self.norm[l] * (-0.5 * z * z).exp();
        }
    }

    /// Writes the masses over `[from, to]` into `out`. Caller guarantees
    /// `0 <= from <= to`.
    #[inline]
    pub(crate) fn integral_into(&self, from: f64, to: f64, out: &mut [f64]) {
        let a = from.min(self.horizon);
        let b = to.min(self.horizon);
        for l in 0..self.means.len() {
            let s = self.sigmas[l];
            out[l] = normal_mass((a - self.means[l]) / s, (b - self.means[l]) / s);
        }
    }

    /// Adds the masses over `[from, to]` to `acc`.
    #[inline]
    pub(crate) fn accumulate_integral(&self, from: f64, to: f64, acc: &mut [f64]) {
        let a = from.min(self.horizon);
        let b = to.min(self.horizon);
        if a >= b {
            return;
        }
        for l in 0..self.means.len() {
            let s = self.sigmas[l];
            acc[l] += normal_mass((a - self.means[l]) / s, (b - self.means[l]) / s);
        }
    }

    /// Total mass of each truncated component over `[0, horizon]`.
    pub fn saturated_mass(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.integral_into(0.0, self.horizon, &mut out);
        out
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `Φ(b) − Φ(a)` for `a <= b`, evaluated on whichever tail keeps it
/// free of cancellation.
pub fn normal_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (libm::erfc(a / SQRT_2) - libm::erfc(b / SQRT_2))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b / SQRT_2) - libm::erfc(-a / SQRT_2))
    } else {
        0.5 * (libm::erf(b / SQRT_2) - libm::erf(a / SQRT_2))
    }
}
