use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelBasis;
use crate::prior::{PriorConfig, PriorKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmcConfig {
    pub n_particles: usize,
    /// Candidate row-sets per cluster.
    pub n_samples: usize,
    /// Particles whose weight falls below `omega_thres · max weight` are
    /// replaced. Defaults to `1 / (2 · n_particles)`.
    pub omega_thres: Option<f64>,
    /// Shape of the symmetric Beta prior on candidate entries.
    pub beta0: f64,
    /// Per-word Dirichlet pseudo-count.
    pub theta0: f64,
    pub vocab_size: usize,
    pub seed: u64,
    pub prior: PriorConfig,
    pub basis: KernelBasis,
    /// Zero every cross-cluster influence row.
    pub mask_cross: bool,
}

impl SmcConfig {
    /// Synthetic-benchmark defaults for a vocabulary of `vocab_size` words.
    pub fn new(vocab_size: usize) -> Self {
        Self {
            n_particles: 10,
            n_samples: 2000,
            omega_thres: None,
            beta0: 2.0,
            theta0: 0.1,
            vocab_size,
            seed: 0,
            prior: PriorConfig::default(),
            basis: KernelBasis::synthetic(),
            mask_cross: false,
        }
    }

    pub fn with_prior(mut self, kind: PriorKind) -> Self {
        self.prior.kind = kind;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn omega_threshold(&self) -> f64 {
        self.omega_thres
            .unwrap_or(1.0 / (2.0 * self.n_particles as f64))
    }

    /// Whether cross-cluster rows are excluded, either explicitly or by the
    /// univariate prior kind.
    pub fn univariate(&self) -> bool {
        self.mask_cross || self.prior.kind == PriorKind::Pdhp
    }

    pub fn validate(&self) -> Result<()> {
        self.prior.validate()?;
        if self.n_particles == 0 {
            return Err(Error::input("n_particles must be at least 1"));
        }
        if self.n_samples == 0 {
            return Err(Error::input("n_samples must be at least 1"));
        }
        if !(self.beta0.is_finite() && self.beta0 > 0.0) {
            return Err(Error::input("beta0 must be positive"));
        }
        if !(self.theta0.is_finite() && self.theta0 > 0.0) {
            return Err(Error::input("theta0 must be positive"));
        }
        if self.vocab_size == 0 {
            return Err(Error::input("vocab_size must be at least 1"));
        }
        if let Some(w) = self.omega_thres {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::input("omega_thres must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}
