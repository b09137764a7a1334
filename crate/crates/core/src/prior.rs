//! Sequential cluster-allocation priors.
//!
//! All four kinds share one formula over a per-cluster statistic `s_c`:
//!
//! ```text
//! P(c)     = s_c^r  / (conc + Σ s^r)    for existing clusters
//! P(new)   = conc   / (conc + Σ s^r)
//! ```
//!
//! For the Hawkes kinds `s_c` is the cluster intensity at the event time
//! and `conc = λ0`; for the count kinds `s_c` is the cluster population
//! and `conc = alpha_dp`, with `r` pinned to 1 (DP) or 0 (UP).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Statistics below this are treated as exactly zero.
pub const STAT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    /// Multivariate powered Dirichlet-Hawkes: intensities from every
    /// active cluster's events.
    Mpdhp,
    /// Univariate powered Dirichlet-Hawkes: a cluster is only excited by
    /// its own events.
    Pdhp,
    /// Dirichlet process over populations.
    Dp,
    /// Uniform process.
    Up,
}

impl PriorKind {
    pub const ALL: [PriorKind; 4] = [PriorKind::Mpdhp, PriorKind::Pdhp, PriorKind::Dp, PriorKind::Up];

    /// Whether the statistic comes from Hawkes intensities.
    pub fn is_temporal(self) -> bool {
        matches!(self, PriorKind::Mpdhp | PriorKind::Pdhp)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PriorKind::Mpdhp => "mpdhp",
            PriorKind::Pdhp => "pdhp",
            PriorKind::Dp => "dp",
            PriorKind::Up => "up",
        }
    }
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PriorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mpdhp" => Ok(PriorKind::Mpdhp),
            "pdhp" | "pdhp-univariate" => Ok(PriorKind::Pdhp),
            "dp" => Ok(PriorKind::Dp),
            "up" => Ok(PriorKind::Up),
            other => Err(Error::input(format!("unknown prior kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorConfig {
    #[serde(rename = "prior_kind")]
    pub kind: PriorKind,
    pub r: f64,
    pub lambda0: f64,
    pub alpha_dp: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        Self {
            kind: PriorKind::Mpdhp,
            r: 1.0,
            lambda0: 0.01,
            alpha_dp: 1.0,
        }
    }
}

impl PriorConfig {
    pub fn new(kind: PriorKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::input("r must be finite and non-negative"));
        }
        if !(self.lambda0.is_finite() && self.lambda0 > 0.0) {
            return Err(Error::input("lambda0 must be positive"));
        }
        if !(self.alpha_dp.is_finite() && self.alpha_dp > 0.0) {
            return Err(Error::input("alpha_dp must be positive"));
        }
        Ok(())
    }

    /// Exponent actually applied to the statistics.
    pub fn effective_r(&self) -> f64 {
        match self.kind {
            PriorKind::Dp => 1.0,
            PriorKind::Up => 0.0,
            _ => self.r,
        }
    }

    /// Weight of the new-cluster option.
    pub fn concentration(&self) -> f64 {
        if self.kind.is_temporal() {
            self.lambda0
        } else {
            self.alpha_dp
        }
    }
}

/// Prior probabilities of the `K` existing clusters followed by the new
/// cluster. Entries sum to one.
pub fn allocation_prior(config: &PriorConfig, stats: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(stats.len() + 1);
    let total = powered_stats(config, stats, &mut out)?;
    let conc = config.concentration();
    let denom = conc + total;
    out.iter_mut().for_each(|p| *p /= denom);
    out.push(conc / denom);
    Ok(out)
}

/// Natural logs of [`allocation_prior`], computed without forming the
/// probabilities first. Zero-probability entries are `-inf`.
pub fn log_allocation_prior(config: &PriorConfig, stats: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(stats.len() + 1);
    let total = powered_stats(config, stats, &mut out)?;
    let conc = config.concentration();
    let log_denom = (conc + total).ln();
    out.iter_mut().for_each(|p| *p = p.ln() - log_denom);
    out.push(conc.ln() - log_denom);
    Ok(out)
}

/// Pushes `s^r` for each statistic (`0^0 = 0`) and returns their sum.
fn powered_stats(config: &PriorConfig, stats: &[f64], out: &mut Vec<f64>) -> Result<f64> {
    let r = config.effective_r();
    let mut total = 0.0;
    for &s in stats {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::input(format!("cluster statistic {s} is negative or not finite")));
        }
        let p = if s < STAT_FLOOR {
            0.0
        } else if r == 1.0 {
            s
        } else {
            s.powf(r)
        };
        total += p;
        out.push(p);
    }
    Ok(total)
}
