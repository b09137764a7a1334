//! Intensities and point-process log-likelihoods of the pure-triggering
//! multivariate Hawkes model
//!
//! `λ_c(t) = Σ_{t_j < t} α[c][c_j] · κ(t − t_j)`
//!
//! `log L = Σ_c ( −∫_0^T λ_c(t) dt + Σ_{i ∈ c} log λ_c(t_i) )`.

use super::history::{EventHistory, SourceWindow};
use super::tensor::{ClusterId, InfluenceTensor};
use crate::error::{Error, Result};
use crate::kernel::KernelBasis;

/// Intensities below this are replaced by it inside `log`.
pub const INTENSITY_FLOOR: f64 = 1e-10;

#[inline]
pub fn floored_ln(rate: f64) -> f64 {
    rate.max(INTENSITY_FLOOR).ln()
}

/// `λ_target(t)` from in-horizon history events strictly before `t`.
pub fn intensity(
    target: ClusterId,
    tensor: &InfluenceTensor,
    basis: &KernelBasis,
    history: &EventHistory,
    t: f64,
) -> Result<f64> {
    let ti = tensor.index_of(target)?;
    if let Some(last) = history.last_time() {
        if t < last {
            return Err(Error::input(format!(
                "intensity queried at {t}, before the last event at {last}"
            )));
        }
    }
    let mut kv = vec![0.0; basis.len()];
    let mut total = 0.0;
    for e in history.window(t, basis.horizon()) {
        if e.time >= t {
            continue;
        }
        let si = tensor.index_of(e.cluster)?;
        basis.values_into(t - e.time, &mut kv);
        total += dot(tensor.row(ti, si), &kv);
    }
    Ok(total)
}

/// Log-likelihood of the whole history observed up to `end`.
pub fn log_likelihood(
    tensor: &InfluenceTensor,
    basis: &KernelBasis,
    history: &EventHistory,
    end: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for &c in tensor.cluster_ids() {
        total += target_log_likelihood(c, tensor, basis, history, end)?;
    }
    Ok(total)
}

/// The term of [`log_likelihood`] that belongs to one target cluster:
/// its compensator over `[0, end]` and the log-intensities at its own
/// events.
pub fn target_log_likelihood(
    target: ClusterId,
    tensor: &InfluenceTensor,
    basis: &KernelBasis,
    history: &EventHistory,
    end: f64,
) -> Result<f64> {
    let ti = tensor.index_of(target)?;
    if let Some(last) = history.last_time() {
        if end < last {
            return Err(Error::input("likelihood end precedes the last event"));
        }
    }
    let events = history.events();
    let horizon = basis.horizon();
    let l = basis.len();
    let mut mass = vec![0.0; l];
    let mut kv = vec![0.0; l];

    let mut compensator = 0.0;
    for e in events {
        let si = tensor.index_of(e.cluster)?;
        basis.integral_into(0.0, end - e.time, &mut mass);
        compensator += dot(tensor.row(ti, si), &mass);
    }

    let mut log_terms = 0.0;
    let mut start = 0;
    for (i, e) in events.iter().enumerate() {
        if e.cluster != target {
            continue;
        }
        while e.time - events[start].time > horizon {
            start += 1;
        }
        let mut rate = 0.0;
        for trig in &events[start..i] {
            let si = tensor.index_of(trig.cluster)?;
            basis.values_into(e.time - trig.time, &mut kv);
            rate += dot(tensor.row(ti, si), &kv);
        }
        log_terms += floored_ln(rate);
    }
    Ok(log_terms - compensator)
}

/// Running log-likelihoods of a fixed set of candidate tensors, updated
/// one event at a time.
///
/// `accumulator(c, s)` always equals
/// `target_log_likelihood(c, candidate s, history so far, now)`.
#[derive(Debug, Clone)]
pub struct IncrementalLoglik {
    basis: KernelBasis,
    cluster_ids: Vec<ClusterId>,
    candidates: Vec<InfluenceTensor>,
    // acc[target * n_candidates + s]
    acc: Vec<f64>,
    windows: Vec<SourceWindow>,
    now: Option<f64>,
}

impl IncrementalLoglik {
    pub fn new(basis: KernelBasis, candidates: Vec<InfluenceTensor>) -> Result<Self> {
        let first = candidates
            .first()
            .ok_or_else(|| Error::input("need at least one candidate tensor"))?;
        let cluster_ids = first.cluster_ids().to_vec();
        if candidates
            .iter()
            .any(|c| c.cluster_ids() != cluster_ids.as_slice() || c.n_basis() != basis.len())
        {
            return Err(Error::input("candidates must share clusters and basis size"));
        }
        let k = cluster_ids.len();
        Ok(Self {
            basis,
            acc: vec![0.0; k * candidates.len()],
            windows: vec![SourceWindow::new(); k],
            cluster_ids,
            candidates,
            now: None,
        })
    }

    pub fn accumulator(&self, target: usize, candidate: usize) -> f64 {
        self.acc[target * self.candidates.len() + candidate]
    }

    /// Sum over targets for one candidate: its full log-likelihood.
    pub fn total(&self, candidate: usize) -> f64 {
        (0..self.cluster_ids.len())
            .map(|t| self.accumulator(t, candidate))
            .sum()
    }

    /// Subtracts the compensator accrued between the last update and `t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        let Some(prev) = self.now else {
            self.now = Some(t);
            return Ok(());
        };
        if t < prev {
            return Err(Error::input(format!("time {t} precedes {prev}")));
        }
        let l = self.basis.len();
        let n = self.candidates.len();
        let k = self.cluster_ids.len();
        let mut inc = vec![0.0; k * l];
        for (src, w) in self.windows.iter().enumerate() {
            w.add_increment(&self.basis, prev, t, &mut inc[src * l..(src + 1) * l]);
        }
        for target in 0..k {
            for (s, cand) in self.candidates.iter().enumerate() {
                let mut d = 0.0;
                for src in 0..k {
                    d += dot(cand.row(target, src), &inc[src * l..(src + 1) * l]);
                }
                self.acc[target * n + s] -= d;
            }
        }
        for w in &mut self.windows {
            w.expire(t, self.basis.horizon());
        }
        self.now = Some(t);
        Ok(())
    }

    /// Folds in one event: compensator up to `t`, then the log-intensity
    /// of the event under every candidate's row for its cluster.
    pub fn observe(&mut self, t: f64, cluster: ClusterId) -> Result<()> {
        let target = self
            .cluster_ids
            .iter()
            .position(|c| *c == cluster)
            .ok_or(Error::UnknownCluster(cluster.0))?;
        self.advance_to(t)?;
        let l = self.basis.len();
        let k = self.cluster_ids.len();
        let n = self.candidates.len();
        let mut kv = vec![0.0; k * l];
        for (src, w) in self.windows.iter().enumerate() {
            w.add_kernel_sum(&self.basis, t, &mut kv[src * l..(src + 1) * l]);
        }
        for (s, cand) in self.candidates.iter().enumerate() {
            let mut rate = 0.0;
            for src in 0..k {
                rate += dot(cand.row(target, src), &kv[src * l..(src + 1) * l]);
            }
            self.acc[target * n + s] += floored_ln(rate);
        }
        self.windows[target].push(t);
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
