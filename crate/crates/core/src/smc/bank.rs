use std::sync::Arc;

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::hawkes::{dot, floored_ln, ClusterId};

/// Candidate influence rows of one target cluster.
///
/// Every candidate holds one row of `L` weights per active source cluster.
/// Rows are immutable once drawn and shared between particle copies; only
/// the running log-likelihoods differ.
#[derive(Debug, Clone)]
pub struct CandidateBank {
    n: usize,
    l: usize,
    sources: Vec<ClusterId>,
    // rows[slot][s * l + k]
    rows: Vec<Arc<[f64]>>,
    // unnormalised log Beta density of every row each candidate ever held
    log_prior: Vec<f64>,
    loglik: Vec<f64>,
    frozen: Vec<(ClusterId, Vec<f64>)>,
    mean: Option<Vec<f64>>,
}

impl CandidateBank {
    pub fn new(n_samples: usize, n_basis: usize) -> Self {
        Self {
            n: n_samples,
            l: n_basis,
            sources: Vec::new(),
            rows: Vec::new(),
            log_prior: vec![0.0; n_samples],
            loglik: vec![0.0; n_samples],
            frozen: Vec::new(),
            mean: None,
        }
    }

    /// A bank whose candidates are given explicitly, one row-set each
    /// (`candidates[s][slot]` has `n_basis` entries).
    pub fn from_candidates(
        sources: Vec<ClusterId>,
        candidates: &[Vec<Vec<f64>>],
        n_basis: usize,
        beta0: f64,
    ) -> Result<Self> {
        let n = candidates.len();
        if n == 0 {
            return Err(Error::input("bank needs at least one candidate"));
        }
        let mut bank = Self::new(n, n_basis);
        for (slot, &src) in sources.iter().enumerate() {
            let mut flat = Vec::with_capacity(n * n_basis);
            for cand in candidates {
                let row = cand
                    .get(slot)
                    .filter(|r| r.len() == n_basis)
                    .ok_or_else(|| Error::input("candidate row shape mismatch"))?;
                flat.extend_from_slice(row);
            }
            bank.push_rows(src, flat.into(), beta0);
        }
        Ok(bank)
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn sources(&self) -> &[ClusterId] {
        &self.sources
    }

    pub fn frozen(&self) -> &[(ClusterId, Vec<f64>)] {
        &self.frozen
    }

    pub fn loglik(&self) -> &[f64] {
        &self.loglik
    }

    /// Row of candidate `s` for the source in `slot`.
    pub fn candidate_row(&self, s: usize, slot: usize) -> &[f64] {
        &self.rows[slot][s * self.l..(s + 1) * self.l]
    }

    /// Draws a fresh Beta(β0, β0) row per candidate for a new source.
    pub fn add_source<R: Rng>(&mut self, source: ClusterId, beta0: f64, rng: &mut R) {
        let beta = Beta::new(beta0, beta0).expect("beta0 validated positive");
        let flat: Vec<f64> = (0..self.n * self.l).map(|_| beta.sample(rng)).collect();
        self.push_rows(source, flat.into(), beta0);
    }

    fn push_rows(&mut self, source: ClusterId, rows: Arc<[f64]>, beta0: f64) {
        if beta0 != 1.0 {
            for (s, lp) in self.log_prior.iter_mut().enumerate() {
                *lp += log_beta_kernel(&rows[s * self.l..(s + 1) * self.l], beta0);
            }
        }
        self.sources.push(source);
        self.rows.push(rows);
        self.mean = None;
    }

    /// Fixes the rows of `sources` at their current posterior means and
    /// drops them from the candidates. Each candidate keeps the prior
    /// density and likelihood it accrued, so the remaining rows are
    /// weighted by the marginal of the full posterior.
    pub fn freeze_sources(&mut self, sources: &[ClusterId]) {
        if !sources.iter().any(|s| self.sources.contains(s)) {
            return;
        }
        let mean = self.posterior_mean();
        let l = self.l;
        let mut keep_sources = Vec::with_capacity(self.sources.len());
        let mut keep_rows = Vec::with_capacity(self.rows.len());
        for (slot, (src, rows)) in self.sources.drain(..).zip(self.rows.drain(..)).enumerate() {
            if sources.contains(&src) {
                self.frozen.push((src, mean[slot * l..(slot + 1) * l].to_vec()));
            } else {
                keep_sources.push(src);
                keep_rows.push(rows);
            }
        }
        self.sources = keep_sources;
        self.rows = keep_rows;
        self.mean = None;
    }

    /// Subtracts compensator mass: `mass[slot * L..]` is the per-component
    /// kernel mass accrued by the source in `slot`.
    pub fn subtract_mass(&mut self, mass: &[f64]) {
        debug_assert_eq!(mass.len(), self.rows.len() * self.l);
        let l = self.l;
        for (slot, rows) in self.rows.iter().enumerate() {
            let m = &mass[slot * l..(slot + 1) * l];
            if m.iter().all(|&x| x == 0.0) {
                continue;
            }
            for (s, acc) in self.loglik.iter_mut().enumerate() {
                *acc -= dot(&rows[s * l..(s + 1) * l], m);
            }
        }
        self.mean = None;
    }

    /// Adds the floored log-intensity of an event of this target; `kernel`
    /// holds per-slot kernel sums at the event time.
    pub fn observe(&mut self, kernel: &[f64]) {
        debug_assert_eq!(kernel.len(), self.rows.len() * self.l);
        let l = self.l;
        let mut rate = vec![0.0; self.n];
        for (slot, rows) in self.rows.iter().enumerate() {
            let kv = &kernel[slot * l..(slot + 1) * l];
            for (s, r) in rate.iter_mut().enumerate() {
                *r += dot(&rows[s * l..(s + 1) * l], kv);
            }
        }
        for (acc, r) in self.loglik.iter_mut().zip(rate) {
            *acc += floored_ln(r);
        }
        self.mean = None;
    }

    /// Normalised posterior weights over candidates.
    pub fn posterior_weights(&self) -> Vec<f64> {
        let scores: Vec<f64> = self
            .loglik
            .iter()
            .zip(&self.log_prior)
            .map(|(a, b)| a + b)
            .collect();
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            log::warn!("all candidate weights underflowed; using uniform weights");
            return vec![1.0 / self.n as f64; self.n];
        }
        let mut w: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w
    }

    /// Posterior mean of the active rows, slot-major (`slots × L`).
    pub fn posterior_mean(&self) -> Vec<f64> {
        if let Some(m) = &self.mean {
            return m.clone();
        }
        self.compute_mean()
    }

    /// Like [`posterior_mean`](Self::posterior_mean) but caches the result
    /// until the bank next changes.
    pub fn posterior_mean_cached(&mut self) -> &[f64] {
        if self.mean.is_none() {
            self.mean = Some(self.compute_mean());
        }
        self.mean.as_deref().expect("just filled")
    }

    fn compute_mean(&self) -> Vec<f64> {
        let l = self.l;
        let w = self.posterior_weights();
        let mut out = vec![0.0; self.rows.len() * l];
        for (slot, rows) in self.rows.iter().enumerate() {
            let o = &mut out[slot * l..(slot + 1) * l];
            for (s, &ws) in w.iter().enumerate() {
                if ws == 0.0 {
                    continue;
                }
                for (x, r) in o.iter_mut().zip(&rows[s * l..(s + 1) * l]) {
                    *x += ws * r;
                }
            }
        }
        out
    }
}

/// `(β0 − 1) · Σ ln(x (1 − x))`: the Beta(β0, β0) log-density of a row up
/// to its normalising constant, which is shared by all candidates.
fn log_beta_kernel(row: &[f64], beta0: f64) -> f64 {
    (beta0 - 1.0) * row.iter().map(|&x| (x * (1.0 - x)).ln()).sum::<f64>()
}
