use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bank::CandidateBank;
use super::config::SmcConfig;
use crate::error::{Error, Result};
use crate::hawkes::{dot, target_log_likelihood, ClusterId, EventHistory, InfluenceTensor, SourceWindow};
use crate::prior::log_allocation_prior;
use crate::text::{doc_log_likelihood, ClusterWordCounts, DocumentCounts};

/// A cluster with at least one in-horizon event (for the Hawkes priors) or
/// any event at all (for the count priors).
#[derive(Debug, Clone)]
pub struct ActiveCluster {
    pub id: ClusterId,
    pub words: ClusterWordCounts,
    pub population: u64,
    pub first_time: f64,
    pub last_time: f64,
    window: SourceWindow,
    bank: Option<CandidateBank>,
}

impl ActiveCluster {
    pub fn bank(&self) -> Option<&CandidateBank> {
        self.bank.as_ref()
    }
}

/// A cluster that fell silent for longer than the kernel horizon, with the
/// influence rows it was retired with (`rows[i]` is the weight vector from
/// source `rows[i].0` onto this cluster).
#[derive(Debug, Clone, Serialize)]
pub struct RetiredCluster {
    pub id: ClusterId,
    #[serde(skip)]
    pub words: ClusterWordCounts,
    pub population: u64,
    pub first_time: f64,
    pub last_time: f64,
    pub rows: Vec<(ClusterId, Vec<f64>)>,
}

/// Result of pushing one document through one particle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step {
    /// Log marginal probability of the document under the particle.
    pub evidence: f64,
}

/// One SMC hypothesis about the cluster assignments seen so far.
#[derive(Debug, Clone)]
pub struct Particle {
    active: Vec<ActiveCluster>,
    retired: Vec<Arc<RetiredCluster>>,
    assignments: Vec<ClusterId>,
    active_counts: Vec<u32>,
    next_id: u64,
    now: Option<f64>,
    last_entropy: f64,
    rng: ChaCha8Rng,
}

impl Particle {
    pub fn new(seed: u64) -> Self {
        Self {
            active: Vec::new(),
            retired: Vec::new(),
            assignments: Vec::new(),
            active_counts: Vec::new(),
            next_id: 0,
            now: None,
            last_entropy: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn active(&self) -> &[ActiveCluster] {
        &self.active
    }

    pub fn retired(&self) -> &[Arc<RetiredCluster>] {
        &self.retired
    }

    /// Cluster of every processed event, in stream order.
    pub fn assignments(&self) -> &[ClusterId] {
        &self.assignments
    }

    /// Number of active clusters right after each event.
    pub fn active_counts(&self) -> &[u32] {
        &self.active_counts
    }

    pub fn clusters_opened(&self) -> u64 {
        self.next_id
    }

    /// Entropy of the assignment posterior at the latest event.
    pub fn last_entropy(&self) -> f64 {
        self.last_entropy
    }

    pub(crate) fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn index_of(&self, id: ClusterId) -> Option<usize> {
        self.active.iter().position(|c| c.id == id)
    }

    /// Brings every candidate likelihood up to `now`, then retires clusters
    /// with no event inside the horizon. A second call at the same `now`
    /// changes nothing.
    pub fn freeze_and_prune(&mut self, now: f64, config: &SmcConfig) -> Result<()> {
        if let Some(prev) = self.now {
            if now < prev {
                return Err(Error::input(format!("time {now} precedes {prev}")));
            }
        }
        if !config.prior.kind.is_temporal() {
            self.now = Some(now);
            return Ok(());
        }
        let basis = &config.basis;
        let l = basis.len();
        if let Some(prev) = self.now.filter(|&p| p < now) {
            let mut mass = vec![0.0; self.active.len() * l];
            for (i, c) in self.active.iter().enumerate() {
                c.window.add_increment(basis, prev, now, &mut mass[i * l..(i + 1) * l]);
            }
            let univariate = config.univariate();
            for (i, c) in self.active.iter_mut().enumerate() {
                let bank = c.bank.as_mut().expect("temporal clusters carry banks");
                if univariate {
                    bank.subtract_mass(&mass[i * l..(i + 1) * l]);
                } else {
                    bank.subtract_mass(&mass);
                }
            }
        }
        self.now = Some(now);
        for c in &mut self.active {
            c.window.expire(now, basis.horizon());
        }

        let dead: Vec<ClusterId> = self
            .active
            .iter()
            .filter(|c| c.window.is_empty())
            .map(|c| c.id)
            .collect();
        if dead.is_empty() {
            return Ok(());
        }
        let (gone, alive): (Vec<_>, Vec<_>) = std::mem::take(&mut self.active)
            .into_iter()
            .partition(|c| dead.contains(&c.id));
        self.active = alive;
        for c in &mut self.active {
            if let Some(bank) = c.bank.as_mut() {
                bank.freeze_sources(&dead);
            }
        }
        for c in gone {
            let bank = c.bank.expect("temporal clusters carry banks");
            let mut rows = bank.frozen().to_vec();
            let mean = bank.posterior_mean();
            for (slot, &src) in bank.sources().iter().enumerate() {
                rows.push((src, mean[slot * l..(slot + 1) * l].to_vec()));
            }
            self.retired.push(Arc::new(RetiredCluster {
                id: c.id,
                words: c.words,
                population: c.population,
                first_time: c.first_time,
                last_time: c.last_time,
                rows,
            }));
        }
        Ok(())
    }

    /// Per-cluster prior statistics at `t`, aligned with [`active`](Self::active),
    /// and the per-source kernel sums they were built from.
    fn statistics(&mut self, t: f64, config: &SmcConfig) -> (Vec<f64>, Vec<f64>) {
        if !config.prior.kind.is_temporal() {
            let stats = self.active.iter().map(|c| c.population as f64).collect();
            return (stats, Vec::new());
        }
        let basis = &config.basis;
        let l = basis.len();
        let mut kernel = vec![0.0; self.active.len() * l];
        for (i, c) in self.active.iter().enumerate() {
            c.window.add_kernel_sum(basis, t, &mut kernel[i * l..(i + 1) * l]);
        }
        let univariate = config.univariate();
        let stats = self
            .active
            .iter_mut()
            .enumerate()
            .map(|(i, c)| {
                let mean = c.bank.as_mut().expect("temporal clusters carry banks").posterior_mean_cached();
                if univariate {
                    dot(mean, &kernel[i * l..(i + 1) * l])
                } else {
                    dot(mean, &kernel)
                }
            })
            .collect();
        (stats, kernel)
    }

    /// Assigns one document, updating all bookkeeping. `empty_ll` is the
    /// document's log-likelihood under an empty cluster.
    pub(crate) fn step(
        &mut self,
        t: f64,
        doc: &DocumentCounts,
        empty_ll: f64,
        config: &SmcConfig,
    ) -> Result<Step> {
        self.freeze_and_prune(t, config)?;
        let (stats, mut kernel) = self.statistics(t, config);
        let mut scores = log_allocation_prior(&config.prior, &stats)?;
        for (s, c) in scores.iter_mut().zip(&self.active) {
            if *s > f64::NEG_INFINITY {
                *s += doc_log_likelihood(&c.words, doc, config.theta0, config.vocab_size);
            }
        }
        *scores.last_mut().expect("new-cluster entry") += empty_ll;

        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::Numerical("every assignment has zero probability".into()));
        }
        let mut probs: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let evidence = max + total.ln();
        self.last_entropy = -probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>();

        let u: f64 = self.rng.random();
        let mut acc = 0.0;
        let mut choice = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                choice = i;
                break;
            }
        }

        let target = if choice == self.active.len() {
            self.open_cluster(t, config);
            kernel.resize(self.active.len() * config.basis.len(), 0.0);
            self.active.len() - 1
        } else {
            choice
        };

        let l = config.basis.len();
        let univariate = config.univariate();
        let c = &mut self.active[target];
        if let Some(bank) = c.bank.as_mut() {
            if univariate {
                bank.observe(&kernel[target * l..(target + 1) * l]);
            } else {
                bank.observe(&kernel);
            }
            c.window.push(t);
        }
        c.words.add_document(doc);
        c.population += 1;
        c.last_time = t;
        self.assignments.push(c.id);
        self.active_counts.push(self.active.len() as u32);
        Ok(Step { evidence })
    }

    fn open_cluster(&mut self, t: f64, config: &SmcConfig) {
        let id = ClusterId(self.next_id);
        self.next_id += 1;
        let bank = if config.prior.kind.is_temporal() {
            let beta0 = config.beta0;
            let mut bank = CandidateBank::new(config.n_samples, config.basis.len());
            if config.univariate() {
                bank.add_source(id, beta0, &mut self.rng);
            } else {
                for c in &mut self.active {
                    c.bank
                        .as_mut()
                        .expect("temporal clusters carry banks")
                        .add_source(id, beta0, &mut self.rng);
                }
                for c in &self.active {
                    bank.add_source(c.id, beta0, &mut self.rng);
                }
                bank.add_source(id, beta0, &mut self.rng);
                // compensator of the new target over [0, t]
                let basis = &config.basis;
                let l = basis.len();
                let saturated = basis.saturated_mass();
                let mut mass = vec![0.0; (self.active.len() + 1) * l];
                for (i, c) in self.active.iter().enumerate() {
                    c.window.add_cumulative(basis, t, &saturated, &mut mass[i * l..(i + 1) * l]);
                }
                bank.subtract_mass(&mass);
            }
            Some(bank)
        } else {
            None
        };
        self.active.push(ActiveCluster {
            id,
            words: ClusterWordCounts::new(),
            population: 0,
            first_time: t,
            last_time: t,
            window: SourceWindow::new(),
            bank,
        });
    }

    /// Largest absolute gap between a bank's running log-likelihoods and a
    /// batch recomputation over `times`, for every bank that has not frozen
    /// any source yet. `times` must hold every processed event time.
    pub fn audit_banks(&self, times: &[f64], config: &SmcConfig) -> Result<f64> {
        if times.len() != self.assignments.len() {
            return Err(Error::input("one time per processed event is required"));
        }
        let Some(now) = self.now else {
            return Ok(0.0);
        };
        let mut history = EventHistory::new();
        for (&t, &c) in times.iter().zip(&self.assignments) {
            history.push(t, c)?;
        }
        let mut ids: Vec<ClusterId> = self.assignments.clone();
        ids.sort_unstable();
        ids.dedup();
        let mut worst = 0.0f64;
        for c in &self.active {
            let Some(bank) = c.bank.as_ref() else { continue };
            if !bank.frozen().is_empty() {
                continue;
            }
            let target = ids.binary_search(&c.id).expect("assigned cluster");
            for s in 0..bank.n_samples() {
                let mut tensor = InfluenceTensor::zeros(ids.clone(), config.basis.len());
                for (slot, src) in bank.sources().iter().enumerate() {
                    let si = ids.binary_search(src).expect("assigned cluster");
                    tensor.set_row(target, si, bank.candidate_row(s, slot))?;
                }
                let batch = target_log_likelihood(c.id, &tensor, &config.basis, &history, now)?;
                worst = worst.max((batch - bank.loglik()[s]).abs());
            }
        }
        Ok(worst)
    }

    /// Influence tensor over every cluster this particle ever opened:
    /// posterior means for active targets, retirement rows otherwise.
    pub fn influence_tensor(&self, config: &SmcConfig) -> Result<InfluenceTensor> {
        let l = config.basis.len();
        let mut ids: Vec<ClusterId> = self
            .active
            .iter()
            .map(|c| c.id)
            .chain(self.retired.iter().map(|c| c.id))
            .collect();
        ids.sort_unstable();
        let mut tensor = InfluenceTensor::zeros(ids.clone(), l);
        let idx = |id: &ClusterId| ids.binary_search(id).expect("known cluster");
        for r in &self.retired {
            for (src, row) in &r.rows {
                tensor.set_row(idx(&r.id), idx(src), row)?;
            }
        }
        for c in &self.active {
            let Some(bank) = c.bank.as_ref() else { continue };
            for (src, row) in bank.frozen() {
                tensor.set_row(idx(&c.id), idx(src), row)?;
            }
            let mean = bank.posterior_mean();
            for (slot, src) in bank.sources().iter().enumerate() {
                tensor.set_row(idx(&c.id), idx(src), &mean[slot * l..(slot + 1) * l])?;
            }
        }
        Ok(tensor)
    }

    /// Word counts of a cluster, active or retired.
    pub fn words_of(&self, id: ClusterId) -> Option<&ClusterWordCounts> {
        self.index_of(id)
            .map(|i| &self.active[i].words)
            .or_else(|| self.retired.iter().find(|c| c.id == id).map(|c| &c.words))
    }
}
