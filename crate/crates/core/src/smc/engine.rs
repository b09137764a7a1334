use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::SmcConfig;
use super::particle::{Particle, Step};
use crate::error::{Error, Result};
use crate::hawkes::ClusterId;
use crate::text::{doc_log_likelihood, ClusterWordCounts, DocumentCounts};

/// What happened to one document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventOutcome {
    pub index: usize,
    /// Cluster chosen by the highest-weight particle.
    pub cluster: ClusterId,
    /// Entropy (nats) of that particle's assignment posterior.
    pub entropy: f64,
    pub active_clusters: usize,
    pub resampled: bool,
}

/// Streaming clusterer: a weighted particle set updated one document at a
/// time.
#[derive(Debug, Clone)]
pub struct Smc {
    config: SmcConfig,
    particles: Vec<Particle>,
    log_weights: Vec<f64>,
    rng: ChaCha8Rng,
    times: Vec<f64>,
}

impl Smc {
    pub fn new(config: SmcConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let n = config.n_particles;
        let particles = (0..n).map(|_| Particle::new(rng.random())).collect();
        Ok(Self {
            log_weights: vec![-(n as f64).ln(); n],
            particles,
            rng,
            times: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &SmcConfig {
        &self.config
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    /// Normalised particle weights.
    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    /// Times of every processed event.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_events(&self) -> usize {
        self.times.len()
    }

    /// Index of the highest-weight particle (lowest index on ties).
    pub fn best_particle(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.log_weights.iter().enumerate() {
            if w > self.log_weights[best] {
                best = i;
            }
        }
        best
    }

    /// Assigns a document observed at `time` in every particle, reweights
    /// the particles by how well each explained it, and resamples.
    pub fn process(&mut self, time: f64, doc: &DocumentCounts) -> Result<EventOutcome> {
        if !time.is_finite() {
            return Err(Error::input("event time must be finite"));
        }
        if let Some(&last) = self.times.last() {
            if time < last {
                return Err(Error::input(format!("event at {time} precedes {last}")));
            }
        }
        if doc.max_token() as usize >= self.config.vocab_size {
            return Err(Error::input(format!(
                "token id {} outside a vocabulary of {}",
                doc.max_token(),
                self.config.vocab_size
            )));
        }
        let empty_ll = doc_log_likelihood(
            &ClusterWordCounts::new(),
            doc,
            self.config.theta0,
            self.config.vocab_size,
        );
        let config = &self.config;
        let steps: Vec<Step> = self
            .particles
            .par_iter_mut()
            .map(|p| p.step(time, doc, empty_ll, config))
            .collect::<Result<_>>()?;
        self.times.push(time);

        for (w, s) in self.log_weights.iter_mut().zip(&steps) {
            *w += s.evidence;
        }
        normalise_log(&mut self.log_weights);
        let resampled = self.resample();

        let best = self.best_particle();
        let p = &self.particles[best];
        Ok(EventOutcome {
            index: self.times.len() - 1,
            cluster: *p.assignments().last().expect("just assigned"),
            entropy: p.last_entropy(),
            active_clusters: p.active().len(),
            resampled,
        })
    }

    /// Replaces particles whose weight is below the threshold fraction of
    /// the maximum by copies of particles drawn in proportion to weight.
    fn resample(&mut self) -> bool {
        let weights = self.weights();
        let max = weights.iter().copied().fold(0.0, f64::max);
        let threshold = self.config.omega_threshold() * max;
        let low: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] < threshold).collect();
        if low.is_empty() {
            return false;
        }
        let picker = WeightedIndex::new(&weights).expect("weights are normalised");
        let copies: Vec<(usize, Particle)> = low
            .iter()
            .map(|&i| {
                let parent = picker.sample(&mut self.rng);
                let mut child = self.particles[parent].clone();
                child.reseed(self.rng.random());
                (i, child)
            })
            .collect();
        for (i, child) in copies {
            self.particles[i] = child;
        }
        let n = self.particles.len() as f64;
        self.log_weights.iter_mut().for_each(|w| *w = -n.ln());
        true
    }

    /// Brings every particle's candidate likelihoods up to `now` and
    /// retires clusters silent for longer than the horizon.
    pub fn freeze_and_prune(&mut self, now: f64) -> Result<()> {
        let config = &self.config;
        self.particles
            .par_iter_mut()
            .try_for_each(|p| p.freeze_and_prune(now, config))
    }

    /// See [`Particle::audit_banks`]; the worst gap over all particles.
    pub fn audit_banks(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in &self.particles {
            worst = worst.max(p.audit_banks(&self.times, &self.config)?);
        }
        Ok(worst)
    }
}

fn normalise_log(w: &mut [f64]) {
    let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = w.iter().map(|x| (x - max).exp()).sum();
    let log_total = max + total.ln();
    w.iter_mut().for_each(|x| *x -= log_total);
}
