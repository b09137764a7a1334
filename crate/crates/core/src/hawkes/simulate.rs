//! Ogata thinning for the multivariate Hawkes process with immigrants
//!
//! `λ_c(t) = μ_c + Σ_{t_j < t} α[c][c_j] · κ(t − t_j)`.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::history::{Event, EventHistory};
use super::likelihood::dot;
use super::tensor::InfluenceTensor;
use crate::error::{Error, Result};
use crate::kernel::KernelBasis;

/// Tolerance on the stability precondition `ρ(B) <= 1`.
const RADIUS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    /// Exogenous rate of each cluster, aligned with the tensor's ids.
    pub immigrant_rates: Vec<f64>,
    pub max_events: usize,
    /// Optional end of the observation window.
    pub max_time: Option<f64>,
    pub seed: u64,
}

/// Simulates events until `max_events` or `max_time` is reached.
pub fn simulate(
    tensor: &InfluenceTensor,
    basis: &KernelBasis,
    config: &SimulationConfig,
) -> Result<EventHistory> {
    let k = tensor.n_clusters();
    if config.immigrant_rates.len() != k {
        return Err(Error::input(format!(
            "{} immigrant rates for {k} clusters",
            config.immigrant_rates.len()
        )));
    }
    if config
        .immigrant_rates
        .iter()
        .any(|r| !(r.is_finite() && *r >= 0.0))
    {
        return Err(Error::input("immigrant rates must be finite and non-negative"));
    }
    let base: f64 = config.immigrant_rates.iter().sum();
    if base <= 0.0 {
        return Err(Error::input(
            "all immigrant rates are zero; a pure-triggering process never starts",
        ));
    }
    if config.max_events == 0 {
        return Err(Error::input("max_events must be at least 1"));
    }
    if tensor.n_basis() != basis.len() {
        return Err(Error::input("tensor and basis disagree on the basis size"));
    }
    let radius = tensor.spectral_radius();
    if radius > 1.0 + RADIUS_SLACK {
        return Err(Error::input(format!(
            "spectral radius {radius} exceeds 1; the process is explosive"
        )));
    }

    let horizon = basis.horizon();
    let l = basis.len();
    // Upper bound on the intensity contribution of one event of each source.
    let source_bound: Vec<f64> = (0..k)
        .map(|s| (0..k).map(|c| dot(tensor.row(c, s), basis.peaks())).sum())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut history = EventHistory::new();
    let mut window: VecDeque<(f64, usize)> = VecDeque::new();
    let mut rates = vec![0.0; k];
    let mut kv = vec![0.0; l];
    let mut t = 0.0f64;

    loop {
        while let Some(&(tj, _)) = window.front() {
            if t - tj > horizon {
                window.pop_front();
            } else {
                break;
            }
        }
        let bound = base + window.iter().map(|&(_, s)| source_bound[s]).sum::<f64>();
        let wait = Exp::new(bound)
            .map_err(|e| Error::Numerical(format!("bad thinning bound {bound}: {e}")))?
            .sample(&mut rng);
        t += wait;
        if let Some(end) = config.max_time {
            if t > end {
                break;
            }
        }

        rates.copy_from_slice(&config.immigrant_rates);
        for &(tj, s) in &window {
            if t - tj > horizon {
                continue;
            }
            basis.values_into(t - tj, &mut kv);
            for (c, r) in rates.iter_mut().enumerate() {
                *r += dot(tensor.row(c, s), &kv);
            }
        }
        let total: f64 = rates.iter().sum();
        debug_assert!(total <= bound * (1.0 + 1e-12));
        let u = rng.random::<f64>() * bound;
        if u >= total {
            continue;
        }
        let mut acc = 0.0;
        let mut chosen = k - 1;
        for (c, r) in rates.iter().enumerate() {
            acc += r;
            if u < acc {
                chosen = c;
                break;
            }
        }
        history.push(t, tensor.cluster_ids()[chosen])?;
        window.push_back((t, chosen));
        if history.len() >= config.max_events {
            break;
        }
    }
    Ok(history)
}

/// Time-rescaled inter-event gaps: for each cluster, the compensator
/// (immigrants included) accrued between consecutive events of that
/// cluster. Under the true model these are i.i.d. Exp(1).
pub fn rescaled_gaps(
    tensor: &InfluenceTensor,
    basis: &KernelBasis,
    immigrant_rates: &[f64],
    history: &EventHistory,
) -> Result<Vec<f64>> {
    let k = tensor.n_clusters();
    let l = basis.len();
    let events: Vec<(f64, usize)> = history
        .events()
        .iter()
        .map(|e: &Event| Ok((e.time, tensor.index_of(e.cluster)?)))
        .collect::<Result<_>>()?;
    let mut gaps = Vec::new();
    let mut mass = vec![0.0; l];
    for c in 0..k {
        let mut prev: Option<f64> = None;
        for &(t, cls) in &events {
            if cls != c {
                continue;
            }
            if let Some(p) = prev {
                let mut lambda = immigrant_rates[c] * (t - p);
                let start = events.partition_point(|&(tj, _)| p - tj > basis.horizon());
                for &(tj, s) in &events[start..] {
                    if tj >= t {
                        break;
                    }
                    let from = (p - tj).max(0.0);
                    basis.integral_into(from, t - tj, &mut mass);
                    lambda += dot(tensor.row(c, s), &mass);
                }
                gaps.push(lambda);
            }
            prev = Some(t);
        }
    }
    Ok(gaps)
}
