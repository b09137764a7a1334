use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hawkes::{ClusterId, InfluenceTensor, TensorRecord};
use crate::kernel::KernelBasis;
use crate::prior::PriorKind;
use crate::smc::{Particle, Smc};

/// Lags (hours) at which the interaction network reports intensities.
pub const NETWORK_LAGS: [f64; 5] = [0.0, 2.0, 4.0, 6.0, 8.0];
const TOP_WORDS: usize = 10;

/// Summary of a finished fit, scored on the highest-weight particle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n_events: usize,
    pub vocab_size: usize,
    pub prior: PriorKind,
    pub seed: u64,
    pub best_particle: usize,
    pub particle_weights: Vec<f64>,
    pub clusters_opened: u64,
    pub active_at_end: usize,
    pub spectral_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    /// Active clusters after each event.
    pub active_timeline: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub index: usize,
    pub ts: f64,
    pub cluster: u64,
    pub active_clusters: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub id: u64,
    pub population: u64,
    pub first_time: f64,
    pub last_time: f64,
    pub active: bool,
    /// `(token, count)` pairs, most frequent first.
    pub top_words: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkEdge {
    pub source: u64,
    pub target: u64,
    /// Total influence `Σ_l α[target][source][l]`.
    pub weight: f64,
    /// Triggering intensity at each of [`NETWORK_LAGS`].
    pub lag_intensity: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub lags: Vec<f64>,
    pub nodes: Vec<ClusterSummary>,
    pub edges: Vec<NetworkEdge>,
}

/// Everything `fit` writes, built from the best particle.
#[derive(Debug, Clone)]
pub struct FitArtifacts {
    pub report: FitReport,
    pub assignments: Vec<AssignmentRecord>,
    pub tensor: TensorRecord,
    pub network: Network,
}

impl FitArtifacts {
    pub fn from_smc(smc: &Smc, vocab_size: usize) -> Result<Self> {
        let config = smc.config();
        let best = smc.best_particle();
        let p = &smc.particles()[best];
        let tensor = p.influence_tensor(config)?;
        let assignments = smc
            .times()
            .iter()
            .zip(p.assignments())
            .zip(p.active_counts())
            .enumerate()
            .map(|(index, ((&ts, c), &active))| AssignmentRecord {
                index,
                ts,
                cluster: c.0,
                active_clusters: active,
            })
            .collect();
        let nodes = cluster_summaries(p);
        let edges = network_edges(&tensor, &config.basis)?;
        Ok(Self {
            report: FitReport {
                n_events: smc.n_events(),
                vocab_size,
                prior: config.prior.kind,
                seed: config.seed,
                best_particle: best,
                particle_weights: smc.weights(),
                clusters_opened: p.clusters_opened(),
                active_at_end: p.active().len(),
                spectral_radius: tensor.spectral_radius(),
                nmi: None,
                active_timeline: p.active_counts().to_vec(),
            },
            assignments,
            tensor: tensor.to_record(&config.basis),
            network: Network {
                lags: NETWORK_LAGS.to_vec(),
                nodes,
                edges,
            },
        })
    }
}

fn cluster_summaries(p: &Particle) -> Vec<ClusterSummary> {
    let mut out: Vec<ClusterSummary> = p
        .active()
        .iter()
        .map(|c| ClusterSummary {
            id: c.id.0,
            population: c.population,
            first_time: c.first_time,
            last_time: c.last_time,
            active: true,
            top_words: c.words.top_tokens(TOP_WORDS),
        })
        .chain(p.retired().iter().map(|c| ClusterSummary {
            id: c.id.0,
            population: c.population,
            first_time: c.first_time,
            last_time: c.last_time,
            active: false,
            top_words: c.words.top_tokens(TOP_WORDS),
        }))
        .collect();
    out.sort_by_key(|c| c.id);
    out
}

fn network_edges(tensor: &InfluenceTensor, basis: &KernelBasis) -> Result<Vec<NetworkEdge>> {
    let kernels: Vec<Vec<f64>> = NETWORK_LAGS
        .iter()
        .map(|&lag| basis.kernel_value(lag))
        .collect::<Result<_>>()?;
    let ids: &[ClusterId] = tensor.cluster_ids();
    let mut edges = Vec::new();
    for (ti, target) in ids.iter().enumerate() {
        for (si, source) in ids.iter().enumerate() {
            let row = tensor.row(ti, si);
            let weight: f64 = row.iter().sum();
            if weight <= 0.0 {
                continue;
            }
            let lag_intensity = kernels
                .iter()
                .map(|k| row.iter().zip(k).map(|(a, b)| a * b).sum())
                .collect();
            edges.push(NetworkEdge {
                source: source.0,
                target: target.0,
                weight,
                lag_intensity,
            });
        }
    }
    Ok(edges)
}
