//! Labelled synthetic streams: a critical multivariate Hawkes process with
//! controlled overlap between triggering functions, and cluster
//! vocabularies with controlled overlap between word distributions.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{histogram_overlap, overlap};
use crate::hawkes::{simulate, ClusterId, InfluenceTensor, SimulationConfig, TensorRecord};
use crate::io::{Dataset, DatasetHeader, TimedDocument};
use crate::kernel::KernelBasis;

/// Accepted distance between achieved and requested temporal overlap.
pub const TEMPORAL_TOLERANCE: f64 = 0.05;
/// Accepted distance between achieved and requested textual overlap.
pub const TEXTUAL_TOLERANCE: f64 = 0.01;
pub const MAX_TENSOR_ATTEMPTS: usize = 10_000;
const MAX_DATASET_RETRIES: usize = 100;
/// Grid step (hours) for overlaps between triggering functions.
const OVERLAP_STEP: f64 = 0.01;
/// Range of the exponent that sparsifies or flattens tensor draws.
const SHAPE_RANGE: f64 = 50.0;
/// Largest accepted expected offspring count of one cluster in another.
/// Nearly triangular draws can otherwise reach spectral radius 1 with a
/// single enormous cross-influence, and one class swamps the stream.
pub const MAX_OFFSPRING: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSpec {
    #[serde(rename = "k")]
    pub n_clusters: usize,
    pub vocab_size: usize,
    pub n_words: usize,
    pub n_events: usize,
    pub textual_overlap: f64,
    pub temporal_overlap: f64,
    #[serde(flatten)]
    pub basis: KernelBasis,
    /// Exogenous events per hour, per cluster.
    pub immigrant_rate: f64,
    /// Only self-excitation (diagonal influence) when set.
    #[serde(default)]
    pub univariate: bool,
    pub seed: u64,
}

impl Default for GenerationSpec {
    fn default() -> Self {
        Self {
            n_clusters: 2,
            vocab_size: 1000,
            n_words: 20,
            n_events: 5000,
            textual_overlap: 0.0,
            temporal_overlap: 0.0,
            basis: KernelBasis::synthetic(),
            immigrant_rate: 1.0,
            univariate: false,
            seed: 0,
        }
    }
}

impl GenerationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        if self.n_words == 0 || self.n_events == 0 {
            return Err(Error::input("n_words and n_events must be positive"));
        }
        if 2 * self.n_clusters > self.vocab_size {
            return Err(Error::input("vocabulary too small for the cluster count"));
        }
        for (name, v) in [
            ("textual_overlap", self.textual_overlap),
            ("temporal_overlap", self.temporal_overlap),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::input(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.immigrant_rate.is_finite() && self.immigrant_rate > 0.0) {
            return Err(Error::input("immigrant_rate must be positive"));
        }
        Ok(())
    }
}

/// A generated stream with everything needed to score a fit against it.
#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub spec: GenerationSpec,
    pub dataset: Dataset,
    pub tensor: InfluenceTensor,
    pub vocabularies: Vec<Vec<f64>>,
    pub achieved_temporal_overlap: f64,
    /// Overlap of the generating word distributions.
    pub achieved_textual_overlap: f64,
    /// Overlap of the per-cluster token histograms actually emitted.
    pub empirical_textual_overlap: f64,
}

/// Sidecar description of a generated stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: GenerationSpec,
    pub n_events: usize,
    pub label_counts: Vec<usize>,
    pub achieved_temporal_overlap: f64,
    pub achieved_textual_overlap: f64,
    pub empirical_textual_overlap: f64,
    pub spectral_radius: f64,
    pub tensor: TensorRecord,
    pub vocabularies: Vec<Vec<f64>>,
}

impl GeneratedDataset {
    pub fn labels(&self) -> Vec<u64> {
        self.dataset
            .events
            .iter()
            .map(|e| e.label.expect("generated events are labelled"))
            .collect()
    }

    pub fn manifest(&self) -> Manifest {
        let mut label_counts = vec![0; self.spec.n_clusters];
        for l in self.labels() {
            label_counts[l as usize] += 1;
        }
        Manifest {
            spec: self.spec.clone(),
            n_events: self.dataset.events.len(),
            label_counts,
            achieved_temporal_overlap: self.achieved_temporal_overlap,
            achieved_textual_overlap: self.achieved_textual_overlap,
            empirical_textual_overlap: self.empirical_textual_overlap,
            spectral_radius: self.tensor.spectral_radius(),
            tensor: self.tensor.to_record(&self.spec.basis),
            vocabularies: self.vocabularies.clone(),
        }
    }
}

/// Overlap among the `K²` triggering functions `α[c][c'] · κ(t)` on
/// `[0, horizon]`. Zero functions are skipped; fewer than two nonzero
/// functions overlap by 0.
pub fn temporal_overlap(tensor: &InfluenceTensor, basis: &KernelBasis) -> Result<f64> {
    let k = tensor.n_clusters();
    let steps = (basis.horizon() / OVERLAP_STEP).ceil() as usize;
    let kernel: Vec<Vec<f64>> = (0..=steps)
        .map(|i| basis.kernel_value(i as f64 * OVERLAP_STEP))
        .collect::<Result<_>>()?;
    let mut functions = Vec::new();
    for c in 0..k {
        for s in 0..k {
            let row = tensor.row(c, s);
            if row.iter().all(|&a| a == 0.0) {
                continue;
            }
            functions.push(
                kernel
                    .iter()
                    .map(|kv| row.iter().zip(kv).map(|(a, b)| a * b).sum())
                    .collect::<Vec<f64>>(),
            );
        }
    }
    if functions.len() < 2 {
        return Ok(0.0);
    }
    overlap(&functions, OVERLAP_STEP)
}

/// Draws influence tensors with spectral radius 1 until the temporal
/// overlap of one lands within [`TEMPORAL_TOLERANCE`] of `target`.
///
/// Each attempt draws entries `u^γ` with `u` uniform on `[0, 1]` and `γ`
/// log-uniform on `[1/50, 50]`: large exponents give sparse tensors with
/// well-separated triggering functions, small ones give near-constant
/// tensors whose functions coincide, and `γ = 1` is the plain uniform draw.
/// Draws with a branching entry above [`MAX_OFFSPRING`] are rejected.
pub fn generate_tensor(
    k: usize,
    basis: &KernelBasis,
    target: f64,
    univariate: bool,
    seed: u64,
) -> Result<(InfluenceTensor, f64)> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::input("temporal overlap target must lie in [0, 1]"));
    }
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let l = basis.len();
    let ids: Vec<ClusterId> = (0..k as u64).map(ClusterId).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nearest = f64::NAN;
    for _ in 0..MAX_TENSOR_ATTEMPTS {
        let gamma = SHAPE_RANGE.powf(rng.random_range(-1.0..=1.0));
        let mut tensor = InfluenceTensor::zeros(ids.clone(), l);
        for c in 0..k {
            for s in 0..k {
                let row = tensor.row_mut(c, s);
                for a in row.iter_mut() {
                    *a = rng.random::<f64>().powf(gamma);
                }
                if univariate && c != s {
                    row.iter_mut().for_each(|a| *a = 0.0);
                }
            }
        }
        let radius = tensor.spectral_radius();
        if !(radius > 0.0 && radius.is_finite()) {
            continue;
        }
        tensor.scale(1.0 / radius);
        if tensor.branching_matrix().iter().any(|&b| b > MAX_OFFSPRING + 1e-9) {
            continue;
        }
        let o = temporal_overlap(&tensor, basis)?;
        if (o - target).abs() <= TEMPORAL_TOLERANCE {
            return Ok((tensor, o));
        }
        if nearest.is_nan() || (o - target).abs() < (nearest - target).abs() {
            nearest = o;
        }
    }
    Err(Error::Generation(format!(
        "no tensor reached temporal overlap {target} within {MAX_TENSOR_ATTEMPTS} attempts; nearest was {nearest:.3}"
    )))
}

/// Word distributions over `vocab_size` ids: a truncated discrete Gaussian
/// window of `vocab_size / (2K)` ids (standard deviation a quarter of the
/// window), translated by `c · shift` for cluster `c`. The shift is found
/// by bisection so the overlap of the `K` distributions matches `target`.
/// Returns the distributions and their achieved overlap.
pub fn generate_vocabularies(k: usize, vocab_size: usize, target: f64) -> Result<(Vec<Vec<f64>>, f64)> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::input("textual overlap target must lie in [0, 1]"));
    }
    if k == 0 || 2 * k > vocab_size {
        return Err(Error::input("need 1 <= k <= vocab_size / 2"));
    }
    let width = vocab_size as f64 / (2.0 * k as f64);
    let build = |shift: f64| -> Vec<Vec<f64>> {
        (0..k).map(|c| window(vocab_size, width, c as f64 * shift)).collect()
    };
    let measure = |shift: f64| -> f64 {
        if k == 1 {
            1.0
        } else {
            histogram_overlap(&build(shift)).expect("windows have mass")
        }
    };
    if k == 1 || target >= 1.0 {
        return Ok((build(0.0), measure(0.0)));
    }
    // overlap falls from 1 at shift 0 to 0 once windows are disjoint
    let max_shift = (vocab_size as f64 - width) / (k - 1) as f64;
    let (mut lo, mut hi) = (0.0, max_shift.min(width + 1.0));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if measure(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let shift = if (measure(lo) - target).abs() < (measure(hi) - target).abs() {
        lo
    } else {
        hi
    };
    let achieved = measure(shift);
    Ok((build(shift), achieved))
}

fn window(vocab_size: usize, width: f64, offset: f64) -> Vec<f64> {
    let center = offset + 0.5 * width;
    let sigma = 0.25 * width;
    let mut p: Vec<f64> = (0..vocab_size)
        .map(|v| {
            let d = v as f64 + 0.5 - center;
            if d.abs() <= 0.5 * width {
                (-0.5 * (d / sigma).powi(2)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Generates a labelled stream. Retries with fresh simulation seeds (up to
/// 100 times) until every cluster emits at least one event.
pub fn generate_dataset(spec: &GenerationSpec) -> Result<GeneratedDataset> {
    spec.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let (tensor, achieved_temporal) = generate_tensor(
        spec.n_clusters,
        &spec.basis,
        spec.temporal_overlap,
        spec.univariate,
        master.random(),
    )?;
    generate_from_tensor(spec, tensor, achieved_temporal, &mut master)
}

/// Like [`generate_dataset`] but with a caller-supplied influence tensor.
pub fn generate_with_tensor(spec: &GenerationSpec, tensor: InfluenceTensor) -> Result<GeneratedDataset> {
    spec.validate()?;
    if tensor.n_clusters() != spec.n_clusters || tensor.n_basis() != spec.basis.len() {
        return Err(Error::input("tensor shape does not match the spec"));
    }
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let _tensor_seed: u64 = master.random();
    let achieved = temporal_overlap(&tensor, &spec.basis)?;
    generate_from_tensor(spec, tensor, achieved, &mut master)
}

fn generate_from_tensor(
    spec: &GenerationSpec,
    tensor: InfluenceTensor,
    achieved_temporal_overlap: f64,
    master: &mut ChaCha8Rng,
) -> Result<GeneratedDataset> {
    let k = spec.n_clusters;
    let (vocabularies, achieved_textual) =
        generate_vocabularies(k, spec.vocab_size, spec.textual_overlap)?;
    let samplers: Vec<WeightedIndex<f64>> = vocabularies
        .iter()
        .map(|p| WeightedIndex::new(p).map_err(|e| Error::Generation(e.to_string())))
        .collect::<Result<_>>()?;

    let mut history = None;
    for _ in 0..MAX_DATASET_RETRIES {
        let h = simulate(
            &tensor,
            &spec.basis,
            &SimulationConfig {
                immigrant_rates: vec![spec.immigrant_rate; k],
                max_events: spec.n_events,
                max_time: None,
                seed: master.random(),
            },
        )?;
        let mut seen = vec![false; k];
        for e in h.events() {
            seen[e.cluster.0 as usize] = true;
        }
        if seen.iter().all(|&s| s) {
            history = Some(h);
            break;
        }
    }
    let history = history.ok_or_else(|| {
        Error::Generation(format!(
            "some cluster emitted no event in {MAX_DATASET_RETRIES} simulations"
        ))
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(master.random());
    let mut histograms = vec![vec![0.0; spec.vocab_size]; k];
    let events: Vec<TimedDocument> = history
        .events()
        .iter()
        .map(|e| {
            let c = e.cluster.0 as usize;
            let tokens: Vec<u32> = (0..spec.n_words)
                .map(|_| samplers[c].sample(&mut rng) as u32)
                .collect();
            for &v in &tokens {
                histograms[c][v as usize] += 1.0;
            }
            TimedDocument {
                time: e.time,
                label: Some(e.cluster.0),
                tokens,
            }
        })
        .collect();
    let empirical_textual_overlap = if k == 1 {
        1.0
    } else {
        histogram_overlap(&histograms)?
    };

    Ok(GeneratedDataset {
        spec: spec.clone(),
        dataset: Dataset {
            header: DatasetHeader {
                vocab_size: spec.vocab_size,
                n_events: Some(events.len()),
                n_clusters: Some(k),
            },
            events,
        },
        tensor,
        vocabularies,
        achieved_temporal_overlap,
        achieved_textual_overlap: achieved_textual,
        empirical_textual_overlap,
    })
}
