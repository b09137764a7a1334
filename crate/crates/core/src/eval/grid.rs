use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{mean_and_stderr, nmi};
use crate::error::{Error, Result};
use crate::kernel::KernelBasis;
use crate::prior::{PriorConfig, PriorKind};
use crate::smc::{Smc, SmcConfig};
use crate::synth::{generate_dataset, GenerationSpec};

/// Cross product of data axes (overlaps, cluster count, words per
/// document) and model axes (prior, exponent, λ0, particles, samples).
/// Each data cell and replication gets one dataset that every model cell
/// is fitted to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentGrid {
    pub priors: Vec<PriorKind>,
    pub r: Vec<f64>,
    pub lambda0: Vec<f64>,
    pub textual_overlap: Vec<f64>,
    pub temporal_overlap: Vec<f64>,
    pub k: Vec<usize>,
    pub n_words: Vec<usize>,
    pub n_particles: Vec<usize>,
    pub n_samples: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub n_events: usize,
    pub vocab_size: usize,
    pub immigrant_rate: f64,
    /// Generate self-exciting-only data.
    pub univariate_data: bool,
    pub theta0: f64,
    pub beta0: f64,
    pub alpha_dp: f64,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        let data = GenerationSpec::default();
        let smc = SmcConfig::new(data.vocab_size);
        Self {
            priors: vec![PriorKind::Mpdhp],
            r: vec![smc.prior.r],
            lambda0: vec![smc.prior.lambda0],
            textual_overlap: vec![data.textual_overlap],
            temporal_overlap: vec![data.temporal_overlap],
            k: vec![data.n_clusters],
            n_words: vec![data.n_words],
            n_particles: vec![smc.n_particles],
            n_samples: vec![smc.n_samples],
            replications: 20,
            seed: 0,
            n_events: data.n_events,
            vocab_size: data.vocab_size,
            immigrant_rate: data.immigrant_rate,
            univariate_data: false,
            theta0: smc.theta0,
            beta0: smc.beta0,
            alpha_dp: smc.prior.alpha_dp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct DataCell {
    textual_overlap: f64,
    temporal_overlap: f64,
    k: usize,
    n_words: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct ModelCell {
    prior: PriorKind,
    r: f64,
    lambda0: f64,
    n_particles: usize,
    n_samples: usize,
}

/// One fit of one model cell to one replication's dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub cell: usize,
    pub replication: usize,
    pub prior: PriorKind,
    pub r: f64,
    pub lambda0: f64,
    pub textual_overlap: f64,
    pub temporal_overlap: f64,
    pub k: usize,
    pub n_words: usize,
    pub n_particles: usize,
    pub n_samples: usize,
    pub dataset_seed: u64,
    pub achieved_textual_overlap: Option<f64>,
    pub achieved_temporal_overlap: Option<f64>,
    pub nmi: Option<f64>,
    pub clusters_opened: Option<u64>,
    pub error: Option<String>,
}

/// Mean and standard error of NMI over the successful replications of a
/// cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAggregate {
    pub cell: usize,
    pub prior: PriorKind,
    pub r: f64,
    pub lambda0: f64,
    pub textual_overlap: f64,
    pub temporal_overlap: f64,
    pub k: usize,
    pub n_words: usize,
    pub n_particles: usize,
    pub n_samples: usize,
    pub runs: usize,
    pub failures: usize,
    pub mean_nmi: f64,
    pub stderr_nmi: f64,
}

/// Wall time of one row; kept apart from the rows so those stay
/// reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridTiming {
    pub cell: usize,
    pub replication: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub rows: Vec<GridRow>,
    pub aggregates: Vec<GridAggregate>,
    pub timings: Vec<GridTiming>,
}

impl GridResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Writes `runs.csv`, `aggregate.csv` and `timings.csv` into `dir`.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_rows(&dir.join("runs.csv"), &self.rows)?;
        write_rows(&dir.join("aggregate.csv"), &self.aggregates)?;
        write_rows(&dir.join("timings.csv"), &self.timings)?;
        Ok(())
    }

    /// Aggregate rows of one prior, in cell order.
    pub fn series(&self, prior: PriorKind) -> Vec<&GridAggregate> {
        self.aggregates.iter().filter(|a| a.prior == prior).collect()
    }
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::input("replications must be at least 1"));
        }
        let axes = [
            ("priors", self.priors.len()),
            ("r", self.r.len()),
            ("lambda0", self.lambda0.len()),
            ("textual_overlap", self.textual_overlap.len()),
            ("temporal_overlap", self.temporal_overlap.len()),
            ("k", self.k.len()),
            ("n_words", self.n_words.len()),
            ("n_particles", self.n_particles.len()),
            ("n_samples", self.n_samples.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::input(format!("grid axis '{name}' is empty")));
        }
        Ok(())
    }

    fn data_cells(&self) -> Vec<DataCell> {
        let mut out = Vec::new();
        for &textual_overlap in &self.textual_overlap {
            for &temporal_overlap in &self.temporal_overlap {
                for &k in &self.k {
                    for &n_words in &self.n_words {
                        out.push(DataCell {
                            textual_overlap,
                            temporal_overlap,
                            k,
                            n_words,
                        });
                    }
                }
            }
        }
        out
    }

    fn model_cells(&self) -> Vec<ModelCell> {
        let mut out = Vec::new();
        for &prior in &self.priors {
            for &r in &self.r {
                for &lambda0 in &self.lambda0 {
                    for &n_particles in &self.n_particles {
                        for &n_samples in &self.n_samples {
                            out.push(ModelCell {
                                prior,
                                r,
                                lambda0,
                                n_particles,
                                n_samples,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Number of (data cell × model cell) combinations.
    pub fn n_cells(&self) -> usize {
        self.data_cells().len() * self.model_cells().len()
    }
}

/// Seed of replication `rep` of data cell `d`.
fn dataset_seed(base: u64, d: usize, rep: usize) -> u64 {
    // SplitMix64 finaliser over the packed coordinates
    let mut z = base
        .wrapping_add((d as u64) << 32)
        .wrapping_add(rep as u64)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every cell and replication on up to `jobs` threads. Failures are
/// recorded in their rows and do not stop the grid.
pub fn run_grid(grid: &ExperimentGrid, jobs: usize) -> Result<GridResult> {
    grid.validate()?;
    let data_cells = grid.data_cells();
    let model_cells = grid.model_cells();
    let n_models = model_cells.len();
    let tasks: Vec<(usize, usize)> = (0..data_cells.len())
        .flat_map(|d| (0..grid.replications).map(move |rep| (d, rep)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::input(format!("cannot start {jobs} workers: {e}")))?;
    let outputs: Vec<Vec<(GridRow, GridTiming)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(d, rep)| run_task(grid, &data_cells[d], d, rep, &model_cells))
            .collect()
    });

    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (row, timing) in outputs.into_iter().flatten() {
        rows.push(row);
        timings.push(timing);
    }
    rows.sort_by_key(|r| (r.cell, r.replication));
    timings.sort_by_key(|t| (t.cell, t.replication));

    let mut aggregates = Vec::new();
    for (d, dc) in data_cells.iter().enumerate() {
        for (m, mc) in model_cells.iter().enumerate() {
            let cell = d * n_models + m;
            let cell_rows: Vec<&GridRow> = rows.iter().filter(|r| r.cell == cell).collect();
            let values: Vec<f64> = cell_rows.iter().filter_map(|r| r.nmi).collect();
            let (mean_nmi, stderr_nmi) = mean_and_stderr(&values);
            aggregates.push(GridAggregate {
                cell,
                prior: mc.prior,
                r: mc.r,
                lambda0: mc.lambda0,
                textual_overlap: dc.textual_overlap,
                temporal_overlap: dc.temporal_overlap,
                k: dc.k,
                n_words: dc.n_words,
                n_particles: mc.n_particles,
                n_samples: mc.n_samples,
                runs: values.len(),
                failures: cell_rows.len() - values.len(),
                mean_nmi,
                stderr_nmi,
            });
        }
    }
    Ok(GridResult {
        rows,
        aggregates,
        timings,
    })
}

fn run_task(
    grid: &ExperimentGrid,
    dc: &DataCell,
    d: usize,
    rep: usize,
    model_cells: &[ModelCell],
) -> Vec<(GridRow, GridTiming)> {
    let seed = dataset_seed(grid.seed, d, rep);
    let spec = GenerationSpec {
        n_clusters: dc.k,
        vocab_size: grid.vocab_size,
        n_words: dc.n_words,
        n_events: grid.n_events,
        textual_overlap: dc.textual_overlap,
        temporal_overlap: dc.temporal_overlap,
        basis: KernelBasis::synthetic(),
        immigrant_rate: grid.immigrant_rate,
        univariate: grid.univariate_data,
        seed,
    };
    let data = generate_dataset(&spec);
    model_cells
        .iter()
        .enumerate()
        .map(|(m, mc)| {
            let start = Instant::now();
            let cell = d * model_cells.len() + m;
            let mut row = GridRow {
                cell,
                replication: rep,
                prior: mc.prior,
                r: mc.r,
                lambda0: mc.lambda0,
                textual_overlap: dc.textual_overlap,
                temporal_overlap: dc.temporal_overlap,
                k: dc.k,
                n_words: dc.n_words,
                n_particles: mc.n_particles,
                n_samples: mc.n_samples,
                dataset_seed: seed,
                achieved_textual_overlap: None,
                achieved_temporal_overlap: None,
                nmi: None,
                clusters_opened: None,
                error: None,
            };
            let outcome = data.as_ref().map_err(|e| e.to_string()).and_then(|g| {
                row.achieved_textual_overlap = Some(g.empirical_textual_overlap);
                row.achieved_temporal_overlap = Some(g.achieved_temporal_overlap);
                let config = SmcConfig {
                    n_particles: mc.n_particles,
                    n_samples: mc.n_samples,
                    omega_thres: None,
                    beta0: grid.beta0,
                    theta0: grid.theta0,
                    vocab_size: grid.vocab_size,
                    seed,
                    prior: PriorConfig {
                        kind: mc.prior,
                        r: mc.r,
                        lambda0: mc.lambda0,
                        alpha_dp: grid.alpha_dp,
                    },
                    basis: spec.basis.clone(),
                    mask_cross: false,
                };
                fit_and_score(config, g).map_err(|e| e.to_string())
            });
            match outcome {
                Ok((score, opened)) => {
                    row.nmi = Some(score);
                    row.clusters_opened = Some(opened);
                }
                Err(e) => {
                    log::warn!("cell {cell} replication {rep} failed: {e}");
                    row.error = Some(e);
                }
            }
            let timing = GridTiming {
                cell,
                replication: rep,
                seconds: start.elapsed().as_secs_f64(),
            };
            (row, timing)
        })
        .collect()
}

/// Fits a generated dataset and scores the highest-weight particle.
/// Returns the NMI and the number of clusters that particle opened.
pub fn fit_and_score(config: SmcConfig, data: &crate::synth::GeneratedDataset) -> Result<(f64, u64)> {
    let mut smc = Smc::new(config)?;
    for e in &data.dataset.events {
        smc.process(e.time, &e.counts()?)?;
    }
    let best = &smc.particles()[smc.best_particle()];
    let pred: Vec<u64> = best.assignments().iter().map(|c| c.0).collect();
    Ok((nmi(&data.labels(), &pred)?, best.clusters_opened()))
}
