use crate::error::{Error, Result};
use crate::eval::ExperimentGrid;
use crate::io::TimeUnit;
use crate::kernel::KernelBasis;
use crate::prior::PriorKind;
use crate::smc::SmcConfig;
use crate::synth::GenerationSpec;

use super::Params;

pub const GRID_PRESETS: [&str; 3] = ["fig2-desk", "fig3-lambda0", "fig3-words"];

const GENERATE_KEYS: &[&str] = &[
    "k",
    "vocab_size",
    "n_words",
    "n_events",
    "textual_overlap",
    "temporal_overlap",
    "immigrant_rate",
    "univariate",
    "kernel_means",
    "kernel_sigmas",
    "seed",
];

const FIT_KEYS: &[&str] = &[
    "preset",
    "prior",
    "r",
    "lambda0",
    "alpha_dp",
    "n_particles",
    "n_samples",
    "omega_thres",
    "beta0",
    "theta0",
    "kernel_means",
    "kernel_sigmas",
    "mask_cross",
    "ts_unit",
    "seed",
];

/// Starting point for `fit` settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitPreset {
    /// Synthetic benchmarks: 3-bump basis at 3, 7 and 11 h.
    #[default]
    Synthetic,
    /// News headlines: 5 bumps from 0 to 8 h, 8 particles, 100000 samples,
    /// λ0 = 0.001, timestamps in seconds.
    News,
}

impl FitPreset {
    pub fn time_unit(self) -> TimeUnit {
        match self {
            FitPreset::Synthetic => TimeUnit::Hours,
            FitPreset::News => TimeUnit::Seconds,
        }
    }

    pub fn config(self, vocab_size: usize) -> SmcConfig {
        let mut c = SmcConfig::new(vocab_size);
        if self == FitPreset::News {
            c.basis = KernelBasis::news();
            c.n_particles = 8;
            c.n_samples = 100_000;
            c.prior.lambda0 = 0.001;
            c.theta0 = 0.01;
            c.beta0 = 2.0;
        }
        c
    }
}

impl std::str::FromStr for FitPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synthetic" => Ok(FitPreset::Synthetic),
            "news" | "reddit" => Ok(FitPreset::News),
            other => Err(Error::input(format!("unknown preset '{other}' (synthetic or news)"))),
        }
    }
}

fn basis(p: &Params, default: KernelBasis) -> Result<KernelBasis> {
    let means = p.get_list::<f64>("kernel_means")?;
    let sigmas = p.get_list::<f64>("kernel_sigmas")?;
    match (means, sigmas) {
        (None, None) => Ok(default),
        (m, s) => KernelBasis::new(
            m.unwrap_or_else(|| default.means().to_vec()),
            s.unwrap_or_else(|| default.sigmas().to_vec()),
        ),
    }
}

pub fn generation_spec(p: &Params) -> Result<GenerationSpec> {
    p.check_keys(GENERATE_KEYS)?;
    let d = GenerationSpec::default();
    let spec = GenerationSpec {
        n_clusters: p.get("k")?.unwrap_or(d.n_clusters),
        vocab_size: p.get("vocab_size")?.unwrap_or(d.vocab_size),
        n_words: p.get("n_words")?.unwrap_or(d.n_words),
        n_events: p.get("n_events")?.unwrap_or(d.n_events),
        textual_overlap: p.get("textual_overlap")?.unwrap_or(d.textual_overlap),
        temporal_overlap: p.get("temporal_overlap")?.unwrap_or(d.temporal_overlap),
        immigrant_rate: p.get("immigrant_rate")?.unwrap_or(d.immigrant_rate),
        univariate: p.get("univariate")?.unwrap_or(d.univariate),
        seed: p.get("seed")?.unwrap_or(d.seed),
        basis: basis(p, d.basis)?,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn fit_config(p: &Params, vocab_size: usize) -> Result<SmcConfig> {
    p.check_keys(FIT_KEYS)?;
    let preset: FitPreset = p.get("preset")?.unwrap_or_default();
    let mut c = preset.config(vocab_size);
    if let Some(kind) = p.get::<PriorKind>("prior")? {
        c.prior.kind = kind;
    }
    c.prior.r = p.get("r")?.unwrap_or(c.prior.r);
    c.prior.lambda0 = p.get("lambda0")?.unwrap_or(c.prior.lambda0);
    c.prior.alpha_dp = p.get("alpha_dp")?.unwrap_or(c.prior.alpha_dp);
    c.n_particles = p.get("n_particles")?.unwrap_or(c.n_particles);
    c.n_samples = p.get("n_samples")?.unwrap_or(c.n_samples);
    c.omega_thres = p.get("omega_thres")?.or(c.omega_thres);
    c.beta0 = p.get("beta0")?.unwrap_or(c.beta0);
    c.theta0 = p.get("theta0")?.unwrap_or(c.theta0);
    c.mask_cross = p.get("mask_cross")?.unwrap_or(c.mask_cross);
    c.seed = p.get("seed")?.unwrap_or(c.seed);
    c.basis = basis(p, c.basis)?;
    c.validate()?;
    Ok(c)
}

/// Desk-scale versions of the published benchmark grids: 2000 events and
/// 20 replications per cell.
pub fn grid_preset(name: &str) -> Result<ExperimentGrid> {
    let base = ExperimentGrid {
        n_events: 2000,
        replications: 20,
        ..ExperimentGrid::default()
    };
    match name {
        "fig2-desk" => Ok(ExperimentGrid {
            priors: PriorKind::ALL.to_vec(),
            textual_overlap: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            ..base
        }),
        "fig3-lambda0" => Ok(ExperimentGrid {
            lambda0: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            textual_overlap: vec![0.2],
            ..base
        }),
        "fig3-words" => Ok(ExperimentGrid {
            n_words: vec![5, 10, 20, 30],
            textual_overlap: vec![0.2],
            ..base
        }),
        other => Err(Error::input(format!(
            "unknown grid preset '{other}' (one of {})",
            GRID_PRESETS.join(", ")
        ))),
    }
}
