//! Multivariate Hawkes processes over a Gaussian RBF basis: influence
//! tensors, intensities, log-likelihoods, spectral analysis and
//! simulation.

mod history;
mod likelihood;
mod simulate;
pub mod spectral;
mod tensor;

pub use history::{separate_ties, Event, EventHistory, SourceWindow, TIE_SHIFT};
pub use likelihood::{
    floored_ln, intensity, log_likelihood, target_log_likelihood, IncrementalLoglik,
    INTENSITY_FLOOR,
};
pub(crate) use likelihood::dot;
pub use simulate::{rescaled_gaps, simulate, SimulationConfig};
pub use tensor::{ClusterId, InfluenceTensor, TensorRecord};
