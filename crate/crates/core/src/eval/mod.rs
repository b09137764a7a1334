//! Clustering metrics, goodness-of-fit statistics and experiment grids.

mod grid;
mod metrics;
mod stats;
pub mod svg;

pub use grid::{fit_and_score, run_grid, ExperimentGrid, GridAggregate, GridResult, GridRow, GridTiming};
pub use metrics::{histogram_overlap, mean_and_stderr, nmi, overlap};
pub use stats::{ks_exponential, ks_p_value, ks_statistic};
