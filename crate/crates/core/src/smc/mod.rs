//! Sequential Monte Carlo clustering of a document stream.

mod bank;
mod config;
mod engine;
mod particle;

pub use bank::CandidateBank;
pub use config::SmcConfig;
pub use engine::{EventOutcome, Smc};
pub use particle::{ActiveCluster, Particle, RetiredCluster};
