pub mod cli;
pub mod error;
pub mod eval;
pub mod hawkes;
pub mod io;
pub mod kernel;
pub mod prior;
pub mod smc;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
