//! Optimization under relaxed (L0,L1)-smoothness: normalized momentum
//! methods, backtracking gradient descent, baselines, a hard lower-bound
//! instance, and numerical checks for the inequalities behind them.

pub mod bounds;
pub mod config;
pub mod error;
pub mod logspace;
pub mod optimizers;
pub mod oracle;
pub mod rng;
pub mod smoothness;
pub mod testfns;
pub mod trace;
pub mod vector;

pub use config::{ObjectiveSpec, OptimizerSpec, RunConfig};
pub use error::{Error, Result};
pub use trace::{RunTrace, StepRecord};
pub use vector::Vector;
