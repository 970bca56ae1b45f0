//! NSGD-M, the general normalized momentum family, backtracking GD and two
//! baselines, plus the run loop.

pub mod backtracking;
pub mod baselines;
pub mod certify;
pub mod gnmm;
pub mod nsgdm;
mod runner;

pub use backtracking::{BacktrackConfig, Backtracking};
pub use baselines::{AdagradNorm, ClippedSgd};
pub use certify::{descent_lemma_check, DescentReport, DescentRow};
pub use gnmm::{Gnmm, GnmmConfig, MomentumRule};
pub use nsgdm::{Nsgdm, NsgdmConfig, NsgdmMode};
pub use runner::{hitting_time, run, run_objective, run_with_report, RunOptions, RunOutput};

use crate::error::Result;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub x_next: Vector,
    pub eta: f64,
    pub momentum: Option<Vector>,
}

/// A method that sees only stochastic gradients.
pub trait Optimizer: Send {
    /// Iteration `t` starts at 1.
    fn step(&mut self, t: usize, x: &Vector, g: &Vector) -> Result<Step>;

    /// Stepsize that `step` would report at `t`, without changing state.
    fn nominal_eta(&self, t: usize) -> f64;
}
