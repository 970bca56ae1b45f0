use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testfns::Objective;
use crate::vector::Vector;

pub const TRIAL_CAP: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BacktrackConfig {
    pub beta: f64,
    pub gamma: f64,
    /// Initial stepsize; the method itself uses 1.
    pub eta0: f64,
}

impl BacktrackConfig {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        Self::with_eta0(beta, gamma, 1.0)
    }

    pub fn with_eta0(beta: f64, gamma: f64, eta0: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("beta must lie in (0,1), got {beta}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(format!("gamma must lie in (0,1), got {gamma}")));
        }
        if !(eta0 > 0.0 && eta0.is_finite()) {
            return Err(Error::domain(format!("eta0 must be > 0, got {eta0}")));
        }
        Ok(BacktrackConfig { beta, gamma, eta0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktrackStep {
    /// `None` when the gradient vanished.
    pub x_next: Option<Vector>,
    pub eta: f64,
    pub k: u32,
    pub trials: u32,
    pub grad: Vector,
    pub f_x: f64,
}

/// Gradient descent whose stepsize `η0 β^k` takes the smallest `k` no
/// smaller than the previous one that passes the Armijo test.
pub struct Backtracking {
    cfg: BacktrackConfig,
    k_prev: u32,
}

impl Backtracking {
    pub fn new(cfg: BacktrackConfig) -> Self {
        Backtracking { cfg, k_prev: 0 }
    }

    pub fn current_eta(&self) -> f64 {
        self.cfg.eta0 * self.cfg.beta.powi(self.k_prev as i32)
    }

    pub fn step(&mut self, t: usize, f: &Objective, x: &Vector) -> Result<BacktrackStep> {
        let grad = f.gradient(x)?;
        let f_x = f.value(x)?;
        let g2 = grad.norm().powi(2);
        if g2 == 0.0 {
            return Ok(BacktrackStep { x_next: None, eta: self.current_eta(), k: self.k_prev, trials: 0, grad, f_x });
        }
        let mut k = self.k_prev;
        let mut trials = 0;
        loop {
            if k > TRIAL_CAP {
                return Err(Error::Stagnation { t, cap: TRIAL_CAP });
            }
            let eta = self.cfg.eta0 * self.cfg.beta.powi(k as i32);
            trials += 1;
            let y = x.axpy(-eta, &grad)?;
            // An overflowing trial point simply fails the test.
            let accept = match f.value(&y) {
                Ok(fy) => fy <= f_x - eta * self.cfg.gamma * g2,
                Err(Error::Evaluation { .. }) => false,
                Err(e) => return Err(e),
            };
            if accept {
                self.k_prev = k;
                return Ok(BacktrackStep { x_next: Some(y), eta, k, trials, grad, f_x });
            }
            k += 1;
        }
    }
}
