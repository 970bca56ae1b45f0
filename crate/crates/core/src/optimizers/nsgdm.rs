use serde::{Deserialize, Serialize};

use super::{Optimizer, Step};
use crate::error::{Error, Result};
use crate::vector::Vector;

pub const AGNOSTIC_ETA: f64 = 1.0 / 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NsgdmMode {
    /// `η = 1/7`
    #[default]
    Agnostic,
    /// `η = 1/(12 L1)`
    Informed,
    Custom,
}

/// Schedules `β_t = 1 - t^{-1/2}` and `η_t = η t^{-3/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsgdmConfig {
    pub eta: f64,
}

impl NsgdmConfig {
    pub fn agnostic() -> Self {
        NsgdmConfig { eta: AGNOSTIC_ETA }
    }

    pub fn informed(l1: f64) -> Result<Self> {
        if !(l1 > 0.0 && l1.is_finite()) {
            return Err(Error::domain(format!("informed stepsize needs L1 > 0, got {l1}")));
        }
        Ok(NsgdmConfig { eta: 1.0 / (12.0 * l1) })
    }

    pub fn custom(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("eta must be > 0, got {eta}")));
        }
        Ok(NsgdmConfig { eta })
    }

    pub fn beta(t: usize) -> f64 {
        1.0 - (t as f64).powf(-0.5)
    }

    pub fn eta_t(&self, t: usize) -> f64 {
        self.eta * (t as f64).powf(-0.75)
    }
}

pub struct Nsgdm {
    cfg: NsgdmConfig,
    m: Option<Vector>,
    zero_steps: Vec<usize>,
}

impl Nsgdm {
    pub fn new(cfg: NsgdmConfig) -> Self {
        Nsgdm { cfg, m: None, zero_steps: Vec::new() }
    }

    pub fn config(&self) -> NsgdmConfig {
        self.cfg
    }

    /// Iterations at which the momentum vanished and no step was taken.
    pub fn zero_steps(&self) -> &[usize] {
        &self.zero_steps
    }
}

impl Optimizer for Nsgdm {
    fn nominal_eta(&self, t: usize) -> f64 {
        self.cfg.eta_t(t)
    }

    fn step(&mut self, t: usize, x: &Vector, g: &Vector) -> Result<Step> {
        let beta = NsgdmConfig::beta(t);
        let m = match &self.m {
            Some(prev) => prev.lincomb(beta, 1.0 - beta, g)?,
            None => g.scaled(1.0 - beta)?,
        };
        let eta = self.cfg.eta_t(t);
        let x_next = if m.is_zero() {
            self.zero_steps.push(t);
            x.clone()
        } else {
            x.axpy(-eta / m.norm(), &m)?
        };
        self.m = Some(m.clone());
        Ok(Step { x_next, eta, momentum: Some(m) })
    }
}
