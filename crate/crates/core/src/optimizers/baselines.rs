use super::{Optimizer, Step};
use crate::error::{Error, Result};
use crate::vector::Vector;

pub const DEFAULT_CLIP: f64 = 0.25;
pub const DEFAULT_B0: f64 = 1e-6;

/// `x_{t+1} = x_t - η min(1, τ/‖g‖) g`
pub struct ClippedSgd {
    eta: f64,
    tau: f64,
}

impl ClippedSgd {
    pub fn new(eta: f64, tau: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("eta must be > 0, got {eta}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain(format!("clip threshold must be > 0, got {tau}")));
        }
        Ok(ClippedSgd { eta, tau })
    }
}

impl Optimizer for ClippedSgd {
    fn nominal_eta(&self, _t: usize) -> f64 {
        self.eta
    }

    fn step(&mut self, _t: usize, x: &Vector, g: &Vector) -> Result<Step> {
        let n = g.norm();
        let scale = if n > self.tau { self.tau / n } else { 1.0 };
        Ok(Step { x_next: x.axpy(-self.eta * scale, g)?, eta: self.eta, momentum: None })
    }
}

/// `b_t² = b_{t-1}² + ‖g_t‖²`, `x_{t+1} = x_t - (η/b_t) g_t`. The recorded
/// stepsize is `η/b_t`.
pub struct AdagradNorm {
    eta: f64,
    b2: f64,
}

impl AdagradNorm {
    pub fn new(eta: f64, b0: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("eta must be > 0, got {eta}")));
        }
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::domain(format!("b0 must be > 0, got {b0}")));
        }
        Ok(AdagradNorm { eta, b2: b0 * b0 })
    }

    pub fn b(&self) -> f64 {
        self.b2.sqrt()
    }
}

impl Optimizer for AdagradNorm {
    fn nominal_eta(&self, _t: usize) -> f64 {
        self.eta / self.b()
    }

    fn step(&mut self, _t: usize, x: &Vector, g: &Vector) -> Result<Step> {
        self.b2 += g.norm().powi(2);
        let eta = self.eta / self.b();
        Ok(Step { x_next: x.axpy(-eta, g)?, eta, momentum: None })
    }
}
