use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::nsgdm::NsgdmConfig;
use super::{Optimizer, Step};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Weights `λ_1..λ_t` (all `>= 0`) for `m_t = Σ λ_i g_i`, given `t`.
pub type WeightFn = Arc<dyn Fn(usize) -> Vec<f64> + Send + Sync>;

/// How `m_t` is picked from the cone spanned by `g_1..g_t`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumRule {
    LastGradient,
    UniformAverage,
    /// The exponential moving average of NSGD-M.
    NsgdmWeights,
    /// `m_t = ρ m_{t-1} + g_t`
    Geometric { rho: f64 },
    #[serde(skip)]
    Custom(WeightFn),
}

impl fmt::Debug for MomentumRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentumRule::LastGradient => write!(f, "LastGradient"),
            MomentumRule::UniformAverage => write!(f, "UniformAverage"),
            MomentumRule::NsgdmWeights => write!(f, "NsgdmWeights"),
            MomentumRule::Geometric { rho } => write!(f, "Geometric {{ rho: {rho} }}"),
            MomentumRule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl MomentumRule {
    /// Closed-form weights of the built-in rules; `None` for custom rules.
    pub fn weights(&self, t: usize) -> Option<Vec<f64>> {
        let w = match self {
            MomentumRule::LastGradient => {
                let mut w = vec![0.0; t];
                w[t - 1] = 1.0;
                w
            }
            MomentumRule::UniformAverage => vec![1.0 / t as f64; t],
            MomentumRule::NsgdmWeights => {
                let mut w = vec![0.0; t];
                let mut tail = 1.0;
                for i in (1..=t).rev() {
                    w[i - 1] = (i as f64).powf(-0.5) * tail;
                    tail *= NsgdmConfig::beta(i);
                }
                w
            }
            MomentumRule::Geometric { rho } => (1..=t).map(|i| rho.powi((t - i) as i32)).collect(),
            MomentumRule::Custom(_) => return None,
        };
        Some(w)
    }

    fn validate(&self) -> Result<()> {
        if let MomentumRule::Geometric { rho } = self {
            if !(*rho >= 0.0 && rho.is_finite()) {
                return Err(Error::domain(format!("geometric momentum needs rho >= 0, got {rho}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnmmConfig {
    pub eta: f64,
    pub alpha: f64,
    pub rule: MomentumRule,
}

impl GnmmConfig {
    pub fn new(eta: f64, alpha: f64, rule: MomentumRule) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("eta must be > 0, got {eta}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        rule.validate()?;
        Ok(GnmmConfig { eta, alpha, rule })
    }

    pub fn eta_t(&self, t: usize) -> f64 {
        self.eta * (t as f64).powf(-self.alpha)
    }
}

/// `x_{t+1} = x_t - (η/t^α) m_t/‖m_t‖` with `m_t` chosen by a momentum rule.
pub struct Gnmm {
    cfg: GnmmConfig,
    m: Option<Vector>,
    history: Vec<Vector>,
}

impl Gnmm {
    pub fn new(cfg: GnmmConfig) -> Self {
        Gnmm { cfg, m: None, history: Vec::new() }
    }

    fn next_momentum(&mut self, t: usize, g: &Vector) -> Result<Vector> {
        if let MomentumRule::Custom(f) = &self.cfg.rule {
            self.history.push(g.clone());
            let w = f(t);
            if w.len() != t || w.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::DegenerateMomentum { t });
            }
            let mut m = Vector::zeros(g.dim())?;
            for (wi, gi) in w.iter().zip(&self.history) {
                m = m.axpy(*wi, gi)?;
            }
            return Ok(m);
        }
        let Some(prev) = &self.m else {
            return Ok(g.clone());
        };
        let tf = t as f64;
        match &self.cfg.rule {
            MomentumRule::LastGradient => Ok(g.clone()),
            MomentumRule::UniformAverage => prev.lincomb((tf - 1.0) / tf, 1.0 / tf, g),
            MomentumRule::NsgdmWeights => {
                let b = NsgdmConfig::beta(t);
                prev.lincomb(b, 1.0 - b, g)
            }
            MomentumRule::Geometric { rho } => prev.lincomb(*rho, 1.0, g),
            MomentumRule::Custom(_) => unreachable!("handled above"),
        }
    }
}

impl Optimizer for Gnmm {
    fn nominal_eta(&self, t: usize) -> f64 {
        self.cfg.eta_t(t)
    }

    fn step(&mut self, t: usize, x: &Vector, g: &Vector) -> Result<Step> {
        let m = self.next_momentum(t, g)?;
        if m.is_zero() {
            return Err(Error::DegenerateMomentum { t });
        }
        let eta = self.cfg.eta_t(t);
        let x_next = x.axpy(-eta / m.norm(), &m)?;
        self.m = Some(m.clone());
        Ok(Step { x_next, eta, momentum: Some(m) })
    }
}
