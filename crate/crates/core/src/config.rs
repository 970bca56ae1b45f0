//! Serializable run configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::baselines::{DEFAULT_B0, DEFAULT_CLIP};
use crate::optimizers::gnmm::MomentumRule;
use crate::optimizers::nsgdm::{NsgdmConfig, NsgdmMode};
use crate::oracle::NoiseKind;
use crate::testfns::{make_cosh, make_exp1d, make_hard_instance, make_quadratic, make_quartic, HardParams, Objective};
use crate::vector::Vector;

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Quadratic {
        #[serde(rename = "L", default = "one")]
        l: f64,
        #[serde(default = "one_usize")]
        dim: usize,
    },
    Cosh {
        #[serde(default = "one")]
        scale: f64,
    },
    Exp1d,
    Quartic {
        #[serde(default = "one_usize")]
        dim: usize,
    },
    Hard(HardParams),
}

impl ObjectiveSpec {
    pub fn build(&self) -> Result<Objective> {
        match *self {
            ObjectiveSpec::Quadratic { l, dim } => make_quadratic(l, dim),
            ObjectiveSpec::Cosh { scale } => make_cosh(scale),
            ObjectiveSpec::Exp1d => Ok(make_exp1d()),
            ObjectiveSpec::Quartic { dim } => make_quartic(dim),
            ObjectiveSpec::Hard(p) => make_hard_instance(p).map(|(_, o)| o),
        }
    }
}

fn default_rule() -> MomentumRule {
    MomentumRule::LastGradient
}

fn default_clip() -> f64 {
    DEFAULT_CLIP
}

fn default_b0() -> f64 {
    DEFAULT_B0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OptimizerSpec {
    Nsgdm {
        #[serde(default)]
        mode: NsgdmMode,
        /// Required for `custom` mode, ignored otherwise.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
    },
    Gnmm {
        eta: f64,
        alpha: f64,
        #[serde(default = "default_rule")]
        rule: MomentumRule,
    },
    Backtracking {
        beta: f64,
        gamma: f64,
        #[serde(default = "one")]
        eta0: f64,
    },
    ClippedSgd {
        eta: f64,
        #[serde(default = "default_clip")]
        tau: f64,
    },
    AdagradNorm {
        eta: f64,
        #[serde(default = "default_b0")]
        b0: f64,
    },
}

impl OptimizerSpec {
    pub fn label(&self) -> &'static str {
        match self {
            OptimizerSpec::Nsgdm { .. } => "nsgdm",
            OptimizerSpec::Gnmm { .. } => "gnmm",
            OptimizerSpec::Backtracking { .. } => "backtracking",
            OptimizerSpec::ClippedSgd { .. } => "clipped-sgd",
            OptimizerSpec::AdagradNorm { .. } => "adagrad-norm",
        }
    }

    /// Base stepsize `η` for NSGD-M, resolving the mode against `L1`.
    pub fn nsgdm_config(mode: NsgdmMode, eta: Option<f64>, l1: f64) -> Result<NsgdmConfig> {
        match mode {
            NsgdmMode::Agnostic => Ok(NsgdmConfig::agnostic()),
            NsgdmMode::Informed => NsgdmConfig::informed(l1).map_err(|e| Error::config("optimizer.mode", e.to_string())),
            NsgdmMode::Custom => {
                let eta = eta.ok_or_else(|| Error::config("optimizer.eta", "custom mode needs eta"))?;
                NsgdmConfig::custom(eta).map_err(|e| Error::config("optimizer.eta", e.to_string()))
            }
        }
    }

    /// The same optimizer with its stepsize multiplied by `lambda`. NSGD-M in
    /// agnostic or informed mode becomes custom with the scaled base.
    pub fn scale_stepsize(&self, lambda: f64, l1: f64) -> Result<OptimizerSpec> {
        Ok(match self.clone() {
            OptimizerSpec::Nsgdm { mode, eta } => {
                let base = Self::nsgdm_config(mode, eta, l1)?.eta;
                OptimizerSpec::Nsgdm { mode: NsgdmMode::Custom, eta: Some(lambda * base) }
            }
            OptimizerSpec::Gnmm { eta, alpha, rule } => OptimizerSpec::Gnmm { eta: lambda * eta, alpha, rule },
            OptimizerSpec::Backtracking { beta, gamma, eta0 } => OptimizerSpec::Backtracking { beta, gamma, eta0: lambda * eta0 },
            OptimizerSpec::ClippedSgd { eta, tau } => OptimizerSpec::ClippedSgd { eta: lambda * eta, tau },
            OptimizerSpec::AdagradNorm { eta, b0 } => OptimizerSpec::AdagradNorm { eta: lambda * eta, b0 },
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_eps: Option<f64>,
    pub optimizer: OptimizerSpec,
    pub objective: ObjectiveSpec,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub noise_kind: NoiseKind,
    /// Overrides the objective's canonical start.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<Vec<f64>>,
    /// Verify the per-step descent inequality after an NSGD-M run.
    #[serde(default)]
    pub check_descent: bool,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be finite and > 0, got {v}")))
    }
}

fn unit_open(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("must lie in (0,1), got {v}")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::config("horizon", "must be >= 1"));
        }
        if let Some(eps) = self.target_eps {
            positive("target_eps", eps)?;
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::config("noise_sigma", format!("must be finite and >= 0, got {}", self.noise_sigma)));
        }
        match &self.optimizer {
            OptimizerSpec::Nsgdm { mode, eta } => {
                if *mode == NsgdmMode::Custom {
                    positive("optimizer.eta", eta.ok_or_else(|| Error::config("optimizer.eta", "custom mode needs eta"))?)?;
                }
            }
            OptimizerSpec::Gnmm { eta, alpha, rule } => {
                positive("optimizer.eta", *eta)?;
                unit_open("optimizer.alpha", *alpha)?;
                if let MomentumRule::Geometric { rho } = rule {
                    if !(*rho >= 0.0 && rho.is_finite()) {
                        return Err(Error::config("optimizer.rule.geometric.rho", format!("must be >= 0, got {rho}")));
                    }
                }
            }
            OptimizerSpec::Backtracking { beta, gamma, eta0 } => {
                unit_open("optimizer.beta", *beta)?;
                unit_open("optimizer.gamma", *gamma)?;
                positive("optimizer.eta0", *eta0)?;
                if self.noise_sigma != 0.0 {
                    return Err(Error::config("noise_sigma", "backtracking needs exact gradients (noise_sigma = 0)"));
                }
            }
            OptimizerSpec::ClippedSgd { eta, tau } => {
                positive("optimizer.eta", *eta)?;
                positive("optimizer.tau", *tau)?;
            }
            OptimizerSpec::AdagradNorm { eta, b0 } => {
                positive("optimizer.eta", *eta)?;
                positive("optimizer.b0", *b0)?;
            }
        }
        Ok(())
    }

    /// Objective with the start point applied.
    pub fn build_objective(&self) -> Result<Objective> {
        let obj = self.objective.build().map_err(|e| Error::config("objective", e.to_string()))?;
        match &self.x1 {
            Some(x1) => {
                let x1 = Vector::new(x1.clone()).map_err(|e| Error::config("x1", e.to_string()))?;
                obj.with_x1(x1).map_err(|e| Error::config("x1", e.to_string()))
            }
            None => Ok(obj),
        }
    }
}
