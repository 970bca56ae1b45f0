//! `rso certify-lower-bound` and `rso certify-smoothness`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use rso_core::bounds::{lower_bound_iterations, BoundReport};
use rso_core::config::{ObjectiveSpec, OptimizerSpec};
use rso_core::optimizers::{hitting_time, run_objective, GnmmConfig, MomentumRule, RunOptions};
use rso_core::smoothness::{certify_smoothness, SmoothnessCertificate};
use rso_core::testfns::{make_hard_instance, HardInstanceExport, HardParams, HardVariant};

use crate::error::{HarnessError, Result};
use crate::output::{config_hash, invocation_dir, load_config, write_json};
use crate::Outcome;

fn default_rule() -> MomentumRule {
    MomentumRule::LastGradient
}

fn default_max_iter() -> u64 {
    10_000_000
}

fn default_pairs() -> usize {
    10_000
}

fn default_hessian_points() -> usize {
    1_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerBoundSpec {
    pub eps: f64,
    pub eta: f64,
    pub alpha: f64,
    pub delta1: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(default = "default_rule")]
    pub rule: MomentumRule,
    #[serde(default)]
    pub variant: HardVariant,
    #[serde(default = "default_max_iter")]
    pub max_iter: u64,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_hessian_points")]
    pub hessian_points: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct LowerBoundCertificate {
    pub instance: HardInstanceExport,
    pub alpha: f64,
    /// `None` when the target was not reached within `max_iter`.
    #[serde(rename = "T_eps_empirical")]
    pub t_eps_empirical: Option<u64>,
    pub max_iter: u64,
    #[serde(rename = "T_lower_bound")]
    pub t_lower_bound: f64,
    pub lower_bound: BoundReport,
    pub certified: bool,
    pub smoothness_certified: bool,
    pub smoothness: SmoothnessCertificate,
    pub x2: f64,
    pub x2_equals_eta: bool,
}

pub fn certify_lower_bound(spec: &LowerBoundSpec) -> Result<LowerBoundCertificate> {
    let params = HardParams {
        eps: spec.eps,
        eta: spec.eta,
        l0: spec.l0,
        l1: spec.l1,
        delta1: spec.delta1,
        variant: spec.variant,
    };
    let (inst, obj) = make_hard_instance(params)?;
    let gnmm = GnmmConfig::new(spec.eta, spec.alpha, spec.rule.clone())?;
    let bound = lower_bound_iterations(spec.eps, spec.eta, spec.alpha, spec.delta1, spec.l1)?;
    let smoothness = certify_smoothness(&obj, spec.pairs, spec.hessian_points, spec.seed)?;
    let hit = hitting_time(&obj, gnmm, spec.eps, spec.max_iter)?;
    // Not reaching the target within max_iter means T_eps > max_iter.
    let certified = !bound.overflow
        && match hit {
            Some(t) => t as f64 >= bound.value,
            None => bound.value <= (spec.max_iter + 1) as f64,
        };
    let opt = OptimizerSpec::Gnmm { eta: spec.eta, alpha: spec.alpha, rule: spec.rule.clone() };
    let two = run_objective(&obj, &opt, &RunOptions::deterministic(2))?;
    let x2 = two.steps().get(1).map_or(f64::NAN, |s| s.x[0]);
    Ok(LowerBoundCertificate {
        instance: inst.export(),
        alpha: spec.alpha,
        t_eps_empirical: hit,
        max_iter: spec.max_iter,
        t_lower_bound: bound.value,
        lower_bound: bound,
        certified,
        smoothness_certified: smoothness.certified,
        smoothness,
        x2,
        x2_equals_eta: (x2 - spec.eta).abs() <= 1e-12 * spec.eta,
    })
}

pub fn cmd_certify_lower_bound(config: &Path, out: &Path, seed: Option<u64>) -> Result<Outcome> {
    let (mut spec, mut canonical): (LowerBoundSpec, _) = load_config(config)?;
    if let Some(s) = seed {
        spec.seed = s;
        canonical["seed"] = s.into();
    }
    let cert = certify_lower_bound(&spec)?;
    let dir = invocation_dir(out, "certify-lower-bound", &config_hash("certify-lower-bound", &canonical))?;
    write_json(&dir.join("config.json"), &canonical)?;
    write_json(&dir.join("certification.json"), &cert)?;
    if !cert.certified {
        log::warn!("T_eps = {:?} is below the lower bound {}", cert.t_eps_empirical, cert.t_lower_bound);
    }
    if !cert.smoothness_certified {
        log::warn!("the hard instance failed its smoothness certificate");
    }
    Ok(Outcome { dir, ok: cert.certified && cert.smoothness_certified })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothnessSpec {
    pub objective: ObjectiveSpec,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_hessian_points")]
    pub hessian_points: usize,
    #[serde(default)]
    pub seed: u64,
}

pub fn cmd_certify_smoothness(config: &Path, out: &Path, seed: Option<u64>) -> Result<Outcome> {
    let (mut spec, mut canonical): (SmoothnessSpec, _) = load_config(config)?;
    if let Some(s) = seed {
        spec.seed = s;
        canonical["seed"] = s.into();
    }
    let obj = spec.objective.build().map_err(|e| HarnessError::Config(format!("objective: {e}")))?;
    let cert = certify_smoothness(&obj, spec.pairs, spec.hessian_points, spec.seed)?;
    let dir = invocation_dir(out, "certify-smoothness", &config_hash("certify-smoothness", &canonical))?;
    write_json(&dir.join("config.json"), &canonical)?;
    write_json(&dir.join("smoothness.json"), &cert)?;
    Ok(Outcome { dir, ok: cert.certified })
}
