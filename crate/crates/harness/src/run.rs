//! `rso run`: one optimizer on one objective.

use std::path::{Path, PathBuf};

use serde::Serialize;

use rso_core::bounds::{adaptation_threshold, lower_bound_iterations, BoundReport};
use rso_core::config::{ObjectiveSpec, OptimizerSpec, RunConfig};
use rso_core::optimizers::{run_with_report, DescentRow};
use rso_core::testfns::Objective;
use rso_core::trace::{RunTrace, StopReason};

use crate::error::{HarnessError, Result};
use crate::output::{config_hash, invocation_dir, load_config, write_json, write_text};
use crate::Outcome;

#[derive(Debug, Serialize)]
pub struct DescentSummary {
    pub all_hold: bool,
    pub violations: usize,
    pub rows: Vec<DescentRow>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub optimizer: &'static str,
    pub objective: String,
    pub horizon: usize,
    pub steps: usize,
    pub final_f: Option<f64>,
    pub min_grad_norm: f64,
    pub min_f: f64,
    #[serde(rename = "T_eps")]
    pub t_eps: Option<usize>,
    pub stop: StopReason,
    /// `⌈(12 η L1)⁴⌉` for the normalized methods.
    pub t0: Option<f64>,
    /// For GNMM on a hard instance built for the same `ε` and `η`.
    pub lower_bound: Option<BoundReport>,
    pub lower_bound_respected: Option<bool>,
    pub descent: Option<DescentSummary>,
    pub diverged_at: Option<usize>,
}

fn base_eta(cfg: &RunConfig, obj: &Objective) -> Option<f64> {
    match &cfg.optimizer {
        OptimizerSpec::Nsgdm { mode, eta } => OptimizerSpec::nsgdm_config(*mode, *eta, obj.params.l1).ok().map(|c| c.eta),
        OptimizerSpec::Gnmm { eta, .. } => Some(*eta),
        _ => None,
    }
}

fn lower_bound(cfg: &RunConfig) -> Option<BoundReport> {
    let (OptimizerSpec::Gnmm { eta, alpha, .. }, ObjectiveSpec::Hard(h), Some(eps)) =
        (&cfg.optimizer, &cfg.objective, cfg.target_eps)
    else {
        return None;
    };
    if eps != h.eps || *eta != h.eta || cfg.x1.is_some() || cfg.noise_sigma != 0.0 {
        return None;
    }
    lower_bound_iterations(eps, *eta, *alpha, h.delta1, h.l1).ok()
}

fn summarize(cfg: &RunConfig, obj: &Objective, trace: &RunTrace) -> RunSummary {
    let final_f = trace.final_x.as_ref().and_then(|x| obj.value(x).ok());
    let lb = lower_bound(cfg);
    let respected = lb.as_ref().and_then(|b| trace.t_eps.map(|t| t as f64 >= b.value));
    RunSummary {
        optimizer: cfg.optimizer.label(),
        objective: obj.name.clone(),
        horizon: cfg.horizon,
        steps: trace.len(),
        final_f,
        min_grad_norm: trace.min_grad_norm(),
        min_f: trace.min_f(),
        t_eps: trace.t_eps,
        stop: trace.stop,
        t0: base_eta(cfg, obj).map(|e| adaptation_threshold(e, obj.params.l1)),
        lower_bound: lb,
        lower_bound_respected: respected,
        descent: None,
        diverged_at: None,
    }
}

pub fn cmd_run(config: &Path, out: &Path, seed: Option<u64>) -> Result<Outcome> {
    let (mut cfg, mut canonical): (RunConfig, _) = load_config(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
        canonical["seed"] = s.into();
    }
    cfg.validate()?;
    let obj = cfg.build_objective()?;
    let dir = invocation_dir(out, "run", &config_hash("run", &canonical))?;
    write_json(&dir.join("config.json"), &canonical)?;
    run_into(&cfg, &obj, &dir)
}

fn run_into(cfg: &RunConfig, obj: &Objective, dir: &Path) -> Result<Outcome> {
    let trace_path: PathBuf = dir.join("trace.csv");
    match run_with_report(cfg) {
        Ok(out) => {
            write_text(&trace_path, &out.trace.to_csv())?;
            let mut s = summarize(cfg, obj, &out.trace);
            let ok = out.descent.as_ref().is_none_or(|d| d.all_hold) && s.lower_bound_respected != Some(false);
            s.descent = out.descent.map(|d| DescentSummary { all_hold: d.all_hold, violations: d.violations, rows: d.rows });
            write_json(&dir.join("summary.json"), &s)?;
            Ok(Outcome { dir: dir.to_path_buf(), ok })
        }
        Err(rso_core::Error::Diverged { t, trace }) => {
            write_text(&trace_path, &trace.to_csv())?;
            let mut s = summarize(cfg, obj, &trace);
            s.diverged_at = Some(t);
            write_json(&dir.join("summary.json"), &s)?;
            Err(HarnessError::Diverged { t, dir: dir.to_path_buf() })
        }
        Err(e) => Err(e.into()),
    }
}
