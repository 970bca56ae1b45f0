//! `rso sweep`: stepsize multipliers × optimizers × seeds on one objective.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rso_core::config::{ObjectiveSpec, OptimizerSpec};
use rso_core::optimizers::{run_objective, NsgdmMode, RunOptions};
use rso_core::oracle::NoiseKind;
use rso_core::rng::split_seed;
use rso_core::trace::fmt_f64;

use crate::error::{HarnessError, Result};
use crate::output::{config_hash, invocation_dir, load_config, write_json, write_text};
use crate::Outcome;

/// `10^{k/5}` for `k = -5..=8`.
pub fn default_multipliers() -> Vec<f64> {
    (-5..=8).map(|k| 10f64.powf(k as f64 / 5.0)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub objective: ObjectiveSpec,
    pub optimizers: Vec<OptimizerSpec>,
    /// Replaces every optimizer's own stepsize before scaling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_eta: Option<f64>,
    #[serde(default = "default_multipliers")]
    pub multipliers: Vec<f64>,
    pub seeds: Vec<u64>,
    pub horizon: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub noise_kind: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_eps: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.optimizers.is_empty() {
            return bad("optimizers: must be non-empty");
        }
        if self.multipliers.is_empty() || self.multipliers.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
            return bad("multipliers: must be non-empty and all > 0");
        }
        if self.seeds.is_empty() {
            return bad("seeds: must be non-empty");
        }
        if self.horizon < 1 {
            return bad("horizon: must be >= 1");
        }
        if let Some(e) = self.base_eta {
            if !(e > 0.0 && e.is_finite()) {
                return bad("base_eta: must be > 0");
            }
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad("noise_sigma: must be >= 0");
        }
        if self.noise_sigma != 0.0 && self.optimizers.iter().any(|o| matches!(o, OptimizerSpec::Backtracking { .. })) {
            return bad("noise_sigma: backtracking needs exact gradients (noise_sigma = 0)");
        }
        Ok(())
    }
}

/// The optimizer with its stepsize set to `eta` (NSGD-M becomes custom,
/// backtracking takes it as its initial trial stepsize).
fn with_eta(spec: &OptimizerSpec, eta: f64) -> OptimizerSpec {
    match spec.clone() {
        OptimizerSpec::Nsgdm { .. } => OptimizerSpec::Nsgdm { mode: NsgdmMode::Custom, eta: Some(eta) },
        OptimizerSpec::Gnmm { alpha, rule, .. } => OptimizerSpec::Gnmm { eta, alpha, rule },
        OptimizerSpec::Backtracking { beta, gamma, .. } => OptimizerSpec::Backtracking { beta, gamma, eta0: eta },
        OptimizerSpec::ClippedSgd { tau, .. } => OptimizerSpec::ClippedSgd { eta, tau },
        OptimizerSpec::AdagradNorm { b0, .. } => OptimizerSpec::AdagradNorm { eta, b0 },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub optimizer: &'static str,
    pub optimizer_index: usize,
    pub lambda: f64,
    pub seed: u64,
    pub min_grad_norm: Option<f64>,
    pub min_f: Option<f64>,
    pub trace: String,
    pub status: &'static str,
    pub error: Option<String>,
}

struct Cell {
    opt: usize,
    mult: usize,
    seed: u64,
}

fn run_cell(spec: &SweepSpec, cell: &Cell, l1: f64, dir: &Path) -> Result<CellSummary> {
    let opt = &spec.optimizers[cell.opt];
    let lambda = spec.multipliers[cell.mult];
    let obj = spec.objective.build()?;
    let base = spec.base_eta.map_or_else(|| opt.clone(), |e| with_eta(opt, e));
    let scaled = base.scale_stepsize(lambda, l1)?;
    let opts = RunOptions {
        horizon: spec.horizon,
        target_eps: spec.target_eps,
        sigma: spec.noise_sigma,
        noise: spec.noise_kind,
        seed: cell.seed,
    };
    let name = format!("{}-{}-m{}-s{}.csv", cell.opt, opt.label(), cell.mult, cell.seed);
    let rel = format!("cells/{name}");
    let mut summary = CellSummary {
        optimizer: opt.label(),
        optimizer_index: cell.opt,
        lambda,
        seed: cell.seed,
        min_grad_norm: None,
        min_f: None,
        trace: rel.clone(),
        status: "ok",
        error: None,
    };
    let trace = match run_objective(&obj, &scaled, &opts) {
        Ok(t) => t,
        Err(rso_core::Error::Diverged { t, trace }) => {
            summary.status = "diverged";
            summary.error = Some(format!("diverged at t = {t}"));
            *trace
        }
        Err(e) => {
            summary.status = "error";
            summary.error = Some(e.to_string());
            write_text(&dir.join(&rel), "")?;
            return Ok(summary);
        }
    };
    write_text(&dir.join(&rel), &trace.to_csv())?;
    if summary.status == "ok" {
        summary.min_grad_norm = Some(trace.min_grad_norm());
        summary.min_f = Some(trace.min_f());
    }
    Ok(summary)
}

pub fn cmd_sweep(config: &Path, out: &Path, seed: Option<u64>, jobs: Option<usize>) -> Result<Outcome> {
    let (mut spec, mut canonical): (SweepSpec, _) = load_config(config)?;
    if let Some(s) = seed {
        spec.seeds = (0..spec.seeds.len() as u64).map(|i| split_seed(s, i)).collect();
        canonical["seed_override"] = s.into();
    }
    spec.validate()?;
    let l1 = spec.objective.build()?.params.l1;
    for o in &spec.optimizers {
        o.scale_stepsize(1.0, l1)?;
    }
    let dir = invocation_dir(out, "sweep", &config_hash("sweep", &canonical))?;
    write_json(&dir.join("config.json"), &canonical)?;
    std::fs::create_dir_all(dir.join("cells")).map_err(HarnessError::io(dir.join("cells")))?;

    let mut cells = Vec::new();
    for opt in 0..spec.optimizers.len() {
        for mult in 0..spec.multipliers.len() {
            for &seed in &spec.seeds {
                cells.push(Cell { opt, mult, seed });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Config(format!("jobs: {e}")))?;
    let results: Vec<Result<CellSummary>> = pool.install(|| cells.par_iter().map(|c| run_cell(&spec, c, l1, &dir)).collect());
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut csv = String::from("optimizer,lambda,seed,min_grad_norm,min_f\n");
    for s in &summaries {
        if let (Some(g), Some(f)) = (s.min_grad_norm, s.min_f) {
            writeln!(csv, "{},{},{},{},{}", s.optimizer, fmt_f64(s.lambda), s.seed, fmt_f64(g), fmt_f64(f)).unwrap();
        }
    }
    write_text(&dir.join("aggregate.csv"), &csv)?;
    write_json(&dir.join("summaries.json"), &summaries)?;
    let failed = summaries.iter().filter(|s| s.status != "ok").count();
    if failed > 0 {
        log::warn!("{failed} of {} sweep cells failed", summaries.len());
    }
    Ok(Outcome { dir, ok: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_multipliers_span() {
        let m = default_multipliers();
        assert_eq!(m.len(), 14);
        assert!((m[0] - 0.1).abs() < 1e-15);
        assert!((m[5] - 1.0).abs() < 1e-15);
        assert!((m[13] - 10f64.powf(1.6)).abs() < 1e-12);
    }

    #[test]
    fn with_eta_sets_every_kind() {
        let specs: Vec<OptimizerSpec> = serde_json::from_str(
            r#"[{"kind": "nsgdm"}, {"kind": "gnmm", "eta": 2, "alpha": 0.5},
                {"kind": "backtracking", "beta": 0.5, "gamma": 0.5},
                {"kind": "clipped-sgd", "eta": 3}, {"kind": "adagrad-norm", "eta": 4}]"#,
        )
        .unwrap();
        for s in specs {
            let v = serde_json::to_value(with_eta(&s, 0.25)).unwrap();
            let eta = v.get("eta").or_else(|| v.get("eta0")).unwrap();
            assert_eq!(eta, 0.25, "{v}");
        }
    }

    #[test]
    fn rejects_empty_grids() {
        let mut s: SweepSpec = serde_json::from_str(
            r#"{"objective": {"kind": "cosh"}, "optimizers": [{"kind": "nsgdm"}], "seeds": [1], "horizon": 10}"#,
        )
        .unwrap();
        assert!(s.validate().is_ok());
        s.multipliers.clear();
        assert!(s.validate().is_err());
        s.multipliers = vec![1.0, -1.0];
        assert!(s.validate().is_err());
    }
}
