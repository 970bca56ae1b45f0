use log::debug;

use super::{
    descent_lemma_check, AdagradNorm, BacktrackConfig, Backtracking, ClippedSgd, DescentReport, Gnmm, GnmmConfig, Nsgdm,
    Optimizer,
};
use crate::config::{OptimizerSpec, RunConfig};
use crate::error::{Error, Result};
use crate::oracle::{NoiseKind, NoisyOracle};
use crate::testfns::Objective;
use crate::trace::{RunTrace, StepRecord, StopReason};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub horizon: usize,
    pub target_eps: Option<f64>,
    pub sigma: f64,
    pub noise: NoiseKind,
    pub seed: u64,
}

impl RunOptions {
    pub fn deterministic(horizon: usize) -> Self {
        RunOptions { horizon, target_eps: None, sigma: 0.0, noise: NoiseKind::Gaussian, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: RunTrace,
    pub descent: Option<DescentReport>,
}

pub fn run(config: &RunConfig) -> Result<RunTrace> {
    run_with_report(config).map(|o| o.trace)
}

/// Run a validated config; adds the descent certificate when requested.
pub fn run_with_report(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let obj = config.build_objective()?;
    let opts = RunOptions {
        horizon: config.horizon,
        target_eps: config.target_eps,
        sigma: config.noise_sigma,
        noise: config.noise_kind,
        seed: config.seed,
    };
    let trace = run_objective(&obj, &config.optimizer, &opts)?;
    let descent = match (&config.optimizer, config.check_descent) {
        (OptimizerSpec::Nsgdm { .. }, true) => Some(descent_lemma_check(&obj, &trace)?),
        (_, true) => return Err(Error::config("check_descent", "only available for nsgdm")),
        _ => None,
    };
    Ok(RunOutput { trace, descent })
}

fn build(spec: &OptimizerSpec, obj: &Objective) -> Result<Box<dyn Optimizer>> {
    Ok(match spec {
        OptimizerSpec::Nsgdm { mode, eta } => Box::new(Nsgdm::new(OptimizerSpec::nsgdm_config(*mode, *eta, obj.params.l1)?)),
        OptimizerSpec::Gnmm { eta, alpha, rule } => Box::new(Gnmm::new(GnmmConfig::new(*eta, *alpha, rule.clone())?)),
        OptimizerSpec::ClippedSgd { eta, tau } => Box::new(ClippedSgd::new(*eta, *tau)?),
        OptimizerSpec::AdagradNorm { eta, b0 } => Box::new(AdagradNorm::new(*eta, *b0)?),
        OptimizerSpec::Backtracking { .. } => unreachable!("handled by run_backtracking"),
    })
}

fn is_divergence(e: &Error) -> bool {
    matches!(e, Error::NonFinite { .. } | Error::Evaluation { .. })
}

fn diverged(e: Error, t: usize, trace: RunTrace) -> Error {
    if is_divergence(&e) {
        debug!("run diverged at t = {t}: {e}");
        Error::Diverged { t, trace: Box::new(trace) }
    } else {
        e
    }
}

/// Run any optimizer on an objective from its `x1`.
pub fn run_objective(obj: &Objective, spec: &OptimizerSpec, opts: &RunOptions) -> Result<RunTrace> {
    if let OptimizerSpec::Backtracking { beta, gamma, eta0 } = spec {
        if opts.sigma != 0.0 {
            return Err(Error::config("noise_sigma", "backtracking needs exact gradients (noise_sigma = 0)"));
        }
        return run_backtracking(obj, BacktrackConfig::with_eta0(*beta, *gamma, *eta0)?, opts);
    }
    let mut opt = build(spec, obj)?;
    let mut oracle = NoisyOracle::new(obj.clone(), opts.sigma, opts.noise, opts.seed)?;
    let mut trace = RunTrace::new();
    let mut x = obj.x1.clone();
    for t in 1..=opts.horizon {
        let sampled = oracle.sample(&x).and_then(|s| obj.value(&x).map(|f| (s, f)));
        let (sample, f_value) = match sampled {
            Ok(v) => v,
            Err(e) => return Err(diverged(e, t, trace)),
        };
        let grad_norm = sample.true_grad.norm();
        if opts.target_eps.is_some_and(|eps| grad_norm <= eps) {
            // Stop without stepping; the row carries the stepsize that would
            // have been used.
            trace.push(StepRecord {
                t,
                x: x.clone(),
                eta: opt.nominal_eta(t),
                momentum: None,
                grad_norm,
                stoch_grad_norm: sample.g.norm(),
                f_value,
                line_search_trials: None,
            })?;
            trace.t_eps = Some(t);
            trace.stop = StopReason::TargetReached;
            trace.final_x = Some(x);
            return Ok(trace);
        }
        let step = match opt.step(t, &x, &sample.g) {
            Ok(s) => s,
            Err(e) => return Err(diverged(e, t, trace)),
        };
        trace.push(StepRecord {
            t,
            x: x.clone(),
            eta: step.eta,
            momentum: step.momentum,
            grad_norm,
            stoch_grad_norm: sample.g.norm(),
            f_value,
            line_search_trials: None,
        })?;
        x = step.x_next;
    }
    trace.final_x = Some(x);
    Ok(trace)
}

fn run_backtracking(obj: &Objective, cfg: BacktrackConfig, opts: &RunOptions) -> Result<RunTrace> {
    let mut bt = Backtracking::new(cfg);
    let mut trace = RunTrace::new();
    let mut x = obj.x1.clone();
    for t in 1..=opts.horizon {
        let s = match bt.step(t, obj, &x) {
            Ok(s) => s,
            Err(e) => return Err(diverged(e, t, trace)),
        };
        let grad_norm = s.grad.norm();
        trace.push(StepRecord {
            t,
            x: x.clone(),
            eta: s.eta,
            momentum: None,
            grad_norm,
            stoch_grad_norm: grad_norm,
            f_value: s.f_x,
            line_search_trials: Some(s.trials),
        })?;
        if opts.target_eps.is_some_and(|eps| grad_norm <= eps) {
            trace.t_eps = Some(t);
            trace.stop = StopReason::TargetReached;
            trace.final_x = Some(x);
            return Ok(trace);
        }
        match s.x_next {
            Some(y) => x = y,
            None => {
                trace.stop = StopReason::Stationary;
                trace.final_x = Some(x);
                return Ok(trace);
            }
        }
    }
    trace.final_x = Some(x);
    Ok(trace)
}

/// First `t` with `|∇F(x_t)| <= eps` for a deterministic GNMM run, without
/// keeping a trace. `None` if not reached within `max_iter` iterations.
pub fn hitting_time(obj: &Objective, cfg: GnmmConfig, eps: f64, max_iter: u64) -> Result<Option<u64>> {
    let mut opt = Gnmm::new(cfg);
    let mut x: Vector = obj.x1.clone();
    for t in 1..=max_iter {
        let g = obj.gradient(&x)?;
        if g.norm() <= eps {
            return Ok(Some(t));
        }
        x = opt.step(t as usize, &x, &g)?.x_next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ObjectiveSpec;
    use crate::optimizers::{MomentumRule, NsgdmMode};
    use crate::testfns::{make_cosh, make_hard_instance, make_quadratic, HardParams, HardVariant};

    fn nsgdm() -> OptimizerSpec {
        OptimizerSpec::Nsgdm { mode: NsgdmMode::Agnostic, eta: None }
    }

    #[test]
    fn nsgdm_reduces_gradient_on_quadratic() {
        let obj = make_quadratic(1.0, 2).unwrap();
        let tr = run_objective(&obj, &nsgdm(), &RunOptions::deterministic(1000)).unwrap();
        assert_eq!(tr.len(), 1000);
        let s = tr.steps();
        assert!(s[999].grad_norm < s[0].grad_norm);
        for w in s.windows(2) {
            let d = w[1].x.distance(&w[0].x).unwrap();
            assert!((d - w[0].eta).abs() <= 1e-12 * w[0].eta.max(1.0));
        }
    }

    #[test]
    fn determinism_with_noise() {
        let cfg = RunConfig {
            seed: 5,
            horizon: 200,
            target_eps: None,
            optimizer: nsgdm(),
            objective: ObjectiveSpec::Quadratic { l: 1.0, dim: 3 },
            noise_sigma: 0.5,
            noise_kind: NoiseKind::Gaussian,
            x1: None,
            check_descent: false,
        };
        assert_eq!(run(&cfg).unwrap().to_csv(), run(&cfg).unwrap().to_csv());
        let other = RunConfig { seed: 6, ..cfg.clone() };
        assert_ne!(run(&cfg).unwrap().to_csv(), run(&other).unwrap().to_csv());
    }

    #[test]
    fn early_stop_records_t_eps() {
        let obj = make_cosh(1.0).unwrap();
        let opts = RunOptions { target_eps: Some(1e-3), ..RunOptions::deterministic(100_000) };
        let tr = run_objective(&obj, &OptimizerSpec::Backtracking { beta: 0.5, gamma: 0.5, eta0: 1.0 }, &opts).unwrap();
        let last = tr.steps().last().unwrap();
        assert_eq!(tr.t_eps, Some(last.t));
        assert!(last.grad_norm <= 1e-3);
        assert!(tr.steps()[..tr.len() - 1].iter().all(|s| s.grad_norm > 1e-3));
    }

    #[test]
    fn backtracking_stationary_start() {
        let obj = make_quadratic(1.0, 1).unwrap().with_x1(Vector::scalar(0.0).unwrap()).unwrap();
        let tr = run_objective(&obj, &OptimizerSpec::Backtracking { beta: 0.5, gamma: 0.5, eta0: 1.0 }, &RunOptions::deterministic(10)).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.stop, StopReason::Stationary);
    }

    #[test]
    fn divergence_carries_trace() {
        let obj = make_cosh(1.0).unwrap();
        let spec = OptimizerSpec::AdagradNorm { eta: 1e6, b0: 1e-6 };
        match run_objective(&obj, &spec, &RunOptions::deterministic(100)) {
            Err(Error::Diverged { t, trace }) => assert_eq!(trace.len(), t - 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn hard_instance_second_iterate_is_eta() {
        let p = HardParams { eps: 0.1, eta: 1.0, l0: 8.0, l1: 2.0, delta1: 1.0, variant: HardVariant::FullHeight };
        let (_, obj) = make_hard_instance(p).unwrap();
        let spec = OptimizerSpec::Gnmm { eta: 1.0, alpha: 0.75, rule: MomentumRule::LastGradient };
        let tr = run_objective(&obj, &spec, &RunOptions::deterministic(3)).unwrap();
        assert_eq!(tr.steps()[1].x[0], 1.0);
        let cfg = GnmmConfig::new(1.0, 0.75, MomentumRule::LastGradient).unwrap();
        let hit = hitting_time(&obj, cfg, 0.1, 1_000_000).unwrap().unwrap();
        let opts = RunOptions { target_eps: Some(0.1), ..RunOptions::deterministic(1_000_000) };
        assert_eq!(run_objective(&obj, &spec, &opts).unwrap().t_eps, Some(hit as usize));
    }
}
