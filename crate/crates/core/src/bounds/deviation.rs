//! Bound on the momentum deviation `‖m_t - ∇F(x_t)‖` of an exponential
//! moving average with `β_1 = 0`:
//!
//! `σ √V_t + R_t`, `V_t = β_t² V_{t-1} + (1-β_t)²`, `V_1 = 1`, `R_1 = 0`.
//!
//! The drift `R_t` has two forms, see [`DeviationForm`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::NsgdmConfig;
use crate::smoothness::{a0, a1, b0, b1, SmoothnessParams};
use crate::testfns::Objective;
use crate::trace::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationForm {
    /// `R_t = β_t (R_{t-1} + η_t (L0 B0(L1η_t) + L1 B1(L1η_t) ‖∇F(x_t)‖))`
    #[default]
    AsStated,
    /// `R_t = β_t (R_{t-1} + η_{t-1} (L0 A0(L1η_{t-1}) + L1 A1(L1η_{t-1}) ‖∇F(x_t)‖))`,
    /// charging each gradient change to the step that caused it.
    Displacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub t: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub noise: f64,
    pub drift: f64,
    pub holds: bool,
}

/// Per-step right-hand sides split as `(noise, drift)`; `noise` excludes `σ`.
fn parts(
    betas: &[f64],
    etas: &[f64],
    grad_norms: &[f64],
    params: SmoothnessParams,
    form: DeviationForm,
) -> Result<Vec<(f64, f64)>> {
    if betas.len() != etas.len() || etas.len() != grad_norms.len() {
        return Err(Error::DimensionMismatch { expected: betas.len(), got: etas.len().min(grad_norms.len()) });
    }
    if let Some(&b) = betas.first() {
        if b != 0.0 {
            return Err(Error::domain(format!("the deviation bound needs beta_1 = 0, got {b}")));
        }
    }
    let (l0, l1) = (params.l0, params.l1);
    let mut out = Vec::with_capacity(betas.len());
    let (mut v, mut r) = (0.0, 0.0);
    for i in 0..betas.len() {
        let b = betas[i];
        v = b * b * v + (1.0 - b) * (1.0 - b);
        if i > 0 {
            let g = grad_norms[i];
            let incr = match form {
                DeviationForm::AsStated => {
                    let c = l1 * etas[i];
                    etas[i] * (l0 * b0(c) + l1 * b1(c) * g)
                }
                DeviationForm::Displacement => {
                    let c = l1 * etas[i - 1];
                    etas[i - 1] * (l0 * a0(c) + l1 * a1(c) * g)
                }
            };
            r = b * (r + incr);
        }
        out.push((v.sqrt(), r));
    }
    Ok(out)
}

/// Right-hand side at every `t = 1..=n` for schedules `β_t`, `η_t` and
/// (expected) true gradient norms `‖∇F(x_t)‖`.
pub fn deviation_rhs(
    betas: &[f64],
    etas: &[f64],
    grad_norms: &[f64],
    sigma: f64,
    params: SmoothnessParams,
    form: DeviationForm,
) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(parts(betas, etas, grad_norms, params, form)?.into_iter().map(|(n, d)| sigma * n + d).collect())
}

/// `‖m_t - ∇F(x_t)‖` for every recorded step carrying a momentum.
pub fn deviation_lhs(obj: &Objective, trace: &RunTrace) -> Result<Vec<f64>> {
    trace
        .steps()
        .iter()
        .map_while(|s| s.momentum.as_ref().map(|m| (s, m)))
        .map(|(s, m)| obj.gradient(&s.x)?.distance(m))
        .collect()
}

/// Evaluates the bound along an NSGD-M trace. Rows hold when
/// `lhs <= rhs + 1e-9 (rhs + ‖∇F(x_t)‖)`.
pub fn momentum_deviation_bound(
    obj: &Objective,
    trace: &RunTrace,
    sigma: f64,
    form: DeviationForm,
) -> Result<Vec<DeviationRow>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be >= 0, got {sigma}")));
    }
    let lhs = deviation_lhs(obj, trace)?;
    let steps = &trace.steps()[..lhs.len()];
    let betas: Vec<f64> = steps.iter().map(|s| NsgdmConfig::beta(s.t)).collect();
    let etas: Vec<f64> = steps.iter().map(|s| s.eta).collect();
    let grads: Vec<f64> = steps.iter().map(|s| s.grad_norm).collect();
    let rhs = parts(&betas, &etas, &grads, obj.params, form)?;
    Ok(steps
        .iter()
        .zip(lhs)
        .zip(rhs)
        .map(|((s, l), (n, d))| {
            let r = sigma * n + d;
            DeviationRow { t: s.t, lhs: l, rhs: r, noise: sigma * n, drift: d, holds: l <= r + 1e-9 * (r + s.grad_norm) }
        })
        .collect())
}
