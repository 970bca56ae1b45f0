use std::collections::BTreeMap;
use std::f64::consts::E;

use super::{ln0, log_a1, BoundKind, BoundReport};
use crate::error::{Error, Result};
use crate::logspace::log_sum_exp;

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn horizon_at_least(t: f64, min: f64) -> Result<()> {
    if t >= min && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("T must be >= {min}, got {t}")))
    }
}

fn consts(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// `⌈(12 η L1)⁴⌉`, the iteration after which `η_t L1 <= 1/12`.
pub fn adaptation_threshold(eta: f64, l1: f64) -> f64 {
    (12.0 * eta * l1).powi(4).ceil()
}

/// Bound on `Σ_{t<=T} (η_t/2) E‖∇F(x_t)‖` for NSGD-M with `η_t = η t^{-3/4}`:
///
/// `Δ1 + ησ(7 + 2√(2e²) log T) + η²L0(45 A1(ηL1) + 14 log T)
///  + 21 η² L0 e^{48(ηL1)²} + 6 η e^{48(ηL1)²} ‖∇F(x_1)‖`,
///
/// where for `ηL1 >= 1/2` the last term may be replaced by
/// `e^{48(ηL1)²} ‖∇F(x_1)‖ / L1`; the smaller of the two is used.
pub fn nsgdm_sum_bound(
    t: f64,
    delta1: f64,
    sigma: f64,
    l0: f64,
    l1: f64,
    eta: f64,
    grad_norm_x1: f64,
) -> Result<BoundReport> {
    horizon_at_least(t, 1.0)?;
    nonneg("delta1", delta1)?;
    nonneg("sigma", sigma)?;
    nonneg("L0", l0)?;
    nonneg("L1", l1)?;
    positive("eta", eta)?;
    nonneg("grad_norm_x1", grad_norm_x1)?;
    let x = eta * l1;
    let log_t = t.ln();
    let log_exp = 48.0 * x * x;
    let noise = ln0(eta * sigma * (7.0 + 2.0 * (2.0 * E * E).sqrt() * log_t));
    let curvature = ln0(eta * eta * l0) + log_sum_exp([45f64.ln() + log_a1(x), ln0(14.0 * log_t)]);
    let exp_l0 = ln0(21.0 * eta * eta * l0) + log_exp;
    let mut init = ln0(6.0 * eta * grad_norm_x1) + log_exp;
    let large_step = x >= 0.5;
    if large_step {
        init = init.min(ln0(grad_norm_x1) + log_exp - l1.ln());
    }
    let log_value = log_sum_exp([ln0(delta1), noise, curvature, exp_l0, init]);
    let c = consts(&[
        ("T", t),
        ("delta1", delta1),
        ("sigma", sigma),
        ("L0", l0),
        ("L1", l1),
        ("eta", eta),
        ("grad_norm_x1", grad_norm_x1),
        ("t0", adaptation_threshold(eta, l1)),
        ("log_exp_factor", log_exp),
        ("large_step_variant", if large_step { 1.0 } else { 0.0 }),
        ("log_term_noise", noise),
        ("log_term_curvature", curvature),
        ("log_term_exp_L0", exp_l0),
        ("log_term_initial_gradient", init),
    ]);
    Ok(BoundReport::from_log(BoundKind::NsgdmSum, log_value, c))
}

/// Bound on `(1/T) Σ E‖∇F(x_t)‖` for NSGD-M with `η = 1/7`. For `L1 >= 7/2`
/// the better of the two available forms is returned.
pub fn nsgdm_avg_bound_agnostic(t: f64, delta1: f64, sigma: f64, l0: f64, l1: f64) -> Result<BoundReport> {
    horizon_at_least(t, 2.0)?;
    nonneg("delta1", delta1)?;
    nonneg("sigma", sigma)?;
    nonneg("L0", l0)?;
    nonneg("L1", l1)?;
    let log_t = t.ln();
    let sq = l1 * l1;
    let noise = ln0(12.0 * E * log_t * sigma);
    let min_term = if l1 > 0.0 { (l0 / l1).min((8.0 * l0 * delta1).sqrt()) } else { (8.0 * l0 * delta1).sqrt() };
    let general = log_sum_exp([
        ln0(delta1) + log_sum_exp([14f64.ln(), (96.0 * l1).ln() + sq]),
        ln0(l0) + log_sum_exp([14f64.ln() + l1 / 7.0, (9.0 * log_t).ln(), 2f64.ln() + sq]),
        noise,
        6f64.ln() + sq + ln0(min_term),
    ]) - 0.25 * log_t;
    let mut log_value = general;
    let mut c = consts(&[
        ("T", t),
        ("delta1", delta1),
        ("sigma", sigma),
        ("L0", l0),
        ("L1", l1),
        ("eta", 1.0 / 7.0),
        ("t0", adaptation_threshold(1.0 / 7.0, l1)),
        ("log_general", general),
    ]);
    if l1 >= 3.5 {
        let large = log_sum_exp([
            126f64.ln() + sq + ln0(delta1),
            noise,
            ln0(l0) + log_sum_exp([4f64.ln() + sq, (9.0 * log_t).ln()]),
        ]) - 0.25 * log_t;
        c.insert("log_large_L1".into(), large);
        log_value = log_value.min(large);
    }
    Ok(BoundReport::from_log(BoundKind::NsgdmAgnostic, log_value, c))
}

/// Bound on `(1/T) Σ E‖∇F(x_t)‖` for NSGD-M with `η = 1/(12 L1)`:
/// `(24 L1 Δ1 + (14 + 4√(2e²) log T) σ + (10 + 4 log T) L0/L1) / T^{1/4}`.
pub fn nsgdm_avg_bound_informed(t: f64, delta1: f64, sigma: f64, l0: f64, l1: f64) -> Result<BoundReport> {
    horizon_at_least(t, 2.0)?;
    nonneg("delta1", delta1)?;
    nonneg("sigma", sigma)?;
    nonneg("L0", l0)?;
    if !(l1 > 0.0 && l1.is_finite()) {
        return Err(Error::domain(format!("informed stepsize needs L1 > 0, got {l1}")));
    }
    let log_t = t.ln();
    let num = 24.0 * l1 * delta1
        + (14.0 + 4.0 * (2.0 * E * E).sqrt() * log_t) * sigma
        + (10.0 + 4.0 * log_t) * l0 / l1;
    let log_value = ln0(num) - 0.25 * log_t;
    let c = consts(&[
        ("T", t),
        ("delta1", delta1),
        ("sigma", sigma),
        ("L0", l0),
        ("L1", l1),
        ("eta", 1.0 / (12.0 * l1)),
        ("t0", 1.0),
    ]);
    Ok(BoundReport::from_log(BoundKind::NsgdmInformed, log_value, c))
}

/// Bound on `(1/T) Σ ‖∇F(x_t)‖²` for backtracking gradient descent:
/// `(4 L0 Δ1 + 14 L1² Δ1²) / (β γ (1-γ) T)`.
pub fn backtracking_bound(t: f64, delta1: f64, l0: f64, l1: f64, beta: f64, gamma: f64) -> Result<BoundReport> {
    horizon_at_least(t, 1.0)?;
    nonneg("delta1", delta1)?;
    nonneg("L0", l0)?;
    nonneg("L1", l1)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must lie in (0,1), got {beta}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("gamma must lie in (0,1), got {gamma}")));
    }
    let num = 4.0 * l0 * delta1 + 14.0 * l1 * l1 * delta1 * delta1;
    let log_value = ln0(num) - (beta * gamma * (1.0 - gamma) * t).ln();
    let c = consts(&[("T", t), ("delta1", delta1), ("L0", l0), ("L1", l1), ("beta", beta), ("gamma", gamma)]);
    Ok(BoundReport::from_log(BoundKind::Backtracking, log_value, c))
}

/// Iterations a normalized momentum method with `η_t = η t^{-α}` needs on
/// the hard instance before reaching `‖∇F‖ <= ε`:
///
/// `((1-α)/2)^{1/(1-α)} (Δ1/η + (2/(ηL1))(e^{ηL1/4} - 1))^{1/(1-α)} ε^{-1/(1-α)}`.
pub fn lower_bound_iterations(eps: f64, eta: f64, alpha: f64, delta1: f64, l1: f64) -> Result<BoundReport> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    positive("eta", eta)?;
    positive("L1", l1)?;
    if !(delta1 >= 0.25 && delta1.is_finite()) {
        return Err(Error::domain(format!("delta1 must be >= 1/4, got {delta1}")));
    }
    let k = 1.0 / (1.0 - alpha);
    // (2/(ηL1))(e^{ηL1/4} - 1) = A1(ηL1/4)/2
    let log_height = log_sum_exp([(delta1 / eta).ln(), log_a1(eta * l1 / 4.0) - 2f64.ln()]);
    let log_value = k * (((1.0 - alpha) / 2.0).ln() + log_height - eps.ln());
    let c = consts(&[
        ("eps", eps),
        ("eta", eta),
        ("alpha", alpha),
        ("delta1", delta1),
        ("L1", l1),
        ("exponent", k),
        ("log_height", log_height),
    ]);
    Ok(BoundReport::from_log(BoundKind::LowerBound, log_value, c))
}
