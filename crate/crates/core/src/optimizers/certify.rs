//! Post-hoc check of the one-step descent inequality of NSGD-M:
//!
//! `F(x_{t+1}) - F(x_t) <= -η_t‖∇F(x_t)‖ + 2η_t‖∇F(x_t) - m_t‖
//!     + (η_t²/2)(L0 B0(L1η_t) + L1 B1(L1η_t)‖∇F(x_t)‖)` for `t >= 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smoothness::{b0, b1};
use crate::testfns::Objective;
use crate::trace::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentRow {
    pub t: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub rows: Vec<DescentRow>,
    pub all_hold: bool,
    pub violations: usize,
}

/// Slack is `1e-9 (|rhs| + η_t‖∇F(x_t)‖ + |F(x_t)|)`, the size of the terms
/// being compared.
pub const DESCENT_TOL: f64 = 1e-9;

pub fn descent_lemma_check(obj: &Objective, trace: &RunTrace) -> Result<DescentReport> {
    let p = obj.params;
    let steps = trace.steps();
    let mut rows = Vec::new();
    for (i, s) in steps.iter().enumerate().skip(1) {
        let next_x = match steps.get(i + 1) {
            Some(n) => &n.x,
            None => match (&trace.final_x, &s.momentum) {
                (Some(x), Some(_)) => x,
                _ => break,
            },
        };
        let m = s.momentum.as_ref().ok_or_else(|| Error::domain(format!("step {} has no momentum", s.t)))?;
        let g = obj.gradient(&s.x)?;
        let gn = g.norm();
        let eta = s.eta;
        let c = p.l1 * eta;
        let f_t = obj.value(&s.x)?;
        let lhs = obj.value(next_x)? - f_t;
        let rhs = -eta * gn + 2.0 * eta * g.distance(m)? + 0.5 * eta * eta * (p.l0 * b0(c) + p.l1 * b1(c) * gn);
        let slack = DESCENT_TOL * (rhs.abs() + eta * gn + f_t.abs());
        rows.push(DescentRow { t: s.t, lhs, rhs, holds: lhs <= rhs + slack });
    }
    let violations = rows.iter().filter(|r| !r.holds).count();
    Ok(DescentReport { all_hold: violations == 0, violations, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OptimizerSpec;
    use crate::optimizers::{run_objective, NsgdmMode, RunOptions};
    use crate::smoothness::SmoothnessParams;
    use crate::testfns::{make_cosh, make_quadratic};

    fn nsgdm() -> OptimizerSpec {
        OptimizerSpec::Nsgdm { mode: NsgdmMode::Agnostic, eta: None }
    }

    #[test]
    fn holds_on_cosh() {
        let obj = make_cosh(1.0).unwrap();
        let tr = run_objective(&obj, &nsgdm(), &RunOptions::deterministic(300)).unwrap();
        let r = descent_lemma_check(&obj, &tr).unwrap();
        assert!(r.all_hold);
        assert_eq!(r.rows.len(), 299);
        assert_eq!(r.rows[0].t, 2);
    }

    #[test]
    fn detects_understated_constants() {
        let obj = make_quadratic(50.0, 1).unwrap();
        let tr = run_objective(&obj, &nsgdm(), &RunOptions::deterministic(300)).unwrap();
        let mut wrong = obj.clone();
        wrong.params = SmoothnessParams { l0: 0.0, l1: 0.0 };
        assert!(!descent_lemma_check(&wrong, &tr).unwrap().all_hold);
        assert!(descent_lemma_check(&obj, &tr).unwrap().all_hold);
    }
}
