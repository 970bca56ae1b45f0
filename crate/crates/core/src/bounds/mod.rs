//! Closed-form complexity bounds, numerical verifiers for the technical
//! summation lemmas, and the momentum-deviation bound evaluated on traces.

mod deviation;
mod lemmas;
mod rates;

use std::collections::BTreeMap;

use serde::Serialize;

pub use deviation::{deviation_lhs, deviation_rhs, momentum_deviation_bound, DeviationForm, DeviationRow};
pub use lemmas::{
    default_explicit_grid, default_general_grid, tech_lemma_explicit, tech_lemma_explicit_with, tech_lemma_general,
    ExplicitGrid, ExplicitPart, ExplicitPoint, GeneralGrid, GeneralPart, GeneralPoint, LemmaCheck, Route,
    DIRECT_ROUTE_MAX_T, LEMMA_TOL,
};
pub use rates::{
    adaptation_threshold, backtracking_bound, lower_bound_iterations, nsgdm_avg_bound_agnostic,
    nsgdm_avg_bound_informed, nsgdm_sum_bound,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Bound on `Σ (η_t/2) E‖∇F(x_t)‖` for NSGD-M with any base stepsize.
    NsgdmSum,
    NsgdmAgnostic,
    NsgdmInformed,
    Backtracking,
    LowerBound,
}

/// A bound together with the constants it was computed from. `value` is
/// `exp(log_value)` and is infinite when that overflows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub log_value: f64,
    pub overflow: bool,
    pub constants: BTreeMap<String, f64>,
}

impl BoundReport {
    fn from_log(kind: BoundKind, log_value: f64, constants: BTreeMap<String, f64>) -> Self {
        let value = log_value.exp();
        BoundReport { kind, value, log_value, overflow: value.is_infinite(), constants }
    }

    /// `x <= bound`, compared in log space when the bound overflows.
    pub fn dominates(&self, x: f64) -> bool {
        if self.overflow {
            x <= 0.0 || x.ln() <= self.log_value
        } else {
            x <= self.value
        }
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}

/// `ln x` with `ln 0 = -inf`.
pub(crate) fn ln0(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// `ln A1(c)` for `c >= 0` without overflow.
pub(crate) fn log_a1(c: f64) -> f64 {
    if c <= 1.0 {
        crate::smoothness::a1(c).ln()
    } else {
        c + (-(-c).exp_m1()).ln() - c.ln()
    }
}
