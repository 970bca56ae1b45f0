//! One-dimensional hard instance for normalized momentum methods with
//! diminishing steps `η/t^α`.
//!
//! Starting from 0 the derivative is −1, so the first step lands exactly on
//! `η`. Between `z1` and `η − z1` the function climbs exponentially, which
//! pushes the height `C` up to `Δ1 + (2/L1)(e^{L1(η/2 − z1)} − 1)`. Past `η`
//! the derivative settles on a plateau of slope `−2ε` that is `C/(2ε)` long,
//! then ramps linearly to zero at `z4`, after which the function is constant.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{FStar, Function, Objective};
use crate::error::{Error, Result};
use crate::smoothness::SmoothnessParams;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardVariant {
    /// Plateau length uses `C`.
    #[default]
    FullHeight,
    /// Plateau length uses `M = Δ1 + (2/L1)(e^{ηL1/4} − 1)`.
    ReducedHeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardParams {
    pub eps: f64,
    pub eta: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub delta1: f64,
    #[serde(default)]
    pub variant: HardVariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    pub params: HardParams,
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
    pub c: f64,
    /// Constant value for `x >= z4`; the minimum of the function.
    pub f_end: f64,
    /// How far `z3` was moved left to keep the function nonnegative.
    pub z3_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceExport {
    pub eps: f64,
    pub eta: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub delta1: f64,
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl HardInstance {
    pub fn new(p: HardParams) -> Result<Self> {
        let HardParams { eps, eta, l0, l1, delta1, variant } = p;
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Construction(format!("need eta > 0, got {eta}")));
        }
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::Construction(format!("need 0 < eps < 1/2, got {eps}")));
        }
        if !(delta1 >= 0.25 && delta1.is_finite()) {
            return Err(Error::Construction(format!("need delta1 >= 1/4, got {delta1}")));
        }
        if !(l0 >= 8.0 / eta && l0.is_finite()) {
            return Err(Error::Construction(format!("need L0 >= 8/eta = {}, got {l0}", 8.0 / eta)));
        }
        if !(l1 > 0.0 && l1.is_finite()) {
            return Err(Error::Construction(format!("need L1 > 0, got {l1}")));
        }
        let z1 = 2.0 / l0;
        let z2 = eta - z1 + (1.0 + 2.0 * eps) / l0;
        let c = delta1 + 2.0 / l1 * (l1 * (eta / 2.0 - z1)).exp_m1();
        let z = match variant {
            HardVariant::FullHeight => c,
            HardVariant::ReducedHeight => delta1 + 2.0 / l1 * (eta * l1 / 4.0).exp_m1(),
        };
        let mut z3 = eta + z / (2.0 * eps);
        let mut f_end = c - z + (1.0 - 4.0 * eps) / (2.0 * l0);
        let mut z3_shift = 0.0;
        if f_end < 0.0 {
            // Shorten the plateau so the function bottoms out at exactly 0.
            z3_shift = -f_end / (2.0 * eps);
            z3 -= z3_shift;
            f_end = 0.0;
        }
        let z4 = z3 + 2.0 * eps / l0;
        if !(z3 > z2) {
            return Err(Error::Construction(format!("plateau collapsed: z3 = {z3} <= z2 = {z2}")));
        }
        if !z4.is_finite() || !c.is_finite() {
            return Err(Error::Construction("height constant overflows".into()));
        }
        Ok(HardInstance { params: p, z1, z2, z3, z4, c, f_end, z3_shift })
    }

    /// Knots in increasing order: `0, z1, η/2, η − z1, z2, z3, z4`.
    pub fn knots(&self) -> [f64; 7] {
        let eta = self.params.eta;
        [0.0, self.z1, eta / 2.0, eta - self.z1, self.z2, self.z3, self.z4]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let HardParams { eps, eta, l0, l1, .. } = self.params;
        if x < 0.0 {
            -1.0
        } else if x < self.z1 {
            l0 * x - 1.0
        } else if x < eta / 2.0 {
            (l1 * (x - self.z1)).exp()
        } else if x < eta - self.z1 {
            (l1 * (eta - self.z1 - x)).exp()
        } else if x < self.z2 {
            l0 * (eta - x) - 1.0
        } else if x < self.z3 {
            -2.0 * eps
        } else if x < self.z4 {
            l0 * (x - self.z3) - 2.0 * eps
        } else {
            0.0
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let HardParams { eta, l0, l1, .. } = self.params;
        if x < 0.0 {
            0.0
        } else if x < self.z1 {
            l0
        } else if x < eta / 2.0 {
            l1 * (l1 * (x - self.z1)).exp()
        } else if x < eta - self.z1 {
            -l1 * (l1 * (eta - self.z1 - x)).exp()
        } else if x < self.z2 {
            -l0
        } else if x < self.z3 {
            0.0
        } else if x < self.z4 {
            l0
        } else {
            0.0
        }
    }

    /// Closed-form antiderivative. Pieces left of `z2` are anchored at 0,
    /// pieces right of it at `z4`.
    pub fn value(&self, x: f64) -> f64 {
        let HardParams { eps, eta, l0, l1, delta1, .. } = self.params;
        if x < 0.0 {
            delta1 - x
        } else if x < self.z1 {
            delta1 + 0.5 * l0 * x * x - x
        } else if x < eta / 2.0 {
            delta1 + (l1 * (x - self.z1)).exp_m1() / l1
        } else if x < eta - self.z1 {
            self.c - (l1 * (eta - self.z1 - x)).exp_m1() / l1
        } else if x < self.z2 {
            let u = eta - x;
            self.c + u - 0.5 * l0 * u * u
        } else if x < self.z3 {
            self.f_end + 2.0 * eps * eps / l0 + 2.0 * eps * (self.z3 - x)
        } else if x < self.z4 {
            let u = self.z4 - x;
            self.f_end + 0.5 * l0 * u * u
        } else {
            self.f_end
        }
    }

    pub fn export(&self) -> HardInstanceExport {
        let p = self.params;
        HardInstanceExport {
            eps: p.eps,
            eta: p.eta,
            l0: p.l0,
            l1: p.l1,
            delta1: p.delta1,
            z1: self.z1,
            z2: self.z2,
            z3: self.z3,
            z4: self.z4,
            c: self.c,
        }
    }
}

impl Function for HardInstance {
    fn value(&self, x: &[f64]) -> f64 {
        HardInstance::value(self, x[0])
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.derivative(x[0])]
    }
    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_element(1, 1, self.second_derivative(x[0])))
    }
}

/// Build the instance and wrap it as an objective starting at 0, with
/// declared constants `(L0, L1)` and minimum `f_end`.
pub fn make_hard_instance(p: HardParams) -> Result<(Arc<HardInstance>, Objective)> {
    let h = Arc::new(HardInstance::new(p)?);
    let mut obj = Objective::new(
        "hard",
        h.clone(),
        1,
        SmoothnessParams::new(p.l0, p.l1)?,
        FStar::Attained(h.f_end),
        Vector::scalar(0.0)?,
    )?
    .with_sample_range(-1.0, h.z4 + 1.0);
    obj.kinks = h.knots().to_vec();
    Ok((h, obj))
}
