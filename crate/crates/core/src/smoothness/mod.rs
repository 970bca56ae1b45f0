//! (L0,L1)-smoothness: kernels, the definitional inequality, the Hessian
//! criterion, the quadratic upper bound and the gradient/suboptimality bound.

mod certify;
mod kernels;

pub use certify::{certify_smoothness, SmoothnessCertificate};

pub use kernels::{kernel_a0, kernel_a1, kernel_b0, kernel_b1};
pub(crate) use kernels::{a0, a1, b0, b1};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testfns::Objective;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessParams {
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
}

impl SmoothnessParams {
    pub fn new(l0: f64, l1: f64) -> Result<Self> {
        if !(l0 >= 0.0 && l0.is_finite() && l1 >= 0.0 && l1.is_finite()) {
            return Err(Error::domain(format!("smoothness constants must be finite and >= 0, got ({l0}, {l1})")));
        }
        Ok(SmoothnessParams { l0, l1 })
    }
}

/// Both sides of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefinitionCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub c: f64,
    /// The same inequality at a larger `c`.
    pub spot: Check,
    pub spot_c: f64,
}

const DEF_TOL: f64 = 1e-9;

/// Evaluate `‖∇f(x) - ∇f(y)‖ <= (A0(c) L0 + A1(c) L1 ‖∇f(x)‖) ‖x - y‖`
/// with `c = L1 ‖x - y‖`.
pub fn check_definition(f: &Objective, x: &Vector, y: &Vector, params: SmoothnessParams) -> Result<DefinitionCheck> {
    let dist = x.distance(y)?;
    if dist == 0.0 {
        return Err(Error::domain("check_definition needs x != y"));
    }
    let gx = f.gradient(x)?;
    let gy = f.gradient(y)?;
    let lhs = gx.distance(&gy)?;
    let gnorm = gx.norm();
    let rhs_at = |c: f64| (a0(c) * params.l0 + a1(c) * params.l1 * gnorm) * dist;
    let c = params.l1 * dist;
    let rhs = rhs_at(c);
    let spot_c = if c > 0.0 { 2.0 * c } else { 1.0 };
    let spot_rhs = rhs_at(spot_c);
    let spot = Check {
        holds: lhs <= spot_rhs * (1.0 + DEF_TOL),
        lhs,
        rhs: spot_rhs,
    };
    let holds = lhs <= rhs * (1.0 + DEF_TOL);
    Ok(DefinitionCheck {
        holds: holds && spot.holds,
        lhs,
        rhs,
        c,
        spot,
        spot_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianCheck {
    pub holds: bool,
    pub hessian_norm: f64,
    pub bound: f64,
    pub analytic: bool,
}

pub const MAX_DENSE_DIM: usize = 64;
const HESS_TOL: f64 = 1e-4;

/// `‖∇²f(x)‖ <= L0 + L1 ‖∇f(x)‖`, spectral norm, analytic Hessian when the
/// objective has one and central differences of the gradient otherwise.
pub fn check_hessian_equivalence(f: &Objective, x: &Vector, params: SmoothnessParams) -> Result<HessianCheck> {
    let d = f.dim();
    if d > MAX_DENSE_DIM {
        return Err(Error::Unsupported(format!("dense Hessian for d = {d} > {MAX_DENSE_DIM}")));
    }
    let (h, analytic) = match f.hessian(x)? {
        Some(h) => (h, true),
        None => (fd_hessian(f, x)?, false),
    };
    let hessian_norm = spectral_norm(h);
    let bound = params.l0 + params.l1 * f.gradient(x)?.norm();
    Ok(HessianCheck {
        holds: hessian_norm <= bound + HESS_TOL * bound.max(1.0),
        hessian_norm,
        bound,
        analytic,
    })
}

/// Central-difference Hessian from gradients, step `1e-5 (1 + ‖x‖)`.
pub fn fd_hessian(f: &Objective, x: &Vector) -> Result<DMatrix<f64>> {
    let d = x.dim();
    let h = 1e-5 * (1.0 + x.norm());
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let mut xp = x.as_slice().to_vec();
        let mut xm = xp.clone();
        xp[j] += h;
        xm[j] -= h;
        let gp = f.gradient(&Vector::new(xp)?)?;
        let gm = f.gradient(&Vector::new(xm)?)?;
        for i in 0..d {
            m[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    Ok((&m + m.transpose()) * 0.5)
}

fn spectral_norm(h: DMatrix<f64>) -> f64 {
    if h.nrows() == 1 {
        return h[(0, 0)].abs();
    }
    SymmetricEigen::new(h).eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()))
}

/// `f(x) + ∇f(x)ᵀ(y - x) + ½ (B0(c) L0 + B1(c) L1 ‖∇f(x)‖) ‖x - y‖²`
pub fn descent_upper_bound(f: &Objective, x: &Vector, y: &Vector, params: SmoothnessParams) -> Result<f64> {
    let fx = f.value(x)?;
    let gx = f.gradient(x)?;
    let diff = y.sub(x)?;
    let dist = diff.norm();
    let c = params.l1 * dist;
    let curv = b0(c) * params.l0 + b1(c) * params.l1 * gx.norm();
    Ok(fx + gx.dot(&diff)? + 0.5 * curv * dist * dist)
}

/// `min(‖∇f‖/L1, ‖∇f‖²/L0) <= 8 (f(x) - f*)`. A zero constant makes its
/// term infinite.
pub fn gradient_bound_check(f: &Objective, x: &Vector, f_star: f64, params: SmoothnessParams) -> Result<Check> {
    if params.l0 == 0.0 && params.l1 == 0.0 {
        return Err(Error::domain("gradient bound needs L0 > 0 or L1 > 0"));
    }
    let fx = f.value(x)?;
    if fx < f_star {
        return Err(Error::InconsistentInfimum { value: fx, f_star });
    }
    let g = f.gradient(x)?.norm();
    let t1 = if params.l1 > 0.0 { g / params.l1 } else { f64::INFINITY };
    let t0 = if params.l0 > 0.0 { g * g / params.l0 } else { f64::INFINITY };
    let lhs = t0.min(t1);
    let rhs = 8.0 * (fx - f_star);
    Ok(Check {
        holds: lhs <= rhs + 1e-12,
        lhs,
        rhs,
    })
}

/// `8 L1 Δ1 + min(L0/L1, √(8 L0 Δ1))`
pub fn initial_grad_norm_bound(delta1: f64, params: SmoothnessParams) -> Result<f64> {
    if !(delta1 >= 0.0) {
        return Err(Error::domain(format!("delta1 must be >= 0, got {delta1}")));
    }
    let ratio = if params.l1 > 0.0 { params.l0 / params.l1 } else { f64::INFINITY };
    Ok(8.0 * params.l1 * delta1 + ratio.min((8.0 * params.l0 * delta1).sqrt()))
}
