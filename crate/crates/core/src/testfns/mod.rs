//! Synthetic objectives with declared smoothness constants and infima.

mod hard;

pub use hard::{make_hard_instance, HardInstance, HardInstanceExport, HardParams, HardVariant};

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::smoothness::SmoothnessParams;
use crate::vector::Vector;

/// Raw evaluators. Inputs always have the objective's dimension.
pub trait Function: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, _x: &[f64]) -> Option<DMatrix<f64>> {
        None
    }
}

/// Declared lower bound of an objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum FStar {
    Attained(f64),
    /// Infimum that no point reaches.
    NotAttained(f64),
    NegInfinity,
}

impl FStar {
    pub fn value(&self) -> Option<f64> {
        match *self {
            FStar::Attained(v) | FStar::NotAttained(v) => Some(v),
            FStar::NegInfinity => None,
        }
    }
}

#[derive(Clone)]
pub struct Objective {
    pub name: String,
    func: Arc<dyn Function>,
    dim: usize,
    pub params: SmoothnessParams,
    pub f_star: FStar,
    /// Canonical starting point.
    pub x1: Vector,
    /// Per-coordinate box used for random test points.
    pub sample_range: (f64, f64),
    /// Points where a 1-d objective is only piecewise smooth.
    pub kinks: Vec<f64>,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("params", &self.params)
            .field("f_star", &self.f_star)
            .field("x1", &self.x1)
            .finish()
    }
}

impl Objective {
    pub fn new(
        name: impl Into<String>,
        func: Arc<dyn Function>,
        dim: usize,
        params: SmoothnessParams,
        f_star: FStar,
        x1: Vector,
    ) -> Result<Self> {
        if x1.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x1.dim() });
        }
        Ok(Objective {
            name: name.into(),
            func,
            dim,
            params,
            f_star,
            x1,
            sample_range: (-3.0, 3.0),
            kinks: Vec::new(),
        })
    }

    /// Objective from plain closures, without a Hessian. Starts at the origin.
    pub fn from_fns(
        name: impl Into<String>,
        dim: usize,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        params: SmoothnessParams,
        f_star: f64,
    ) -> Result<Self> {
        struct Closures<V, G>(V, G);
        impl<V, G> Function for Closures<V, G>
        where
            V: Fn(&[f64]) -> f64 + Send + Sync,
            G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
        {
            fn value(&self, x: &[f64]) -> f64 {
                (self.0)(x)
            }
            fn gradient(&self, x: &[f64]) -> Vec<f64> {
                (self.1)(x)
            }
        }
        Objective::new(
            name,
            Arc::new(Closures(value, gradient)),
            dim,
            params,
            FStar::Attained(f_star),
            Vector::zeros(dim)?,
        )
    }

    pub fn with_x1(mut self, x1: Vector) -> Result<Self> {
        if x1.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x1.dim() });
        }
        self.x1 = x1;
        Ok(self)
    }

    pub fn with_sample_range(mut self, lo: f64, hi: f64) -> Self {
        self.sample_range = (lo, hi);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        Ok(())
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        let v = self.func.value(x.as_slice());
        if !v.is_finite() {
            return Err(Error::Evaluation { what: "value", at: x.as_slice().to_vec() });
        }
        Ok(v)
    }

    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        let g = self.func.gradient(x.as_slice());
        Vector::new(g).map_err(|_| Error::Evaluation { what: "gradient", at: x.as_slice().to_vec() })
    }

    pub fn hessian(&self, x: &Vector) -> Result<Option<DMatrix<f64>>> {
        self.check_dim(x)?;
        match self.func.hessian(x.as_slice()) {
            Some(h) if h.iter().all(|v| v.is_finite()) => Ok(Some(h)),
            Some(_) => Err(Error::Evaluation { what: "hessian", at: x.as_slice().to_vec() }),
            None => Ok(None),
        }
    }

    /// `F(x1) - f*`, when the infimum is finite.
    pub fn delta1(&self) -> Result<Option<f64>> {
        let f1 = self.value(&self.x1)?;
        Ok(self.f_star.value().map(|s| f1 - s))
    }
}

struct Quadratic {
    l: f64,
}

impl Function for Quadratic {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.l * x.iter().map(|v| v * v).sum::<f64>()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| self.l * v).collect()
    }
    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::identity(x.len(), x.len()) * self.l)
    }
}

/// `(L/2)‖x‖²`, declared `(L, 0)`, minimum 0 at the origin, start at all ones.
pub fn make_quadratic(l: f64, d: usize) -> Result<Objective> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::domain(format!("quadratic curvature must be > 0, got {l}")));
    }
    Ok(Objective::new(
        "quadratic",
        Arc::new(Quadratic { l }),
        d,
        SmoothnessParams::new(l, 0.0)?,
        FStar::Attained(0.0),
        Vector::filled(d, 1.0)?,
    )?
    .with_sample_range(-5.0, 5.0))
}

struct Cosh {
    a: f64,
}

impl Function for Cosh {
    fn value(&self, x: &[f64]) -> f64 {
        2.0 * (self.a * x[0]).cosh() / self.a
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![2.0 * (self.a * x[0]).sinh()]
    }
    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_element(1, 1, 2.0 * self.a * (self.a * x[0]).cosh()))
    }
}

/// `2 cosh(a x)/a` in one dimension, declared `(2a, a)`, minimum `2/a` at 0,
/// start at `x1 = 3`.
pub fn make_cosh(a: f64) -> Result<Objective> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("cosh scale must be > 0, got {a}")));
    }
    Ok(Objective::new(
        "cosh",
        Arc::new(Cosh { a }),
        1,
        SmoothnessParams::new(2.0 * a, a)?,
        FStar::Attained(2.0 / a),
        Vector::scalar(3.0)?,
    )?
    .with_sample_range(-3.0, 3.0))
}

struct Exp1d;

impl Function for Exp1d {
    fn value(&self, x: &[f64]) -> f64 {
        x[0].exp()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0].exp()]
    }
    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_element(1, 1, x[0].exp()))
    }
}

/// `e^x`, declared `(0, 1)`; the infimum 0 is not attained.
pub fn make_exp1d() -> Objective {
    Objective::new(
        "exp1d",
        Arc::new(Exp1d),
        1,
        SmoothnessParams { l0: 0.0, l1: 1.0 },
        FStar::NotAttained(0.0),
        Vector::scalar(0.0).expect("finite"),
    )
    .expect("dimensions agree")
    .with_sample_range(-5.0, 5.0)
}

struct Quartic;

impl Function for Quartic {
    fn value(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        0.25 * r2 * r2
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        x.iter().map(|v| r2 * v).collect()
    }
    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        let d = x.len();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Some(DMatrix::from_fn(d, d, |i, j| 2.0 * x[i] * x[j] + if i == j { r2 } else { 0.0 }))
    }
}

/// `‖x‖⁴/4`, declared `(4, 1)`: with `r = ‖x‖` the Hessian norm `3r²` never
/// exceeds `4 + r³`. Minimum 0 at the origin, start at all ones.
pub fn make_quartic(d: usize) -> Result<Objective> {
    Ok(Objective::new(
        "quartic",
        Arc::new(Quartic),
        d,
        SmoothnessParams::new(4.0, 1.0)?,
        FStar::Attained(0.0),
        Vector::filled(d, 1.0)?,
    )?)
}

/// Worst relative error `‖g_fd - g‖ / max(‖g‖, 1)` between the analytic
/// gradient and central differences over `trials` random points. For 1-d
/// objectives, points within 1e-3 of a kink are skipped.
pub fn finite_diff_gradient_check(f: &Objective, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::domain("finite_diff_gradient_check needs trials >= 1"));
    }
    let mut rng = seeded_rng(seed);
    let (lo, hi) = f.sample_range;
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < trials {
        let x: Vec<f64> = (0..f.dim()).map(|_| rng.random_range(lo..hi)).collect();
        if f.dim() == 1 && f.kinks.iter().any(|k| (x[0] - k).abs() < 1e-3) {
            continue;
        }
        let xv = Vector::new(x.clone())?;
        let g = f.gradient(&xv)?;
        let mut fd = Vec::with_capacity(f.dim());
        for i in 0..f.dim() {
            let h = 6e-6 * (1.0 + x[i].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            fd.push((f.value(&Vector::new(xp)?)? - f.value(&Vector::new(xm)?)?) / (2.0 * h));
        }
        let err = Vector::new(fd)?.distance(&g)? / g.norm().max(1.0);
        worst = worst.max(err);
        done += 1;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothness::{check_definition, check_hessian_equivalence};

    fn v(x: f64) -> Vector {
        Vector::scalar(x).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let q = make_quadratic(1.0, 2).unwrap();
        let x = Vector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(q.value(&x).unwrap(), 1.0);
        assert_eq!(q.gradient(&x).unwrap(), x);
        assert!(q.gradient(&Vector::zeros(2).unwrap()).unwrap().is_zero());
        assert!(make_quadratic(0.0, 2).is_err());
    }

    #[test]
    fn cosh_examples() {
        let c = make_cosh(1.0).unwrap();
        assert_eq!(c.value(&v(0.0)).unwrap(), 2.0);
        assert_eq!(c.gradient(&v(0.0)).unwrap()[0], 0.0);
        for x in [-2.0, -1e-3, 1e-3, 0.5, 3.0] {
            assert!(c.value(&v(x)).unwrap() - 2.0 > 0.0);
        }
        assert_eq!(c.params, SmoothnessParams { l0: 2.0, l1: 1.0 });
        let c3 = make_cosh(3.0).unwrap();
        assert_eq!(c3.f_star, FStar::Attained(2.0 / 3.0));
    }

    #[test]
    fn exp1d_examples() {
        let e = make_exp1d();
        assert_eq!(e.value(&v(0.0)).unwrap(), 1.0);
        assert_eq!(e.gradient(&v(0.0)).unwrap()[0], 1.0);
        assert_eq!(e.f_star, FStar::NotAttained(0.0));
        let r = check_hessian_equivalence(&e, &v(-1.3), e.params).unwrap();
        assert_eq!(r.hessian_norm, r.bound);
    }

    #[test]
    fn quartic_hessian_matches_fd() {
        let q = make_quartic(3).unwrap();
        let x = Vector::new(vec![0.7, -1.1, 0.2]).unwrap();
        let h = q.hessian(&x).unwrap().unwrap();
        let fd = crate::smoothness::fd_hessian(&q, &x).unwrap();
        assert!((h - fd).amax() < 1e-7);
    }

    #[test]
    fn overflow_is_evaluation_error() {
        let c = make_cosh(1.0).unwrap();
        assert!(matches!(c.value(&v(800.0)), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn dimension_checked() {
        let q = make_quadratic(1.0, 2).unwrap();
        assert!(matches!(q.value(&v(1.0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn finite_difference_thresholds() {
        assert!(finite_diff_gradient_check(&make_quadratic(3.0, 4).unwrap(), 200, 1).unwrap() < 1e-9);
        for a in [0.5, 1.0, 2.0] {
            assert!(finite_diff_gradient_check(&make_cosh(a).unwrap(), 200, 2).unwrap() < 1e-6);
        }
        assert!(finite_diff_gradient_check(&make_exp1d(), 200, 3).unwrap() < 1e-6);
        assert!(finite_diff_gradient_check(&make_quartic(3).unwrap(), 200, 4).unwrap() < 1e-6);
    }

    #[test]
    fn suite_satisfies_definition_and_infimum() {
        let suite = [
            make_quadratic(2.0, 2).unwrap(),
            make_cosh(1.0).unwrap(),
            make_cosh(2.0).unwrap(),
            make_exp1d(),
            make_quartic(2).unwrap(),
        ];
        for f in &suite {
            let mut rng = seeded_rng(99);
            let (lo, hi) = f.sample_range;
            for _ in 0..10_000 {
                let x = Vector::new((0..f.dim()).map(|_| rng.random_range(lo..hi)).collect()).unwrap();
                let y = Vector::new((0..f.dim()).map(|_| rng.random_range(lo..hi)).collect()).unwrap();
                let r = check_definition(f, &x, &y, f.params).unwrap();
                assert!(r.holds, "{}: {x:?} {y:?} {r:?}", f.name);
                assert!(f.value(&x).unwrap() >= f.f_star.value().unwrap());
            }
        }
    }
}
