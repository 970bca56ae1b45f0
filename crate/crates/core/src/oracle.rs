//! Stochastic gradient oracle with unbiased, bounded-variance noise.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{seeded_rng, Rng};
use crate::testfns::Objective;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// Isotropic Gaussian with per-component deviation `σ/√d`.
    #[default]
    Gaussian,
    /// Uniform direction on the sphere of radius `σ`.
    Sphere,
}

/// One oracle draw. `true_grad` is instrumentation only.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub g: Vector,
    pub true_grad: Vector,
    /// Zero-based index of this draw in the oracle's stream.
    pub draw: u64,
}

pub struct NoisyOracle {
    objective: Objective,
    sigma: f64,
    kind: NoiseKind,
    rng: Rng,
    draws: u64,
}

impl NoisyOracle {
    pub fn new(objective: Objective, sigma: f64, kind: NoiseKind, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("noise sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(NoisyOracle {
            objective,
            sigma,
            kind,
            rng: seeded_rng(seed),
            draws: 0,
        })
    }

    pub fn deterministic(objective: Objective) -> Self {
        NoisyOracle::new(objective, 0.0, NoiseKind::Gaussian, 0).expect("sigma 0 is valid")
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sample(&mut self, x: &Vector) -> Result<OracleSample> {
        let true_grad = self.objective.gradient(x)?;
        let draw = self.draws;
        self.draws += 1;
        if self.sigma == 0.0 {
            return Ok(OracleSample { g: true_grad.clone(), true_grad, draw });
        }
        let d = x.dim();
        let z: Vec<f64> = (0..d).map(|_| self.rng.sample::<f64, _>(StandardNormal)).collect();
        let noise = match self.kind {
            NoiseKind::Gaussian => {
                let s = self.sigma / (d as f64).sqrt();
                z.into_iter().map(|v| s * v).collect::<Vec<f64>>()
            }
            NoiseKind::Sphere => {
                let n = crate::vector::norm(&z);
                if n == 0.0 {
                    // Probability zero; fall back to a fixed direction.
                    let mut e = vec![0.0; d];
                    e[0] = self.sigma;
                    e
                } else {
                    z.into_iter().map(|v| self.sigma * v / n).collect()
                }
            }
        };
        let g = true_grad.axpy(1.0, &Vector::new(noise)?)?;
        Ok(OracleSample { g, true_grad, draw })
    }
}

/// Sample moments of the oracle noise `ξ = g - ∇F(x)` at a fixed point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseStats {
    pub n: usize,
    /// Largest `|mean(ξ_i)| / (sd(ξ_i)/√n)` over components.
    pub max_mean_z: f64,
    pub mean_sq_norm: f64,
    /// `|mean ‖ξ‖² - σ²| / (sd(‖ξ‖²)/√n)`; zero when the spread vanishes and
    /// the mean matches within rounding.
    pub sq_norm_z: f64,
}

impl NoiseStats {
    /// Both statistics within `z` standard errors.
    pub fn within(&self, z: f64) -> bool {
        self.max_mean_z <= z && self.sq_norm_z <= z
    }
}

/// Draws `n` samples at `x` and summarises their noise.
pub fn noise_stats(oracle: &mut NoisyOracle, x: &Vector, n: usize) -> Result<NoiseStats> {
    if n < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let d = x.dim();
    let mut sum = vec![0.0; d];
    let mut sum_sq = vec![0.0; d];
    let mut norms = Vec::with_capacity(n);
    for _ in 0..n {
        let s = oracle.sample(x)?;
        let xi = s.g.sub(&s.true_grad)?;
        for (i, v) in xi.as_slice().iter().enumerate() {
            sum[i] += v;
            sum_sq[i] += v * v;
        }
        norms.push(xi.norm().powi(2));
    }
    let nf = n as f64;
    let max_mean_z = (0..d)
        .map(|i| {
            let m = sum[i] / nf;
            let var = (sum_sq[i] / nf - m * m) * nf / (nf - 1.0);
            if var > 0.0 { m.abs() / (var / nf).sqrt() } else if m == 0.0 { 0.0 } else { f64::INFINITY }
        })
        .fold(0.0, f64::max);
    let mean_sq_norm = norms.iter().sum::<f64>() / nf;
    let var = norms.iter().map(|v| (v - mean_sq_norm).powi(2)).sum::<f64>() / (nf - 1.0);
    let s2 = oracle.sigma() * oracle.sigma();
    let gap = (mean_sq_norm - s2).abs();
    let sq_norm_z = if gap <= 1e-12 * s2.max(1e-300) {
        0.0
    } else if var > 0.0 {
        gap / (var / nf).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(NoiseStats { n, max_mean_z, mean_sq_norm, sq_norm_z })
}
