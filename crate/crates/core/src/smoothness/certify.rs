//! Sampling certificate that an objective satisfies its declared constants.

use rand::Rng;
use serde::Serialize;

use super::{check_definition, check_hessian_equivalence, SmoothnessParams, MAX_DENSE_DIM};
use crate::error::Result;
use crate::rng::seeded_rng;
use crate::testfns::Objective;
use crate::vector::Vector;

/// Offsets around each kink used for pairs straddling it.
const KINK_OFFSETS: [f64; 3] = [1e-6, 1e-3, 1e-1];
/// Hessian points closer than this to a kink are skipped.
const KINK_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessCertificate {
    pub objective: String,
    pub params: SmoothnessParams,
    pub pairs_checked: usize,
    /// Pairs whose segment contains a kink.
    pub cross_kink_pairs: usize,
    pub pair_violations: usize,
    /// Largest `lhs/rhs` over all pairs.
    pub worst_pair_ratio: f64,
    pub hessian_checked: usize,
    pub hessian_violations: usize,
    pub worst_hessian_ratio: f64,
    pub certified: bool,
}

/// Checks the first-order definition on `pairs` random pairs plus, for 1-d
/// objectives with kinks, every knot pair and pairs straddling each knot;
/// then the Hessian criterion at `hessian_points` random points away from
/// kinks (skipped above the dense-Hessian dimension).
pub fn certify_smoothness(obj: &Objective, pairs: usize, hessian_points: usize, seed: u64) -> Result<SmoothnessCertificate> {
    let mut rng = seeded_rng(seed);
    let (lo, hi) = obj.sample_range;
    let d = obj.dim();
    let draw = |rng: &mut crate::rng::Rng| Vector::new((0..d).map(|_| rng.random_range(lo..hi)).collect());
    let mut list: Vec<(Vector, Vector)> = Vec::new();
    if d == 1 {
        let k = &obj.kinks;
        for (i, &a) in k.iter().enumerate() {
            for &b in &k[i + 1..] {
                list.push((Vector::scalar(a)?, Vector::scalar(b)?));
            }
            for off in KINK_OFFSETS {
                list.push((Vector::scalar(a - off)?, Vector::scalar(a + off)?));
                list.push((Vector::scalar(a + off)?, Vector::scalar(a - off)?));
            }
        }
    }
    for _ in 0..pairs {
        list.push((draw(&mut rng)?, draw(&mut rng)?));
    }
    let crosses = |x: &Vector, y: &Vector| {
        d == 1 && obj.kinks.iter().any(|&k| (x[0] - k) * (y[0] - k) < 0.0 || x[0] == k || y[0] == k)
    };
    let (mut checked, mut cross, mut bad, mut worst) = (0, 0, 0, 0.0f64);
    for (x, y) in &list {
        if x == y {
            continue;
        }
        let r = check_definition(obj, x, y, obj.params)?;
        checked += 1;
        if crosses(x, y) {
            cross += 1;
        }
        if !r.holds {
            bad += 1;
        }
        if r.rhs > 0.0 {
            worst = worst.max(r.lhs / r.rhs);
        } else if r.lhs > 0.0 {
            worst = f64::INFINITY;
        }
    }
    let (mut h_checked, mut h_bad, mut h_worst) = (0, 0, 0.0f64);
    if d <= MAX_DENSE_DIM {
        for _ in 0..hessian_points {
            let x = draw(&mut rng)?;
            if d == 1 && obj.kinks.iter().any(|&k| (x[0] - k).abs() < KINK_GUARD) {
                continue;
            }
            let h = check_hessian_equivalence(obj, &x, obj.params)?;
            h_checked += 1;
            if !h.holds {
                h_bad += 1;
            }
            if h.bound > 0.0 {
                h_worst = h_worst.max(h.hessian_norm / h.bound);
            }
        }
    }
    Ok(SmoothnessCertificate {
        objective: obj.name.clone(),
        params: obj.params,
        pairs_checked: checked,
        cross_kink_pairs: cross,
        pair_violations: bad,
        worst_pair_ratio: worst,
        hessian_checked: h_checked,
        hessian_violations: h_bad,
        worst_hessian_ratio: h_worst,
        certified: bad == 0 && h_bad == 0,
    })
}
