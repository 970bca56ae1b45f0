//! Helpers for sums of exponentials kept in log space.

/// `ln(e^a + e^b)`
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)` for `a >= b`; `-inf` when equal, NaN when `a < b`.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a < b {
        return f64::NAN;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp_m1()).ln()
}

/// `ln(sum e^{x_i})`
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY || hi == f64::INFINITY {
        return hi;
    }
    hi + xs.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_matches_linear() {
        let v = log_add_exp(2f64.ln(), 3f64.ln()).exp();
        assert!((v - 5.0).abs() < 1e-14);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.0), 1.0);
    }

    #[test]
    fn sub_matches_linear() {
        let v = log_sub_exp(5f64.ln(), 3f64.ln()).exp();
        assert!((v - 2.0).abs() < 1e-14);
        assert_eq!(log_sub_exp(1.0, 1.0), f64::NEG_INFINITY);
        assert!(log_sub_exp(0.0, 1.0).is_nan());
    }

    #[test]
    fn sum_handles_huge_exponents() {
        let l = log_sum_exp([1000.0, 1000.0]);
        assert!((l - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(Vec::new()), f64::NEG_INFINITY);
    }
}
