//! The kernels `A0, A1` of the smoothness definition and `B0, B1` of the
//! quadratic upper bound. All four equal 1 at `c = 0`.
//!
//! For `c <= 1` every kernel is evaluated from its power series, whose terms
//! are all positive. Above that the closed forms are used with `expm1`.

use crate::error::{Error, Result};

const SERIES_CUTOFF: f64 = 1.0;

fn check(c: f64) -> Result<()> {
    if c.is_nan() || c < 0.0 {
        return Err(Error::domain(format!("kernel argument must be >= 0, got {c}")));
    }
    Ok(())
}

/// Sum of `coef(k) c^k / (k + shift)!` over `k >= start` until the terms stop
/// changing the sum.
fn series(c: f64, start: u32, shift: u32, coef: impl Fn(f64) -> f64) -> f64 {
    // term_k = c^k / (k + shift)!
    let mut term = 1.0;
    for j in 1..=shift {
        term /= j as f64;
    }
    for k in 1..=start {
        term *= c / (k + shift) as f64;
    }
    let mut sum = 0.0;
    let mut k = start;
    loop {
        let add = coef(k as f64) * term;
        let next = sum + add;
        if next == sum || k > 200 {
            return next;
        }
        sum = next;
        k += 1;
        term *= c / (k + shift) as f64;
    }
}

pub(crate) fn a1(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else if c <= SERIES_CUTOFF {
        series(c, 0, 1, |_| 1.0)
    } else {
        c.exp_m1() / c
    }
}

pub(crate) fn a0(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else if c <= SERIES_CUTOFF {
        1.0 + series(c, 1, 1, |k| k)
    } else {
        1.0 + c.exp() - a1(c)
    }
}

pub(crate) fn b1(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else if c <= SERIES_CUTOFF {
        series(c, 0, 2, |_| 2.0)
    } else {
        2.0 * (c.exp_m1() - c) / (c * c)
    }
}

pub(crate) fn b0(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else if c <= SERIES_CUTOFF {
        1.0 + series(c, 1, 2, |k| 2.0 * k)
    } else {
        // 1 + 2 A1 - 2 B1
        1.0 + 2.0 * a1(c) - 2.0 * b1(c)
    }
}

/// `A0(c) = 1 + e^c - (e^c - 1)/c`
pub fn kernel_a0(c: f64) -> Result<f64> {
    check(c)?;
    Ok(a0(c))
}

/// `A1(c) = (e^c - 1)/c`
pub fn kernel_a1(c: f64) -> Result<f64> {
    check(c)?;
    Ok(a1(c))
}

/// `B0(c) = 1 + 2(e^c - 1)/c - 4(e^c - 1 - c)/c^2`
pub fn kernel_b0(c: f64) -> Result<f64> {
    check(c)?;
    Ok(b0(c))
}

/// `B1(c) = 2(e^c - 1 - c)/c^2`
pub fn kernel_b1(c: f64) -> Result<f64> {
    check(c)?;
    Ok(b1(c))
}
