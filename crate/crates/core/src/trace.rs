//! Per-iteration run records and their CSV form.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

/// One iteration. `x` is the iterate `x_t` at which the gradient was queried,
/// `eta` the stepsize used to leave it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub x: Vector,
    pub eta: f64,
    pub momentum: Option<Vector>,
    pub grad_norm: f64,
    pub stoch_grad_norm: f64,
    pub f_value: f64,
    /// Function evaluations spent by a line search, if any.
    pub line_search_trials: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Horizon,
    TargetReached,
    Stationary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    steps: Vec<StepRecord>,
    /// Iterate after the last recorded step, when one was taken.
    pub final_x: Option<Vector>,
    /// First `t` with `grad_norm <= target_eps`.
    pub t_eps: Option<usize>,
    pub stop: StopReason,
}

impl Default for RunTrace {
    fn default() -> Self {
        Self::new()
    }
}

impl RunTrace {
    pub fn new() -> Self {
        RunTrace {
            steps: Vec::new(),
            final_x: None,
            t_eps: None,
            stop: StopReason::Horizon,
        }
    }

    pub fn push(&mut self, rec: StepRecord) -> Result<()> {
        let expected = self.steps.len() + 1;
        if rec.t != expected {
            return Err(Error::domain(format!("trace expects t = {expected}, got {}", rec.t)));
        }
        if !(rec.eta > 0.0) {
            return Err(Error::domain(format!("stepsize must be positive, got {} at t = {}", rec.eta, rec.t)));
        }
        self.steps.push(rec);
        Ok(())
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn min_grad_norm(&self) -> f64 {
        self.steps.iter().map(|s| s.grad_norm).fold(f64::INFINITY, f64::min)
    }

    pub fn min_f(&self) -> f64 {
        self.steps.iter().map(|s| s.f_value).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let d = self.steps.first().map_or(0, |s| s.x.dim());
        write!(w, "t,eta,f,grad_norm,stoch_grad_norm")?;
        for i in 0..d {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for s in &self.steps {
            write!(
                w,
                "{},{},{},{},{}",
                s.t,
                fmt_f64(s.eta),
                fmt_f64(s.f_value),
                fmt_f64(s.grad_norm),
                fmt_f64(s.stoch_grad_norm)
            )?;
            for v in s.x.as_slice() {
                write!(w, ",{}", fmt_f64(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
