//! Verifiers for the summation inequalities behind the NSGD-M analysis.
//! Left-hand sides are evaluated by explicit summation, right-hand sides from
//! their closed forms.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::ln0;
use crate::error::{Error, Result};
use crate::logspace::{log_add_exp, log_sub_exp, log_sum_exp};
use crate::smoothness::{a1, b0, b1};

/// Relative slack allowed on the right-hand side.
pub const LEMMA_TOL: f64 = 1e-12;

/// Largest horizon for which `Route::Auto` uses the quadratic-time sums.
pub const DIRECT_ROUTE_MAX_T: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub holds: bool,
}

impl LemmaCheck {
    fn linear(lhs: f64, rhs: f64) -> Self {
        LemmaCheck { lhs, rhs, log_lhs: ln0(lhs), log_rhs: ln0(rhs), holds: lhs <= rhs * (1.0 + LEMMA_TOL) }
    }

    fn logs(log_lhs: f64, log_rhs: f64) -> Self {
        LemmaCheck {
            lhs: log_lhs.exp(),
            rhs: log_rhs.exp(),
            log_lhs,
            log_rhs,
            holds: log_lhs <= log_rhs + LEMMA_TOL.ln_1p(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneralPart {
    #[serde(rename = "i")]
    I,
    /// The weaker closed form of the forward-weighted sum.
    #[serde(rename = "ii")]
    II,
    /// The sharper form with the `1 + (p-q) b^{q-1}` denominator.
    #[serde(rename = "ii-strong")]
    IIStrong,
    #[serde(rename = "iii")]
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExplicitPart {
    #[serde(rename = "a.i")]
    AI,
    #[serde(rename = "a.ii")]
    AII,
    #[serde(rename = "b.i")]
    BI,
    #[serde(rename = "b.ii")]
    BII,
    #[serde(rename = "c.i")]
    CI,
    #[serde(rename = "c.ii")]
    CII,
    #[serde(rename = "c.iii")]
    CIII,
}

impl ExplicitPart {
    pub const ALL: [ExplicitPart; 7] = [
        ExplicitPart::AI,
        ExplicitPart::AII,
        ExplicitPart::BI,
        ExplicitPart::BII,
        ExplicitPart::CI,
        ExplicitPart::CII,
        ExplicitPart::CIII,
    ];
}

/// How nested sums are evaluated: recomputing inner products and sums for
/// every outer index, or carrying them forward by recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    #[default]
    Auto,
    Direct,
    Recurrence,
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("q must lie in (0,1), got {q}")))
    }
}

/// Inequalities for `β_t = 1 - t^{-q}` with exponent `p`:
///
/// - i: `Π_{t=a}^b (1 - t^{-q}) <= exp((a^{1-q} - b^{1-q})/(1-q))`
/// - ii: `Σ_{t=a}^b t^{-p} Π_{τ=a}^t (1 - τ^{-q}) <= (a-1)^{q-p} exp((a^{1-q} - (a-1)^{1-q})/(1-q))`, `p >= q`
/// - iii: `Σ_{t=a}^b t^{-p} Π_{τ=t+1}^b (1 - τ^{-q}) <= 2 e^{1/(1-q)} (b+1)^{q-p}`,
///   `a >= p^{1/(1-q)}` and `a >= ((p-q)/2)^{1/(1-q)}`
pub fn tech_lemma_general(a: u64, b: u64, p: f64, q: f64, part: GeneralPart) -> Result<LemmaCheck> {
    if a < 2 {
        return Err(Error::domain(format!("a must be >= 2, got {a}")));
    }
    if b < a {
        return Err(Error::domain(format!("b must be >= a, got a = {a}, b = {b}")));
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must be >= 0, got {p}")));
    }
    check_q(q)?;
    let r = 1.0 - q;
    let pow = |t: u64, e: f64| (t as f64).powf(e);
    let factor = |t: u64| 1.0 - pow(t, -q);
    match part {
        GeneralPart::I => {
            let lhs: f64 = (a..=b).map(factor).product();
            let rhs = ((pow(a, r) - pow(b, r)) / r).exp();
            Ok(LemmaCheck::linear(lhs, rhs))
        }
        GeneralPart::II | GeneralPart::IIStrong => {
            if p < q {
                return Err(Error::domain(format!("part ii needs p >= q, got p = {p}, q = {q}")));
            }
            let mut prod = 1.0;
            let mut lhs = 0.0;
            for t in a..=b {
                prod *= factor(t);
                lhs += pow(t, -p) * prod;
            }
            let weak = pow(a - 1, q - p) * ((pow(a, r) - pow(a - 1, r)) / r).exp();
            let rhs = if part == GeneralPart::II {
                weak
            } else {
                let tail = pow(b, q - p) * ((pow(a, r) - pow(b, r)) / r).exp();
                (weak - tail) / (1.0 + (p - q) * pow(b, q - 1.0))
            };
            Ok(LemmaCheck::linear(lhs, rhs))
        }
        GeneralPart::III => {
            let af = a as f64;
            if af < p.powf(1.0 / r) {
                return Err(Error::domain(format!("part iii needs a >= p^(1/(1-q)), got a = {a}, p = {p}, q = {q}")));
            }
            if p > q && af < ((p - q) / 2.0).powf(1.0 / r) {
                return Err(Error::domain(format!(
                    "part iii needs a >= ((p-q)/2)^(1/(1-q)), got a = {a}, p = {p}, q = {q}"
                )));
            }
            let mut tail = 1.0;
            let mut lhs = 0.0;
            for t in (a..=b).rev() {
                lhs += pow(t, -p) * tail;
                tail *= factor(t);
            }
            let rhs = 2.0 * (1.0 / r).exp() * pow(b + 1, q - p);
            Ok(LemmaCheck::linear(lhs, rhs))
        }
    }
}

fn beta(t: u64) -> f64 {
    1.0 - (t as f64).powf(-0.5)
}

fn step(eta: f64, t: u64) -> f64 {
    eta * (t as f64).powf(-0.75)
}

/// The explicit-schedule inequalities for `β_t = 1 - t^{-1/2}`,
/// `η_t = η t^{-3/4}`, `C_t = B0(L1 η_t)`, `D_t = B1(L1 η_t)`,
/// `d_t = 4η(t-1)^{1/4} - 3η` and `x = η L1`:
///
/// - a.i: `Σ_{t<=T} η_t Π_{τ=2}^t β_τ <= 7η/2`
/// - a.ii: `Σ_{t<=T} η_t √V_t <= η(7/2 + √(2e²) log T)` with
///   `V_t = Σ_{τ<=t} (1-β_τ)² Π_{κ=τ+1}^t β_κ²`
/// - b.i: `Σ_{t<=T} η_t² C_t <= 6 η² A1(x)`
/// - b.ii: `Σ_{t<=T} η_t Σ_{τ=2}^t η_τ C_τ Π_{κ=τ}^t β_κ <= 7η²(3 A1(x) + log T)`
/// - c.i: `Σ_{t=2}^b L1 η_t D_t t^{-1/4} d_t e^{L1 d_t} <= η²L1 e^{2x}/2 + 4η e^{-5x/2}(e^{4x b^{1/4}} - e^{4x})`
/// - c.ii: `Σ_{t=1}^b L1 η_t D_t t^{-1/4} e^{L1 d_t} <= (3/2) x e^{5x/3} + e^{-5x/2}(e^{4x b^{1/4}} - e^{4x})`
/// - c.iii: for `x >= 1/2`, the c.ii sum `<= (3/2) x e^{5x/3} + e^{-5x/2}(2 b^{-1/4} e^{4x b^{1/4}} - e^{4x})`
///
/// `t` is `T` for parts a and b and `b` for part c.
pub fn tech_lemma_explicit(t: u64, eta: f64, l1: f64, part: ExplicitPart) -> Result<LemmaCheck> {
    tech_lemma_explicit_with(t, eta, l1, part, Route::Auto)
}

pub fn tech_lemma_explicit_with(t: u64, eta: f64, l1: f64, part: ExplicitPart, route: Route) -> Result<LemmaCheck> {
    if t < 1 {
        return Err(Error::domain("T must be >= 1"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain(format!("eta must be > 0, got {eta}")));
    }
    if !(l1 >= 0.0 && l1.is_finite()) {
        return Err(Error::domain(format!("L1 must be >= 0, got {l1}")));
    }
    let direct = match route {
        Route::Auto => t <= DIRECT_ROUTE_MAX_T,
        Route::Direct => true,
        Route::Recurrence => false,
    };
    let x = eta * l1;
    let log_t = (t as f64).ln();
    match part {
        ExplicitPart::AI => {
            let lhs = if direct { a_i_direct(t, eta) } else { a_i_recurrence(t, eta) };
            Ok(LemmaCheck::linear(lhs, 3.5 * eta))
        }
        ExplicitPart::AII => {
            let lhs = if direct { a_ii_direct(t, eta) } else { a_ii_recurrence(t, eta) };
            Ok(LemmaCheck::linear(lhs, eta * (3.5 + (2.0 * E * E).sqrt() * log_t)))
        }
        ExplicitPart::BI | ExplicitPart::BII => {
            if l1 <= 0.0 {
                return Err(Error::domain("part b needs L1 > 0"));
            }
            if part == ExplicitPart::BI {
                let lhs: f64 = (1..=t).map(|s| step(eta, s).powi(2) * b0(l1 * step(eta, s))).sum();
                return Ok(LemmaCheck::linear(lhs, 6.0 * eta * eta * a1(x)));
            }
            let lhs = if direct { b_ii_direct(t, eta, l1) } else { b_ii_recurrence(t, eta, l1) };
            Ok(LemmaCheck::linear(lhs, 7.0 * eta * eta * (3.0 * a1(x) + log_t)))
        }
        ExplicitPart::CI | ExplicitPart::CII | ExplicitPart::CIII => {
            if l1 <= 0.0 {
                return Err(Error::domain("part c needs L1 > 0"));
            }
            if t < 2 {
                return Err(Error::domain(format!("part c needs b >= 2, got {t}")));
            }
            if part == ExplicitPart::CIII && x < 0.5 {
                return Err(Error::domain(format!("part c.iii needs eta*L1 >= 1/2, got {x}")));
            }
            Ok(part_c(t, eta, l1, part))
        }
    }
}

fn a_i_direct(t_max: u64, eta: f64) -> f64 {
    (1..=t_max).map(|t| step(eta, t) * (2..=t).map(beta).product::<f64>()).sum()
}

fn a_i_recurrence(t_max: u64, eta: f64) -> f64 {
    let mut prod = 1.0;
    let mut sum = 0.0;
    for t in 1..=t_max {
        if t >= 2 {
            prod *= beta(t);
        }
        sum += step(eta, t) * prod;
    }
    sum
}

fn a_ii_direct(t_max: u64, eta: f64) -> f64 {
    let mut sum = 0.0;
    for t in 1..=t_max {
        let mut v = 0.0;
        let mut tail = 1.0;
        for tau in (1..=t).rev() {
            let a = 1.0 - beta(tau);
            v += a * a * tail;
            tail *= beta(tau).powi(2);
        }
        sum += step(eta, t) * v.sqrt();
    }
    sum
}

fn a_ii_recurrence(t_max: u64, eta: f64) -> f64 {
    let mut v: f64 = 0.0;
    let mut sum = 0.0;
    for t in 1..=t_max {
        let a = 1.0 - beta(t);
        v = beta(t).powi(2) * v + a * a;
        sum += step(eta, t) * v.sqrt();
    }
    sum
}

fn b_ii_direct(t_max: u64, eta: f64, l1: f64) -> f64 {
    let mut sum = 0.0;
    for t in 1..=t_max {
        let mut inner = 0.0;
        let mut prod = 1.0;
        for tau in (2..=t).rev() {
            prod *= beta(tau);
            let e = step(eta, tau);
            inner += e * b0(l1 * e) * prod;
        }
        sum += step(eta, t) * inner;
    }
    sum
}

fn b_ii_recurrence(t_max: u64, eta: f64, l1: f64) -> f64 {
    let mut w = 0.0;
    let mut sum = 0.0;
    for t in 1..=t_max {
        if t >= 2 {
            let e = step(eta, t);
            w = beta(t) * (w + e * b0(l1 * e));
        }
        sum += step(eta, t) * w;
    }
    sum
}

/// `ln(e^a - e^b)` allowing `a < b`, as a signed pair.
fn signed_log_diff(a: f64, b: f64) -> (f64, f64) {
    if a >= b {
        (1.0, log_sub_exp(a, b))
    } else {
        (-1.0, log_sub_exp(b, a))
    }
}

fn part_c(b: u64, eta: f64, l1: f64, part: ExplicitPart) -> LemmaCheck {
    let x = eta * l1;
    let first = if part == ExplicitPart::CI { 2 } else { 1 };
    let log_lhs = log_sum_exp((first..=b).map(|t| {
        let e = step(eta, t);
        let tf = t as f64;
        let d = 4.0 * eta * (tf - 1.0).powf(0.25) - 3.0 * eta;
        let base = (l1 * e * b1(l1 * e)).ln() - 0.25 * tf.ln() + l1 * d;
        if part == ExplicitPart::CI {
            base + d.ln()
        } else {
            base
        }
    }));
    let quarter = (b as f64).powf(0.25);
    let (lead, scale, top) = match part {
        ExplicitPart::CI => ((0.5 * eta * eta * l1).ln() + 2.0 * x, (4.0 * eta).ln(), 4.0 * x * quarter),
        ExplicitPart::CII => ((1.5 * x).ln() + 5.0 * x / 3.0, 0.0, 4.0 * x * quarter),
        _ => ((1.5 * x).ln() + 5.0 * x / 3.0, 0.0, 2f64.ln() - quarter.ln() + 4.0 * x * quarter),
    };
    let (sign, diff) = signed_log_diff(top, 4.0 * x);
    let second = scale - 2.5 * x + diff;
    let log_rhs = if sign > 0.0 { log_add_exp(lead, second) } else { log_sub_exp(lead, second) };
    LemmaCheck::logs(log_lhs, log_rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralPoint {
    pub a: u64,
    pub b: u64,
    pub p: f64,
    pub q: f64,
    pub part: GeneralPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitPoint {
    pub t: u64,
    pub eta: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub part: ExplicitPart,
}

impl GeneralPoint {
    pub fn evaluate(&self) -> Result<LemmaCheck> {
        tech_lemma_general(self.a, self.b, self.p, self.q, self.part)
    }
}

impl ExplicitPoint {
    pub fn evaluate(&self) -> Result<LemmaCheck> {
        tech_lemma_explicit(self.t, self.eta, self.l1, self.part)
    }
}

/// `a × {a..=a+b_span} × p × q × parts`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralGrid {
    pub a: Vec<u64>,
    pub b_span: u64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub parts: Vec<GeneralPart>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGrid {
    pub t: Vec<u64>,
    pub eta: Vec<f64>,
    #[serde(rename = "L1")]
    pub l1: Vec<f64>,
    pub parts: Vec<ExplicitPart>,
}

pub fn default_general_grid() -> GeneralGrid {
    GeneralGrid {
        a: vec![2, 3, 5, 10],
        b_span: 500,
        p: vec![0.5, 0.75, 1.0, 2.0],
        q: vec![0.25, 0.5, 0.75],
        parts: vec![GeneralPart::I, GeneralPart::II, GeneralPart::III],
    }
}

pub fn default_explicit_grid() -> ExplicitGrid {
    ExplicitGrid {
        t: vec![1, 10, 100, 5000],
        eta: vec![1.0 / 7.0, 1.0, 3.0],
        l1: vec![0.1, 1.0, 4.0],
        parts: ExplicitPart::ALL.to_vec(),
    }
}

impl GeneralGrid {
    pub fn points(&self) -> Vec<GeneralPoint> {
        let mut out = Vec::new();
        for &part in &self.parts {
            for &a in &self.a {
                for &p in &self.p {
                    for &q in &self.q {
                        for b in a..=a + self.b_span {
                            out.push(GeneralPoint { a, b, p, q, part });
                        }
                    }
                }
            }
        }
        out
    }
}

impl ExplicitGrid {
    pub fn points(&self) -> Vec<ExplicitPoint> {
        let mut out = Vec::new();
        for &part in &self.parts {
            for &t in &self.t {
                for &eta in &self.eta {
                    for &l1 in &self.l1 {
                        out.push(ExplicitPoint { t, eta, l1, part });
                    }
                }
            }
        }
        out
    }
}
