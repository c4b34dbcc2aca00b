//! Closed-form ansatz functions: finite sums of polynomial × Gaussian ×
//! complex-exponential terms in the log variable `x = log t`.
//!
//! A [`TermFunction`] stores `F(x) = Σ coeff · x^p · exp(−σx² + cx + iωx)`.
//! The function it stands for on `(0, ∞)` is `f(t) = e^{−x} F(x)`, so that
//! `F(x) = e^x f(e^x)`. Every such `f` is smooth and has finite weighted
//! seminorms for every real weight exponent, because each term decays like a
//! Gaussian in `x`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::DecayHint;

/// One term `coefficient · x^p · exp(−σx² + cx + iωx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "TermRecord", try_from = "TermRecord")]
pub struct LogGaussianTerm {
    pub coefficient: Complex64,
    pub power: u32,
    pub sigma: f64,
    pub drift: f64,
    pub frequency: f64,
}

/// Wire layout of a term. Field order is part of the file format.
#[derive(Serialize, Deserialize)]
struct TermRecord {
    re: f64,
    im: f64,
    p: u32,
    sigma: f64,
    c: f64,
    omega: f64,
}

impl From<LogGaussianTerm> for TermRecord {
    fn from(t: LogGaussianTerm) -> Self {
        TermRecord {
            re: t.coefficient.re,
            im: t.coefficient.im,
            p: t.power,
            sigma: t.sigma,
            c: t.drift,
            omega: t.frequency,
        }
    }
}

impl TryFrom<TermRecord> for LogGaussianTerm {
    type Error = Error;

    fn try_from(r: TermRecord) -> Result<Self> {
        LogGaussianTerm::new(Complex64::new(r.re, r.im), r.p, r.sigma, r.c, r.omega)
    }
}

impl LogGaussianTerm {
    pub fn new(
        coefficient: Complex64,
        power: u32,
        sigma: f64,
        drift: f64,
        frequency: f64,
    ) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Parse(format!("term sigma must be positive, got {sigma}")));
        }
        if !(coefficient.re.is_finite()
            && coefficient.im.is_finite()
            && drift.is_finite()
            && frequency.is_finite())
        {
            return Err(Error::Parse("term fields must be finite".into()));
        }
        Ok(LogGaussianTerm {
            coefficient,
            power,
            sigma,
            drift,
            frequency,
        })
    }

    /// Pure Gaussian `coefficient · exp(−σx² + iωx)`.
    pub fn gaussian(coefficient: Complex64, sigma: f64, frequency: f64) -> Self {
        LogGaussianTerm {
            coefficient,
            power: 0,
            sigma,
            drift: 0.0,
            frequency,
        }
    }

    fn with(&self, coefficient: Complex64, power: u32) -> Self {
        LogGaussianTerm {
            coefficient,
            power,
            ..*self
        }
    }

    pub fn eval_x(&self, x: f64) -> Complex64 {
        let phase = Complex64::new(-self.sigma * x * x + self.drift * x, self.frequency * x);
        self.coefficient * phase.exp() * x.powi(self.power as i32)
    }

    /// Exact derivative in `x`; at most three terms.
    pub fn derivative(&self) -> Vec<LogGaussianTerm> {
        let mut out = Vec::with_capacity(3);
        if self.power > 0 {
            out.push(self.with(self.coefficient * self.power as f64, self.power - 1));
        }
        let rate = Complex64::new(self.drift, self.frequency);
        out.push(self.with(self.coefficient * rate, self.power));
        out.push(self.with(self.coefficient * (-2.0 * self.sigma), self.power + 1));
        out
    }

    /// `∫_ℝ e^{sx} · term(x) dx` in closed form.
    ///
    /// With `b = s + c + iω` the `p = 0` value is `√(π/σ)·exp(b²/(4σ))`.
    /// Higher powers are the `p`-th `s`-derivatives of that value, which
    /// reduce to the moments of a Gaussian with mean `b/(2σ)` and variance
    /// `1/(2σ)`: `m_{p+1} = μ m_p + p v m_{p−1}`.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        let b = s + Complex64::new(self.drift, self.frequency);
        let base = (b * b / (4.0 * self.sigma)).exp() * (PI / self.sigma).sqrt();
        self.coefficient * base * gaussian_moment(self.power, b / (2.0 * self.sigma), 0.5 / self.sigma)
    }

    fn key(&self) -> (u32, f64, f64, f64) {
        // +0.0 folds -0.0 onto 0.0 so both share a merge key
        (
            self.power,
            self.sigma + 0.0,
            self.drift + 0.0,
            self.frequency + 0.0,
        )
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.total_cmp(&b.3))
    }
}

/// `E[X^p]` for `X ~ N(mean, variance)` with complex mean.
fn gaussian_moment(p: u32, mean: Complex64, variance: f64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if p == 0 {
        return prev;
    }
    let mut cur = mean;
    for k in 1..p {
        let next = mean * cur + prev * (k as f64 * variance);
        prev = cur;
        cur = next;
    }
    cur
}

/// Finite sum of [`LogGaussianTerm`]s.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermFunction {
    terms: Vec<LogGaussianTerm>,
}

impl TermFunction {
    pub fn new(terms: Vec<LogGaussianTerm>) -> Self {
        TermFunction { terms }
    }

    pub fn zero() -> Self {
        TermFunction::default()
    }

    pub fn terms(&self) -> &[LogGaussianTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `F(x)`, i.e. `Φ(f)(x) = e^x f(e^x)`.
    pub fn eval_x(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval_x(x)).sum()
    }

    /// `f(t) = e^{−log t} F(log t)` for `t > 0`.
    pub fn eval_t(&self, t: f64) -> Complex64 {
        let x = t.ln();
        self.eval_x(x) * (-x).exp()
    }

    /// Canonical form: terms with identical `(p, σ, c, ω)` are summed, zero
    /// coefficients are dropped, and the result is sorted by that key.
    pub fn merged(&self) -> TermFunction {
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<LogGaussianTerm> = Vec::with_capacity(sorted.len());
        for t in sorted {
            match out.last_mut() {
                Some(last) if last.key_cmp(&t) == Ordering::Equal => {
                    last.coefficient += t.coefficient;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coefficient != Complex64::new(0.0, 0.0));
        TermFunction { terms: out }
    }

    pub fn scaled(&self, factor: Complex64) -> TermFunction {
        TermFunction {
            terms: self
                .terms
                .iter()
                .map(|t| t.with(t.coefficient * factor, t.power))
                .collect(),
        }
    }

    /// Sum of two functions, merged.
    pub fn plus(&self, other: &TermFunction) -> TermFunction {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        TermFunction { terms }.merged()
    }

    /// Linear combination `Σ weights[i] · functions[i]`, merged.
    pub fn combination(weights: &[Complex64], functions: &[TermFunction]) -> TermFunction {
        let terms = weights
            .iter()
            .zip(functions)
            .flat_map(|(w, f)| f.scaled(*w).terms)
            .collect();
        TermFunction { terms }.merged()
    }

    /// `F′` within the term algebra.
    pub fn derivative_x(&self) -> TermFunction {
        TermFunction {
            terms: self.terms.iter().flat_map(|t| t.derivative()).collect(),
        }
        .merged()
    }

    /// `P_m` with `f^{(m)}(t) = e^{−(m+1)x} P_m(x)`, from
    /// `P_0 = F`, `P_{m+1} = P_m′ − (m+1) P_m`.
    pub fn t_domain_derivative(&self, m: usize) -> TermFunction {
        let mut p = self.clone();
        for k in 0..m {
            let mut next = p.derivative_x().terms;
            next.extend(p.scaled(Complex64::new(-((k + 1) as f64), 0.0)).terms);
            p = TermFunction { terms: next }.merged();
        }
        p
    }

    /// `f^{(m)}(t)` reconstructed from [`Self::t_domain_derivative`].
    pub fn eval_t_derivative(&self, m: usize, t: f64) -> Complex64 {
        let x = t.ln();
        self.t_domain_derivative(m).eval_x(x) * (-((m + 1) as f64) * x).exp()
    }

    /// `∫_ℝ e^{sx} F(x) dx` in closed form.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.laplace(s)).sum()
    }

    /// Pointwise bound `|e^{κx} F(x)| ≤ peak · exp(−σx² + r|x|)`.
    ///
    /// Uses `|x|^p ≤ (p/e)^p e^{|x|}` to absorb polynomial factors.
    pub fn decay_hint(&self, kappa: f64) -> DecayHint {
        if self.terms.is_empty() {
            return DecayHint::Gaussian {
                sigma: 1.0,
                growth: 0.0,
                peak: 0.0,
            };
        }
        let mut sigma = f64::INFINITY;
        let mut growth: f64 = 0.0;
        let mut peak = 0.0;
        for t in &self.terms {
            sigma = sigma.min(t.sigma);
            let poly_rate = if t.power > 0 { 1.0 } else { 0.0 };
            growth = growth.max((t.drift + kappa).abs() + poly_rate);
            let poly_peak = if t.power > 0 {
                let p = t.power as f64;
                (p / std::f64::consts::E).powf(p).max(1.0)
            } else {
                1.0
            };
            peak += t.coefficient.norm() * poly_peak;
        }
        DecayHint::Gaussian {
            sigma,
            growth,
            peak,
        }
    }
}
