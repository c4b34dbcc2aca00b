//! Functions on `(0, ∞)` that can be fed to the Mellin tools.
//!
//! Everything is evaluated through the log substitution
//! `Φ(f)(x) = e^x f(e^x)`; each function reports where its weighted image
//! `e^{κx} Φ(f)(x)` is non-negligible so the quadrature can truncate.

use std::fmt::Debug;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::DecayHint;
use crate::registry::Registry;
use crate::term::{LogGaussianTerm, TermFunction};

/// Open strip `lower < Re z < upper` on which `M_z(f)` converges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    #[serde(with = "crate::json::ext_real")]
    pub lower: f64,
    #[serde(with = "crate::json::ext_real")]
    pub upper: f64,
}

impl Band {
    pub const WHOLE: Band = Band {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Band> {
        if lower.is_nan() || upper.is_nan() || !(lower < upper) {
            return Err(Error::InvalidProblem(format!(
                "band requires lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(Band { lower, upper })
    }

    pub fn contains(&self, re: f64) -> bool {
        self.lower < re && re < self.upper
    }

    pub fn check(&self, z: Complex64) -> Result<()> {
        if self.contains(z.re) {
            Ok(())
        } else {
            Err(Error::BandViolation {
                re: z.re,
                lower: self.lower,
                upper: self.upper,
            })
        }
    }
}

pub trait PositiveFunction: Debug + Send + Sync {
    fn name(&self) -> String;

    /// `f(t)` for `t > 0`.
    fn eval_t(&self, t: f64) -> Complex64;

    /// `Φ(f)(x) = e^x f(e^x)`.
    fn phi(&self, x: f64) -> Complex64 {
        let t = x.exp();
        self.eval_t(t) * t
    }

    /// Decay description of `x ↦ e^{κx} Φ(f)(x)`; `None` when that function
    /// is not integrable (κ outside the band).
    fn weighted_hint(&self, kappa: f64, tol: f64) -> Option<DecayHint>;

    fn band(&self) -> Band;

    /// Closed-form access for ansatz functions.
    fn as_terms(&self) -> Option<&TermFunction> {
        None
    }
}

impl PositiveFunction for TermFunction {
    fn name(&self) -> String {
        format!("term-function[{}]", self.len())
    }

    fn eval_t(&self, t: f64) -> Complex64 {
        TermFunction::eval_t(self, t)
    }

    fn phi(&self, x: f64) -> Complex64 {
        self.eval_x(x)
    }

    fn weighted_hint(&self, kappa: f64, _tol: f64) -> Option<DecayHint> {
        Some(self.decay_hint(kappa))
    }

    fn band(&self) -> Band {
        Band::WHOLE
    }

    fn as_terms(&self) -> Option<&TermFunction> {
        Some(self)
    }
}

/// `f(t) = e^{−t}`, band `(−1, ∞)`; `M_z(f) = Γ(z+1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpDecay;

impl PositiveFunction for ExpDecay {
    fn name(&self) -> String {
        "exp-decay".into()
    }

    fn eval_t(&self, t: f64) -> Complex64 {
        Complex64::new((-t).exp(), 0.0)
    }

    fn phi(&self, x: f64) -> Complex64 {
        Complex64::new((x - x.exp()).exp(), 0.0)
    }

    fn weighted_hint(&self, kappa: f64, tol: f64) -> Option<DecayHint> {
        // e^{(κ+1)x − e^x}: exponential decay on the left, double
        // exponential on the right.
        let rate = kappa + 1.0;
        if !(rate > 0.0) {
            return None;
        }
        let lo = (tol * rate).ln() / rate;
        let log_tol = tol.ln();
        let hi = bisect_decreasing(|x| rate * x - x.exp() - log_tol, rate.ln().max(0.0), 60.0);
        Some(DecayHint::Window { lo, hi })
    }

    fn band(&self) -> Band {
        Band {
            lower: -1.0,
            upper: f64::INFINITY,
        }
    }
}

/// `f(t) = (1 + t)^{−2}`, band `(−1, 1)`; `M_z(f) = πz / sin(πz)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalDecay;

impl PositiveFunction for RationalDecay {
    fn name(&self) -> String {
        "rational".into()
    }

    fn eval_t(&self, t: f64) -> Complex64 {
        Complex64::new(1.0 / ((1.0 + t) * (1.0 + t)), 0.0)
    }

    fn phi(&self, x: f64) -> Complex64 {
        // e^x/(1+e^x)^2 written to avoid overflow for large |x|
        let e = (-x.abs()).exp();
        Complex64::new(e / ((1.0 + e) * (1.0 + e)), 0.0)
    }

    fn weighted_hint(&self, kappa: f64, tol: f64) -> Option<DecayHint> {
        // e^{κx}Φ(f)(x) ≤ e^{(κ+1)x} on the left and e^{(κ−1)x} on the right
        let left = kappa + 1.0;
        let right = 1.0 - kappa;
        if !(left > 0.0 && right > 0.0) {
            return None;
        }
        Some(DecayHint::Window {
            lo: (tol * left).ln() / left,
            hi: -(tol * right).ln() / right,
        })
    }

    fn band(&self) -> Band {
        Band {
            lower: -1.0,
            upper: 1.0,
        }
    }
}

/// `f(t) = e^{−(log t)²}/t`, the pullback of a unit Gaussian.
pub fn log_gaussian() -> TermFunction {
    TermFunction::new(vec![LogGaussianTerm::gaussian(Complex64::new(1.0, 0.0), 1.0, 0.0)])
}

/// Root of a function that is positive at `lo` and eventually negative.
fn bisect_decreasing<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    if g(a) <= 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

/// Builtin functions addressable by name from the command line.
pub fn builtins() -> Registry<dyn PositiveFunction> {
    let mut r: Registry<dyn PositiveFunction> = Registry::new("builtin function");
    r.register("exp-decay", "e^{-t}", || Box::new(ExpDecay));
    r.register("rational", "(1+t)^{-2}", || Box::new(RationalDecay));
    r.register("log-gaussian", "e^{-(log t)^2}/t", || Box::new(log_gaussian()));
    r
}
