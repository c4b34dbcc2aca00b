//! Composite Simpson quadrature with interval halving on a truncated line.
//!
//! Integrands are expected to decay at least like a Gaussian (or to vanish
//! outside an explicit window). The truncation window is derived from the
//! caller's [`DecayHint`], after which the rule is refined by halving until
//! two successive Simpson estimates agree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INITIAL_INTERVALS: usize = 32;
const MIN_REFINEMENTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
    pub initial_half_width: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_refinements: 16,
            initial_half_width: 8.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidProblem("quadrature tolerances must be positive".into()));
        }
        if self.max_refinements == 0 {
            return Err(Error::InvalidProblem("max_refinements must be >= 1".into()));
        }
        if !(self.initial_half_width > 0.0) {
            return Err(Error::InvalidProblem("initial_half_width must be positive".into()));
        }
        Ok(())
    }
}

/// Where an integrand on the line is non-negligible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayHint {
    /// `|g(x)| ≤ peak · exp(−σx² + growth·|x|)`.
    Gaussian { sigma: f64, growth: f64, peak: f64 },
    /// `g` is negligible outside `[lo, hi]`.
    Window { lo: f64, hi: f64 },
}

impl DecayHint {
    /// Truncation interval such that the neglected tails stay below `tol`.
    ///
    /// For the Gaussian bound this is `[−X, X]` with
    /// `X = (r + √(r² + 4σ ln(peak/tol))) / (2σ)`, never narrower than
    /// `min_half_width`.
    pub fn window(&self, tol: f64, min_half_width: f64) -> Option<(f64, f64)> {
        match *self {
            DecayHint::Gaussian {
                sigma,
                growth,
                peak,
            } => {
                if peak == 0.0 {
                    return None;
                }
                let r = growth.abs();
                let log_ratio = (peak / tol).ln().max(0.0);
                let x = (r + (r * r + 4.0 * sigma * log_ratio).sqrt()) / (2.0 * sigma);
                let x = x.max(min_half_width);
                Some((-x, x))
            }
            DecayHint::Window { lo, hi } => (lo < hi).then_some((lo, hi)),
        }
    }
}

/// Integral estimate with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub refinements: usize,
}

impl Integral {
    fn zero() -> Self {
        Integral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            refinements: 0,
        }
    }
}

/// `∫_ℝ g(x) dx`.
pub fn integrate_line<F>(g: F, hint: DecayHint, config: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    match hint.window(config.abs_tol / 4.0, config.initial_half_width) {
        Some((lo, hi)) => integrate_interval(g, lo, hi, config),
        None => Ok(Integral::zero()),
    }
}

/// `∫_0^∞ h(t) dt`, evaluated as `∫_ℝ h(e^x) e^x dx`.
///
/// The hint describes the x-domain integrand `h(e^x) e^x`.
pub fn integrate_halfline<F>(h: F, hint: DecayHint, config: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    integrate_line(
        |x| {
            let t = x.exp();
            h(t) * t
        },
        hint,
        config,
    )
}

/// Composite Simpson on `[lo, hi]`, halving until converged.
///
/// Convergence is declared once two successive Simpson estimates differ by
/// at most `max(abs_tol, rel_tol·|S|, noise)`, where `noise` is the rounding
/// floor `64·ε·∫|g|` of the summation itself.
pub fn integrate_interval<F>(g: F, lo: f64, hi: f64, config: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if !(hi > lo) {
        return Ok(Integral::zero());
    }
    let mut n = INITIAL_INTERVALS;
    let mut h = (hi - lo) / n as f64;
    let fa = g(lo);
    let fb = g(hi);
    let mut sum = (fa + fb) * 0.5;
    let mut abs_sum = 0.5 * (fa.norm() + fb.norm());
    for i in 1..n {
        let v = g(lo + i as f64 * h);
        sum += v;
        abs_sum += v.norm();
    }
    let mut evaluations = n + 1;
    let mut trapezoid = sum * h;
    let mut simpson_prev: Option<Complex64> = None;
    let mut last_change = f64::INFINITY;

    for level in 1..=config.max_refinements {
        let mut mid = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let v = g(lo + (i as f64 + 0.5) * h);
            mid += v;
            abs_sum += v.norm();
        }
        evaluations += n;
        n *= 2;
        h *= 0.5;
        let refined = trapezoid * 0.5 + mid * h;
        let simpson = (refined * 4.0 - trapezoid) / 3.0;
        trapezoid = refined;

        if let Some(prev) = simpson_prev {
            let change = (simpson - prev).norm();
            last_change = change;
            let noise = 64.0 * f64::EPSILON * abs_sum * h;
            let target = config
                .abs_tol
                .max(config.rel_tol * simpson.norm())
                .max(noise);
            if level >= MIN_REFINEMENTS && change <= target {
                return Ok(Integral {
                    value: simpson + (simpson - prev) / 15.0,
                    error: change / 15.0,
                    evaluations,
                    refinements: level,
                });
            }
        }
        simpson_prev = Some(simpson);
    }
    Err(Error::NoConvergence {
        refinements: config.max_refinements,
        last_change,
        target: config.abs_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gauss_hint() -> DecayHint {
        DecayHint::Gaussian {
            sigma: 1.0,
            growth: 0.0,
            peak: 1.0,
        }
    }

    #[test]
    fn gaussian_integral() {
        let cfg = QuadratureConfig::default();
        let r = integrate_line(|x| Complex64::new((-x * x).exp(), 0.0), gauss_hint(), &cfg).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() <= 1e-10);
        let r = integrate_line(|x| Complex64::new(x * (-x * x).exp(), 0.0), gauss_hint(), &cfg)
            .unwrap();
        assert!(r.value.norm() <= 1e-12);
        let r = integrate_line(
            |x| Complex64::new((-x * x).exp() * (2.0 * x).cos(), 0.0),
            gauss_hint(),
            &cfg,
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt() * (-1f64).exp()).abs() <= 1e-10);
    }

    #[test]
    fn halfline_examples() {
        let cfg = QuadratureConfig::default();
        let hint = DecayHint::Window { lo: -40.0, hi: 4.0 };
        let r = integrate_halfline(|t| Complex64::new((-t).exp(), 0.0), hint, &cfg).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-10);
        let r = integrate_halfline(|t| Complex64::new(t.powi(3) * (-t).exp(), 0.0), hint, &cfg)
            .unwrap();
        let gamma4: f64 = (1..=3).map(|k| k as f64).product();
        assert!((r.value.re - gamma4).abs() < 1e-9);
        let r = integrate_halfline(
            |t| Complex64::new((-t.ln().powi(2)).exp() / t, 0.0),
            gauss_hint(),
            &cfg,
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn window_formula() {
        let hint = DecayHint::Gaussian {
            sigma: 2.0,
            growth: 3.0,
            peak: 10.0,
        };
        let tol = 1e-12;
        let (lo, hi) = hint.window(tol, 0.0).unwrap();
        assert_eq!(lo, -hi);
        let bound = 10.0 * (-2.0 * hi * hi + 3.0 * hi).exp();
        assert!((bound - tol).abs() <= 1e-6 * tol);
        assert!(DecayHint::Gaussian {
            sigma: 1.0,
            growth: 0.0,
            peak: 0.0
        }
        .window(tol, 1.0)
        .is_none());
    }

    #[test]
    fn tighter_tolerance_costs_more_and_estimates_less() {
        let f = |x: f64| Complex64::new((-x * x).exp() * (5.0 * x).cos(), (-x * x).exp() * x.sin());
        let loose = QuadratureConfig {
            abs_tol: 1e-4,
            rel_tol: 1e-4,
            ..Default::default()
        };
        let tight = QuadratureConfig::default();
        let a = integrate_line(f, gauss_hint(), &loose).unwrap();
        let b = integrate_line(f, gauss_hint(), &tight).unwrap();
        assert!(b.evaluations >= a.evaluations);
        assert!(b.error <= a.error);
        let exact = PI.sqrt() * (-25.0f64 / 4.0).exp();
        assert!((b.value.re - exact).abs() < 1e-11);
    }

    #[test]
    fn evaluations_double_per_refinement() {
        let cfg = QuadratureConfig::default();
        let r = integrate_interval(|x| Complex64::new(x.sin(), 0.0), 0.0, 1.0, &cfg).unwrap();
        assert_eq!(r.evaluations, INITIAL_INTERVALS * (1 << r.refinements) + 1);
    }

    #[test]
    fn non_decaying_integrand_does_not_converge() {
        let cfg = QuadratureConfig {
            max_refinements: 3,
            ..Default::default()
        };
        let err = integrate_interval(|x| Complex64::new((200.0 * x).sin(), 0.0), 0.0, 1.0, &cfg);
        assert!(matches!(err, Err(Error::NoConvergence { .. })));
    }
}
