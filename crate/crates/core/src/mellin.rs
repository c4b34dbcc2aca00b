//! Mellin transform, Mellin convolution and the log substitution `Φ`.
//!
//! With `Φ(f)(x) = e^x f(e^x)`:
//!
//! * `M_z(f) = ∫_0^∞ t^z f(t) dt = ∫_ℝ e^{zx} Φ(f)(x) dx`;
//! * `Φ(f *_M g) = Φ(f) * Φ(g)` (ordinary convolution on the line), so
//!   `M_z(f *_M g) = M_z(f) · M_z(g)`.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::PositiveFunction;
use crate::quadrature::{integrate_interval, integrate_line, Integral, QuadratureConfig};
use crate::term::{LogGaussianTerm, TermFunction};

/// `M_z(f)`. Ansatz functions use the closed form; anything else goes
/// through quadrature and must respect its band.
pub fn mellin_transform(
    f: &dyn PositiveFunction,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<Complex64> {
    match f.as_terms() {
        Some(terms) => Ok(terms.laplace(z)),
        None => mellin_transform_numeric(f, z, config).map(|r| r.value),
    }
}

/// `M_z(f)` by quadrature of `e^{zx} Φ(f)(x)`, for every kind of input.
pub fn mellin_transform_numeric(
    f: &dyn PositiveFunction,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<Integral> {
    if f.as_terms().is_none() {
        f.band().check(z)?;
    }
    let hint = weighted_hint(f, z.re, config)?;
    integrate_line(|x| (z * x).exp() * f.phi(x), hint, config)
}

fn weighted_hint(
    f: &dyn PositiveFunction,
    kappa: f64,
    config: &QuadratureConfig,
) -> Result<crate::quadrature::DecayHint> {
    f.weighted_hint(kappa, config.abs_tol / 4.0).ok_or_else(|| {
        let band = f.band();
        Error::BandViolation {
            re: kappa,
            lower: band.lower,
            upper: band.upper,
        }
    })
}

fn window(
    f: &dyn PositiveFunction,
    kappa: f64,
    config: &QuadratureConfig,
) -> Result<Option<(f64, f64)>> {
    Ok(weighted_hint(f, kappa, config)?.window(config.abs_tol / 4.0, 0.0))
}

/// `Φ(f)`.
pub fn phi_substitute<F>(f: F) -> impl Fn(f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    move |x| {
        let t = x.exp();
        f(t) * t
    }
}

/// `Φ⁻¹(F)(t) = F(log t) / t`.
pub fn phi_inverse<F>(big_f: F) -> impl Fn(f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    move |t| big_f(t.ln()) / t
}

/// `(f *_M g)(t) = ∫_0^∞ f(u) g(t/u) du/u`, computed as
/// `e^{−y} ∫ Φ(f)(x) Φ(g)(y − x) dx` with `y = log t`.
pub fn mellin_convolve(
    f: &dyn PositiveFunction,
    g: &dyn PositiveFunction,
    t: f64,
    config: &QuadratureConfig,
) -> Result<Integral> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidProblem(format!(
            "convolution point must be positive, got {t}"
        )));
    }
    let y = t.ln();
    let (Some(wf), Some(wg)) = (window(f, 0.0, config)?, window(g, 0.0, config)?) else {
        return Ok(zero_integral());
    };
    let lo = wf.0.max(y - wg.1);
    let hi = wf.1.min(y - wg.0);
    let mut r = integrate_interval(|x| f.phi(x) * g.phi(y - x), lo, hi, config)?;
    let scale = (-y).exp();
    r.value *= scale;
    r.error *= scale;
    Ok(r)
}

/// `M_z(f *_M g)` by iterated quadrature: the outer integral runs over
/// `y = log t`, the inner one evaluates the convolution at each `y`.
pub fn mellin_of_convolution(
    f: &dyn PositiveFunction,
    g: &dyn PositiveFunction,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<Integral> {
    if f.as_terms().is_none() {
        f.band().check(z)?;
    }
    if g.as_terms().is_none() {
        g.band().check(z)?;
    }
    let (Some(wf), Some(wg)) = (window(f, z.re, config)?, window(g, z.re, config)?) else {
        return Ok(zero_integral());
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let weighted_f = |x: f64| (z * x).exp() * f.phi(x);
    let weighted_g = |x: f64| (z * x).exp() * g.phi(x);
    let inner = |y: f64| -> Complex64 {
        let lo = wf.0.max(y - wg.1);
        let hi = wf.1.min(y - wg.0);
        match integrate_interval(|x| weighted_f(x) * weighted_g(y - x), lo, hi, config) {
            Ok(r) => r.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let outer = integrate_interval(inner, wf.0 + wg.0, wf.1 + wg.1, config);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outer
}

/// Exact Mellin convolution of two ansatz functions whose terms carry no
/// polynomial factor. Each pair of Gaussian terms convolves to a single
/// Gaussian term; `None` if any term has `p > 0`.
pub fn convolve_gaussian_terms(f: &TermFunction, g: &TermFunction) -> Option<TermFunction> {
    if f.terms().iter().chain(g.terms()).any(|t| t.power > 0) {
        return None;
    }
    let mut out = Vec::with_capacity(f.len() * g.len());
    for a in f.terms() {
        for b in g.terms() {
            let (s1, s2) = (a.sigma, b.sigma);
            let s = s1 + s2;
            let b1 = Complex64::new(a.drift, a.frequency);
            let b2 = Complex64::new(b.drift, b.frequency);
            let rate = (b2 * s1 + b1 * s2) / s;
            let diff = b1 - b2;
            let constant = (std::f64::consts::PI / s).sqrt() * (diff * diff / (4.0 * s)).exp();
            out.push(LogGaussianTerm {
                coefficient: a.coefficient * b.coefficient * constant,
                power: 0,
                sigma: s1 * s2 / s,
                drift: rate.re,
                frequency: rate.im,
            });
        }
    }
    Some(TermFunction::new(out).merged())
}

fn zero_integral() -> Integral {
    Integral {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        refinements: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{log_gaussian, ExpDecay, RationalDecay};
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_values_of_exp_decay() {
        assert!((mellin_transform(&ExpDecay, c(1.0, 0.0), &cfg()).unwrap() - 1.0).norm() < 1e-10);
        assert!((mellin_transform(&ExpDecay, c(3.0, 0.0), &cfg()).unwrap() - 6.0).norm() < 1e-9);
    }

    #[test]
    fn log_gaussian_closed_form() {
        let f = log_gaussian();
        let v = mellin_transform(&f, c(0.0, 0.0), &cfg()).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-14);
        let v = mellin_transform(&f, c(-1.0, 0.0), &cfg()).unwrap();
        assert!((v.re - PI.sqrt() * 0.25f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn band_is_enforced_for_general_functions() {
        let err = mellin_transform(&RationalDecay, c(1.5, 0.0), &cfg());
        assert!(matches!(err, Err(Error::BandViolation { .. })));
        let err = mellin_transform(&ExpDecay, c(-1.0, 2.0), &cfg());
        assert!(matches!(err, Err(Error::BandViolation { .. })));
        // π z / sin(π z) at z = 1/2
        let v = mellin_transform(&RationalDecay, c(0.5, 0.0), &cfg()).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn convolution_of_exponentials() {
        // 2 K_0(2)
        let r = mellin_convolve(&ExpDecay, &ExpDecay, 1.0, &cfg()).unwrap();
        assert!((r.value.re - 0.227_787_745_499_067).abs() < 1e-10, "{}", r.value);
        let zero = TermFunction::zero();
        let r = mellin_convolve(&zero, &ExpDecay, 2.5, &cfg()).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(mellin_convolve(&ExpDecay, &ExpDecay, 0.0, &cfg()).is_err());
    }

    #[test]
    fn homomorphism_on_exponentials() {
        let r = mellin_of_convolution(&ExpDecay, &ExpDecay, c(2.0, 0.0), &cfg()).unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn phi_examples() {
        let one_over_t = |t: f64| c(1.0 / t, 0.0);
        let phi = phi_substitute(one_over_t);
        for x in [-3.0, 0.0, 2.0] {
            assert!((phi(x) - 1.0).norm() < 1e-15);
        }
        let phi = phi_substitute(|t: f64| c((-t).exp(), 0.0));
        assert!((phi(0.0).re - (-1f64).exp()).abs() < 1e-15);
        let back = phi_inverse(phi_substitute(|t: f64| c(t.sin(), t)));
        for t in [0.1, 1.0, 7.5] {
            assert!((back(t) - c(t.sin(), t)).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_fast_path_matches_numeric_convolution() {
        let f = TermFunction::new(vec![
            LogGaussianTerm::new(c(1.0, 0.5), 0, 1.0, 0.3, 1.0).unwrap(),
            LogGaussianTerm::new(c(-0.4, 0.0), 0, 0.7, -0.2, -2.0).unwrap(),
        ]);
        let g = TermFunction::new(vec![LogGaussianTerm::new(c(0.8, -0.1), 0, 1.0, 0.0, 0.5).unwrap()]);
        let exact = convolve_gaussian_terms(&f, &g).unwrap();
        for t in [0.2, 1.0, 3.0] {
            let numeric = mellin_convolve(&f, &g, t, &cfg()).unwrap().value;
            assert!((exact.eval_t(t) - numeric).norm() <= 1e-9, "t={t}");
        }
        let with_poly = TermFunction::new(vec![LogGaussianTerm::new(c(1.0, 0.0), 1, 1.0, 0.0, 0.0).unwrap()]);
        assert!(convolve_gaussian_terms(&with_poly, &g).is_none());
    }
}
