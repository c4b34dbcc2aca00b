//! Weighted seminorms on ansatz functions.
//!
//! For `f(t) = e^{−x} F(x)` the `m`-th derivative is
//! `f^{(m)}(t) = e^{−(m+1)x} P_m(x)`, so both families reduce to the
//! x-domain quantity `e^{γx} P_m(x)`:
//!
//! * sup flavor: `max_{m≤n} sup_t t^{γ+m+1} |f^{(m)}(t)| = max_m sup_x |e^{γx} P_m(x)|`;
//! * L1 flavor:  `max_{m≤n} ∫ t^{γ+m} |f^{(m)}(t)| dt = max_m ∫ e^{γx} |P_m(x)| dx`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_interval, QuadratureConfig};
use crate::registry::Registry;
use crate::report::{CheckItem, CheckReport, Evidence};
use crate::term::TermFunction;

const SCAN_POINTS: usize = 2049;
const GOLDEN_ITERATIONS: usize = 90;
/// Outside the scan window the weighted function is below this fraction of
/// its pointwise bound.
const WINDOW_RATIO: f64 = 1e-16;
const EQUIVALENCE_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Sup,
    L1,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Sup => "sup",
            Flavor::L1 => "l1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormRequest {
    pub gamma: f64,
    pub n: usize,
}

/// One row of a seminorm table (CSV columns `gamma,n,flavor,value`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormRow {
    pub gamma: f64,
    pub n: usize,
    pub flavor: Flavor,
    pub value: f64,
}

pub trait Seminorm: Send + Sync {
    fn flavor(&self) -> Flavor;
    fn evaluate(&self, f: &TermFunction, gamma: f64, n: usize, config: &QuadratureConfig)
        -> Result<f64>;
}

pub struct SupSeminorm;
pub struct L1Seminorm;

impl Seminorm for SupSeminorm {
    fn flavor(&self) -> Flavor {
        Flavor::Sup
    }

    fn evaluate(&self, f: &TermFunction, gamma: f64, n: usize, _: &QuadratureConfig) -> Result<f64> {
        seminorm_sup(f, gamma, n)
    }
}

impl Seminorm for L1Seminorm {
    fn flavor(&self) -> Flavor {
        Flavor::L1
    }

    fn evaluate(
        &self,
        f: &TermFunction,
        gamma: f64,
        n: usize,
        config: &QuadratureConfig,
    ) -> Result<f64> {
        seminorm_l1(f, gamma, n, config)
    }
}

pub fn flavors() -> Registry<dyn Seminorm> {
    let mut r: Registry<dyn Seminorm> = Registry::new("seminorm flavor");
    r.register("sup", "max_m sup_t t^(gamma+m+1) |f^(m)(t)|", || Box::new(SupSeminorm));
    r.register("l1", "max_m int t^(gamma+m) |f^(m)(t)| dt", || Box::new(L1Seminorm));
    r
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProblem(format!("gamma must be finite, got {gamma}")))
    }
}

/// `max_{0≤m≤n} sup_{t>0} t^{γ+m+1} |f^{(m)}(t)|`.
pub fn seminorm_sup(f: &TermFunction, gamma: f64, n: usize) -> Result<f64> {
    check_gamma(gamma)?;
    let mut best: f64 = 0.0;
    let mut p = f.clone();
    for m in 0..=n {
        if m > 0 {
            p = next_derivative(&p, m);
        }
        best = best.max(weighted_sup(&p, gamma));
    }
    Ok(best)
}

/// `max_{0≤m≤n} ∫_0^∞ t^{γ+m} |f^{(m)}(t)| dt`.
pub fn seminorm_l1(f: &TermFunction, gamma: f64, n: usize, config: &QuadratureConfig) -> Result<f64> {
    check_gamma(gamma)?;
    let mut best: f64 = 0.0;
    let mut p = f.clone();
    for m in 0..=n {
        if m > 0 {
            p = next_derivative(&p, m);
        }
        best = best.max(weighted_l1(&p, gamma, config)?);
    }
    Ok(best)
}

/// `P_m` from `P_{m−1}`.
fn next_derivative(prev: &TermFunction, m: usize) -> TermFunction {
    prev.derivative_x()
        .plus(&prev.scaled(num_complex::Complex64::new(-(m as f64), 0.0)))
}

fn scan_window(p: &TermFunction, gamma: f64) -> Option<(f64, f64)> {
    let hint = p.decay_hint(gamma);
    let peak = match hint {
        crate::quadrature::DecayHint::Gaussian { peak, .. } => peak,
        _ => return None,
    };
    hint.window(peak * WINDOW_RATIO, 0.0)
}

fn grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    (0..SCAN_POINTS).map(move |i| lo + i as f64 * step)
}

/// `sup_x |e^{γx} P(x)|`: grid scan plus golden-section refinement of every
/// bracketed local maximum that could compete with the grid maximum.
fn weighted_sup(p: &TermFunction, gamma: f64) -> f64 {
    let Some((lo, hi)) = scan_window(p, gamma) else {
        return 0.0;
    };
    let value = |x: f64| (gamma * x).exp() * p.eval_x(x).norm();
    let xs: Vec<f64> = grid(lo, hi).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| value(x)).collect();
    let grid_max = vs.iter().cloned().fold(0.0, f64::max);
    let mut best = grid_max;
    for i in 1..SCAN_POINTS - 1 {
        if vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && vs[i] >= 0.5 * grid_max {
            let (x, v) = golden_section(&value, xs[i - 1], xs[i + 1], true);
            debug_assert!(x >= xs[i - 1] && x <= xs[i + 1]);
            best = best.max(v);
        }
    }
    best
}

/// Extremum of `g` on `[a, b]`; returns `(x, g(x))`.
fn golden_section<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, maximize: bool) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let sign = if maximize { 1.0 } else { -1.0 };
    let (mut a, mut b) = (a, b);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut gc = sign * g(c);
    let mut gd = sign * g(d);
    for _ in 0..GOLDEN_ITERATIONS {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = sign * g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = sign * g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// `∫ e^{γx} |P(x)| dx`, split at the local minima of `|P|` so that kinks
/// at zeros of `P` sit on piece boundaries.
fn weighted_l1(p: &TermFunction, gamma: f64, config: &QuadratureConfig) -> Result<f64> {
    let Some((lo, hi)) = scan_window(p, gamma) else {
        return Ok(0.0);
    };
    let modulus = |x: f64| p.eval_x(x).norm();
    let xs: Vec<f64> = grid(lo, hi).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| modulus(x)).collect();
    let mut cuts = vec![lo];
    for i in 1..SCAN_POINTS - 1 {
        if vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1] {
            let (x, _) = golden_section(&modulus, xs[i - 1], xs[i + 1], false);
            if x > *cuts.last().unwrap() {
                cuts.push(x);
            }
        }
    }
    cuts.push(hi);
    let integrand = |x: f64| num_complex::Complex64::new((gamma * x).exp() * p.eval_x(x).norm(), 0.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_interval(integrand, w[0], w[1], config)?.value.re;
    }
    Ok(total)
}

/// Evaluates both norm-equivalence inequalities between the sup and L1
/// seminorm families for `γ₁ < γ < γ₂`:
///
/// * `‖f‖¹_{γ,n} ≤ ‖f‖_{γ₁,n}/(γ−γ₁) + ‖f‖_{γ₂,n}/(γ₂−γ)`;
/// * `‖f‖_{γ,n} ≤ c·‖f‖¹_{γ,n} + ‖f‖¹_{γ,n+1}` with
///   `c = max_{m≤n} |γ+m+1|` (which is `γ+n+1` whenever `γ ≥ −1`).
pub fn check_norm_equivalence(
    f: &TermFunction,
    gamma_lower: f64,
    gamma: f64,
    gamma_upper: f64,
    n: usize,
    config: &QuadratureConfig,
) -> Result<CheckReport> {
    for g in [gamma_lower, gamma, gamma_upper] {
        check_gamma(g)?;
    }
    if !(gamma_lower < gamma && gamma < gamma_upper) {
        return Err(Error::InvalidProblem(format!(
            "need gamma1 < gamma < gamma2, got ({gamma_lower}, {gamma}, {gamma_upper})"
        )));
    }
    let l1 = seminorm_l1(f, gamma, n, config)?;
    let l1_next = seminorm_l1(f, gamma, n + 1, config)?;
    let sup = seminorm_sup(f, gamma, n)?;
    let sup_lower = seminorm_sup(f, gamma_lower, n)?;
    let sup_upper = seminorm_sup(f, gamma_upper, n)?;

    let rhs1 = sup_lower / (gamma - gamma_lower) + sup_upper / (gamma_upper - gamma);
    let coef = (0..=n)
        .map(|m| (gamma + m as f64 + 1.0).abs())
        .fold(0.0, f64::max);
    let rhs2 = coef * l1 + l1_next;
    let items = vec![
        CheckItem::at_most(
            format!("l1[gamma={gamma},n={n}] <= sup-split({gamma_lower},{gamma_upper})"),
            l1,
            rhs1,
            EQUIVALENCE_SLACK * (1.0 + rhs1),
        ),
        CheckItem::at_most(
            format!("sup[gamma={gamma},n={n}] <= {coef}*l1[n] + l1[n+1]"),
            sup,
            rhs2,
            EQUIVALENCE_SLACK * (1.0 + rhs2),
        ),
    ];
    Ok(CheckReport::from_items("norm-equivalence", Evidence::Numerical, items))
}

/// Seminorm table for every `(γ, n)` request and flavor.
pub fn seminorm_table(
    f: &TermFunction,
    requests: &[SeminormRequest],
    flavors: &[Flavor],
    config: &QuadratureConfig,
) -> Result<Vec<SeminormRow>> {
    let mut rows = Vec::with_capacity(requests.len() * flavors.len());
    for req in requests {
        for &flavor in flavors {
            let value = match flavor {
                Flavor::Sup => seminorm_sup(f, req.gamma, req.n)?,
                Flavor::L1 => seminorm_l1(f, req.gamma, req.n, config)?,
            };
            rows.push(SeminormRow {
                gamma: req.gamma,
                n: req.n,
                flavor,
                value,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::log_gaussian;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn zero_function() {
        let z = TermFunction::zero();
        assert_eq!(seminorm_sup(&z, 0.3, 2).unwrap(), 0.0);
        assert_eq!(seminorm_l1(&z, 0.3, 2, &cfg()).unwrap(), 0.0);
        let r = check_norm_equivalence(&z, -1.0, 0.0, 1.0, 1, &cfg()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn log_gaussian_values() {
        let f = log_gaussian();
        assert!((seminorm_sup(&f, 0.0, 0).unwrap() - 1.0).abs() < 1e-12);
        let expected = 0.25f64.exp();
        assert!((seminorm_sup(&f, 1.0, 0).unwrap() - expected).abs() < 1e-8 * expected);
        assert!((seminorm_l1(&f, 0.0, 0, &cfg()).unwrap() - PI.sqrt()).abs() < 1e-10);
        let expected = PI.sqrt() * 0.25f64.exp();
        assert!((seminorm_l1(&f, 1.0, 0, &cfg()).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn l1_with_sign_change() {
        // P_1 = (−2x − 1) e^{−x²}; ∫ |2x+1| e^{−x²} dx = √π·erf(1/2) + 2e^{−1/4}
        let f = log_gaussian();
        let v = weighted_l1(&f.t_domain_derivative(1), 0.0, &cfg()).unwrap();
        let expected = 2.480_163_578_968_394_6;
        assert!((v - expected).abs() < 1e-9, "{v}");
    }

    #[test]
    fn equivalence_on_log_gaussian() {
        let f = log_gaussian();
        let r = check_norm_equivalence(&f, -1.0, 0.0, 1.0, 0, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(check_norm_equivalence(&f, 0.0, 0.0, 1.0, 0, &cfg()).is_err());
    }

    #[test]
    fn homogeneity() {
        let f = log_gaussian().plus(&TermFunction::new(vec![crate::term::LogGaussianTerm::new(
            Complex64::new(0.3, -0.2),
            1,
            0.5,
            0.4,
            2.0,
        )
        .unwrap()]));
        let lambda = Complex64::new(-2.0, 1.5);
        let g = f.scaled(lambda);
        let a = seminorm_sup(&f, 0.5, 2).unwrap();
        let b = seminorm_sup(&g, 0.5, 2).unwrap();
        assert!((b - lambda.norm() * a).abs() <= 1e-10 * b);
        let a = seminorm_l1(&f, 0.5, 1, &cfg()).unwrap();
        let b = seminorm_l1(&g, 0.5, 1, &cfg()).unwrap();
        assert!((b - lambda.norm() * a).abs() <= 1e-10 * b);
    }

    #[test]
    fn table_rows_in_request_order() {
        let f = log_gaussian();
        let rows = seminorm_table(
            &f,
            &[SeminormRequest { gamma: 0.0, n: 0 }, SeminormRequest { gamma: 1.0, n: 1 }],
            &[Flavor::Sup, Flavor::L1],
            &cfg(),
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[2].gamma, rows[2].n, rows[2].flavor), (1.0, 1, Flavor::Sup));
        assert!(flavors().get("l1").is_ok());
    }
}
