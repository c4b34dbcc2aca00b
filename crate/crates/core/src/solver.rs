//! Finite moment problems `∫_0^∞ t^{z_n} f(t) dt = a_n` solved on the ansatz
//! `Φ(f)(x) = Σ_k c_k exp(−σx² + iω_k x)`.
//!
//! Each moment of a single Gaussian column is the closed-form Laplace value
//! `√(π/σ)·exp((z_n + iω_k)²/(4σ))`, which factors as
//! `D_row[n] · exp(i z_n ω_k/(2σ)) · D_col[k]`. Only the unit-modulus-ish
//! core is handed to the linear solver; both diagonal scalings stay in log
//! form until the coefficients are reconstructed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DirectLu, Factored, Method, MinNormSvd, SolveStrategy};
use crate::mellin::mellin_transform_numeric;
use crate::quadrature::QuadratureConfig;
use crate::seminorm::{seminorm_table, Flavor, SeminormRequest, SeminormRow};
use crate::term::{LogGaussianTerm, TermFunction};
use crate::SCHEMA_VERSION;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest exponent allowed in any scale factor before rescaling is needed.
pub const LOG_BUDGET: f64 = 600.0;
pub const CONDITION_WARNING: f64 = 1e10;
pub const JITTER_RETRIES: usize = 3;
pub const MAX_SIGMA_DOUBLINGS: usize = 6;

/// Problem data plus solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRecord", into = "ProblemRecord")]
pub struct MomentProblem {
    pub exponents: Vec<Complex64>,
    pub targets: Vec<Complex64>,
    pub sigma: f64,
    /// Explicit frequency grid; the spacing rule picks one when absent.
    pub omega: Option<Vec<f64>>,
    pub seed: u64,
    pub tol: f64,
    pub seminorms: Vec<SeminormRequest>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemRecord {
    #[serde(with = "crate::json::complex::vec")]
    exponents: Vec<Complex64>,
    #[serde(with = "crate::json::complex::vec")]
    targets: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(default)]
    seminorms: Vec<SeminormRequest>,
}

impl TryFrom<ProblemRecord> for MomentProblem {
    type Error = Error;
    fn try_from(r: ProblemRecord) -> Result<Self> {
        let p = MomentProblem {
            exponents: r.exponents,
            targets: r.targets,
            sigma: r.sigma.unwrap_or(1.0),
            omega: r.omega,
            seed: r.seed.unwrap_or(0),
            tol: r.tol.unwrap_or(DEFAULT_TOL),
            seminorms: r.seminorms,
        };
        p.validate()?;
        Ok(p)
    }
}

impl From<MomentProblem> for ProblemRecord {
    fn from(p: MomentProblem) -> Self {
        ProblemRecord {
            exponents: p.exponents,
            targets: p.targets,
            sigma: Some(p.sigma),
            omega: p.omega,
            seed: Some(p.seed),
            tol: Some(p.tol),
            seminorms: p.seminorms,
        }
    }
}

impl MomentProblem {
    /// A problem with default settings (`σ = 1`, automatic grid, seed 0).
    pub fn new(exponents: Vec<Complex64>, targets: Vec<Complex64>) -> Self {
        MomentProblem {
            exponents,
            targets,
            sigma: 1.0,
            omega: None,
            seed: 0,
            tol: DEFAULT_TOL,
            seminorms: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponents.is_empty() {
            return Err(Error::InvalidProblem("exponents: at least one is required".into()));
        }
        if self.targets.len() != self.exponents.len() {
            return Err(Error::InvalidProblem(format!(
                "targets: expected {} entries (one per exponent), got {}",
                self.exponents.len(),
                self.targets.len()
            )));
        }
        if let Some(i) = self.exponents.iter().position(|z| !z.is_finite()) {
            return Err(Error::InvalidProblem(format!("exponents[{i}] is not finite")));
        }
        if let Some(i) = self.targets.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidProblem(format!("targets[{i}] is not finite")));
        }
        check_distinct(&self.exponents)?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidProblem(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidProblem(format!("tol must be positive, got {}", self.tol)));
        }
        if let Some(omega) = &self.omega {
            check_grid(omega, self.exponents.len())?;
        }
        Ok(())
    }

    fn settings(&self) -> SolverSettings {
        SolverSettings {
            sigma: self.sigma,
            omega: self.omega.clone(),
            seed: self.seed,
            tol: self.tol,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Settings shared by every solve built on one factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub sigma: f64,
    pub omega: Option<Vec<f64>>,
    pub seed: u64,
    pub tol: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            sigma: 1.0,
            omega: None,
            seed: 0,
            tol: DEFAULT_TOL,
            quadrature: QuadratureConfig::default(),
        }
    }
}

fn check_distinct(exponents: &[Complex64]) -> Result<()> {
    for i in 0..exponents.len() {
        for j in i + 1..exponents.len() {
            if exponents[i] == exponents[j] {
                return Err(Error::DuplicateExponent {
                    first: i,
                    second: j,
                    value: crate::json::format_complex(exponents[i]),
                });
            }
        }
    }
    Ok(())
}

fn check_grid(omega: &[f64], rows: usize) -> Result<()> {
    if omega.len() < rows {
        return Err(Error::InvalidProblem(format!(
            "omega: need at least {rows} frequencies, got {}",
            omega.len()
        )));
    }
    if omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidProblem("omega: frequencies must be finite".into()));
    }
    for i in 0..omega.len() {
        for j in i + 1..omega.len() {
            if omega[i] == omega[j] {
                return Err(Error::InvalidProblem(format!(
                    "omega[{i}] and omega[{j}] are equal ({})",
                    omega[i]
                )));
            }
        }
    }
    Ok(())
}

/// `Δ = min(2σ, 2πσ/(1 + spanRe))`.
pub fn frequency_spacing(exponents: &[Complex64], sigma: f64) -> f64 {
    let (lo, hi) = exponents
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)));
    let span = hi - lo;
    (2.0 * sigma).min(2.0 * std::f64::consts::PI * sigma / (1.0 + span))
}

/// `K + 1` equally spaced frequencies centred on `−mean(Im z_n)`.
pub fn default_grid(exponents: &[Complex64], sigma: f64, k: usize) -> Vec<f64> {
    let delta = frequency_spacing(exponents, sigma);
    let shift = exponents.iter().map(|z| z.im).sum::<f64>() / exponents.len() as f64;
    (0..=k)
        .map(|i| (i as f64 - k as f64 / 2.0) * delta - shift)
        .collect()
}

/// The scaled moment matrix `A = D_row · B · D_col`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSystem {
    /// `log D_row[n] = ½ log(π/σ) + z_n²/(4σ)`.
    pub log_row: Vec<Complex64>,
    /// `log D_col[k] = −ω_k²/(4σ)`.
    pub log_col: Vec<f64>,
    /// `B[n][k] = exp(i z_n ω_k/(2σ))`.
    pub core: Vec<Vec<Complex64>>,
}

impl ScaledSystem {
    /// `A[n][k]`, only safe to call when the product is representable.
    pub fn entry(&self, n: usize, k: usize) -> Complex64 {
        (self.log_row[n] + self.log_col[k]).exp() * self.core[n][k]
    }
}

pub fn assemble_system(exponents: &[Complex64], sigma: f64, omega: &[f64]) -> Result<ScaledSystem> {
    let four_sigma = 4.0 * sigma;
    let half_log = 0.5 * (std::f64::consts::PI / sigma).ln();
    for (n, z) in exponents.iter().enumerate() {
        if z.norm_sqr() / four_sigma > LOG_BUDGET {
            return Err(Error::OverflowRisk(format!(
                "|z[{n}]|^2/(4 sigma) = {:.3e} exceeds {LOG_BUDGET} (increase sigma)",
                z.norm_sqr() / four_sigma
            )));
        }
    }
    let max_im = exponents.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    for (k, w) in omega.iter().enumerate() {
        if w * w / four_sigma > LOG_BUDGET || max_im * w.abs() / (2.0 * sigma) > LOG_BUDGET {
            return Err(Error::OverflowRisk(format!(
                "frequency omega[{k}] = {w} is too large for sigma = {sigma}"
            )));
        }
    }
    let i = Complex64::new(0.0, 1.0);
    Ok(ScaledSystem {
        log_row: exponents.iter().map(|z| half_log + z * z / four_sigma).collect(),
        log_col: omega.iter().map(|w| -w * w / four_sigma).collect(),
        core: exponents
            .iter()
            .map(|z| omega.iter().map(|w| (i * z * *w / (2.0 * sigma)).exp()).collect())
            .collect(),
    })
}

/// A factored system ready for any number of target vectors.
pub struct Factorization {
    sigma: f64,
    omega: Vec<f64>,
    system: ScaledSystem,
    factored: Box<dyn Factored>,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Factorization")
            .field("sigma", &self.sigma)
            .field("omega", &self.omega)
            .field("method", &self.factored.method())
            .field("condition", &self.factored.condition_estimate())
            .finish()
    }
}

impl Factorization {
    pub fn build(
        exponents: &[Complex64],
        sigma: f64,
        omega: Vec<f64>,
        strategy: &dyn SolveStrategy,
    ) -> Result<Self> {
        let system = assemble_system(exponents, sigma, &omega)?;
        let factored = strategy.factor(&system.core)?;
        Ok(Factorization {
            sigma,
            omega,
            system,
            factored,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn method(&self) -> Method {
        self.factored.method()
    }

    pub fn condition(&self) -> f64 {
        self.factored.condition_estimate()
    }

    /// The ansatz function matching `targets` in closed form.
    pub fn solve(&self, targets: &[Complex64]) -> TermFunction {
        let rhs: Vec<Complex64> = targets
            .iter()
            .zip(&self.system.log_row)
            .map(|(a, lr)| a * (-lr).exp())
            .collect();
        let y = self.factored.solve(&rhs);
        let terms = y
            .iter()
            .zip(&self.omega)
            .zip(&self.system.log_col)
            .map(|((yk, w), lc)| LogGaussianTerm::gaussian(yk * (-lc).exp(), self.sigma, *w))
            .collect();
        TermFunction::new(terms).merged()
    }
}

/// Per-exponent residuals of a returned solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    #[serde(with = "crate::json::complex")]
    pub exponent: Complex64,
    #[serde(with = "crate::json::complex")]
    pub target: Complex64,
    /// `M_{z_n}(f) − a_n` from the closed form.
    #[serde(with = "crate::json::complex")]
    pub closed_form: Complex64,
    /// `|M_{z_n}(f) − a_n|` from independent quadrature.
    pub quadrature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    pub solution: TermFunction,
    pub residuals: Vec<Residual>,
    pub condition: f64,
    pub method: Method,
    pub sigma: f64,
    pub omega: Vec<f64>,
    pub attempts: usize,
    pub tol: f64,
    pub verified: bool,
    pub seminorms: Vec<SeminormRow>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn max_quadrature_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.quadrature).fold(0.0, f64::max)
    }
}

/// Independent quadrature residuals for `f` against `targets`.
pub fn residuals(
    f: &TermFunction,
    exponents: &[Complex64],
    targets: &[Complex64],
    quadrature: &QuadratureConfig,
) -> Result<Vec<Residual>> {
    exponents
        .iter()
        .zip(targets)
        .map(|(&z, &a)| {
            let numeric = mellin_transform_numeric(f, z, quadrature)?.value;
            Ok(Residual {
                exponent: z,
                target: a,
                closed_form: f.laplace(z) - a,
                quadrature: (numeric - a).norm(),
            })
        })
        .collect()
}

fn within_tol(rows: &[Residual], tol: f64) -> bool {
    rows.iter().all(|r| r.quadrature <= tol * (1.0 + r.target.norm()))
}

/// Outcome of the retry ladder for a set of target vectors.
struct Ladder {
    factorization: Factorization,
    solutions: Vec<TermFunction>,
    residuals: Vec<Vec<Residual>>,
    attempts: usize,
    verified: bool,
    warnings: Vec<String>,
}

fn jittered(base: &[f64], delta: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    base.iter()
        .map(|w| w + delta * rng.gen_range(-0.25..0.25))
        .collect()
}

/// Tries the planned grid, then jittered copies, then a wider grid in
/// minimum-norm mode, doubling `σ` whenever the scaling would overflow.
fn run_ladder(
    exponents: &[Complex64],
    target_sets: &[Vec<Complex64>],
    settings: &SolverSettings,
) -> Result<Ladder> {
    check_distinct(exponents)?;
    if let Some(omega) = &settings.omega {
        check_grid(omega, exponents.len())?;
    }
    let mut sigma = settings.sigma;
    let mut warnings = Vec::new();
    for doubling in 0..=MAX_SIGMA_DOUBLINGS {
        match ladder_at_sigma(exponents, target_sets, settings, sigma) {
            Err(Error::OverflowRisk(msg)) if doubling < MAX_SIGMA_DOUBLINGS => {
                warnings.push(format!("sigma {sigma} doubled: {msg}"));
                sigma *= 2.0;
            }
            Ok(mut ladder) => {
                warnings.append(&mut ladder.warnings);
                ladder.warnings = warnings;
                return Ok(ladder);
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("the last doubling returns")
}

fn ladder_at_sigma(
    exponents: &[Complex64],
    target_sets: &[Vec<Complex64>],
    settings: &SolverSettings,
    sigma: f64,
) -> Result<Ladder> {
    let n = exponents.len() - 1;
    let base = settings
        .omega
        .clone()
        .unwrap_or_else(|| default_grid(exponents, sigma, n));
    let delta = frequency_spacing(exponents, sigma);
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let square = base.len() == exponents.len();

    let mut plans: Vec<(Vec<f64>, &dyn SolveStrategy)> = Vec::new();
    let first: &dyn SolveStrategy = if square { &DirectLu } else { &MinNormSvd };
    plans.push((base.clone(), first));
    for _ in 0..JITTER_RETRIES {
        plans.push((jittered(&base, delta, &mut rng), first));
    }
    let wide = base.len() - 1 + n;
    plans.push((default_grid(exponents, sigma, wide), &MinNormSvd));

    let mut warnings = Vec::new();
    let mut best: Option<Ladder> = None;
    let mut last_error = None;
    for (attempt, (omega, strategy)) in plans.into_iter().enumerate() {
        let factorization = match Factorization::build(exponents, sigma, omega, strategy) {
            Ok(f) => f,
            Err(e @ Error::SingularSystem { .. }) => {
                warnings.push(format!("attempt {}: {e}", attempt + 1));
                last_error = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let solutions: Vec<TermFunction> =
            target_sets.iter().map(|t| factorization.solve(t)).collect();
        let residuals = solutions
            .iter()
            .zip(target_sets)
            .map(|(f, t)| residuals(f, exponents, t, &settings.quadrature))
            .collect::<Result<Vec<_>>>()?;
        let verified = residuals.iter().all(|r| within_tol(r, settings.tol));
        let worst = worst_residual(&residuals);
        let candidate = Ladder {
            factorization,
            solutions,
            residuals,
            attempts: attempt + 1,
            verified,
            warnings: Vec::new(),
        };
        if verified {
            return Ok(Ladder {
                warnings,
                ..candidate
            });
        }
        warnings.push(format!(
            "attempt {}: quadrature residual {worst:e} above tolerance",
            attempt + 1
        ));
        if best.as_ref().map_or(true, |b| worst < worst_residual(&b.residuals)) {
            best = Some(candidate);
        }
    }
    match best {
        Some(b) => Ok(Ladder { warnings, ..b }),
        None => Err(last_error.unwrap_or(Error::SingularSystem {
            condition: f64::INFINITY,
        })),
    }
}

fn worst_residual(rows: &[Vec<Residual>]) -> f64 {
    rows.iter().flatten().map(|r| r.quadrature).fold(0.0, f64::max)
}

fn into_report(
    mut ladder: Ladder,
    tol: f64,
    requests: &[SeminormRequest],
    quadrature: &QuadratureConfig,
) -> Result<SolveReport> {
    let solution = ladder.solutions.remove(0);
    let residuals = ladder.residuals.remove(0);
    let condition = ladder.factorization.condition();
    if condition > CONDITION_WARNING {
        ladder
            .warnings
            .push(format!("condition estimate {condition:e} exceeds {CONDITION_WARNING:e}"));
    }
    let seminorms = seminorm_table(&solution, requests, &[Flavor::Sup, Flavor::L1], quadrature)?;
    Ok(SolveReport {
        schema: SCHEMA_VERSION.to_string(),
        solution,
        residuals,
        condition,
        method: ladder.factorization.method(),
        sigma: ladder.factorization.sigma(),
        omega: ladder.factorization.omega().to_vec(),
        attempts: ladder.attempts,
        tol,
        verified: ladder.verified,
        seminorms,
        warnings: ladder.warnings,
    })
}

/// Solves one moment problem and verifies every moment by quadrature.
pub fn solve_moments(problem: &MomentProblem) -> Result<SolveReport> {
    problem.validate()?;
    let settings = problem.settings();
    let ladder = run_ladder(&problem.exponents, &[problem.targets.clone()], &settings)?;
    into_report(ladder, problem.tol, &problem.seminorms, &settings.quadrature)
}

/// Biorthogonal family `g_0..g_N` with `M_{z_n}(g_m) = δ_{nm}`.
#[derive(Debug)]
pub struct UnitSolutions {
    pub functions: Vec<TermFunction>,
    /// Worst quadrature residual over all `(n, m)`.
    pub residual_bound: f64,
    pub verified: bool,
    pub factorization: Factorization,
    pub warnings: Vec<String>,
}

pub fn unit_solutions(exponents: &[Complex64], settings: &SolverSettings) -> Result<UnitSolutions> {
    if exponents.is_empty() {
        return Err(Error::InvalidProblem("exponents: at least one is required".into()));
    }
    let units: Vec<Vec<Complex64>> = (0..exponents.len())
        .map(|m| {
            (0..exponents.len())
                .map(|n| Complex64::new(if n == m { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    let ladder = run_ladder(exponents, &units, settings)?;
    Ok(UnitSolutions {
        residual_bound: worst_residual(&ladder.residuals),
        verified: ladder.verified,
        functions: ladder.solutions,
        factorization: ladder.factorization,
        warnings: ladder.warnings,
    })
}

/// `ψ` with `M_{z_n}(ψ) = 1` for every exponent.
pub fn build_regularizer(exponents: &[Complex64], settings: &SolverSettings) -> Result<SolveReport> {
    if exponents.is_empty() {
        return Err(Error::InvalidProblem("exponents: at least one is required".into()));
    }
    let ones = vec![Complex64::new(1.0, 0.0); exponents.len()];
    let ladder = run_ladder(exponents, &[ones], settings)?;
    into_report(ladder, settings.tol, &[], &settings.quadrature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_entry_system() {
        let s = assemble_system(&[c(0.0, 0.0)], 1.0, &[0.0]).unwrap();
        assert!((s.entry(0, 0) - PI.sqrt()).norm() < 1e-15);
        let s = assemble_system(&[c(1.0, 0.0)], 1.0, &[0.0]).unwrap();
        assert!((s.entry(0, 0) - PI.sqrt() * 0.25f64.exp()).norm() < 1e-14);
    }

    #[test]
    fn core_modulus_and_vandermonde_structure() {
        let z = [c(0.5, 1.0), c(-1.0, -0.5), c(2.0, 0.3)];
        let sigma = 1.3;
        let delta = 0.7;
        let omega: Vec<f64> = (0..3).map(|k| k as f64 * delta).collect();
        let s = assemble_system(&z, sigma, &omega).unwrap();
        for (n, zn) in z.iter().enumerate() {
            let node = (c(0.0, 1.0) * zn * delta / (2.0 * sigma)).exp();
            for (k, w) in omega.iter().enumerate() {
                let b = s.core[n][k];
                assert!((b.norm() - (-zn.im * w / (2.0 * sigma)).exp()).abs() < 1e-14);
                assert!((b - node.powi(k as i32)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let err = assemble_system(&[c(60.0, 0.0)], 1.0, &[0.0]);
        assert!(matches!(err, Err(Error::OverflowRisk(_))));
    }

    #[test]
    fn single_moment_solution() {
        let p = MomentProblem::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]);
        let r = solve_moments(&p).unwrap();
        assert!(r.verified);
        assert_eq!(r.solution.len(), 1);
        let c0 = r.solution.terms()[0].coefficient;
        assert!((c0 - 1.0 / PI.sqrt()).norm() < 1e-14);
        assert!(r.residuals[0].quadrature < 1e-12);
        assert_eq!(r.method, Method::Direct);
    }

    #[test]
    fn homogeneous_targets_give_zero() {
        let p = MomentProblem::new(vec![c(0.0, 0.0), c(1.0, 2.0)], vec![c(0.0, 0.0); 2]);
        let r = solve_moments(&p).unwrap();
        assert!(r.solution.is_empty());
        assert!(r.residuals.iter().all(|x| x.quadrature == 0.0));
    }

    #[test]
    fn gamma_targets() {
        let p = MomentProblem::new(
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0), c(6.0, 0.0)],
        );
        let r = solve_moments(&p).unwrap();
        assert!(r.verified);
        assert!(r.max_quadrature_residual() <= 1e-8);
    }

    #[test]
    fn duplicates_are_rejected() {
        let p = MomentProblem::new(vec![c(1.0, 1.0), c(0.0, 0.0), c(1.0, 1.0)], vec![c(1.0, 0.0); 3]);
        assert!(matches!(
            solve_moments(&p),
            Err(Error::DuplicateExponent { first: 0, second: 2, .. })
        ));
    }

    #[test]
    fn unit_family_is_biorthogonal() {
        let z = [c(0.3, 1.0), c(-1.2, 0.0), c(2.0, -2.5)];
        let u = unit_solutions(&z, &SolverSettings::default()).unwrap();
        assert!(u.verified);
        for (m, g) in u.functions.iter().enumerate() {
            for (n, zn) in z.iter().enumerate() {
                let v = mellin_transform_numeric(g, *zn, &QuadratureConfig::default())
                    .unwrap()
                    .value;
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((v - expected).norm() <= 1e-8, "n={n} m={m} {v}");
            }
        }
    }

    #[test]
    fn regularizer_has_unit_moments() {
        let z: Vec<Complex64> = [-1.5, -0.4, 0.2, 1.1, 1.9].iter().map(|&x| c(x, 0.0)).collect();
        let r = build_regularizer(&z, &SolverSettings::default()).unwrap();
        assert!(r.verified);
        assert!(r.max_quadrature_residual() <= 1e-8);
    }

    #[test]
    fn explicit_wide_grid_uses_min_norm() {
        let mut p = MomentProblem::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.5, 0.0)]);
        p.omega = Some(vec![-1.0, 0.0, 1.0, 2.0]);
        let r = solve_moments(&p).unwrap();
        assert_eq!(r.method, Method::MinNorm);
        assert!(r.verified);
    }

    #[test]
    fn problem_json() {
        let text = r#"{"exponents":[{"re":0,"im":0}],"targets":[{"re":1}],"seminorms":[{"gamma":0,"n":1}]}"#;
        let p: MomentProblem = serde_json::from_str(text).unwrap();
        assert_eq!(p.sigma, 1.0);
        assert_eq!(p.seed, 0);
        assert_eq!(p.seminorms.len(), 1);
        let bad = r#"{"exponents":[{"re":0}],"targets":[{"re":1}],"sigmma":2}"#;
        assert!(serde_json::from_str::<MomentProblem>(bad).is_err());
        let dup = r#"{"exponents":[{"re":1},{"re":1}],"targets":[{"re":1},{"re":1}]}"#;
        let err = serde_json::from_str::<MomentProblem>(dup).unwrap_err().to_string();
        assert!(err.contains("z[0] and z[1]"), "{err}");
    }
}
