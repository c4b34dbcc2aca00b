//! One function per subcommand. Each returns the serialized report and
//! whether the mathematical check passed.

use std::path::{Path, PathBuf};

use mmf_core::exponents::{check_condition_s, ExponentSequenceSpec};
use mmf_core::function::PositiveFunction;
use mmf_core::mellin::{
    convolve_gaussian_terms, mellin_convolve, mellin_of_convolution, mellin_transform,
    mellin_transform_numeric,
};
use mmf_core::parametric::{check_target_bound, parametric_solve, ParametricProblem, ParametricReport};
use mmf_core::quadrature::QuadratureConfig;
use mmf_core::report::{CheckItem, CheckReport, CheckReport as Check, Evidence};
use mmf_core::seminorm::{check_norm_equivalence, flavors, SeminormRow};
use mmf_core::solver::{build_regularizer, solve_moments, MomentProblem, SolveReport, SolverSettings};
use mmf_core::term::TermFunction;
use mmf_core::weights::{search_witness, verify_witness, WeightFamily, Witness};
use mmf_core::{Complex64, SCHEMA_VERSION};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{
    complex_field, load_family, load_function, load_terms, parse_complex_arg, read_complex_matrix,
    read_json, real_field, to_csv, to_json, Format,
};

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sigma: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
}

pub struct Outcome {
    pub body: String,
    pub passed: bool,
    pub summary: String,
}

/// Horizon used by `check-weights` when none is given.
pub const DEFAULT_HORIZON: usize = 20;
/// Tolerance for the homomorphism check in `convolve`.
pub const HOMOMORPHISM_TOL: f64 = 1e-6;

/// A report body preceded by the schema tag.
#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn tagged<T: Serialize>(body: &T) -> CliResult<String> {
    to_json(&Tagged {
        schema: SCHEMA_VERSION,
        body,
    })
}

fn json_only(format: Format, command: &str) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::usage(format!("--format csv is not available for {command}"))),
    }
}

fn apply_settings(o: &Overrides, sigma: &mut f64, tol: &mut f64, seed: &mut u64) {
    if let Some(s) = o.sigma {
        *sigma = s;
    }
    if let Some(t) = o.tol {
        *tol = t;
    }
    if let Some(s) = o.seed {
        *seed = s;
    }
}

fn residual_csv(report: &SolveReport) -> CliResult<String> {
    let rows: Vec<Vec<String>> = report
        .residuals
        .iter()
        .enumerate()
        .map(|(n, r)| {
            vec![
                n.to_string(),
                complex_field(r.exponent),
                complex_field(r.target),
                complex_field(r.closed_form),
                real_field(r.quadrature),
            ]
        })
        .collect();
    to_csv(&["n", "z", "target", "closed_form_residual", "quadrature_residual"], &rows)
}

fn solve_summary(kind: &str, r: &SolveReport) -> String {
    format!(
        "{kind}: {} moments, {} terms, max quadrature residual {:.3e}, condition {:.3e}, method {:?}, verified {}",
        r.residuals.len(),
        r.solution.len(),
        r.max_quadrature_residual(),
        r.condition,
        r.method,
        r.verified
    )
}

pub fn solve(path: &Path, o: &Overrides, format: Format) -> CliResult<Outcome> {
    let mut problem: MomentProblem = read_json(path)?;
    apply_settings(o, &mut problem.sigma, &mut problem.tol, &mut problem.seed);
    problem.validate()?;
    let report = solve_moments(&problem)?;
    let body = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => residual_csv(&report)?,
    };
    Ok(Outcome {
        body,
        passed: report.verified,
        summary: solve_summary("solve", &report),
    })
}

pub fn verify(problem: &Path, function: &str, o: &Overrides, format: Format) -> CliResult<Outcome> {
    json_only(format, "verify")?;
    let mut p: MomentProblem = read_json(problem)?;
    apply_settings(o, &mut p.sigma, &mut p.tol, &mut p.seed);
    let f = load_function(function)?;
    let cfg = QuadratureConfig::default();
    let mut items = Vec::new();
    for (n, (z, a)) in p.exponents.iter().zip(&p.targets).enumerate() {
        let v = mellin_transform_numeric(f.as_ref(), *z, &cfg)?.value;
        items.push(CheckItem::at_most(
            format!("z[{n}] = {}", complex_field(*z)),
            (v - a).norm(),
            p.tol * (1.0 + a.norm()),
            0.0,
        ));
    }
    let report = CheckReport::from_items("moments", Evidence::Numerical, items);
    Ok(Outcome {
        body: to_json(&report)?,
        passed: report.passed,
        summary: format!(
            "verify: {} of {} moments within tolerance",
            report.items.len() - report.failures().count(),
            report.items.len()
        ),
    })
}

#[derive(Serialize, Deserialize)]
struct TransformValue {
    #[serde(with = "mmf_core::json::complex")]
    z: Complex64,
    #[serde(with = "mmf_core::json::complex")]
    value: Complex64,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TransformReport {
    function: String,
    values: Vec<TransformValue>,
}

pub fn transform(function: &str, zs: &[String], numeric: bool, format: Format) -> CliResult<Outcome> {
    let f = load_function(function)?;
    let cfg = QuadratureConfig::default();
    let mut values = Vec::new();
    for text in zs {
        let z = parse_complex_arg(text)?;
        let v = if numeric || f.as_terms().is_none() {
            let r = mellin_transform_numeric(f.as_ref(), z, &cfg)?;
            TransformValue {
                z,
                value: r.value,
                method: "quadrature".into(),
                error: Some(r.error),
            }
        } else {
            TransformValue {
                z,
                value: mellin_transform(f.as_ref(), z, &cfg)?,
                method: "closed-form".into(),
                error: None,
            }
        };
        values.push(v);
    }
    let report = TransformReport {
        function: f.name(),
        values,
    };
    let body = match format {
        Format::Json => tagged(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .values
                .iter()
                .map(|v| vec![complex_field(v.z), complex_field(v.value), v.method.clone()])
                .collect();
            to_csv(&["z", "value", "method"], &rows)?
        }
    };
    Ok(Outcome {
        body,
        passed: true,
        summary: format!("transform: {} values of {}", report.values.len(), report.function),
    })
}

#[derive(Serialize, Deserialize)]
struct ConvolutionPoint {
    t: f64,
    #[serde(with = "mmf_core::json::complex")]
    value: Complex64,
    error: f64,
}

#[derive(Serialize, Deserialize)]
struct ProductCheck {
    #[serde(with = "mmf_core::json::complex")]
    z: Complex64,
    #[serde(with = "mmf_core::json::complex")]
    of_convolution: Complex64,
    #[serde(with = "mmf_core::json::complex")]
    product: Complex64,
    gap: f64,
    passed: bool,
}

#[derive(Serialize, Deserialize)]
struct ConvolveReport {
    f: String,
    g: String,
    points: Vec<ConvolutionPoint>,
    transforms: Vec<ProductCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<TermFunction>,
}

pub fn convolve(f: &str, g: &str, ts: &[f64], zs: &[String], format: Format) -> CliResult<Outcome> {
    json_only(format, "convolve")?;
    if ts.is_empty() && zs.is_empty() {
        return Err(CliError::usage("convolve needs at least one --t or --z"));
    }
    let (f, g) = (load_function(f)?, load_function(g)?);
    let cfg = QuadratureConfig::default();
    let points = ts
        .iter()
        .map(|&t| {
            let r = mellin_convolve(f.as_ref(), g.as_ref(), t, &cfg)?;
            Ok(ConvolutionPoint {
                t,
                value: r.value,
                error: r.error,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut transforms = Vec::new();
    for text in zs {
        let z = parse_complex_arg(text)?;
        let of_convolution = mellin_of_convolution(f.as_ref(), g.as_ref(), z, &cfg)?.value;
        let product = mellin_transform(f.as_ref(), z, &cfg)? * mellin_transform(g.as_ref(), z, &cfg)?;
        let gap = (of_convolution - product).norm();
        transforms.push(ProductCheck {
            z,
            of_convolution,
            product,
            gap,
            passed: gap <= HOMOMORPHISM_TOL * (1.0 + product.norm()),
        });
    }
    let exact = match (f.as_terms(), g.as_terms()) {
        (Some(a), Some(b)) => convolve_gaussian_terms(a, b),
        _ => None,
    };
    let passed = transforms.iter().all(|t| t.passed);
    let report = ConvolveReport {
        f: f.name(),
        g: g.name(),
        points,
        transforms,
        exact,
    };
    Ok(Outcome {
        body: tagged(&report)?,
        passed,
        summary: format!(
            "convolve: {} points, {} transform checks, homomorphism {}",
            report.points.len(),
            report.transforms.len(),
            if passed { "holds" } else { "FAILS" }
        ),
    })
}

#[derive(Serialize, Deserialize)]
struct SeminormReport {
    rows: Vec<SeminormRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalence: Option<Vec<Check>>,
}

pub struct SeminormArgs<'a> {
    pub function: &'a str,
    pub gammas: &'a [f64],
    pub orders: &'a [usize],
    pub flavors: &'a [String],
    pub equivalence: Option<&'a [f64]>,
}

pub fn seminorms(args: &SeminormArgs, format: Format) -> CliResult<Outcome> {
    let f = load_terms(args.function)?;
    let cfg = QuadratureConfig::default();
    let registry = flavors();
    let names: Vec<String> = if args.flavors.is_empty() {
        registry.names().iter().map(|s| s.to_string()).collect()
    } else {
        args.flavors.to_vec()
    };
    let chosen = names
        .iter()
        .map(|n| registry.get(n))
        .collect::<mmf_core::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &gamma in args.gammas {
        for &n in args.orders {
            for s in &chosen {
                rows.push(SeminormRow {
                    gamma,
                    n,
                    flavor: s.flavor(),
                    value: s.evaluate(&f, gamma, n, &cfg)?,
                });
            }
        }
    }
    let equivalence = match args.equivalence {
        Some(&[g1, g, g2]) => Some(
            args.orders
                .iter()
                .map(|&n| check_norm_equivalence(&f, g1, g, g2, n, &cfg))
                .collect::<mmf_core::Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(CliError::usage("--equivalence takes exactly three values")),
        None => None,
    };
    let passed = equivalence.iter().flatten().all(|r| r.passed);
    let report = SeminormReport { rows, equivalence };
    let body = match format {
        Format::Json => tagged(&report)?,
        Format::Csv => {
            if report.equivalence.is_some() {
                return Err(CliError::usage("--equivalence needs --format json"));
            }
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| vec![real_field(r.gamma), r.n.to_string(), r.flavor.to_string(), real_field(r.value)])
                .collect();
            to_csv(&["gamma", "n", "flavor", "value"], &rows)?
        }
    };
    Ok(Outcome {
        body,
        passed,
        summary: format!("seminorms: {} rows", report.rows.len()),
    })
}

pub fn check_s(path: &Path, format: Format) -> CliResult<Outcome> {
    json_only(format, "check-s")?;
    let spec: ExponentSequenceSpec = read_json(path)?;
    let verdict = check_condition_s(&spec)?;
    let summary = match &verdict.violation_witness {
        None => format!("check-s: satisfied via {:?}", verdict.matched_clause),
        Some(v) => format!("check-s: not satisfied: {v}"),
    };
    Ok(Outcome {
        body: tagged(&verdict)?,
        passed: verdict.satisfies,
        summary,
    })
}

pub fn check_weights(path: &Path, witness: Option<&PathBuf>, o: &Overrides, format: Format) -> CliResult<Outcome> {
    json_only(format, "check-weights")?;
    let family: WeightFamily = load_family(path)?;
    if let Some(w) = witness {
        let witness: Witness = read_json(w)?;
        let report = verify_witness(&family, &witness)?;
        return Ok(Outcome {
            body: to_json(&report)?,
            passed: report.passed,
            summary: format!(
                "check-weights: asserted witness (j = {}) {}",
                witness.j,
                if report.passed { "verified" } else { "refuted" }
            ),
        });
    }
    let horizon = o
        .horizon
        .unwrap_or_else(|| DEFAULT_HORIZON.min(family.max_index()));
    let report = search_witness(&family, horizon)?;
    Ok(Outcome {
        body: to_json(&report)?,
        passed: report.holds,
        summary: format!(
            "check-weights: {} family, condition {} ({:?} evidence)",
            report.family,
            if report.holds { "holds" } else { "fails" },
            report.evidence
        ),
    })
}

/// Exponent list plus optional solver settings; other keys are ignored so a
/// full problem file works too.
#[derive(Deserialize)]
struct ExponentsInput {
    #[serde(with = "mmf_core::json::complex::vec")]
    exponents: Vec<Complex64>,
    #[serde(default)]
    sigma: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    tol: Option<f64>,
}

pub fn regularizer(path: &Path, o: &Overrides, format: Format) -> CliResult<Outcome> {
    let input: ExponentsInput = read_json(path)?;
    let mut settings = SolverSettings::default();
    settings.sigma = input.sigma.unwrap_or(settings.sigma);
    settings.seed = input.seed.unwrap_or(settings.seed);
    settings.tol = input.tol.unwrap_or(settings.tol);
    apply_settings(o, &mut settings.sigma, &mut settings.tol, &mut settings.seed);
    if !(settings.sigma > 0.0 && settings.tol > 0.0) {
        return Err(CliError::usage("sigma and tol must be positive"));
    }
    let report = build_regularizer(&input.exponents, &settings)?;
    let body = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => residual_csv(&report)?,
    };
    Ok(Outcome {
        body,
        passed: report.verified,
        summary: solve_summary("regularizer", &report),
    })
}

#[derive(Serialize, Deserialize)]
struct ParametricOutput {
    #[serde(flatten)]
    report: ParametricReport,
    target_bound: CheckReport,
}

pub fn parametric(path: &Path, targets: Option<&PathBuf>, o: &Overrides, format: Format) -> CliResult<Outcome> {
    let mut problem: ParametricProblem = read_json(path)?;
    if let Some(t) = targets {
        problem.targets = read_complex_matrix(t)?;
    }
    apply_settings(o, &mut problem.sigma, &mut problem.tol, &mut problem.seed);
    let report = parametric_solve(&problem)?;
    let target_bound = check_target_bound(&problem)?;
    let passed = report.verified;
    let summary = format!(
        "parametric-solve: {} parameters, max residual {:.3e}, {} bound rows, verified {}",
        report.lambdas.len(),
        report.max_residual,
        report.bounds.len(),
        report.verified
    );
    let body = match format {
        Format::Json => to_json(&ParametricOutput { report, target_bound })?,
        Format::Csv => {
            let mut header = vec!["n".to_string()];
            header.extend(report.lambdas.iter().map(|l| format!("lambda={l}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = report
                .residuals
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    std::iter::once(n.to_string())
                        .chain(row.iter().map(|&r| real_field(r)))
                        .collect()
                })
                .collect();
            to_csv(&header, &rows)?
        }
    };
    Ok(Outcome { body, passed, summary })
}

#[derive(Serialize, Deserialize)]
struct SamplePoint {
    t: f64,
    #[serde(with = "mmf_core::json::complex")]
    value: Complex64,
}

#[derive(Serialize, Deserialize)]
struct SampleReport {
    function: String,
    rows: Vec<SamplePoint>,
}

/// `points` log-spaced samples of `t` over `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(t_min > 0.0 && t_min.is_finite() && t_max.is_finite()) {
        return Err(CliError::usage(format!("--t-min must be positive, got {t_min}")));
    }
    if t_max < t_min {
        return Err(CliError::usage(format!("--t-max {t_max} is below --t-min {t_min}")));
    }
    if points == 0 {
        return Err(CliError::usage("--points must be at least 1"));
    }
    if points == 1 {
        return Ok(vec![t_min]);
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                t_max
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect())
}

pub fn sample(function: &str, t_min: f64, t_max: f64, points: usize, format: Format) -> CliResult<Outcome> {
    let f: Box<dyn PositiveFunction> = load_function(function)?;
    let grid = log_grid(t_min, t_max, points)?;
    let rows: Vec<SamplePoint> = grid.iter().map(|&t| SamplePoint { t, value: f.eval_t(t) }).collect();
    let body = match format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![real_field(r.t), real_field(r.value.re), real_field(r.value.im)])
                .collect();
            to_csv(&["t", "re", "im"], &table)?
        }
        Format::Json => tagged(&SampleReport {
            function: f.name(),
            rows,
        })?,
    };
    Ok(Outcome {
        body,
        passed: true,
        summary: format!("sample: {points} points of {}", f.name()),
    })
}
