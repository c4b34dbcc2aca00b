use mmf_core::mellin::mellin_transform_numeric;
use mmf_core::quadrature::QuadratureConfig;
use mmf_core::seminorm::seminorm_sup;
use mmf_core::solver::{solve_moments, MomentProblem};
use mmf_core::term::TermFunction;
use mmf_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_problem(rng: &mut ChaCha8Rng, size: usize) -> MomentProblem {
    let exponents = (0..size)
        .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-5.0..5.0)))
        .collect();
    let targets = (0..size)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3)))
        .collect();
    MomentProblem::new(exponents, targets)
}

#[test]
fn superposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = QuadratureConfig::default();
    for _ in 0..5 {
        let p = random_problem(&mut rng, 6);
        let q = MomentProblem::new(p.exponents.clone(), random_problem(&mut rng, 6).targets);
        let sum = TermFunction::combination(
            &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            &[solve_moments(&p).unwrap().solution, solve_moments(&q).unwrap().solution],
        );
        for n in 0..6 {
            let v = mellin_transform_numeric(&sum, p.exponents[n], &cfg).unwrap().value;
            let a = p.targets[n] + q.targets[n];
            assert!((v - a).norm() <= 2.0 * p.tol * (1.0 + a.norm()));
        }
    }
}

#[test]
fn closed_form_and_quadrature_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let p = random_problem(&mut rng, 8);
        let r = solve_moments(&p).unwrap();
        for row in &r.residuals {
            let closed = row.closed_form + row.target;
            let quad_gap = row.quadrature;
            let closed_gap = row.closed_form.norm();
            assert!((quad_gap - closed_gap).abs() <= 1e-8 * (1.0 + closed.norm()));
        }
    }
}

#[test]
fn solutions_have_finite_seminorms() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let r = solve_moments(&random_problem(&mut rng, 5)).unwrap();
    for gamma in -5..=5 {
        for n in 0..=3 {
            let v = seminorm_sup(&r.solution, gamma as f64, n).unwrap();
            assert!(v.is_finite(), "gamma={gamma} n={n}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let p = random_problem(&mut rng, 7);
    let a = mmf_core::json::to_string_precise(&solve_moments(&p).unwrap()).unwrap();
    let b = mmf_core::json::to_string_precise(&solve_moments(&p).unwrap()).unwrap();
    assert_eq!(a, b);
}
