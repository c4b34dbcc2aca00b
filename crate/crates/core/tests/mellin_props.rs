use mmf_core::function::ExpDecay;
use mmf_core::mellin::{convolve_gaussian_terms, mellin_of_convolution, mellin_transform};
use mmf_core::quadrature::QuadratureConfig;
use mmf_core::term::{LogGaussianTerm, TermFunction};
use mmf_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(rng: &mut ChaCha8Rng, max_power: u32) -> TermFunction {
    let count = rng.gen_range(1..=3);
    TermFunction::new(
        (0..count)
            .map(|_| {
                LogGaussianTerm::new(
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    rng.gen_range(0..=max_power),
                    rng.gen_range(0.5..1.5),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-2.0..2.0),
                )
                .unwrap()
            })
            .collect(),
    )
}

#[test]
fn transform_of_convolution_is_product() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..12 {
        let f = random_function(&mut rng, 2);
        let g = random_function(&mut rng, 2);
        let z = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.3));
        let lhs = mellin_of_convolution(&f, &g, z, &cfg).unwrap().value;
        let rhs = mellin_transform(&f, z, &cfg).unwrap() * mellin_transform(&g, z, &cfg).unwrap();
        assert!((lhs - rhs).norm() <= 1e-6 * (1.0 + rhs.norm()), "case {case}: {lhs} vs {rhs}");
    }
}

#[test]
fn exact_gaussian_convolution_is_multiplicative() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let f = random_function(&mut rng, 0);
        let g = random_function(&mut rng, 0);
        let h = convolve_gaussian_terms(&f, &g).unwrap();
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let rhs = f.laplace(z) * g.laplace(z);
        assert!((h.laplace(z) - rhs).norm() <= 1e-11 * (1.0 + rhs.norm()));
        let _ = cfg;
    }
}

#[test]
fn exponential_gamma_values() {
    let cfg = QuadratureConfig::default();
    let mut factorial = 1.0;
    for n in 0..=8 {
        if n > 0 {
            factorial *= n as f64;
        }
        let v = mellin_transform(&ExpDecay, Complex64::new(n as f64, 0.0), &cfg).unwrap();
        assert!((v.re - factorial).abs() <= 1e-8 * factorial, "n={n}: {v}");
    }
}
