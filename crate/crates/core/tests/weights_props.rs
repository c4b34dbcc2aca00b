use mmf_core::weights::{
    search_witness, verify_witness, LogLinearFamily, SearchOutcome, WeightFamily,
};

fn lambdas() -> Vec<f64> {
    (0..=40).map(|l| l as f64).collect()
}

fn families() -> Vec<(&'static str, LogLinearFamily)> {
    let rates = |f: &dyn Fn(usize) -> f64| (0..41).map(f).collect::<Vec<f64>>();
    vec![
        ("linear", LogLinearFamily::new(rates(&|j| j as f64), f64::INFINITY).unwrap()),
        ("doubled", LogLinearFamily::new(rates(&|j| 2.0 * j as f64), f64::INFINITY).unwrap()),
        ("capped", LogLinearFamily::new(rates(&|j| (j as f64).min(5.0)), 5.0).unwrap()),
        ("constant", LogLinearFamily::new(rates(&|_| 0.0), 0.0).unwrap()),
        ("harmonic", LogLinearFamily::new(rates(&|j| 1.0 - 1.0 / (j as f64 + 1.0)), 1.0).unwrap()),
        ("geometric", LogLinearFamily::new(rates(&|j| 1.0 - 0.5f64.powi(j as i32)), 1.0).unwrap()),
    ]
}

#[test]
fn sampled_search_agrees_with_exact_decision() {
    for (name, f) in families() {
        let exact = search_witness(&WeightFamily::LogLinear(f.clone()), 20).unwrap();
        assert_eq!(exact.holds, f.satisfies(), "{name}");
        let sampled = WeightFamily::Sampled(f.sample(&lambdas()).unwrap());
        let evidence = search_witness(&sampled, 20).unwrap();
        assert_eq!(evidence.holds, exact.holds, "{name}");
        if let SearchOutcome::Witness { witness } = &evidence.outcome {
            assert!(verify_witness(&sampled, witness).unwrap().passed, "{name}");
        }
    }
}

#[test]
fn common_rescaling_does_not_change_the_witness() {
    let (_, f) = families().remove(0);
    let sampled = f.sample(&lambdas()).unwrap();
    let factor: Vec<f64> = lambdas().iter().map(|l| (0.3 * l).exp() + 1.0).collect();
    let scaled = sampled.rescaled(&factor).unwrap();
    let a = search_witness(&WeightFamily::Sampled(sampled), 20).unwrap();
    let b = search_witness(&WeightFamily::Sampled(scaled), 20).unwrap();
    let (SearchOutcome::Witness { witness: wa }, SearchOutcome::Witness { witness: wb }) =
        (a.outcome, b.outcome)
    else {
        panic!("both should hold");
    };
    assert_eq!(wa.j, wb.j);
    for (x, y) in wa.entries.iter().zip(&wb.entries) {
        assert_eq!((x.k, x.l), (y.k, y.l));
        assert!((x.c - y.c).abs() <= 1e-9 * x.c);
    }
}

#[test]
fn exact_witness_verifies_and_refutation_breaks_claims() {
    for (name, f) in families() {
        let fam = WeightFamily::LogLinear(f.clone());
        let report = search_witness(&fam, 10).unwrap();
        match report.outcome {
            SearchOutcome::Witness { witness } => {
                assert!(verify_witness(&fam, &witness).unwrap().passed, "{name}");
            }
            SearchOutcome::Refutation { refutation } => {
                for fail in refutation.failures {
                    let Some(k) = fail.k else { continue };
                    // no listed l rescues the failing k
                    for l in k..f.rates().len() {
                        let w = mmf_core::weights::Witness {
                            j: fail.j,
                            entries: vec![mmf_core::weights::WitnessEntry { k, l, c: 1.0 }],
                        };
                        assert!(!verify_witness(&fam, &w).unwrap().passed, "{name} j={} k={k} l={l}", fail.j);
                    }
                }
            }
        }
    }
}
