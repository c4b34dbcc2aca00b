use mmf_core::exponents::{check_condition_s, Clause, ExponentSequenceSpec, Tail, Violation};
use mmf_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn prefix() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-4i32..4, -4i32..4), 1..6).prop_map(|v| {
        let mut seen = Vec::new();
        for (a, b) in v {
            let z = c(a as f64 * 0.5, b as f64);
            if !seen.contains(&z) {
                seen.push(z);
            }
        }
        seen
    })
}

fn tail() -> impl Strategy<Value = Tail> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(|l| Tail::MonotoneToSup { limit: l }),
        (-3.0..3.0f64).prop_map(|l| Tail::MonotoneToInf { limit: l }),
        Just(Tail::MonotoneToSup { limit: f64::INFINITY }),
        Just(Tail::MonotoneToInf { limit: f64::NEG_INFINITY }),
        (0.0..3.0f64, -3.0..0.0f64).prop_map(|(u, l)| Tail::TwoSided { upper: u, lower: l }),
    ]
}

fn spec(prefix: Vec<Complex64>, tail: Tail) -> Option<ExponentSequenceSpec> {
    ExponentSequenceSpec::new(prefix, tail).ok()
}

proptest! {
    #[test]
    fn verdict_ignores_prefix_order(p in prefix(), t in tail()) {
        let Some(s) = spec(p.clone(), t) else { return Ok(()) };
        let mut rev = p;
        rev.reverse();
        let r = spec(rev, t).unwrap();
        let a = check_condition_s(&s).unwrap();
        let b = check_condition_s(&r).unwrap();
        prop_assert_eq!(a.satisfies, b.satisfies);
        prop_assert_eq!(a.matched_clause, b.matched_clause);
    }

    #[test]
    fn reflection_swaps_sup_and_inf(p in prefix(), t in tail()) {
        let Some(s) = spec(p, t) else { return Ok(()) };
        let a = check_condition_s(&s).unwrap();
        let b = check_condition_s(&s.reflected()).unwrap();
        prop_assert_eq!(a.satisfies, b.satisfies);
        let mirrored = match a.matched_clause {
            Clause::SupClause => Clause::InfClause,
            Clause::InfClause => Clause::SupClause,
            other => other,
        };
        prop_assert_eq!(b.matched_clause, mirrored);
    }

    #[test]
    fn duplicates_always_fail(p in prefix(), t in tail(), pick in 0usize..6) {
        let mut p = p;
        let z = p[pick % p.len()];
        p.push(z);
        let Some(s) = spec(p, t) else { return Ok(()) };
        let v = check_condition_s(&s).unwrap();
        prop_assert!(!v.satisfies);
        let is_duplicate = matches!(v.violation_witness, Some(Violation::Duplicate { .. }));
        prop_assert!(is_duplicate);
    }
}
