//! Property tests for the structural invariants of the equation model,
//! the parser, and the counting engines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use dioph_core::{
    assignment_of, count_bruteforce, count_convolution, count_mitm, parse_text, Budget,
    DiagonalEquation, Domain, Term,
};

fn term_strategy() -> impl Strategy<Value = Term> {
    (
        prop_oneof![(-9i64..=-1).boxed(), (1i64..=9).boxed()],
        0usize..6,
        1u32..=5,
    )
        .prop_map(|(coeff, var, exp)| Term::new(coeff, format!("v{var}"), exp))
}

fn equation_strategy() -> impl Strategy<Value = DiagonalEquation> {
    (proptest::collection::vec(term_strategy(), 1..6), -9i64..=9).prop_filter_map(
        "valid diagonal equation",
        |(terms, c)| DiagonalEquation::new(terms, BigInt::from(c)).ok(),
    )
}

proptest! {
    /// Doubling one coefficient shifts evaluate by exactly coeff * value^exp.
    #[test]
    fn evaluate_linear_in_coefficients(eq in equation_strategy(), seed in 0u64..1000) {
        let assignment: BTreeMap<String, BigInt> = eq
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let value = ((seed as i64 + i as i64 * 7) % 11) - 5;
                (v.to_string(), BigInt::from(value))
            })
            .collect();
        let base = eq.evaluate(&assignment).unwrap();

        let target = eq.terms()[0].clone();
        let mut doubled_terms: Vec<Term> = eq.terms().to_vec();
        doubled_terms[0].coeff = &target.coeff * 2;
        if let Ok(doubled) = DiagonalEquation::new(doubled_terms, eq.constant().clone()) {
            let shifted = doubled.evaluate(&assignment).unwrap();
            let value = assignment.get(&target.var).unwrap();
            prop_assert_eq!(shifted - base, target.evaluate(value));
        }
    }

    /// is_solution does not depend on the order terms are supplied in.
    #[test]
    fn solution_check_reorder_invariant(eq in equation_strategy(), seed in 0u64..1000) {
        let mut reversed: Vec<Term> = eq.terms().to_vec();
        reversed.reverse();
        let same = DiagonalEquation::new(reversed, eq.constant().clone()).unwrap();
        prop_assert_eq!(&same, &eq);

        let assignment: BTreeMap<String, BigInt> = eq
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| ((*v).to_string(), BigInt::from((seed as i64 + i as i64) % 4 + 1)))
            .collect();
        let domain = Domain::natural(5);
        prop_assert_eq!(
            eq.is_solution(&assignment, &domain).unwrap(),
            same.is_solution(&assignment, &domain).unwrap()
        );
    }

    /// Block term counts in the classification sum to the term count.
    #[test]
    fn classify_blocks_sum_to_terms(eq in equation_strategy()) {
        let d = eq.classify();
        prop_assert_eq!(d.term_count(), eq.terms().len());
        prop_assert_eq!(d.homogeneous, eq.constant() == &BigInt::from(0));
    }

    /// The parser never panics: every input yields an equation or a
    /// diagnostic with an offset inside the input.
    #[test]
    fn parser_total_on_arbitrary_input(input in "\\PC{0,60}") {
        match parse_text(&input) {
            Ok(_) => {}
            Err(d) => prop_assert!(d.offset <= input.len()),
        }
    }

    /// Parser round-trip: render then reparse is the identity on canonical
    /// equations.
    #[test]
    fn render_round_trip(eq in equation_strategy()) {
        let again = parse_text(&eq.render()).unwrap();
        prop_assert_eq!(again, eq);
    }

    /// JSON round-trip is the identity.
    #[test]
    fn json_round_trip(eq in equation_strategy()) {
        let back = dioph_core::from_json(&dioph_core::to_json(&eq)).unwrap();
        prop_assert_eq!(back, eq);
    }
}

/// The three counting methods agree on a small randomized family (the full
/// 200-equation sweep lives in the acceptance suite).
#[test]
fn counting_methods_agree_small() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD10_9A11);
    let budget = Budget::default();
    for case in 0..40 {
        let vars = rng.gen_range(2..=4usize);
        let terms: Vec<Term> = (0..vars)
            .map(|i| {
                let coeff = loop {
                    let c = rng.gen_range(-3i64..=3);
                    if c != 0 {
                        break c;
                    }
                };
                Term::new(coeff, format!("v{i}"), rng.gen_range(1..=5u32))
            })
            .collect();
        let eq = DiagonalEquation::new(terms, BigInt::from(rng.gen_range(-4i64..=4))).unwrap();
        let n = rng.gen_range(1..=8u64);
        for domain in [Domain::natural(n), Domain::symmetric(n)] {
            let brute = count_bruteforce(&eq, &domain, &budget).unwrap().count;
            let mitm = count_mitm(&eq, &domain, &budget).unwrap().count;
            let conv = count_convolution(&eq, &domain, &budget).unwrap().count;
            assert_eq!(brute, mitm, "case {case}: {eq} over {domain}");
            assert_eq!(brute, conv, "case {case}: {eq} over {domain}");
        }
    }
}

/// Repeated-variable forms (x^a - x^b) count identically across methods.
#[test]
fn counting_agrees_on_two_term_variables() {
    let eq = DiagonalEquation::new(
        vec![
            Term::new(1, "x", 3),
            Term::new(-1, "x", 2),
            Term::new(1, "y", 5),
            Term::new(-1, "y", 3),
        ],
        BigInt::from(0),
    )
    .unwrap();
    let budget = Budget::default();
    for domain in [Domain::natural(9), Domain::symmetric(6)] {
        let brute = count_bruteforce(&eq, &domain, &budget).unwrap().count;
        let mitm = count_mitm(&eq, &domain, &budget).unwrap().count;
        let conv = count_convolution(&eq, &domain, &budget).unwrap().count;
        assert_eq!(brute, mitm);
        assert_eq!(brute, conv);
    }
}

/// Natural-domain matching lower bound holds for k ≤ 5, s ≤ 3, N ≤ 12.
#[test]
fn matching_count_is_sound_lower_bound() {
    let budget = Budget::default();
    for k in [1u32, 2, 3, 5] {
        for s in 1..=3usize {
            for n in [2u64, 5, 12] {
                let mut terms = Vec::new();
                for i in 0..s {
                    terms.push(Term::new(1, format!("x{i}"), k));
                    terms.push(Term::new(-1, format!("y{i}"), k));
                }
                let eq = DiagonalEquation::new(terms, BigInt::from(0)).unwrap();
                let count = count_mitm(&eq, &Domain::natural(n), &budget).unwrap().count;
                let lower = dioph_core::perm_matching_count(s as u32, n);
                assert!(
                    count >= lower,
                    "k={k} s={s} n={n}: count {count} < matching {lower}"
                );
            }
        }
    }
}

/// Sanity: spec's example solution checks straight through the public API.
#[test]
fn is_solution_examples() {
    let eq = parse_text("2*x^3 - 3*y^2 = 0").unwrap();
    let good = assignment_of([("x", 384), ("y", 6144)]);
    assert!(eq.is_solution(&good, &Domain::natural(10_000)).unwrap());
    let bad = assignment_of([("x", 384), ("y", 6143)]);
    assert!(!eq.is_solution(&bad, &Domain::natural(10_000)).unwrap());
}
