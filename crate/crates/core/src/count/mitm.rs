//! Meet-in-the-middle counting: build a multiplicity map over one half of
//! the variables, stream the other half against the negated partial sums.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::equation::{DiagonalEquation, Domain};

use super::{
    contribution_tables, enumerate_sums, fast_path, pow_cost, to_keys, Budget, CountError,
    CountMethod, Mult, SolutionCount, SumKey, VarTable,
};

/// Splits the variables into two halves, maps one and streams the other.
/// Equals `count_bruteforce` on every input where both run.
pub fn count_mitm(
    eq: &DiagonalEquation,
    domain: &Domain,
    budget: &Budget,
) -> Result<SolutionCount, CountError> {
    let start = Instant::now();
    let vars = eq.variables();
    if vars.len() < 2 {
        return Err(CountError::TooFewVariables(vars.len()));
    }

    // Lower-degree variables go to the map side: smaller value spread.
    // The streamed side takes the extra variable when the count is odd,
    // which keeps the map (the memory cost) on the smaller side.
    let mut order: Vec<&str> = vars;
    order.sort_by_key(|name| {
        let max_deg = eq.terms_of(name).map(|t| t.exp).max().unwrap_or(0);
        (max_deg, name.to_string())
    });
    let map_len = order.len() / 2;

    let map_cardinality = pow_cost(domain.box_size(), map_len);
    if map_cardinality > BigInt::from(budget.max_map_entries) {
        return Err(CountError::MapBudget {
            required: map_cardinality,
            budget: budget.max_map_entries,
        });
    }
    let eval_cost = pow_cost(domain.box_size(), order.len() - map_len) + &map_cardinality;
    if eval_cost > BigInt::from(budget.max_evaluations) {
        return Err(CountError::EvaluationBudget {
            required: eval_cost,
            budget: budget.max_evaluations,
        });
    }

    let tables = contribution_tables(eq, domain);
    let by_name: HashMap<&str, &VarTable> =
        tables.iter().map(|t| (t.name.as_str(), t)).collect();
    let map_tables: Vec<&VarTable> = order[..map_len].iter().map(|n| by_name[n]).collect();
    let stream_tables: Vec<&VarTable> = order[map_len..].iter().map(|n| by_name[n]).collect();

    let count = if fast_path(eq, domain) {
        run::<i128, u128>(&map_tables, &stream_tables, eq.constant())
    } else {
        run::<BigInt, BigInt>(&map_tables, &stream_tables, eq.constant())
    };

    Ok(SolutionCount {
        count,
        method: CountMethod::Mitm,
        domain: *domain,
        elapsed: start.elapsed(),
    })
}

fn run<K: SumKey, M: Mult>(
    map_tables: &[&VarTable],
    stream_tables: &[&VarTable],
    constant: &BigInt,
) -> BigInt {
    let map_keys: Vec<Vec<K>> = map_tables.iter().map(|t| to_keys(t)).collect();
    let stream_keys: Vec<Vec<K>> = stream_tables.iter().map(|t| to_keys(t)).collect();

    let mut map: HashMap<K, M> = HashMap::new();
    enumerate_sums(&map_keys, K::from_bigint(&BigInt::zero()), &mut |sum| {
        map.entry(sum.clone())
            .and_modify(|m| m.accumulate(&M::unit()))
            .or_insert_with(M::unit);
    });

    // Want map_sum + stream_sum + constant == 0, so look up -(stream acc)
    // with the constant folded into the stream accumulator.
    let mut total = M::empty();
    enumerate_sums(&stream_keys, K::from_bigint(constant), &mut |sum| {
        if let Some(m) = map.get(&sum.negated()) {
            total.accumulate(m);
        }
    });
    total.into_bigint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_bruteforce;
    use crate::equation::Term;

    fn eq(terms: Vec<Term>, c: i64) -> DiagonalEquation {
        DiagonalEquation::new(terms, BigInt::from(c)).unwrap()
    }

    #[test]
    fn matches_bruteforce_on_spec_examples() {
        let cases = vec![
            (
                eq(
                    vec![
                        Term::new(1, "x1", 2),
                        Term::new(1, "x2", 2),
                        Term::new(-1, "y1", 2),
                        Term::new(-1, "y2", 2),
                    ],
                    0,
                ),
                Domain::natural(2),
            ),
            (
                eq(
                    vec![
                        Term::new(1, "x1", 3),
                        Term::new(1, "x2", 3),
                        Term::new(1, "x3", 3),
                    ],
                    -1,
                ),
                Domain::symmetric(2),
            ),
            (
                eq(vec![Term::new(1, "x", 4), Term::new(-1, "y", 4)], 0),
                Domain::natural(9),
            ),
        ];
        for (e, d) in cases {
            let brute = count_bruteforce(&e, &d, &Budget::default()).unwrap();
            let mitm = count_mitm(&e, &d, &Budget::default()).unwrap();
            assert_eq!(brute.count, mitm.count, "{e} over {d}");
        }
    }

    #[test]
    fn three_cubes_lower_bound_at_fifty() {
        // x1^3 + x2^3 + x3^3 = 1 over [-50,50]^3 has at least 2N+1 solutions
        let e = eq(
            vec![Term::new(1, "x1", 3), Term::new(1, "x2", 3), Term::new(1, "x3", 3)],
            -1,
        );
        let c = count_mitm(&e, &Domain::symmetric(50), &Budget::default()).unwrap();
        assert!(c.count >= BigInt::from(101), "count = {}", c.count);
    }

    #[test]
    fn single_variable_is_refused() {
        let e = eq(vec![Term::new(1, "x", 2)], -4);
        assert!(matches!(
            count_mitm(&e, &Domain::natural(10), &Budget::default()),
            Err(CountError::TooFewVariables(1))
        ));
    }

    #[test]
    fn map_budget_refusal_carries_estimate() {
        let e = eq(
            vec![
                Term::new(1, "a", 2),
                Term::new(1, "b", 2),
                Term::new(-1, "c", 2),
                Term::new(-1, "d", 2),
            ],
            0,
        );
        let small = Budget { max_evaluations: 1_000_000_000, max_map_entries: 100 };
        match count_mitm(&e, &Domain::natural(50), &small) {
            Err(CountError::MapBudget { required, budget }) => {
                assert_eq!(required, BigInt::from(2_500));
                assert_eq!(budget, 100);
            }
            other => panic!("expected map refusal, got {other:?}"),
        }
    }
}
