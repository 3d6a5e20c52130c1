//! Ground-truth counting by full enumeration of the hypercube.

use std::time::Instant;

use num_bigint::BigInt;

use crate::equation::{DiagonalEquation, Domain};

use super::{
    contribution_tables, fast_path, pow_cost, to_keys, Budget, CountError, CountMethod,
    SolutionCount, SumKey,
};

/// Exact count by evaluating every tuple in the box. Refuses when
/// `box_size^vars` exceeds the evaluation budget.
pub fn count_bruteforce(
    eq: &DiagonalEquation,
    domain: &Domain,
    budget: &Budget,
) -> Result<SolutionCount, CountError> {
    let start = Instant::now();
    let required = pow_cost(domain.box_size(), eq.variable_count());
    if required > BigInt::from(budget.max_evaluations) {
        return Err(CountError::EvaluationBudget {
            required,
            budget: budget.max_evaluations,
        });
    }

    let tables = contribution_tables(eq, domain);
    let count = if fast_path(eq, domain) {
        run::<i128>(&tables, eq)
    } else {
        run::<BigInt>(&tables, eq)
    };

    Ok(SolutionCount {
        count: BigInt::from(count),
        method: CountMethod::Brute,
        domain: *domain,
        elapsed: start.elapsed(),
    })
}

fn run<K: SumKey>(tables: &[super::VarTable], eq: &DiagonalEquation) -> u64 {
    let keyed: Vec<Vec<K>> = tables.iter().map(to_keys).collect();
    let init = K::from_bigint(eq.constant());
    let mut count = 0u64;
    count_rec(&keyed, &init, &mut count);
    count
}

fn count_rec<K: SumKey>(tables: &[Vec<K>], acc: &K, count: &mut u64) {
    match tables.split_first() {
        None => {
            if acc.is_zero_key() {
                *count += 1;
            }
        }
        Some((last, rest)) if rest.is_empty() => {
            // innermost loop kept flat
            for v in last {
                if acc.plus(v).is_zero_key() {
                    *count += 1;
                }
            }
        }
        Some((first, rest)) => {
            for v in first {
                count_rec(rest, &acc.plus(v), count);
            }
        }
    }
}
