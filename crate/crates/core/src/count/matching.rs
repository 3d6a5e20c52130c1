//! The permutation-matching count: 2s-tuples in `[1,N]^{2s}` where
//! `(y_1..y_s)` rearranges `(x_1..x_s)` as a multiset. Every such tuple
//! solves `Σx_i^k = Σy_i^k` for every degree k, so this is a valid lower
//! bound for the symmetric-form count at any k.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Σ over multisets of size `pairs` from `bound` values of
/// (number of orderings)², by enumeration of multiset shapes
/// (integer partitions of `pairs`).
pub fn perm_matching_count(pairs: u32, bound: u64) -> BigInt {
    let s = pairs as u64;
    let n = BigInt::from(bound);
    let s_factorial = factorial(s);

    let mut total = BigInt::zero();
    let mut parts: Vec<u64> = Vec::new();
    enumerate_partitions(s, s, &mut parts, &mut |shape: &[u64]| {
        // number of multisets with this shape:
        //   N (N-1) ... (N-r+1) / Π_j (count of parts equal to j)!
        let r = shape.len() as u64;
        let mut multisets = falling_factorial(&n, r);
        let mut run = 1u64;
        for i in 1..shape.len() {
            if shape[i] == shape[i - 1] {
                run += 1;
            } else {
                multisets /= factorial(run);
                run = 1;
            }
        }
        multisets /= factorial(run);

        // orderings of one multiset: s! / Π λ_i!
        let mut orderings = s_factorial.clone();
        for &p in shape {
            orderings /= factorial(p);
        }

        total += multisets * (&orderings * &orderings);
    });
    total
}

/// Partitions of `remaining` with parts ≤ `max_part`, non-increasing order.
fn enumerate_partitions(
    remaining: u64,
    max_part: u64,
    stack: &mut Vec<u64>,
    f: &mut impl FnMut(&[u64]),
) {
    if remaining == 0 {
        f(stack);
        return;
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        stack.push(part);
        enumerate_partitions(remaining - part, part, stack, f);
        stack.pop();
    }
}

fn factorial(n: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=n {
        out *= i;
    }
    out
}

/// n (n-1) ... (n-r+1); zero when r exceeds n.
fn falling_factorial(n: &BigInt, r: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..r {
        out *= n - BigInt::from(i);
        if out.is_zero() {
            return out;
        }
    }
    out
}
