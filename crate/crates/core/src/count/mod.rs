//! Exact counts of solutions inside the hypercube, by three independent
//! methods (full enumeration, meet-in-the-middle, sparse convolution),
//! plus the permutation-matching combinatorial count.
//!
//! Counting runs on an `i128`/`u128` fast path whenever a precomputed bound
//! on partial sums and total mass certifies it; otherwise everything falls
//! back to `BigInt`, so results are exact at any scale the budget admits.

mod brute;
mod convolution;
mod matching;
mod mitm;

pub use brute::count_bruteforce;
pub use convolution::{count_convolution, RepresentationFunction};
pub use matching::perm_matching_count;
pub use mitm::count_mitm;

use std::fmt;
use std::hash::Hash;
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::equation::{DiagonalEquation, Domain};

/// Evaluation and map-memory budgets. Counting refuses instead of silently
/// truncating: counts serve as ground truth in the audit.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of point evaluations (brute) or map/stream steps.
    pub max_evaluations: u64,
    /// Maximum number of entries in any partial-sum map.
    pub max_map_entries: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_evaluations: 1_000_000_000, max_map_entries: 1 << 24 }
    }
}

/// Environment variable overriding [`Budget::max_evaluations`].
pub const EVAL_BUDGET_ENV: &str = "DIOPH_EVAL_BUDGET";
/// Environment variable overriding [`Budget::max_map_entries`].
pub const MAP_BUDGET_ENV: &str = "DIOPH_MAP_BUDGET";

impl Budget {
    /// Reads `DIOPH_EVAL_BUDGET` / `DIOPH_MAP_BUDGET`, keeping defaults for
    /// unset or unparsable values.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var(EVAL_BUDGET_ENV) {
            if let Ok(n) = v.trim().parse() {
                b.max_evaluations = n;
            }
        }
        if let Ok(v) = std::env::var(MAP_BUDGET_ENV) {
            if let Ok(n) = v.trim().parse() {
                b.max_map_entries = n;
            }
        }
        b
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("evaluation budget exceeded: {required} evaluations required, budget {budget}")]
    EvaluationBudget { required: BigInt, budget: u64 },
    #[error("map budget exceeded: about {required} entries required, budget {budget}")]
    MapBudget { required: BigInt, budget: u64 },
    #[error("meet-in-the-middle needs at least 2 variables, equation has {0}")]
    TooFewVariables(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CountMethod {
    Brute,
    Mitm,
    Convolution,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountMethod::Brute => write!(f, "brute"),
            CountMethod::Mitm => write!(f, "mitm"),
            CountMethod::Convolution => write!(f, "convolution"),
        }
    }
}

/// Exact count plus method and timing metadata.
#[derive(Debug, Clone)]
pub struct SolutionCount {
    pub count: BigInt,
    pub method: CountMethod,
    pub domain: Domain,
    pub elapsed: Duration,
}

/// Partial-sum key. Implemented for `i128` (fast path, certified by a range
/// bound) and `BigInt`.
pub(crate) trait SumKey: Clone + Eq + Hash + Ord {
    fn from_bigint(v: &BigInt) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn plus(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_key(&self) -> bool;
}

impl SumKey for i128 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_i128().expect("range certification")
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_key(&self) -> bool {
        *self == 0
    }
}

impl SumKey for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_key(&self) -> bool {
        self.is_zero()
    }
}

/// Multiplicity. `u128` is used only under a proven total-mass bound, so
/// correctness never depends on a fixed width; `BigInt` covers the rest.
pub(crate) trait Mult: Clone {
    fn empty() -> Self;
    fn unit() -> Self;
    fn is_empty_mult(&self) -> bool;
    fn accumulate(&mut self, rhs: &Self);
    fn times(&self, rhs: &Self) -> Self;
    fn into_bigint(self) -> BigInt;
}

impl Mult for u128 {
    fn empty() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_empty_mult(&self) -> bool {
        *self == 0
    }
    fn accumulate(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Mult for BigInt {
    fn empty() -> Self {
        BigInt::from(0)
    }
    fn unit() -> Self {
        BigInt::from(1)
    }
    fn is_empty_mult(&self) -> bool {
        self.is_zero()
    }
    fn accumulate(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn into_bigint(self) -> BigInt {
        self
    }
}

/// Per-variable total contribution for each domain value, ascending
/// domain order. Folds both terms of a twice-appearing variable.
pub(crate) struct VarTable {
    pub name: String,
    pub contribs: Vec<BigInt>,
}

pub(crate) fn contribution_tables(eq: &DiagonalEquation, domain: &Domain) -> Vec<VarTable> {
    eq.variables()
        .into_iter()
        .map(|name| {
            let terms: Vec<_> = eq.terms_of(name).collect();
            let contribs = domain
                .values()
                .map(|v| {
                    let value = BigInt::from(v);
                    terms.iter().map(|t| t.evaluate(&value)).sum()
                })
                .collect();
            VarTable { name: name.to_string(), contribs }
        })
        .collect()
}

pub(crate) fn to_keys<K: SumKey>(table: &VarTable) -> Vec<K> {
    table.contribs.iter().map(K::from_bigint).collect()
}

/// Upper bound on |partial sum| over all assignments and subsets of terms.
pub(crate) fn value_range_bound(eq: &DiagonalEquation, domain: &Domain) -> BigInt {
    let n = BigInt::from(domain.bound);
    let mut bound = eq.constant().abs();
    for t in eq.terms() {
        bound += t.coeff.abs() * n.pow(t.exp);
    }
    bound
}

/// True when every partial sum fits an `i128` and the total mass
/// `box_size^vars` fits a `u128`.
pub(crate) fn fast_path(eq: &DiagonalEquation, domain: &Domain) -> bool {
    let range_ok = value_range_bound(eq, domain) < (BigInt::from(1) << 126);
    let mass_ok =
        (domain.box_size() as u128).checked_pow(eq.variable_count() as u32).is_some();
    range_ok && mass_ok
}

/// box_size^k without overflow; compares exactly against budgets.
pub(crate) fn pow_cost(box_size: u64, k: usize) -> BigInt {
    BigInt::from(box_size).pow(k as u32)
}

/// Recursive odometer over contribution tables; calls `f` with each total.
pub(crate) fn enumerate_sums<K: SumKey>(tables: &[Vec<K>], init: K, f: &mut impl FnMut(&K)) {
    if tables.is_empty() {
        f(&init);
        return;
    }
    let (first, rest) = tables.split_first().unwrap();
    for v in first {
        enumerate_sums(rest, init.plus(v), f);
    }
}

/// Fastest licensed method for the input, by estimated cost; ties prefer
/// convolution, then meet-in-the-middle, then brute force.
pub fn count_auto(
    eq: &DiagonalEquation,
    domain: &Domain,
    budget: &Budget,
) -> Result<SolutionCount, CountError> {
    match select_method(eq, domain, budget) {
        Some(CountMethod::Convolution) => count_convolution(eq, domain, budget),
        Some(CountMethod::Mitm) => count_mitm(eq, domain, budget),
        Some(CountMethod::Brute) => count_bruteforce(eq, domain, budget),
        None => Err(CountError::EvaluationBudget {
            required: pow_cost(domain.box_size(), eq.variable_count()),
            budget: budget.max_evaluations,
        }),
    }
}

/// Runs a specific method, or auto-selects when `method` is `None`.
pub fn count_with_method(
    eq: &DiagonalEquation,
    domain: &Domain,
    method: Option<CountMethod>,
    budget: &Budget,
) -> Result<SolutionCount, CountError> {
    match method {
        None => count_auto(eq, domain, budget),
        Some(CountMethod::Brute) => count_bruteforce(eq, domain, budget),
        Some(CountMethod::Mitm) => count_mitm(eq, domain, budget),
        Some(CountMethod::Convolution) => count_convolution(eq, domain, budget),
    }
}

fn select_method(eq: &DiagonalEquation, domain: &Domain, budget: &Budget) -> Option<CountMethod> {
    let v = eq.variable_count();
    let box_size = domain.box_size();
    let eval_budget = BigInt::from(budget.max_evaluations);
    let map_budget = BigInt::from(budget.max_map_entries);

    let brute_cost = pow_cost(box_size, v);
    let brute_ok = brute_cost <= eval_budget;

    let mitm_cost = pow_cost(box_size, v.div_ceil(2)) + pow_cost(box_size, v / 2);
    let mitm_ok = v >= 2
        && mitm_cost <= eval_budget
        && pow_cost(box_size, v / 2) <= map_budget;

    let conv = convolution::estimate_cost(eq, domain, budget);
    let conv_ok = conv.is_some();
    let conv_cost = conv.unwrap_or_default();

    let mut best: Option<(CountMethod, BigInt)> = None;
    // Candidates in tie-break preference order.
    let candidates = [
        (CountMethod::Convolution, conv_ok, conv_cost),
        (CountMethod::Mitm, mitm_ok, mitm_cost),
        (CountMethod::Brute, brute_ok, brute_cost),
    ];
    for (method, ok, cost) in candidates {
        if !ok {
            continue;
        }
        match &best {
            Some((_, best_cost)) if cost >= *best_cost => {}
            _ => best = Some((method, cost)),
        }
    }
    best.map(|(m, _)| m)
}
