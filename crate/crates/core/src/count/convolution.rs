//! Convolution counting: the moment integral of the circle method equals a
//! convolution count, so the solution count is computed exactly by iterated
//! sparse convolution of per-variable value multiplicities, pairing one
//! sign-group of variables against the other.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::equation::{DiagonalEquation, Domain};

use super::{
    contribution_tables, fast_path, Budget, CountError, CountMethod, Mult, SolutionCount,
    SumKey, VarTable,
};

/// Exact count via per-variable sparse convolutions. For the symmetric form
/// `Σx_i^k = Σy_i^k` this computes `Σ_t r(t)^2` with `r` the s-fold
/// convolution of the power block.
pub fn count_convolution(
    eq: &DiagonalEquation,
    domain: &Domain,
    budget: &Budget,
) -> Result<SolutionCount, CountError> {
    let start = Instant::now();
    if BigInt::from(domain.box_size()) > BigInt::from(budget.max_evaluations) {
        return Err(CountError::EvaluationBudget {
            required: BigInt::from(domain.box_size()),
            budget: budget.max_evaluations,
        });
    }

    let tables = contribution_tables(eq, domain);
    let (group_a, group_b) = partition_vars(eq);
    let pick = |names: &[String]| -> Vec<&VarTable> {
        names
            .iter()
            .map(|n| tables.iter().find(|t| &t.name == n).expect("table"))
            .collect()
    };

    let count = if fast_path(eq, domain) {
        run_fast::<u128>(&pick(&group_a), &pick(&group_b), eq.constant(), budget)?
    } else {
        run_big(&pick(&group_a), &pick(&group_b), eq.constant(), budget)?
    };

    Ok(SolutionCount {
        count,
        method: CountMethod::Convolution,
        domain: *domain,
        elapsed: start.elapsed(),
    })
}

fn run_fast<M: Mult>(
    group_a: &[&VarTable],
    group_b: &[&VarTable],
    constant: &BigInt,
    budget: &Budget,
) -> Result<BigInt, CountError> {
    let mut ops = BigInt::zero();
    let a = fold_layers::<M>(group_a, constant, budget, &mut ops)?;
    let b = fold_layers::<M>(group_b, &BigInt::zero(), budget, &mut ops)?;

    // total = a_val + b_val must vanish; the constant is folded into a.
    let (small, large) = if a.entries() <= b.entries() { (&a, &b) } else { (&b, &a) };
    let mut total = M::empty();
    small.for_each(&mut |k, m| {
        if let Some(m2) = large.get(-k) {
            total.accumulate(&m.times(m2));
        }
    });
    Ok(total.into_bigint())
}

fn run_big(
    group_a: &[&VarTable],
    group_b: &[&VarTable],
    constant: &BigInt,
    budget: &Budget,
) -> Result<BigInt, CountError> {
    let mut ops = BigInt::zero();
    let a = fold_group::<BigInt, BigInt>(group_a, constant, budget, &mut ops)?;
    let b = fold_group::<BigInt, BigInt>(group_b, &BigInt::zero(), budget, &mut ops)?;

    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    let mut total = BigInt::zero();
    for (k, m) in small {
        if let Some(m2) = large.get(&k.negated()) {
            total += m * m2;
        }
    }
    Ok(total)
}

/// Partial-sum layer on the `i128` fast path: dense when the value range
/// is compact (array adds are an order of magnitude cheaper than hashmap
/// upserts), sparse otherwise.
enum Layer<M> {
    Dense { lo: i128, vals: Vec<M>, entries: usize },
    Sparse(HashMap<i128, M>),
}

/// Dense layers above this width fall back to hashing regardless of the
/// map budget (a dense slot costs memory even when empty).
const DENSE_WIDTH_CAP: u128 = 1 << 23;

impl<M: Mult> Layer<M> {
    fn singleton(key: i128) -> Self {
        Layer::Sparse(HashMap::from_iter([(key, M::unit())]))
    }

    fn entries(&self) -> usize {
        match self {
            Layer::Dense { entries, .. } => *entries,
            Layer::Sparse(map) => map.len(),
        }
    }

    /// conservative key bounds (dense bounds cover the allocated range)
    fn bounds(&self) -> (i128, i128) {
        match self {
            Layer::Dense { lo, vals, .. } => (*lo, lo + vals.len() as i128 - 1),
            Layer::Sparse(map) => {
                let lo = map.keys().min().copied().unwrap_or(0);
                let hi = map.keys().max().copied().unwrap_or(0);
                (lo, hi)
            }
        }
    }

    fn get(&self, key: i128) -> Option<&M> {
        match self {
            Layer::Dense { lo, vals, .. } => {
                let idx = key.checked_sub(*lo)?;
                if idx < 0 || idx as usize >= vals.len() {
                    return None;
                }
                let m = &vals[idx as usize];
                if m.is_empty_mult() {
                    None
                } else {
                    Some(m)
                }
            }
            Layer::Sparse(map) => map.get(&key),
        }
    }

    fn for_each(&self, f: &mut impl FnMut(i128, &M)) {
        match self {
            Layer::Dense { lo, vals, .. } => {
                for (i, m) in vals.iter().enumerate() {
                    if !m.is_empty_mult() {
                        f(lo + i as i128, m);
                    }
                }
            }
            Layer::Sparse(map) => {
                for (k, m) in map {
                    f(*k, m);
                }
            }
        }
    }
}

fn fold_layers<M: Mult>(
    group: &[&VarTable],
    init: &BigInt,
    budget: &Budget,
    ops: &mut BigInt,
) -> Result<Layer<M>, CountError> {
    let mut maps: Vec<Vec<(i128, M)>> = group.iter().map(|t| var_map(t)).collect();
    maps.sort_by_key(|m| m.len());

    let mut acc: Layer<M> = Layer::singleton(SumKey::from_bigint(init));
    for m in &maps {
        let step = BigInt::from(acc.entries()) * BigInt::from(m.len());
        *ops += &step;
        if *ops > BigInt::from(budget.max_evaluations) {
            return Err(CountError::EvaluationBudget {
                required: ops.clone(),
                budget: budget.max_evaluations,
            });
        }
        let (alo, ahi) = acc.bounds();
        let (mlo, mhi) = (m.first().expect("nonempty").0, m.last().expect("nonempty").0);
        // partial sums are certified below 2^126, so these cannot overflow
        let next_lo = alo + mlo;
        let width = ((ahi + mhi) - next_lo) as u128 + 1;

        if width <= DENSE_WIDTH_CAP && width <= budget.max_map_entries as u128 {
            let mut vals = vec![M::empty(); width as usize];
            let mut entries = 0usize;
            acc.for_each(&mut |ka, ma| {
                for (kv, mv) in m {
                    let idx = (ka + kv - next_lo) as usize;
                    let slot = &mut vals[idx];
                    if slot.is_empty_mult() {
                        entries += 1;
                    }
                    slot.accumulate(&ma.times(mv));
                }
            });
            acc = Layer::Dense { lo: next_lo, vals, entries };
        } else {
            let support_bound = step.clone().min(BigInt::from(width));
            if support_bound > BigInt::from(budget.max_map_entries) {
                return Err(CountError::MapBudget {
                    required: support_bound,
                    budget: budget.max_map_entries,
                });
            }
            let mut next: HashMap<i128, M> = HashMap::with_capacity(acc.entries());
            acc.for_each(&mut |ka, ma| {
                for (kv, mv) in m {
                    let prod = ma.times(mv);
                    next.entry(ka + kv)
                        .and_modify(|x| x.accumulate(&prod))
                        .or_insert(prod);
                }
            });
            acc = Layer::Sparse(next);
        }
    }
    Ok(acc)
}

/// Variables split into two convolution groups. The sign of the
/// highest-degree coefficient orients each variable; a one-sided equation
/// is rebalanced by alternating assignment so neither group explodes.
pub(crate) fn partition_vars(eq: &DiagonalEquation) -> (Vec<String>, Vec<String>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for name in eq.variables() {
        let dominant = eq
            .terms_of(name)
            .max_by_key(|t| t.exp)
            .expect("variable has a term");
        if dominant.coeff.is_positive() {
            pos.push(name.to_string());
        } else {
            neg.push(name.to_string());
        }
    }
    if pos.is_empty() && neg.len() >= 2 {
        let moved: Vec<String> = neg.iter().skip(1).step_by(2).cloned().collect();
        neg.retain(|n| !moved.contains(n));
        pos = moved;
    } else if neg.is_empty() && pos.len() >= 2 {
        let moved: Vec<String> = pos.iter().skip(1).step_by(2).cloned().collect();
        pos.retain(|n| !moved.contains(n));
        neg = moved;
    }
    (pos, neg)
}

/// Deduplicated value map of one variable, sorted by key.
fn var_map<K: SumKey, M: Mult>(table: &VarTable) -> Vec<(K, M)> {
    let mut map: HashMap<K, M> = HashMap::new();
    for v in &table.contribs {
        map.entry(K::from_bigint(v))
            .and_modify(|m| m.accumulate(&M::unit()))
            .or_insert_with(M::unit);
    }
    let mut entries: Vec<(K, M)> = map.into_iter().collect();
    entries.sort_by(|x, y| x.0.cmp(&y.0));
    entries
}

fn fold_group<K: SumKey, M: Mult>(
    group: &[&VarTable],
    init: &BigInt,
    budget: &Budget,
    ops: &mut BigInt,
) -> Result<HashMap<K, M>, CountError> {
    let mut acc: HashMap<K, M> = HashMap::new();
    acc.insert(K::from_bigint(init), M::unit());

    // Convolve smallest supports first to keep intermediates small.
    let mut maps: Vec<Vec<(K, M)>> = group.iter().map(|t| var_map(t)).collect();
    maps.sort_by_key(|m| m.len());

    for m in &maps {
        let step = BigInt::from(acc.len()) * BigInt::from(m.len());
        *ops += &step;
        if *ops > BigInt::from(budget.max_evaluations) {
            return Err(CountError::EvaluationBudget {
                required: ops.clone(),
                budget: budget.max_evaluations,
            });
        }
        // Support after this step is bounded both by the product of
        // cardinalities and by the numeric range of the sums; refuse
        // before building so the budget also caps peak memory.
        let support_bound = step.clone().min(range_width(&acc, m));
        if support_bound > BigInt::from(budget.max_map_entries) {
            return Err(CountError::MapBudget {
                required: support_bound,
                budget: budget.max_map_entries,
            });
        }
        let mut next: HashMap<K, M> = HashMap::with_capacity(acc.len());
        for (ka, ma) in &acc {
            for (kv, mv) in m {
                let key = ka.plus(kv);
                let prod = ma.times(mv);
                next.entry(key)
                    .and_modify(|x| x.accumulate(&prod))
                    .or_insert(prod);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Numeric width (max - min + 1) of the sums of `acc` and `m` supports.
fn range_width<K: SumKey, M>(acc: &HashMap<K, M>, m: &[(K, M)]) -> BigInt {
    let acc_min = acc.keys().min();
    let acc_max = acc.keys().max();
    match (acc_min, acc_max, m.first(), m.last()) {
        (Some(lo_a), Some(hi_a), Some((lo_m, _)), Some((hi_m, _))) => {
            (hi_a.to_bigint() + hi_m.to_bigint()) - (lo_a.to_bigint() + lo_m.to_bigint())
                + BigInt::one()
        }
        _ => BigInt::zero(),
    }
}

/// Cost estimate for auto-selection; `None` when any budget would be
/// exceeded. Upper-bounds the work the real run performs.
pub(crate) fn estimate_cost(
    eq: &DiagonalEquation,
    domain: &Domain,
    budget: &Budget,
) -> Option<BigInt> {
    if BigInt::from(domain.box_size()) * BigInt::from(eq.variable_count())
        > BigInt::from(budget.max_evaluations)
    {
        return None;
    }
    let tables = contribution_tables(eq, domain);
    let (group_a, group_b) = partition_vars(eq);

    let mut total_ops = BigInt::zero();
    let mut finals: Vec<BigInt> = Vec::new();
    for group in [&group_a, &group_b] {
        let mut stats: Vec<(BigInt, BigInt)> = group
            .iter()
            .map(|name| {
                let t = tables.iter().find(|t| &t.name == name).expect("table");
                let mut distinct: Vec<&BigInt> = t.contribs.iter().collect();
                distinct.sort();
                distinct.dedup();
                let width = match (distinct.first(), distinct.last()) {
                    (Some(lo), Some(hi)) => *hi - *lo,
                    _ => BigInt::zero(),
                };
                (BigInt::from(distinct.len()), width)
            })
            .collect();
        stats.sort();

        let mut support = BigInt::one();
        let mut width = BigInt::zero();
        for (size, w) in &stats {
            total_ops += &support * size;
            if total_ops > BigInt::from(budget.max_evaluations) {
                return None;
            }
            width += w;
            let by_product = &support * size;
            let by_width = &width + 1;
            support = by_product.min(by_width);
            if support > BigInt::from(budget.max_map_entries) {
                return None;
            }
        }
        finals.push(support);
    }
    total_ops += finals.iter().min().cloned().unwrap_or_default();
    if total_ops > BigInt::from(budget.max_evaluations) {
        return None;
    }
    Some(total_ops)
}

/// Sparse map `value -> multiplicity` over the reachable sums of one
/// degree-block: the s-fold convolution of `{m^k : m in the box}`.
#[derive(Debug, Clone)]
pub struct RepresentationFunction {
    values: BTreeMap<BigInt, BigInt>,
    pub degree: u32,
    pub var_count: u32,
    pub domain: Domain,
}

impl RepresentationFunction {
    pub fn for_power_block(
        degree: u32,
        var_count: u32,
        domain: &Domain,
        budget: &Budget,
    ) -> Result<Self, CountError> {
        assert!(var_count >= 1, "block needs at least one variable");
        let powers: Vec<BigInt> = domain.values().map(|v| BigInt::from(v).pow(degree)).collect();
        let table = VarTable { name: "m".into(), contribs: powers };

        let mass_fits = (domain.box_size() as u128).checked_pow(var_count).is_some();
        let range_fits = BigInt::from(domain.bound).pow(degree) * BigInt::from(var_count)
            < (BigInt::one() << 126);

        let mut ops = BigInt::zero();
        let values = if mass_fits && range_fits {
            let folded = fold_layers::<u128>(
                &vec![&table; var_count as usize],
                &BigInt::zero(),
                budget,
                &mut ops,
            )?;
            let mut out = BTreeMap::new();
            folded.for_each(&mut |k, m| {
                out.insert(BigInt::from(k), BigInt::from(*m));
            });
            out
        } else {
            let folded = fold_group::<BigInt, BigInt>(
                &vec![&table; var_count as usize],
                &BigInt::zero(),
                budget,
                &mut ops,
            )?;
            folded.into_iter().collect()
        };

        Ok(RepresentationFunction { values, degree, var_count, domain: *domain })
    }

    pub fn multiplicity(&self, value: &BigInt) -> BigInt {
        self.values.get(value).cloned().unwrap_or_default()
    }

    /// Σ multiplicities; equals `box_size^var_count`.
    pub fn total_mass(&self) -> BigInt {
        self.values.values().sum()
    }

    /// Σ r(t)^2 — the even-moment count of the matching symmetric equation.
    pub fn pair_moment(&self) -> BigInt {
        self.values.values().map(|m| m * m).sum()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> {
        self.values.iter()
    }
}
