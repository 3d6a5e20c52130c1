//! Core value types for diagonal Diophantine equations.
//!
//! A diagonal equation is a flat sum of monomials `coeff * var^exp` plus an
//! optional constant, equated to zero. Every term involves a single variable;
//! a variable may appear in at most two terms, and then only with distinct
//! exponents (this covers forms like `x^a - x^b`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// A variable assignment: variable name to integer value.
pub type Assignment = BTreeMap<String, BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("equation must have at least one term")]
    NoTerms,
    #[error("term has zero coefficient on variable `{0}`")]
    ZeroCoefficient(String),
    #[error("term has zero exponent on variable `{0}`")]
    ZeroExponent(String),
    #[error("variable `{0}` appears twice with exponent {1}")]
    DuplicateExponent(String, u32),
    #[error("variable `{0}` appears in more than two terms")]
    TooManyTerms(String),
    #[error("assignment is missing variable `{0}`")]
    MissingVariable(String),
}

/// One monomial `coeff * var^exp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub var: String,
    pub exp: u32,
}

impl Term {
    pub fn new(coeff: impl Into<BigInt>, var: impl Into<String>, exp: u32) -> Self {
        Term { coeff: coeff.into(), var: var.into(), exp }
    }

    /// coeff * value^exp, exactly.
    pub fn evaluate(&self, value: &BigInt) -> BigInt {
        &self.coeff * value.pow(self.exp)
    }
}

/// The counting box: natural `[1, N]` or symmetric integer `[-N, N]`
/// (zero included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DomainKind {
    Natural,
    SymmetricInteger,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Natural => write!(f, "natural"),
            DomainKind::SymmetricInteger => write!(f, "integer"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    /// Side bound N; must be >= 1.
    pub bound: u64,
}

impl Domain {
    pub fn natural(bound: u64) -> Self {
        assert!(bound >= 1, "domain bound must be positive");
        Domain { kind: DomainKind::Natural, bound }
    }

    pub fn symmetric(bound: u64) -> Self {
        assert!(bound >= 1, "domain bound must be positive");
        Domain { kind: DomainKind::SymmetricInteger, bound }
    }

    /// Number of values a single variable ranges over.
    pub fn box_size(&self) -> u64 {
        match self.kind {
            DomainKind::Natural => self.bound,
            DomainKind::SymmetricInteger => 2 * self.bound + 1,
        }
    }

    pub fn contains(&self, value: &BigInt) -> bool {
        let n = BigInt::from(self.bound);
        match self.kind {
            DomainKind::Natural => value.is_positive() && *value <= n,
            DomainKind::SymmetricInteger => value.abs() <= n,
        }
    }

    /// Domain values in ascending order.
    pub fn values(&self) -> impl Iterator<Item = i64> {
        let n = self.bound as i64;
        let lo = match self.kind {
            DomainKind::Natural => 1,
            DomainKind::SymmetricInteger => -n,
        };
        lo..=n
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::Natural => write!(f, "[1, {}]", self.bound),
            DomainKind::SymmetricInteger => write!(f, "[-{}, {}]", self.bound, self.bound),
        }
    }
}

/// A signed-coefficient diagonal form with optional constant term,
/// canonicalized on construction: terms sorted by (degree descending,
/// variable name ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalEquation {
    terms: Vec<Term>,
    constant: BigInt,
}

impl DiagonalEquation {
    /// Validates invariants and canonicalizes term order.
    pub fn new(mut terms: Vec<Term>, constant: BigInt) -> Result<Self, EquationError> {
        if terms.is_empty() {
            return Err(EquationError::NoTerms);
        }
        for t in &terms {
            if t.coeff.is_zero() {
                return Err(EquationError::ZeroCoefficient(t.var.clone()));
            }
            if t.exp == 0 {
                return Err(EquationError::ZeroExponent(t.var.clone()));
            }
        }
        terms.sort_by(|a, b| b.exp.cmp(&a.exp).then_with(|| a.var.cmp(&b.var)));

        let mut seen: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
        for t in &terms {
            seen.entry(t.var.as_str()).or_default().push(t.exp);
        }
        for (var, exps) in &seen {
            if exps.len() > 2 {
                return Err(EquationError::TooManyTerms(var.to_string()));
            }
            if exps.len() == 2 && exps[0] == exps[1] {
                return Err(EquationError::DuplicateExponent(var.to_string(), exps[0]));
            }
        }
        Ok(DiagonalEquation { terms, constant })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    /// Distinct variable names in canonical (term) order, deduplicated.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.terms {
            if !out.contains(&t.var.as_str()) {
                out.push(t.var.as_str());
            }
        }
        out
    }

    pub fn variable_count(&self) -> usize {
        self.variables().len()
    }

    /// All terms of one variable.
    pub fn terms_of<'a>(&'a self, var: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.terms.iter().filter(move |t| t.var == var)
    }

    /// Σ coeff·value^exp + constant, computed exactly.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<BigInt, EquationError> {
        let mut sum = self.constant.clone();
        for t in &self.terms {
            let value = assignment
                .get(&t.var)
                .ok_or_else(|| EquationError::MissingVariable(t.var.clone()))?;
            sum += t.evaluate(value);
        }
        Ok(sum)
    }

    /// True iff the assignment zeroes the equation and every value of the
    /// equation's variables lies in the domain.
    pub fn is_solution(
        &self,
        assignment: &Assignment,
        domain: &Domain,
    ) -> Result<bool, EquationError> {
        for var in self.variables() {
            let value = assignment
                .get(var)
                .ok_or_else(|| EquationError::MissingVariable(var.to_string()))?;
            if !domain.contains(value) {
                return Ok(false);
            }
        }
        Ok(self.evaluate(assignment)?.is_zero())
    }

    /// Groups terms by degree and summarizes signs.
    pub fn classify(&self) -> StructureDescriptor {
        let mut by_degree: BTreeMap<u32, DegreeBlock> = BTreeMap::new();
        for t in &self.terms {
            let block = by_degree.entry(t.exp).or_insert_with(|| DegreeBlock {
                degree: t.exp,
                term_count: 0,
                positive_terms: 0,
                negative_terms: 0,
                all_unit_coeffs: true,
            });
            block.term_count += 1;
            if t.coeff.is_positive() {
                block.positive_terms += 1;
            } else {
                block.negative_terms += 1;
            }
            if t.coeff.abs() != BigInt::from(1) {
                block.all_unit_coeffs = false;
            }
        }
        // Canonical block order matches term order: degree descending.
        let blocks: Vec<DegreeBlock> = by_degree.into_values().rev().collect();
        let all_exponents_even = blocks.iter().all(|b| b.degree % 2 == 0);
        StructureDescriptor {
            homogeneous: self.is_homogeneous(),
            all_exponents_even,
            blocks,
        }
    }

    /// Pretty-printer; `parse_text` of the output reproduces the equation.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let mag = t.coeff.abs();
            if i == 0 {
                if t.coeff.is_negative() {
                    out.push('-');
                }
            } else if t.coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mag != BigInt::from(1) {
                out.push_str(&format!("{}*", mag));
            }
            out.push_str(&t.var);
            if t.exp != 1 {
                out.push_str(&format!("^{}", t.exp));
            }
        }
        if !self.constant.is_zero() {
            if self.constant.is_negative() {
                out.push_str(&format!(" - {}", self.constant.abs()));
            } else {
                out.push_str(&format!(" + {}", self.constant));
            }
        }
        out.push_str(" = 0");
        out
    }
}

impl fmt::Display for DiagonalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Per-degree sign summary.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DegreeBlock {
    pub degree: u32,
    pub term_count: usize,
    pub positive_terms: usize,
    pub negative_terms: usize,
    pub all_unit_coeffs: bool,
}

impl DegreeBlock {
    /// Pair count when the block is a balanced `±1` block (`s` terms of each
    /// sign), as in the symmetric moment forms.
    pub fn balanced_pairs(&self) -> Option<usize> {
        if self.all_unit_coeffs && self.positive_terms == self.negative_terms {
            Some(self.positive_terms)
        } else {
            None
        }
    }
}

/// Structural classification of an equation: degree blocks (descending
/// degree), homogeneity, parity of exponents.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StructureDescriptor {
    pub blocks: Vec<DegreeBlock>,
    pub homogeneous: bool,
    pub all_exponents_even: bool,
}

impl StructureDescriptor {
    pub fn term_count(&self) -> usize {
        self.blocks.iter().map(|b| b.term_count).sum()
    }

    /// All blocks are balanced unit-coefficient blocks (the `Σx^k = Σy^k`
    /// shape); returns (degree, pair count) per block.
    pub fn symmetric_pair_blocks(&self) -> Option<Vec<(u32, usize)>> {
        if !self.homogeneous {
            return None;
        }
        self.blocks
            .iter()
            .map(|b| b.balanced_pairs().map(|s| (b.degree, s)))
            .collect()
    }

    /// Matches the odd-degree all-unit-coefficient paired form whose integer
    /// solution count coincides with the natural count of the symmetric form.
    pub fn odd_paired_unit_form(&self) -> bool {
        self.homogeneous
            && !self.blocks.is_empty()
            && self.blocks.iter().all(|b| {
                b.degree % 2 == 1 && b.all_unit_coeffs && b.term_count % 2 == 0
            })
    }
}

/// Builds an assignment from parallel name/value slices. Test and CLI helper.
pub fn assignment_of<I, V>(pairs: I) -> Assignment
where
    I: IntoIterator<Item = (V, i64)>,
    V: Into<String>,
{
    pairs
        .into_iter()
        .map(|(v, x)| (v.into(), BigInt::from(x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(terms: Vec<Term>, constant: i64) -> DiagonalEquation {
        DiagonalEquation::new(terms, BigInt::from(constant)).unwrap()
    }

    /// x1^3 + x2^3 + x3^3 - 1 = 0
    fn three_cubes_minus_one() -> DiagonalEquation {
        eq(
            vec![Term::new(1, "x1", 3), Term::new(1, "x2", 3), Term::new(1, "x3", 3)],
            -1,
        )
    }

    #[test]
    fn evaluate_three_cubes_at_unit_point() {
        let e = three_cubes_minus_one();
        let a = assignment_of([("x1", 1), ("x2", 0), ("x3", 0)]);
        assert_eq!(e.evaluate(&a).unwrap(), BigInt::zero());
    }

    #[test]
    fn evaluate_parametric_member() {
        // x1 - 2*x2^2 at (8, 2)
        let e = eq(vec![Term::new(1, "x1", 1), Term::new(-2, "x2", 2)], 0);
        let a = assignment_of([("x1", 8), ("x2", 2)]);
        assert_eq!(e.evaluate(&a).unwrap(), BigInt::zero());
    }

    #[test]
    fn homogeneous_zero_at_origin() {
        let e = eq(
            vec![Term::new(3, "a", 4), Term::new(-7, "b", 2), Term::new(1, "c", 5)],
            0,
        );
        let a = assignment_of([("a", 0), ("b", 0), ("c", 0)]);
        assert_eq!(e.evaluate(&a).unwrap(), BigInt::zero());
    }

    #[test]
    fn evaluate_missing_variable() {
        let e = three_cubes_minus_one();
        let a = assignment_of([("x1", 1), ("x2", 0)]);
        assert_eq!(
            e.evaluate(&a),
            Err(EquationError::MissingVariable("x3".into()))
        );
    }

    #[test]
    fn is_solution_pell_point() {
        // x^2 - 2y^2 - 1 = 0 at (3, 2)
        let e = eq(vec![Term::new(1, "x", 2), Term::new(-2, "y", 2)], -1);
        let a = assignment_of([("x", 3), ("y", 2)]);
        assert!(e.is_solution(&a, &Domain::symmetric(10)).unwrap());
        // 3 is outside Natural(2)
        assert!(!e.is_solution(&a, &Domain::natural(2)).unwrap());
    }

    #[test]
    fn is_solution_exact_big_values() {
        // 2x^3 - 3y^2 = 0 at (384, 6144): 2*384^3 = 3*6144^2
        let e = eq(vec![Term::new(2, "x", 3), Term::new(-3, "y", 2)], 0);
        let a = assignment_of([("x", 384), ("y", 6144)]);
        assert!(e.is_solution(&a, &Domain::natural(10_000)).unwrap());
    }

    #[test]
    fn classify_twelve_term_mixed_degree() {
        // x1^5 + x2^4 + x3^4 + x4^3 + x5^3 + x6^3 = y-side
        let mut terms = vec![
            Term::new(1, "x1", 5),
            Term::new(1, "x2", 4),
            Term::new(1, "x3", 4),
            Term::new(1, "x4", 3),
            Term::new(1, "x5", 3),
            Term::new(1, "x6", 3),
        ];
        terms.extend([
            Term::new(-1, "y1", 5),
            Term::new(-1, "y2", 4),
            Term::new(-1, "y3", 4),
            Term::new(-1, "y4", 3),
            Term::new(-1, "y5", 3),
            Term::new(-1, "y6", 3),
        ]);
        let e = eq(terms, 0);
        let d = e.classify();
        assert!(d.homogeneous);
        let sizes: Vec<(u32, usize)> =
            d.blocks.iter().map(|b| (b.degree, b.term_count)).collect();
        assert_eq!(sizes, vec![(5, 2), (4, 4), (3, 6)]);
        assert_eq!(
            d.symmetric_pair_blocks(),
            Some(vec![(5, 1), (4, 2), (3, 3)])
        );
    }

    #[test]
    fn classify_two_block_homogeneous() {
        let e = eq(vec![Term::new(1, "x1", 1), Term::new(-2, "x2", 2)], 0);
        let d = e.classify();
        assert!(d.homogeneous);
        let sizes: Vec<(u32, usize)> =
            d.blocks.iter().map(|b| (b.degree, b.term_count)).collect();
        assert_eq!(sizes, vec![(2, 1), (1, 1)]);
        assert!(d.symmetric_pair_blocks().is_none());
    }

    #[test]
    fn classify_generalized_thue() {
        // x1^3 + x2^3 + x3^2 - 2x4^2 - 1 = 0
        let e = eq(
            vec![
                Term::new(1, "x1", 3),
                Term::new(1, "x2", 3),
                Term::new(1, "x3", 2),
                Term::new(-2, "x4", 2),
            ],
            -1,
        );
        let d = e.classify();
        assert!(!d.homogeneous);
        let sizes: Vec<(u32, usize)> =
            d.blocks.iter().map(|b| (b.degree, b.term_count)).collect();
        assert_eq!(sizes, vec![(3, 2), (2, 2)]);
        assert_eq!(e.constant(), &BigInt::from(-1));
    }

    #[test]
    fn invariant_rejections() {
        assert_eq!(
            DiagonalEquation::new(vec![], BigInt::zero()),
            Err(EquationError::NoTerms)
        );
        assert_eq!(
            DiagonalEquation::new(vec![Term::new(0, "x", 2)], BigInt::zero()),
            Err(EquationError::ZeroCoefficient("x".into()))
        );
        assert_eq!(
            DiagonalEquation::new(vec![Term::new(1, "x", 0)], BigInt::zero()),
            Err(EquationError::ZeroExponent("x".into()))
        );
        assert_eq!(
            DiagonalEquation::new(
                vec![Term::new(1, "x", 2), Term::new(1, "x", 2)],
                BigInt::zero()
            ),
            Err(EquationError::DuplicateExponent("x".into(), 2))
        );
        assert_eq!(
            DiagonalEquation::new(
                vec![Term::new(1, "x", 1), Term::new(1, "x", 2), Term::new(1, "x", 3)],
                BigInt::zero()
            ),
            Err(EquationError::TooManyTerms("x".into()))
        );
    }

    #[test]
    fn repeated_variable_with_distinct_exponents_allowed() {
        // x^3 - x^2 = 0 is representable
        let e = eq(vec![Term::new(1, "x", 3), Term::new(-1, "x", 2)], 0);
        assert_eq!(e.variable_count(), 1);
        let a = assignment_of([("x", 1)]);
        assert!(e.is_solution(&a, &Domain::natural(10)).unwrap());
    }

    #[test]
    fn canonical_order_is_reordering_invariant() {
        let a = eq(
            vec![Term::new(1, "b", 2), Term::new(-1, "a", 3), Term::new(2, "c", 2)],
            5,
        );
        let b = eq(
            vec![Term::new(2, "c", 2), Term::new(1, "b", 2), Term::new(-1, "a", 3)],
            5,
        );
        assert_eq!(a, b);
        assert_eq!(a.render(), "-a^3 + b^2 + 2*c^2 + 5 = 0");
    }

    #[test]
    fn domain_values_and_box_size() {
        let nat = Domain::natural(3);
        assert_eq!(nat.values().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(nat.box_size(), 3);
        let sym = Domain::symmetric(2);
        assert_eq!(sym.values().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(sym.box_size(), 5);
        assert!(sym.contains(&BigInt::from(0)));
        assert!(!nat.contains(&BigInt::from(0)));
    }
}
