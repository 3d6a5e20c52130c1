//! Exactly evaluable lower bounds and their composition calculus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::BoundError;
use crate::count::perm_matching_count;
use crate::equation::DiagonalEquation;
use crate::families::{parametric_family, pell_solutions, solve_univariate};

/// Product of per-factor lower bounds. Valid for the composed equation when
/// each factor bounds its sub-equation's count in the same box and the
/// factors' solution sets combine coordinatewise.
pub fn compose_lower(factors: &[BigInt]) -> Result<BigInt, BoundError> {
    if factors.is_empty() {
        return Err(BoundError::EmptyFactors);
    }
    Ok(factors.iter().product())
}

/// Scaling count floor((2N+1)/M) from one nontrivial homogeneous solution
/// with largest coordinate magnitude M.
pub fn thue_scaling_lower(max_coord: &BigInt, n: u64) -> Result<BigInt, BoundError> {
    if !max_coord.is_positive() {
        return Err(BoundError::NonPositiveMaxCoord(max_coord.clone()));
    }
    Ok((BigInt::from(2) * BigInt::from(n) + BigInt::one()).div_floor(max_coord))
}

/// Floor of (ln N - m·ln a1) / ln t for m = degree_product_minus_one,
/// clamped at 0, computed exactly: the largest e ≥ 0 with a1^m · t^e ≤ N.
/// For a1 = 1 this is floor(log_t N).
pub fn log_family_lower(
    a1: &BigInt,
    t: &BigInt,
    degree_product_minus_one: u32,
    n: u64,
) -> Result<BigInt, BoundError> {
    if t <= &BigInt::one() {
        return Err(BoundError::BadLogBase(t.clone()));
    }
    if a1 < &BigInt::one() {
        return Err(BoundError::BadLogScale(a1.clone()));
    }
    let bound = BigInt::from(n);
    let mut value = a1.pow(degree_product_minus_one);
    if value > bound {
        return Ok(BigInt::zero());
    }
    let mut e = BigInt::zero();
    while &value * t <= bound {
        value *= t;
        e += 1;
    }
    Ok(e)
}

/// An exactly evaluable lower bound on the solution count at box side N.
/// Every variant is a constructive witness (or an explicit constant), so a
/// violation by an exact count is a hard audit failure.
#[derive(Debug, Clone, PartialEq)]
pub enum LowerRule {
    Constant(BigInt),
    /// floor((2N+1)/max_coord) scaled copies of a homogeneous solution
    ScaledSolution { max_coord: BigInt },
    /// permutation-matching count with `pairs` pairs
    PermMatching { pairs: u32 },
    /// floor(N^(1/degree)): the exact count of x1 = x2^degree
    FloorRoot { degree: u32 },
    /// integer roots of coeff·x^degree + constant = 0 with |root| ≤ N
    UnivariateRoots { coeff: BigInt, degree: u32, constant: BigInt },
    /// verified Pell chain members within the box
    PellMembers { d: BigInt, fund_x: BigInt, fund_y: BigInt },
    /// verified parametric family members within the box
    ParametricMembers { eq: DiagonalEquation },
    /// product of independent factors (composition calculus)
    Product(Vec<LowerRule>),
}

impl LowerRule {
    pub fn evaluate(&self, n: u64) -> Result<BigInt, BoundError> {
        match self {
            LowerRule::Constant(c) => Ok(c.clone()),
            LowerRule::ScaledSolution { max_coord } => thue_scaling_lower(max_coord, n),
            LowerRule::PermMatching { pairs } => Ok(perm_matching_count(*pairs, n)),
            LowerRule::FloorRoot { degree } => Ok(BigInt::from(n).nth_root(*degree)),
            LowerRule::UnivariateRoots { coeff, degree, constant } => {
                let roots = solve_univariate(coeff, *degree, constant)
                    .map_err(|e| BoundError::RuleEvaluation(e.to_string()))?;
                let bound = BigInt::from(n);
                Ok(BigInt::from(
                    roots.iter().filter(|r| r.abs() <= bound).count(),
                ))
            }
            LowerRule::PellMembers { d, fund_x, fund_y } => {
                let family = pell_solutions(d, (fund_x, fund_y))
                    .map_err(|e| BoundError::RuleEvaluation(e.to_string()))?;
                let members = family
                    .members_within(n)
                    .map_err(|e| BoundError::RuleEvaluation(e.to_string()))?;
                Ok(BigInt::from(members.len()))
            }
            LowerRule::ParametricMembers { eq } => {
                let family = parametric_family(eq)
                    .map_err(|e| BoundError::RuleEvaluation(e.to_string()))?;
                let members = family
                    .members_within(n)
                    .map_err(|e| BoundError::RuleEvaluation(e.to_string()))?;
                Ok(BigInt::from(members.len()))
            }
            LowerRule::Product(factors) => {
                let values: Vec<BigInt> =
                    factors.iter().map(|f| f.evaluate(n)).collect::<Result<_, _>>()?;
                compose_lower(&values)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LowerRule::Constant(c) => format!("constant {c}"),
            LowerRule::ScaledSolution { max_coord } => {
                format!("floor((2N+1)/{max_coord}) scaled solutions")
            }
            LowerRule::PermMatching { pairs } => {
                format!("permutation matching with {pairs} pairs")
            }
            LowerRule::FloorRoot { degree } => format!("floor(N^(1/{degree}))"),
            LowerRule::UnivariateRoots { coeff, degree, constant } => {
                format!("integer roots of {coeff}*x^{degree} + {constant} within the box")
            }
            LowerRule::PellMembers { d, fund_x, fund_y } => {
                format!("Pell chain for D = {d} from ({fund_x}, {fund_y})")
            }
            LowerRule::ParametricMembers { eq } => {
                format!("parametric family members of `{eq}`")
            }
            LowerRule::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.describe()).collect();
                format!("product of [{}]", parts.join("; "))
            }
        }
    }
}

/// A composed lower bound whose factors cover disjoint variable groups.
#[derive(Debug, Clone)]
pub struct CompositionFactor {
    pub description: String,
    pub variables: Vec<String>,
    pub rule: LowerRule,
}

#[derive(Debug, Clone)]
pub struct CompositionPlan {
    pub factors: Vec<CompositionFactor>,
}

impl CompositionPlan {
    /// Validates that the factors partition the equation's variable set.
    pub fn new(
        eq: &DiagonalEquation,
        factors: Vec<CompositionFactor>,
    ) -> Result<Self, BoundError> {
        if factors.is_empty() {
            return Err(BoundError::EmptyFactors);
        }
        let mut covered: Vec<&str> = Vec::new();
        for f in &factors {
            for v in &f.variables {
                if covered.contains(&v.as_str()) {
                    return Err(BoundError::RuleEvaluation(format!(
                        "variable `{v}` appears in two factors"
                    )));
                }
                covered.push(v);
            }
        }
        let mut expected: Vec<&str> = eq.variables();
        expected.sort_unstable();
        covered.sort_unstable();
        if expected != covered {
            return Err(BoundError::RuleEvaluation(
                "factors do not partition the variable set".into(),
            ));
        }
        Ok(CompositionPlan { factors })
    }

    pub fn combined_rule(&self) -> LowerRule {
        LowerRule::Product(self.factors.iter().map(|f| f.rule.clone()).collect())
    }

    pub fn combined_lower(&self, n: u64) -> Result<BigInt, BoundError> {
        self.combined_rule().evaluate(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_text;

    #[test]
    fn compose_product_and_edge_cases() {
        let v = compose_lower(&[BigInt::from(8), BigInt::from(120)]).unwrap();
        assert_eq!(v, BigInt::from(960));
        assert_eq!(
            compose_lower(&[BigInt::from(7), BigInt::zero()]).unwrap(),
            BigInt::zero()
        );
        assert_eq!(compose_lower(&[]), Err(BoundError::EmptyFactors));
    }

    #[test]
    fn compose_is_order_independent() {
        let a = [BigInt::from(3), BigInt::from(5), BigInt::from(7)];
        let b = [BigInt::from(7), BigInt::from(3), BigInt::from(5)];
        assert_eq!(compose_lower(&a).unwrap(), compose_lower(&b).unwrap());
    }

    #[test]
    fn thue_scaling_values() {
        assert_eq!(thue_scaling_lower(&BigInt::one(), 10).unwrap(), BigInt::from(21));
        assert_eq!(thue_scaling_lower(&BigInt::from(21), 10).unwrap(), BigInt::one());
        assert!(thue_scaling_lower(&BigInt::zero(), 10).is_err());
        for n in 1..=30u64 {
            assert_eq!(
                thue_scaling_lower(&BigInt::one(), n).unwrap(),
                BigInt::from(2 * n + 1)
            );
        }
    }

    #[test]
    fn log_family_values() {
        // a1 = 1, t = 2, N = 1024: floor(ln 1024 / ln 2) = 10
        let one = BigInt::one();
        let two = BigInt::from(2);
        assert_eq!(log_family_lower(&one, &two, 0, 1024).unwrap(), BigInt::from(10));
        // a1 = 2, t = 12, m = 5, N = 10^6: floor(4.16...) = 4
        assert_eq!(
            log_family_lower(&two, &BigInt::from(12), 5, 1_000_000).unwrap(),
            BigInt::from(4)
        );
        // N below the first family member
        assert_eq!(log_family_lower(&two, &BigInt::from(12), 5, 31).unwrap(), BigInt::zero());
        assert!(log_family_lower(&one, &one, 0, 10).is_err());
    }

    #[test]
    fn rules_evaluate() {
        assert_eq!(
            LowerRule::PermMatching { pairs: 2 }.evaluate(8).unwrap(),
            BigInt::from(120)
        );
        assert_eq!(
            LowerRule::FloorRoot { degree: 2 }.evaluate(1_000_000).unwrap(),
            BigInt::from(1000)
        );
        assert_eq!(
            LowerRule::UnivariateRoots {
                coeff: BigInt::one(),
                degree: 2,
                constant: BigInt::from(-4)
            }
            .evaluate(10)
            .unwrap(),
            BigInt::from(2)
        );
        // roots outside the box are not counted
        assert_eq!(
            LowerRule::UnivariateRoots {
                coeff: BigInt::one(),
                degree: 2,
                constant: BigInt::from(-400)
            }
            .evaluate(10)
            .unwrap(),
            BigInt::zero()
        );
        let pell = LowerRule::PellMembers {
            d: BigInt::from(2),
            fund_x: BigInt::from(3),
            fund_y: BigInt::from(2),
        };
        assert_eq!(pell.evaluate(1_000_000).unwrap(), BigInt::from(8));

        let product = LowerRule::Product(vec![
            LowerRule::ScaledSolution { max_coord: BigInt::one() },
            LowerRule::Constant(BigInt::from(1)),
        ]);
        assert_eq!(product.evaluate(50).unwrap(), BigInt::from(101));
    }

    #[test]
    fn composition_plan_partition_check() {
        let eq = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0").unwrap();
        let plan = CompositionPlan::new(
            &eq,
            vec![
                CompositionFactor {
                    description: "scaled (1,-1)".into(),
                    variables: vec!["x1".into(), "x2".into()],
                    rule: LowerRule::ScaledSolution { max_coord: BigInt::one() },
                },
                CompositionFactor {
                    description: "x3^3 = 1".into(),
                    variables: vec!["x3".into()],
                    rule: LowerRule::UnivariateRoots {
                        coeff: BigInt::one(),
                        degree: 3,
                        constant: BigInt::from(-1),
                    },
                },
            ],
        )
        .unwrap();
        assert_eq!(plan.combined_lower(10).unwrap(), BigInt::from(21));

        let missing = CompositionPlan::new(
            &eq,
            vec![CompositionFactor {
                description: "only x1".into(),
                variables: vec!["x1".into()],
                rule: LowerRule::Constant(BigInt::one()),
            }],
        );
        assert!(missing.is_err());
    }

    #[test]
    fn perm_product_has_polynomial_degree_s() {
        // product of matching counts for 2s = 4 + 2 is a degree-3 polynomial
        // in N: its 4th finite difference vanishes and 3rd does not
        let rule = LowerRule::Product(vec![
            LowerRule::PermMatching { pairs: 2 },
            LowerRule::PermMatching { pairs: 1 },
        ]);
        let values: Vec<BigInt> =
            (1..=8u64).map(|n| rule.evaluate(n).unwrap()).collect();
        let diff = |v: &[BigInt]| -> Vec<BigInt> {
            v.windows(2).map(|w| &w[1] - &w[0]).collect()
        };
        let d1 = diff(&values);
        let d2 = diff(&d1);
        let d3 = diff(&d2);
        let d4 = diff(&d3);
        assert!(d3.iter().all(|v| v == &d3[0]) && !d3[0].is_zero());
        assert!(d4.iter().all(|v| v.is_zero()));
    }
}
