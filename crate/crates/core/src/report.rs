//! Equation analysis: derives every applicable bound claim and annotation
//! from the structure of an equation, for the report and audit front ends.
//!
//! Upper claims come from the moment calculus (mixed-degree splitting,
//! explicit-variable bound); lower claims are constructive witnesses
//! (permutation matching, scaled solutions, solution families), so they
//! hold at every finite N and a violation is a real failure.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bounds::{
    explicit_var_upper, mixed_degree_upper, natural_to_integer, solvability_check, BoundReport,
    Claim, CompositionFactor, CompositionPlan, LowerRule, MixedDegreeOutcome, Regime,
    SolvabilityReport,
};
use crate::equation::{Assignment, DiagonalEquation, DomainKind, StructureDescriptor, Term};
use crate::families::parametric_family;

#[derive(Debug)]
pub struct Analysis {
    pub equation: DiagonalEquation,
    pub descriptor: StructureDescriptor,
    pub claims: Vec<Claim>,
    pub annotations: Vec<String>,
    pub solvability: Option<SolvabilityReport>,
    pub mixed_degree: Option<MixedDegreeOutcome>,
    pub composition: Option<CompositionPlan>,
}

/// Full report: static analysis plus the empirical audit of its claims.
#[derive(Debug)]
pub struct FullReport {
    pub analysis: Analysis,
    pub audit: crate::bounds::AuditReport,
}

/// Analyzes the equation, audits the derived claims (plus any caller
/// extras) over the given box sides, and bundles both.
pub fn build_report(
    eq: &DiagonalEquation,
    ns: &[u64],
    extra_claims: &[Claim],
    budget: &crate::count::Budget,
) -> Result<FullReport, crate::count::CountError> {
    let analysis = analyze(eq);
    let mut claims = analysis.claims.clone();
    claims.extend_from_slice(extra_claims);
    let audit = crate::bounds::audit(eq, ns, &claims, budget)?;
    Ok(FullReport { analysis, audit })
}

/// Inspects the equation and derives the claims its shape licenses.
pub fn analyze(eq: &DiagonalEquation) -> Analysis {
    let descriptor = eq.classify();
    let mut analysis = Analysis {
        equation: eq.clone(),
        descriptor: descriptor.clone(),
        claims: Vec::new(),
        annotations: Vec::new(),
        solvability: None,
        mixed_degree: None,
        composition: None,
    };

    symmetric_pair_claims(eq, &descriptor, &mut analysis);
    explicit_variable_claims(eq, &descriptor, &mut analysis);
    parametric_claims(eq, &mut analysis);
    thue_claims(eq, &descriptor, &mut analysis);
    homogeneous_single_block(eq, &descriptor, &mut analysis);
    transform_annotation(&descriptor, &mut analysis);

    analysis
}

/// `Σ x^k = Σ y^k` shapes: moment upper bound and permutation-matching
/// lower bound, composed over the degree blocks.
fn symmetric_pair_claims(
    eq: &DiagonalEquation,
    descriptor: &StructureDescriptor,
    analysis: &mut Analysis,
) {
    let Some(pairs) = descriptor.symmetric_pair_blocks() else {
        return;
    };
    let blocks: Vec<(u32, u64)> = pairs.iter().map(|&(k, s)| (k, s as u64)).collect();
    if let Ok(outcome) = mixed_degree_upper(&blocks) {
        analysis.claims.push(Claim {
            label: "moment upper bound".into(),
            domain: DomainKind::Natural,
            report: outcome.report.clone(),
        });
        analysis.mixed_degree = Some(outcome);
    }

    // one matching factor per degree block; factors partition the variables
    let mut factors = Vec::new();
    for &(k, s) in &pairs {
        let vars: Vec<String> = eq
            .terms()
            .iter()
            .filter(|t| t.exp == k)
            .map(|t| t.var.clone())
            .collect();
        factors.push(CompositionFactor {
            description: format!("degree-{k} block: {s} matched pairs"),
            variables: vars,
            rule: LowerRule::PermMatching { pairs: s as u32 },
        });
    }
    if let Ok(plan) = CompositionPlan::new(eq, factors) {
        let exponent: i64 = pairs.iter().map(|&(_, s)| s as i64).sum();
        let rule = plan.combined_rule();
        analysis.claims.push(Claim {
            label: "permutation-matching lower bound".into(),
            domain: DomainKind::Natural,
            report: BoundReport::lower(
                crate::bounds::rational_int(exponent),
                Regime::Composition,
                rule,
            )
            .with_note("product of per-block rearrangement counts"),
        });
        analysis.composition = Some(plan);
    }
}

/// `x1 = c2 x2^n + ... + ck xk^n` with positive right-hand coefficients.
fn explicit_variable_claims(
    eq: &DiagonalEquation,
    descriptor: &StructureDescriptor,
    analysis: &mut Analysis,
) {
    if !descriptor.homogeneous {
        return;
    }
    // the explicit variable: a single degree-1 term with unit coefficient
    let candidate = eq.terms().iter().find(|t| {
        t.exp == 1 && t.coeff.abs().is_one() && eq.terms_of(&t.var).count() == 1
    });
    let Some(lead) = candidate else {
        return;
    };
    let sigma_positive = lead.coeff.is_positive();
    let others: Vec<&Term> = eq.terms().iter().filter(|t| t.var != lead.var).collect();
    if others.is_empty() {
        return;
    }
    // every other term must sit on the opposite side with one shared degree
    if !others.iter().all(|t| t.coeff.is_positive() != sigma_positive) {
        return;
    }
    let n = others[0].exp;
    if n < 2 || !others.iter().all(|t| t.exp == n) {
        return;
    }
    let k = eq.variable_count() as u32;
    analysis.claims.push(Claim {
        label: "explicit-variable upper bound".into(),
        domain: DomainKind::Natural,
        report: explicit_var_upper(k, n),
    });
    if k == 2 && others[0].coeff.abs().is_one() {
        analysis.claims.push(Claim {
            label: "explicit-variable exact count".into(),
            domain: DomainKind::Natural,
            report: BoundReport::lower(
                crate::bounds::rational(1, n as i64),
                Regime::ExplicitVar,
                LowerRule::FloorRoot { degree: n },
            )
            .with_note("count of x1 = x2^n is exactly floor(N^(1/n))"),
        });
    }
    if k == 4 && n == 2 && others.iter().all(|t| t.coeff.abs().is_one()) {
        analysis.annotations.push(
            "lattice-point estimate applies: natural solutions of x1 = x2^2 + x3^2 + x4^2 \
             number pi*N^(3/2)/6 + O(N) (points under the sphere of radius sqrt(N))"
                .into(),
        );
        analysis.claims.push(Claim {
            label: "sphere lattice-point exponent".into(),
            domain: DomainKind::Natural,
            report: BoundReport::upper(crate::bounds::rational(3, 2), false, Regime::Sphere)
                .with_note("main term pi*N^(3/2)/6"),
        });
    }
}

/// Equations admitting the parametric power family.
fn parametric_claims(eq: &DiagonalEquation, analysis: &mut Analysis) {
    let Ok(family) = parametric_family(eq) else {
        return;
    };
    let c = family.construction().expect("parametric construction");
    analysis.annotations.push(format!(
        "parametric family: t = {}, Bezout (r, s) = ({}, {}); logarithmic growth \
         floor((ln N - {} ln {}) / ln {}) family members within N",
        c.t,
        c.r,
        c.s,
        c.degree_product - 1,
        c.leader.coeff,
        c.t
    ));
    analysis.claims.push(Claim {
        label: "parametric family lower bound".into(),
        domain: DomainKind::Natural,
        report: BoundReport::lower(
            crate::bounds::rational_int(0),
            Regime::LogFamily,
            LowerRule::ParametricMembers { eq: eq.clone() },
        )
        .with_note("verified family members within the box; growth ~ ln N"),
    });
}

/// Thue shapes `f1 + f2 = 0` with homogeneous f1 and a solvable f2
/// (a univariate power or a Pell block plus the constant).
fn thue_claims(eq: &DiagonalEquation, descriptor: &StructureDescriptor, analysis: &mut Analysis) {
    if descriptor.homogeneous {
        return;
    }
    heath_brown_annotation(eq, analysis);

    // Pell-shaped f2 first: x^2 - D*y^2 - 1 = 0
    if let Some(claim) = pell_decomposition(eq, analysis) {
        analysis.claims.push(claim);
        return;
    }
    if let Some(claim) = univariate_decomposition(eq, analysis) {
        analysis.claims.push(claim);
    }
}

fn heath_brown_annotation(eq: &DiagonalEquation, analysis: &mut Analysis) {
    let three_unit_cubes = eq.terms().len() == 3
        && eq.variable_count() == 3
        && eq.terms().iter().all(|t| t.exp == 3 && t.coeff.is_one())
        && eq.constant().abs().is_one();
    if three_unit_cubes {
        analysis.annotations.push(
            "literature records the upper bound R(N) << N^(1+xi) for sums of three cubes \
             equal to a constant; xi a small positive real"
                .into(),
        );
    }
}

fn pell_decomposition(eq: &DiagonalEquation, analysis: &mut Analysis) -> Option<Claim> {
    if eq.constant() != &BigInt::from(-1) {
        return None;
    }
    let deg2: Vec<&Term> = eq.terms().iter().filter(|t| t.exp == 2).collect();
    if deg2.len() != 2 {
        return None;
    }
    let (plus, minus) = if deg2[0].coeff.is_positive() {
        (deg2[0], deg2[1])
    } else {
        (deg2[1], deg2[0])
    };
    if !plus.coeff.is_one() || !minus.coeff.is_negative() {
        return None;
    }
    let d = -minus.coeff.clone();
    if d < BigInt::from(2) {
        return None;
    }
    let root = d.sqrt();
    if &root * &root == d {
        return None;
    }
    // Pell variables must not appear elsewhere
    for v in [&plus.var, &minus.var] {
        if eq.terms_of(v).count() != 1 {
            return None;
        }
    }
    let f1_terms: Vec<Term> = eq
        .terms()
        .iter()
        .filter(|t| t.var != plus.var && t.var != minus.var)
        .cloned()
        .collect();
    if f1_terms.is_empty() {
        return None;
    }
    let f1 = DiagonalEquation::new(f1_terms, BigInt::zero()).ok()?;
    let (base, max_abs) = find_scalable_solution(&f1)?;
    let fund = pell_fundamental(&d)?;

    let plan = CompositionPlan::new(
        eq,
        vec![
            CompositionFactor {
                description: format!("scaled homogeneous solution {}", describe_point(&base)),
                variables: f1.variables().iter().map(|s| s.to_string()).collect(),
                rule: LowerRule::ScaledSolution { max_coord: max_abs },
            },
            CompositionFactor {
                description: format!("Pell chain x^2 - {d}*y^2 = 1 from ({}, {})", fund.0, fund.1),
                variables: vec![plus.var.clone(), minus.var.clone()],
                rule: LowerRule::PellMembers {
                    d: d.clone(),
                    fund_x: fund.0.clone(),
                    fund_y: fund.1.clone(),
                },
            },
        ],
    )
    .ok()?;
    let rule = plan.combined_rule();
    analysis.composition = Some(plan);
    analysis
        .annotations
        .push("composed lower bound grows like N ln N (scaling times Pell chain)".into());
    Some(Claim {
        label: "composed scaling x Pell lower bound".into(),
        domain: DomainKind::SymmetricInteger,
        report: BoundReport::lower(crate::bounds::rational_int(1), Regime::Composition, rule)
            .with_note("integer-domain composition of a scaled f1 solution with Pell f2 members"),
    })
}

fn univariate_decomposition(eq: &DiagonalEquation, analysis: &mut Analysis) -> Option<Claim> {
    // try variables from the lowest-degree end, matching the customary
    // split f2 = (last term) + constant
    let mut vars: Vec<&str> = eq.variables();
    vars.reverse();
    for var in vars {
        let terms: Vec<&Term> = eq.terms_of(var).collect();
        if terms.len() != 1 {
            continue;
        }
        let t2 = terms[0];
        let roots =
            crate::families::solve_univariate(&t2.coeff, t2.exp, eq.constant()).ok()?;
        if roots.is_empty() {
            continue;
        }
        let f1_terms: Vec<Term> =
            eq.terms().iter().filter(|t| t.var != var).cloned().collect();
        if f1_terms.is_empty() {
            continue;
        }
        let f1 = DiagonalEquation::new(f1_terms, BigInt::zero()).ok()?;
        let Some((base, max_abs)) = find_scalable_solution(&f1) else {
            continue;
        };
        let plan = CompositionPlan::new(
            eq,
            vec![
                CompositionFactor {
                    description: format!(
                        "scaled homogeneous solution {}",
                        describe_point(&base)
                    ),
                    variables: f1.variables().iter().map(|s| s.to_string()).collect(),
                    rule: LowerRule::ScaledSolution { max_coord: max_abs },
                },
                CompositionFactor {
                    description: format!(
                        "integer roots of {}*{}^{} + {} = 0",
                        t2.coeff,
                        var,
                        t2.exp,
                        eq.constant()
                    ),
                    variables: vec![var.to_string()],
                    rule: LowerRule::UnivariateRoots {
                        coeff: t2.coeff.clone(),
                        degree: t2.exp,
                        constant: eq.constant().clone(),
                    },
                },
            ],
        )
        .ok()?;
        let rule = plan.combined_rule();
        analysis.composition = Some(plan);
        analysis.annotations.push(format!(
            "f2 = {}*{}^{} + {} is solvable, so the equation has integer solutions \
             (homogeneous f1 composed with each root)",
            t2.coeff,
            var,
            t2.exp,
            eq.constant()
        ));
        return Some(Claim {
            label: "Thue scaling lower bound".into(),
            domain: DomainKind::SymmetricInteger,
            report: BoundReport::lower(
                crate::bounds::rational_int(1),
                Regime::ThueScaling,
                rule,
            )
            .with_note("floor((2N+1)/max coordinate) scaled f1 solutions per f2 root"),
        });
    }
    None
}

/// Single-degree homogeneous forms with general coefficients: solvability
/// hypotheses plus a scaled small solution if one exists.
fn homogeneous_single_block(
    eq: &DiagonalEquation,
    descriptor: &StructureDescriptor,
    analysis: &mut Analysis,
) {
    if !descriptor.homogeneous || descriptor.blocks.len() != 1 {
        return;
    }
    if descriptor.symmetric_pair_blocks().is_some() {
        return; // already covered by the matching bound
    }
    let block = &descriptor.blocks[0];
    let signs_mixed = block.positive_terms > 0 && block.negative_terms > 0;
    analysis.solvability =
        Some(solvability_check(block.degree, block.term_count as u64, signs_mixed));

    if let Some((base, max_abs)) = find_scalable_solution(eq) {
        analysis.claims.push(Claim {
            label: "scaled small solution lower bound".into(),
            domain: DomainKind::SymmetricInteger,
            report: BoundReport::lower(
                crate::bounds::rational_int(1),
                Regime::ThueScaling,
                LowerRule::ScaledSolution { max_coord: max_abs },
            )
            .with_note(format!("scaling the verified solution {}", describe_point(&base))),
        });
    }
}

fn transform_annotation(descriptor: &StructureDescriptor, analysis: &mut Analysis) {
    if let Ok(t) = natural_to_integer(descriptor, &BigInt::one()) {
        analysis.annotations.push(format!(
            "natural-to-integer transform applies (rule {:?}); {}",
            t.rule, t.caveat
        ));
    }
}

fn describe_point(a: &Assignment) -> String {
    let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("({})", parts.join(", "))
}

/// Minimal positive solution of x^2 - D*y^2 = 1, by scanning y upward.
/// Fundamental solutions can be astronomically large for unlucky D, so the
/// scan is capped; shapes whose fundamental lies beyond it get no Pell
/// claim rather than a wrong one.
pub fn pell_fundamental(d: &BigInt) -> Option<(BigInt, BigInt)> {
    for y in 1u64..=100_000 {
        let y = BigInt::from(y);
        let x_sq = d * (&y * &y) + BigInt::one();
        let x = x_sq.sqrt();
        if &x * &x == x_sq {
            return Some((x, y));
        }
    }
    None
}

/// Smallest-box nontrivial integer solution whose multiples stay solutions
/// (every degree block vanishes separately). Deterministic: boxes grow one
/// at a time and coordinates enumerate lexicographically.
pub fn find_scalable_solution(eq: &DiagonalEquation) -> Option<(Assignment, BigInt)> {
    let vars: Vec<String> = eq.variables().iter().map(|s| s.to_string()).collect();
    for bound in 1i64..=4 {
        let width = (2 * bound + 1) as u64;
        if width.pow(vars.len() as u32) > 2_000_000 {
            break;
        }
        let mut point = vec![-bound; vars.len()];
        loop {
            if point.iter().any(|&v| v != 0) {
                let assignment: Assignment = vars
                    .iter()
                    .cloned()
                    .zip(point.iter().map(|&v| BigInt::from(v)))
                    .collect();
                if eq.evaluate(&assignment).map(|v| v.is_zero()).unwrap_or(false)
                    && crate::families::scale_solution(eq, &assignment).is_ok()
                {
                    let max_abs =
                        assignment.values().map(|v| v.abs()).max().unwrap_or_default();
                    if max_abs == BigInt::from(bound) {
                        return Some((assignment, max_abs));
                    }
                }
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == point.len() {
                    break;
                }
                point[i] += 1;
                if point[i] <= bound {
                    break;
                }
                point[i] = -bound;
                i += 1;
            }
            if i == point.len() {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Direction;
    use crate::parse::parse_text;

    #[test]
    fn analyze_symmetric_mixed_degree() {
        let eq = parse_text(
            "x1^5 + x2^4 + x3^4 + x4^3 + x5^3 + x6^3 \
             - y1^5 - y2^4 - y3^4 - y4^3 - y5^3 - y6^3 = 0",
        )
        .unwrap();
        let a = analyze(&eq);
        let upper = a
            .claims
            .iter()
            .find(|c| c.label == "moment upper bound")
            .expect("moment claim");
        assert_eq!(upper.report.exponent_text(), "33/4");
        let lower = a
            .claims
            .iter()
            .find(|c| c.label.contains("permutation"))
            .expect("matching claim");
        assert_eq!(lower.report.direction, Direction::Lower);
        // product over blocks: s = 1 + 2 + 3
        assert_eq!(
            lower.report.lower_rule.as_ref().unwrap().evaluate(2).unwrap(),
            BigInt::from(2u64* (2 * 4 - 2) * 20)
        );
        assert!(a.composition.is_some());
    }

    #[test]
    fn analyze_explicit_variable() {
        let eq = parse_text("x1 - x2^2 = 0").unwrap();
        let a = analyze(&eq);
        let upper = a
            .claims
            .iter()
            .find(|c| c.label.contains("explicit-variable upper"))
            .unwrap();
        assert_eq!(upper.report.exponent_text(), "1/2");
        let exact = a
            .claims
            .iter()
            .find(|c| c.label.contains("exact count"))
            .unwrap();
        assert_eq!(
            exact.report.lower_rule.as_ref().unwrap().evaluate(1_000_000).unwrap(),
            BigInt::from(1000)
        );
    }

    #[test]
    fn analyze_sphere_form() {
        let eq = parse_text("x1 - x2^2 - x3^2 - x4^2 = 0").unwrap();
        let a = analyze(&eq);
        let sphere = a
            .claims
            .iter()
            .find(|c| c.label.contains("sphere"))
            .expect("sphere claim");
        assert_eq!(sphere.report.exponent_text(), "3/2");
        assert!(a.annotations.iter().any(|s| s.contains("pi*N^(3/2)/6")));
    }

    #[test]
    fn analyze_three_cubes_thue() {
        let eq = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0").unwrap();
        let a = analyze(&eq);
        let lower = a
            .claims
            .iter()
            .find(|c| c.label.contains("Thue scaling"))
            .expect("thue claim");
        // (2N+1)/1 at N = 50 composed with the single root x3 = 1
        assert_eq!(
            lower.report.lower_rule.as_ref().unwrap().evaluate(50).unwrap(),
            BigInt::from(101)
        );
        assert!(a.annotations.iter().any(|s| s.contains("N^(1+xi)")));
    }

    #[test]
    fn analyze_pell_composition() {
        let eq = parse_text("x1^3 + x2^3 + x3^2 - 2*x4^2 - 1 = 0").unwrap();
        let a = analyze(&eq);
        let lower = a
            .claims
            .iter()
            .find(|c| c.label.contains("Pell"))
            .expect("pell composition claim");
        // members at N = 1000: pell chain (3,17,99,577) x (2*1000+1)
        assert_eq!(
            lower.report.lower_rule.as_ref().unwrap().evaluate(1000).unwrap(),
            BigInt::from(2001u64 * 4)
        );
        assert!(a.annotations.iter().any(|s| s.contains("N ln N")));
    }

    #[test]
    fn analyze_parametric() {
        let eq = parse_text("x1 - 2*x2^2 = 0").unwrap();
        let a = analyze(&eq);
        let fam = a
            .claims
            .iter()
            .find(|c| c.label.contains("parametric"))
            .expect("family claim");
        assert_eq!(
            fam.report.lower_rule.as_ref().unwrap().evaluate(1024).unwrap(),
            BigInt::from(5)
        );
    }

    #[test]
    fn analyze_homogeneous_block_solvability() {
        let eq = parse_text("x1^2 + x2^2 - 2*x3^2 = 0").unwrap();
        let a = analyze(&eq);
        let solv = a.solvability.expect("solvability report");
        assert_eq!(solv.k, 2);
        assert_eq!(solv.s, 3);
        assert!(solv.signs_mixed);
        // (1,1,1) solves it and scales
        let scaled = a
            .claims
            .iter()
            .find(|c| c.label.contains("scaled small solution"))
            .expect("scaling claim");
        assert_eq!(
            scaled.report.lower_rule.as_ref().unwrap().evaluate(10).unwrap(),
            BigInt::from(21)
        );
    }
}
