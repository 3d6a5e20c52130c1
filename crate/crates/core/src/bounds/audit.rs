//! Empirical audit: exact counts versus claimed bounds.
//!
//! Exact counts are the ground truth. An exact count below a lower claim's
//! value is a hard failure; a fitted growth slope above an upper claim's
//! exponent (beyond the tolerance absorbing ε and log factors) is flagged
//! as empirically questionable but is not treated as disproof by itself.

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{natural_to_integer, BoundReport, Direction};
use crate::count::{count_auto, Budget, CountError, CountMethod};
use crate::equation::{DiagonalEquation, Domain, DomainKind};
use crate::sweep::{fit_exponent, FitResult, SweepRow};

/// Slope allowance over a claimed upper exponent before warning; absorbs
/// the ε factors and desk-scale log terms the sources leave unspecified.
pub const SLOPE_TOLERANCE: f64 = 0.3;

/// A bound claim to audit, tagged with the domain its counts live in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub label: String,
    pub domain: DomainKind,
    pub report: BoundReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FindingKind {
    /// an exact count fell below a lower claim's value
    HardFailure,
    /// fitted slope exceeds an upper claim's exponent beyond tolerance
    Warning,
    /// informational (advisory transforms, unverifiable claims, ...)
    Note,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub claim: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub domain: DomainKind,
    pub n: u64,
    pub count: BigInt,
    pub method: CountMethod,
    pub elapsed_ms: u128,
}

impl Serialize for AuditRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AuditRow", 5)?;
        s.serialize_field("domain", &self.domain)?;
        s.serialize_field("N", &self.n)?;
        s.serialize_field("count", &self.count.to_string())?;
        s.serialize_field("method", &self.method)?;
        s.serialize_field("elapsed_ms", &self.elapsed_ms)?;
        s.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub fits: Vec<(DomainKind, FitResult)>,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn has_hard_failure(&self) -> bool {
        self.findings.iter().any(|f| f.kind == FindingKind::HardFailure)
    }

    pub fn warnings(&self) -> usize {
        self.findings.iter().filter(|f| f.kind == FindingKind::Warning).count()
    }
}

/// Counts the equation at each N in every domain the claims (and the
/// count transform, when the structure admits one) need, then checks the
/// claims. Counting refusals propagate.
pub fn audit(
    eq: &DiagonalEquation,
    ns: &[u64],
    claims: &[Claim],
    budget: &Budget,
) -> Result<AuditReport, CountError> {
    let mut ns: Vec<u64> = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();

    let descriptor = eq.classify();
    let transform_applies = natural_to_integer(&descriptor, &BigInt::from(0)).is_ok();

    let mut domains: Vec<DomainKind> = Vec::new();
    for c in claims {
        if !domains.contains(&c.domain) {
            domains.push(c.domain);
        }
    }
    if transform_applies {
        for d in [DomainKind::Natural, DomainKind::SymmetricInteger] {
            if !domains.contains(&d) {
                domains.push(d);
            }
        }
    }
    domains.sort_by_key(|d| matches!(d, DomainKind::SymmetricInteger));

    let mut rows = Vec::new();
    for &kind in &domains {
        for &n in &ns {
            let c = count_auto(eq, &Domain { kind, bound: n }, budget)?;
            rows.push(AuditRow {
                domain: kind,
                n,
                count: c.count,
                method: c.method,
                elapsed_ms: c.elapsed.as_millis(),
            });
        }
    }

    let mut report = audit_with_counts(rows, claims);
    if transform_applies {
        check_transform(&descriptor, &report.rows, &mut report.findings);
    }
    Ok(report)
}

/// Audits claims against precomputed counts (no new counting). Used for
/// synthetic data and by `audit` itself.
pub fn audit_with_counts(rows: Vec<AuditRow>, claims: &[Claim]) -> AuditReport {
    let mut fits = Vec::new();
    for kind in [DomainKind::Natural, DomainKind::SymmetricInteger] {
        let sweep_rows: Vec<SweepRow> = rows
            .iter()
            .filter(|r| r.domain == kind)
            .map(|r| SweepRow {
                n: r.n,
                count: r.count.clone(),
                method: r.method,
                elapsed_ms: r.elapsed_ms,
            })
            .collect();
        if let Ok(fit) = fit_exponent(&sweep_rows) {
            fits.push((kind, fit));
        }
    }

    let mut findings = Vec::new();
    for claim in claims {
        if claim.report.is_advisory() {
            findings.push(Finding {
                kind: FindingKind::Note,
                claim: claim.label.clone(),
                message: "claim has a failed precondition; recorded as advisory, not audited"
                    .into(),
            });
            continue;
        }
        match claim.report.direction {
            Direction::Lower => check_lower(claim, &rows, &mut findings),
            Direction::Upper => check_upper(claim, &fits, &mut findings),
        }
    }

    AuditReport { rows, fits, findings }
}

fn check_lower(claim: &Claim, rows: &[AuditRow], findings: &mut Vec<Finding>) {
    let Some(rule) = &claim.report.lower_rule else {
        findings.push(Finding {
            kind: FindingKind::Note,
            claim: claim.label.clone(),
            message: "lower claim carries no evaluable rule; nothing to check".into(),
        });
        return;
    };
    for row in rows.iter().filter(|r| r.domain == claim.domain) {
        match rule.evaluate(row.n) {
            Ok(bound) => {
                if row.count < bound {
                    findings.push(Finding {
                        kind: FindingKind::HardFailure,
                        claim: claim.label.clone(),
                        message: format!(
                            "exact count {} at N = {} falls below the claimed lower bound {}",
                            row.count, row.n, bound
                        ),
                    });
                }
            }
            Err(e) => findings.push(Finding {
                kind: FindingKind::Note,
                claim: claim.label.clone(),
                message: format!("lower rule failed to evaluate at N = {}: {e}", row.n),
            }),
        }
    }
}

fn check_upper(claim: &Claim, fits: &[(DomainKind, FitResult)], findings: &mut Vec<Finding>) {
    let Some((_, fit)) = fits.iter().find(|(d, _)| *d == claim.domain) else {
        findings.push(Finding {
            kind: FindingKind::Note,
            claim: claim.label.clone(),
            message: "no slope fit available (needs >= 3 positive counts); upper claim unchecked"
                .into(),
        });
        return;
    };
    let claimed = claim.report.exponent_f64();
    if fit.slope > claimed + SLOPE_TOLERANCE {
        findings.push(Finding {
            kind: FindingKind::Warning,
            claim: claim.label.clone(),
            message: format!(
                "empirically questionable: fitted slope {:.4} exceeds claimed exponent {:.4} by more than {SLOPE_TOLERANCE}",
                fit.slope, claimed
            ),
        });
    }
}

/// Compares the advisory natural-to-integer transform against the exact
/// integer count at each N and notes discrepancies.
fn check_transform(
    descriptor: &crate::equation::StructureDescriptor,
    rows: &[AuditRow],
    findings: &mut Vec<Finding>,
) {
    let naturals: Vec<&AuditRow> =
        rows.iter().filter(|r| r.domain == DomainKind::Natural).collect();
    for nat in naturals {
        let Some(int_row) = rows
            .iter()
            .find(|r| r.domain == DomainKind::SymmetricInteger && r.n == nat.n)
        else {
            continue;
        };
        let Ok(transformed) = natural_to_integer(descriptor, &nat.count) else {
            return;
        };
        if transformed.count != int_row.count {
            findings.push(Finding {
                kind: FindingKind::Note,
                claim: "natural-to-integer transform".into(),
                message: format!(
                    "discrepancy at N = {}: rule {:?} predicts {}, exact integer count is {}",
                    nat.n, transformed.rule, transformed.count, int_row.count
                ),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{rational_int, LowerRule, Regime};
    use crate::parse::parse_text;
    use num_traits::One;

    fn synthetic_rows(exponent: u32) -> Vec<AuditRow> {
        [10u64, 20, 40, 80, 160]
            .iter()
            .map(|&n| AuditRow {
                domain: DomainKind::Natural,
                n,
                count: BigInt::from(n).pow(exponent),
                method: CountMethod::Brute,
                elapsed_ms: 0,
            })
            .collect()
    }

    #[test]
    fn synthetic_n5_against_upper_4_warns() {
        let claim = Claim {
            label: "claimed N^4".into(),
            domain: DomainKind::Natural,
            report: BoundReport::upper(rational_int(4), true, Regime::Trivial),
        };
        let report = audit_with_counts(synthetic_rows(5), &[claim]);
        assert_eq!(report.warnings(), 1);
        assert!(!report.has_hard_failure());
    }

    #[test]
    fn matching_exponent_does_not_warn() {
        let claim = Claim {
            label: "claimed N^5".into(),
            domain: DomainKind::Natural,
            report: BoundReport::upper(rational_int(5), true, Regime::Trivial),
        };
        let report = audit_with_counts(synthetic_rows(5), &[claim]);
        assert_eq!(report.warnings(), 0);
    }

    #[test]
    fn lower_violation_is_hard_failure() {
        let claim = Claim {
            label: "impossible lower".into(),
            domain: DomainKind::Natural,
            report: BoundReport::lower(
                rational_int(0),
                Regime::Composition,
                LowerRule::Constant(BigInt::from(10_000_000i64)),
            ),
        };
        let report = audit_with_counts(synthetic_rows(2), &[claim]);
        assert!(report.has_hard_failure());
    }

    #[test]
    fn three_cubes_lower_passes() {
        let eq = parse_text("x1^3 + x2^3 + x3^3 - 1 = 0").unwrap();
        let claim = Claim {
            label: "2N+1 scaled solutions".into(),
            domain: DomainKind::SymmetricInteger,
            report: BoundReport::lower(
                rational_int(1),
                Regime::ThueScaling,
                LowerRule::ScaledSolution { max_coord: BigInt::one() },
            ),
        };
        let report = audit(&eq, &[2, 10, 20], &[claim], &Budget::default()).unwrap();
        assert!(!report.has_hard_failure());
        // N = 2 count is the brute-force 12
        let row = report
            .rows
            .iter()
            .find(|r| r.n == 2 && r.domain == DomainKind::SymmetricInteger)
            .unwrap();
        assert_eq!(row.count, BigInt::from(12));
    }

    #[test]
    fn even_doubling_discrepancy_note() {
        // x^2 - y^2 = 0 at N = 3: naturals 3, doubling says 6, exact
        // integer count is 13 (x = ±y including zero)
        let eq = parse_text("x^2 - y^2 = 0").unwrap();
        let report = audit(&eq, &[3], &[], &Budget::default()).unwrap();
        let note = report
            .findings
            .iter()
            .find(|f| f.claim.contains("transform"))
            .expect("discrepancy note");
        assert_eq!(note.kind, FindingKind::Note);
        assert!(note.message.contains("predicts 6"), "{}", note.message);
        assert!(note.message.contains("13"), "{}", note.message);
    }

    #[test]
    fn counting_refusals_propagate() {
        let eq = parse_text("x^2 - y^2 = 0").unwrap();
        let tiny = Budget { max_evaluations: 3, max_map_entries: 2 };
        assert!(audit(&eq, &[100], &[], &tiny).is_err());
    }
}
