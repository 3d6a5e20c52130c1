//! Symbolic exponent formulas in exact rational arithmetic, evaluable lower
//! bounds, and the empirical audit that compares claims against exact counts.

mod audit;
mod exponents;
mod lower;
mod solvability;
mod transform;

pub use audit::{
    audit, audit_with_counts, AuditReport, AuditRow, Claim, Finding, FindingKind,
    SLOPE_TOLERANCE,
};
pub use exponents::{
    binary_split_exponent, even_moment_exponent, explicit_var_upper, hua_exponent,
    mixed_degree_upper, sphere_estimate, BlockContribution, MixedDegreeOutcome,
};
pub use lower::{
    compose_lower, log_family_lower, thue_scaling_lower, CompositionFactor, CompositionPlan,
    LowerRule,
};
pub use solvability::{solvability_check, SolvabilityReport};
pub use transform::{natural_to_integer, CountTransform, TransformRule};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("composition needs at least one factor")]
    EmptyFactors,
    #[error("max coordinate must be a positive integer, got {0}")]
    NonPositiveMaxCoord(BigInt),
    #[error("logarithmic family needs t >= 2, got {0}")]
    BadLogBase(BigInt),
    #[error("logarithmic family needs a1 >= 1, got {0}")]
    BadLogScale(BigInt),
    #[error("ordering sweep over {0} blocks exceeds the factorial budget (max 8)")]
    TooManyBlocks(usize),
    #[error("needs at least one block")]
    NoBlocks,
    #[error("structure matches neither transform pattern: {0}")]
    TransformMismatch(String),
    #[error("lower rule evaluation failed: {0}")]
    RuleEvaluation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Upper,
    Lower,
}

/// Provenance tag naming the formula a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Hua,
    LargeS,
    BinarySplit,
    Trivial,
    MixedDegree,
    Composition,
    ThueScaling,
    LogFamily,
    ExplicitVar,
    Sphere,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Regime::Hua => "Hua",
            Regime::LargeS => "LargeS",
            Regime::BinarySplit => "BinarySplit",
            Regime::Trivial => "Trivial",
            Regime::MixedDegree => "MixedDegree",
            Regime::Composition => "Composition",
            Regime::ThueScaling => "ThueScaling",
            Regime::LogFamily => "LogFamily",
            Regime::ExplicitVar => "ExplicitVar",
            Regime::Sphere => "Sphere",
        };
        write!(f, "{name}")
    }
}

/// A named validity condition with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precondition {
    pub description: String,
    pub passed: bool,
}

impl Precondition {
    pub fn new(description: impl Into<String>, passed: bool) -> Self {
        Precondition { description: description.into(), passed }
    }
}

/// An exponent claim with regime provenance and checked preconditions.
/// A report with any failed precondition is advisory, never authoritative.
/// Lower-direction reports may carry an exactly evaluable [`LowerRule`]
/// so the audit can check them at finite N.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub direction: Direction,
    /// exact rational exponent of N
    pub exponent: BigRational,
    /// carries the source's ε/ξ/ζ: an unspecified arbitrarily small power
    pub has_epsilon: bool,
    pub regime: Regime,
    pub preconditions: Vec<Precondition>,
    pub notes: Vec<String>,
    pub lower_rule: Option<LowerRule>,
}

impl BoundReport {
    pub fn upper(exponent: BigRational, has_epsilon: bool, regime: Regime) -> Self {
        BoundReport {
            direction: Direction::Upper,
            exponent,
            has_epsilon,
            regime,
            preconditions: Vec::new(),
            notes: Vec::new(),
            lower_rule: None,
        }
    }

    pub fn lower(exponent: BigRational, regime: Regime, rule: LowerRule) -> Self {
        BoundReport {
            direction: Direction::Lower,
            exponent,
            has_epsilon: false,
            regime,
            preconditions: Vec::new(),
            notes: Vec::new(),
            lower_rule: Some(rule),
        }
    }

    pub fn with_precondition(mut self, description: impl Into<String>, passed: bool) -> Self {
        self.preconditions.push(Precondition::new(description, passed));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Any failed precondition makes the report advisory.
    pub fn is_advisory(&self) -> bool {
        self.preconditions.iter().any(|p| !p.passed)
    }

    pub fn exponent_f64(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::NAN)
    }

    /// `p/q` or plain integer text for whole exponents.
    pub fn exponent_text(&self) -> String {
        rational_text(&self.exponent)
    }
}

pub(crate) fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rational_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundReport", 8)?;
        s.serialize_field("direction", &self.direction)?;
        s.serialize_field("exponent", &self.exponent_text())?;
        s.serialize_field("exponent_f64", &self.exponent_f64())?;
        s.serialize_field("has_epsilon", &self.has_epsilon)?;
        s.serialize_field("regime", &self.regime)?;
        s.serialize_field("preconditions", &self.preconditions)?;
        s.serialize_field("notes", &self.notes)?;
        s.serialize_field(
            "lower_rule",
            &self.lower_rule.as_ref().map(|r| r.describe()),
        )?;
        s.end()
    }
}
