//! Natural-count to integer-count transforms. Both rules ignore zero
//! coordinates and independent per-variable sign flips, so the result is
//! always advisory: exact integer counting is the authoritative number.

use num_bigint::BigInt;

use super::BoundError;
use crate::equation::StructureDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TransformRule {
    /// all exponents even: integer count taken as 2 * natural count
    EvenDoubling,
    /// odd-degree unit-coefficient paired form: integer count taken equal
    /// to the natural count of the symmetric form
    OddPairedIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTransform {
    pub count: BigInt,
    pub rule: TransformRule,
    /// always true; the transform is never authoritative
    pub advisory: bool,
    pub caveat: String,
}

/// Applies the doubling rule (all exponents even) or the identity rule
/// (odd-degree paired ±1 form) to a natural count. Refuses when the
/// structure matches neither pattern.
pub fn natural_to_integer(
    descriptor: &StructureDescriptor,
    natural_count: &BigInt,
) -> Result<CountTransform, BoundError> {
    let caveat = "advisory: ignores zero coordinates and per-variable sign flips; \
                  exact integer counting (count_mitm) is authoritative"
        .to_string();
    if descriptor.all_exponents_even {
        Ok(CountTransform {
            count: natural_count * 2,
            rule: TransformRule::EvenDoubling,
            advisory: true,
            caveat,
        })
    } else if descriptor.odd_paired_unit_form() {
        Ok(CountTransform {
            count: natural_count.clone(),
            rule: TransformRule::OddPairedIdentity,
            advisory: true,
            caveat,
        })
    } else {
        Err(BoundError::TransformMismatch(
            "needs all exponents even, or all blocks odd-degree with unit coefficients and even term counts"
                .into(),
        ))
    }
}
