//! Solvability check for the homogeneous degree-k form with s terms.

use num_bigint::BigInt;
use num_traits::One;

use super::Precondition;

/// Outcome of checking the solvability theorem's hypotheses for
/// `a1 x1^k + ... + as xs^k = 0`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SolvabilityReport {
    pub k: u32,
    pub s: u64,
    pub signs_mixed: bool,
    pub guaranteed: bool,
    /// the hypothesis that decides at this k
    pub binding_condition: String,
    pub conditions: Vec<Precondition>,
    /// literal thresholds and caveats recorded from the source, not derived
    pub annotations: Vec<String>,
}

/// Checks `s >= 2^k + 1` and `s >= 4k^2 - 4k + 1` (the latter is implied by
/// the former once k >= 8), plus mixed signs for even k. The source's
/// literal k = 2 / k = 3 thresholds are recorded as annotations because
/// they do not follow from its printed inequalities.
pub fn solvability_check(k: u32, s: u64, signs_mixed: bool) -> SolvabilityReport {
    let power_threshold = (BigInt::one() << k) + 1;
    let quad_threshold = BigInt::from(4) * BigInt::from(k) * BigInt::from(k)
        - BigInt::from(4) * BigInt::from(k)
        + 1;
    let s_big = BigInt::from(s);

    let mut conditions = vec![
        Precondition::new(format!("k >= 2 (k = {k})"), k >= 2),
        Precondition::new(
            format!("s >= 2^k + 1 = {power_threshold} (s = {s})"),
            s_big >= power_threshold,
        ),
        Precondition::new(
            format!("s >= 4k^2 - 4k + 1 = {quad_threshold} (s = {s})"),
            s_big >= quad_threshold,
        ),
    ];
    if k % 2 == 0 {
        conditions.push(Precondition::new(
            "even k: coefficients must not all share one sign",
            signs_mixed,
        ));
    }
    let guaranteed = conditions.iter().all(|c| c.passed);

    let binding_condition = if power_threshold >= quad_threshold {
        format!("s >= 2^k + 1 = {power_threshold}")
    } else {
        format!("s >= 4k^2 - 4k + 1 = {quad_threshold}")
    };

    let mut annotations = vec![
        "Vinogradov's s0 has no computable definition here; the check uses min(s0, 2^k+1) <= 2^k+1".to_string(),
        "the source states both 4k^2 - 4k + 1 and 4k^2 - k + 1; the check uses 4k^2 - 4k + 1".to_string(),
    ];
    if k >= 8 {
        annotations.push(
            "for k >= 8 the condition s >= 2^k + 1 already implies the quadratic one".into(),
        );
    }
    if k == 2 {
        annotations
            .push("source records the literal threshold s >= 15 for k = 2".into());
    }
    if k == 3 {
        annotations
            .push("source records the literal threshold s >= 34 for k = 3".into());
    }

    SolvabilityReport { k, s, signs_mixed, guaranteed, binding_condition, conditions, annotations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_annotations_for_small_k() {
        let r = solvability_check(2, 20, true);
        assert!(r.annotations.iter().any(|a| a.contains("s >= 15")));
        let r = solvability_check(3, 40, false);
        assert!(r.annotations.iter().any(|a| a.contains("s >= 34")));
    }

    #[test]
    fn k8_power_condition_suffices() {
        // 2^8 + 1 = 257 >= 225 = 4k^2 - 4k + 1
        let r = solvability_check(8, 257, true);
        assert!(r.guaranteed);
        assert!(r.binding_condition.contains("257"));
        let r = solvability_check(8, 256, true);
        assert!(!r.guaranteed);
    }

    #[test]
    fn even_k_requires_mixed_signs() {
        let r = solvability_check(2, 1000, false);
        assert!(!r.guaranteed);
        let r = solvability_check(2, 1000, true);
        assert!(r.guaranteed);
        // odd k does not need the sign condition
        let r = solvability_check(3, 1000, false);
        assert!(r.guaranteed);
    }

    #[test]
    fn monotone_in_s() {
        for k in 2..=10u32 {
            let mut prev = false;
            for s in 1..=2100u64 {
                let g = solvability_check(k, s, true).guaranteed;
                assert!(!prev || g, "k={k}: lost guarantee at s={s}");
                prev = g;
            }
        }
    }
}
