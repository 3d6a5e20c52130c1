//! N-sweeps of exact counts and growth-exponent fitting.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::count::{count_with_method, Budget, CountMethod};
use crate::equation::{DiagonalEquation, Domain, DomainKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error("Ns must be strictly increasing")]
    UnsortedNs,
    #[error("slope fit needs at least 3 rows with positive counts, got {0}")]
    TooFewPoints(usize),
}

/// One sweep measurement. Counts stay exact; they render as decimal strings
/// in CSV and JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: u64,
    pub count: BigInt,
    pub method: CountMethod,
    pub elapsed_ms: u128,
}

/// Sweep result: successful rows sorted by N, plus per-N refusals.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub refusals: Vec<(u64, String)>,
}

/// Counts the equation at each N with the fastest licensed method (or the
/// forced one). Budget refusals are recorded per row and the sweep
/// continues.
pub fn sweep(
    eq: &DiagonalEquation,
    kind: DomainKind,
    ns: &[u64],
    method: Option<CountMethod>,
    budget: &Budget,
) -> Result<SweepOutcome, SweepError> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SweepError::UnsortedNs);
    }
    let mut rows = Vec::new();
    let mut refusals = Vec::new();
    for &n in ns {
        let domain = Domain { kind, bound: n };
        match count_with_method(eq, &domain, method, budget) {
            Ok(c) => rows.push(SweepRow {
                n,
                count: c.count,
                method: c.method,
                elapsed_ms: c.elapsed.as_millis(),
            }),
            Err(e) => refusals.push((n, e.to_string())),
        }
    }
    Ok(SweepOutcome { rows, refusals })
}

/// Least-squares growth fit of ln(count) against ln(N).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// sum of squared residuals
    pub residual: f64,
    pub points: usize,
}

/// Ordinary least squares of ln(count) on ln(N); rows with non-positive
/// counts are skipped, and at least 3 usable rows are required.
pub fn fit_exponent(rows: &[SweepRow]) -> Result<FitResult, SweepError> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.count.is_positive())
        .map(|r| {
            let count = r.count.to_f64().unwrap_or(f64::MAX);
            ((r.n as f64).ln(), count.ln())
        })
        .collect();
    if points.len() < 3 {
        return Err(SweepError::TooFewPoints(points.len()));
    }
    let (slope, intercept, residual) = least_squares(&points);
    Ok(FitResult { slope, intercept, residual, points: points.len() })
}

/// OLS fit y = slope*x + intercept; returns (slope, intercept, sum of
/// squared residuals). Callers guarantee at least two distinct x values.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    (slope, intercept, residual)
}

/// CSV with header `N,count,method,elapsed_ms`, LF line endings, counts as
/// decimal strings.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("N,count,method,elapsed_ms\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.count, r.method, r.elapsed_ms));
    }
    out
}

/// JSON rows with counts as decimal strings.
pub fn rows_to_json(rows: &[SweepRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "N": r.n,
                    "count": r.count.to_string(),
                    "method": r.method.to_string(),
                    "elapsed_ms": r.elapsed_ms,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_text;

    #[test]
    fn sweep_explicit_variable_square() {
        // x1 = x2^2: counts are floor(sqrt(N))
        let eq = parse_text("x1 - x2^2 = 0").unwrap();
        let out = sweep(
            &eq,
            DomainKind::Natural,
            &[100, 10_000, 1_000_000],
            None,
            &Budget::default(),
        )
        .unwrap();
        let counts: Vec<u64> = out
            .rows
            .iter()
            .map(|r| u64::try_from(&r.count).unwrap())
            .collect();
        assert_eq!(counts, vec![10, 100, 1000]);
        assert!(out.refusals.is_empty());
    }

    #[test]
    fn sweep_requires_increasing_ns() {
        let eq = parse_text("x - y = 0").unwrap();
        assert!(matches!(
            sweep(&eq, DomainKind::Natural, &[10, 10], None, &Budget::default()),
            Err(SweepError::UnsortedNs)
        ));
    }

    #[test]
    fn sweep_empty_ns_gives_empty_table() {
        let eq = parse_text("x - y = 0").unwrap();
        let out = sweep(&eq, DomainKind::Natural, &[], None, &Budget::default()).unwrap();
        assert!(out.rows.is_empty());
    }

    #[test]
    fn sweep_records_refusals_and_continues() {
        let eq = parse_text("x^2 - y^2 = 0").unwrap();
        let tiny = Budget { max_evaluations: 150, max_map_entries: 4 };
        let out = sweep(&eq, DomainKind::Natural, &[2, 1000], None, &tiny).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].n, 2);
        assert_eq!(out.refusals.len(), 1);
        assert_eq!(out.refusals[0].0, 1000);
    }

    #[test]
    fn fit_exact_power_law() {
        let rows: Vec<SweepRow> = [10u64, 20, 40, 80, 160]
            .iter()
            .map(|&n| SweepRow {
                n,
                count: BigInt::from(n * n),
                method: CountMethod::Brute,
                elapsed_ms: 0,
            })
            .collect();
        let fit = fit_exponent(&rows).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9, "slope = {}", fit.slope);
        assert!(fit.residual < 1e-18);
    }

    #[test]
    fn fit_refuses_two_points()  {
        let rows: Vec<SweepRow> = [10u64, 20]
            .iter()
            .map(|&n| SweepRow {
                n,
                count: BigInt::from(n),
                method: CountMethod::Brute,
                elapsed_ms: 0,
            })
            .collect();
        assert_eq!(fit_exponent(&rows), Err(SweepError::TooFewPoints(2)));
    }

    #[test]
    fn csv_schema() {
        let rows = vec![SweepRow {
            n: 10,
            count: BigInt::from(2).pow(70),
            method: CountMethod::Mitm,
            elapsed_ms: 3,
        }];
        let csv = rows_to_csv(&rows);
        assert_eq!(
            csv,
            "N,count,method,elapsed_ms\n10,1180591620717411303424,mitm,3\n"
        );
    }
}
