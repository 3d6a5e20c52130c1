//! `dioph` — counts, bounds, families, sweeps, and audits for diagonal
//! Diophantine equations over hypercubes.
//!
//! Exit codes: 0 success; 1 usage or parse error; 2 budget refusal;
//! 3 audit hard failure (an exact count fell below a claimed lower bound).
//!
//! Budgets come from `DIOPH_EVAL_BUDGET` (point evaluations) and
//! `DIOPH_MAP_BUDGET` (partial-sum map entries).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use dioph_core::{
    analyze, fit_exponent, from_json, parse_text, pell_solutions, rows_to_csv,
    rows_to_json, scale_solution, sweep, to_json, Assignment, BoundReport, Budget, Claim,
    CountError, CountMethod, DiagonalEquation, Domain, DomainKind, FullReport, LowerRule,
    Regime, SolutionFamily,
};

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_AUDIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dioph",
    version,
    about = "Exact solution counts, exponent bounds, and solution families \
             for diagonal Diophantine equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EqInput {
    /// Equation file in the JSON schema
    #[arg(long, value_name = "FILE")]
    eq: Option<PathBuf>,
    /// Equation text, e.g. "x1^3 + x2^3 + x3^3 - 1 = 0"
    #[arg(long, value_name = "STR")]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Natural,
    Integer,
}

impl From<DomainArg> for DomainKind {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Natural => DomainKind::Natural,
            DomainArg::Integer => DomainKind::SymmetricInteger,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Mitm,
    Conv,
}

impl From<MethodArg> for Option<CountMethod> {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => None,
            MethodArg::Brute => Some(CountMethod::Brute),
            MethodArg::Mitm => Some(CountMethod::Mitm),
            MethodArg::Conv => Some(CountMethod::Convolution),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Parametric,
    Pell,
    Scaling,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an equation; print the canonical form (or its JSON)
    Parse {
        #[command(flatten)]
        input: EqInput,
        /// Emit the canonical JSON document instead of the summary
        #[arg(long)]
        json: bool,
    },
    /// Exact solution count in one box
    Count {
        #[command(flatten)]
        input: EqInput,
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Structural analysis: applicable bounds and annotations
    Bound {
        #[command(flatten)]
        input: EqInput,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate a verified solution family
    Generate {
        #[command(flatten)]
        input: EqInput,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Pell parameter D (inferred from the equation when omitted)
        #[arg(long = "pell-D")]
        pell_d: Option<String>,
        /// Fundamental Pell solution as "X,Y" (searched when omitted)
        #[arg(long = "pell-fund")]
        pell_fund: Option<String>,
        /// Base solution for scaling as comma-separated values in canonical
        /// variable order (searched when omitted)
        #[arg(long)]
        base: Option<String>,
        /// Maximum number of members to emit
        #[arg(long, default_value = "10")]
        limit: usize,
        /// Emit only members whose coordinates fit in the box of side N
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Count over a list of box sides and fit the growth exponent
    Sweep {
        #[command(flatten)]
        input: EqInput,
        #[arg(long, value_enum)]
        domain: DomainArg,
        /// Comma-separated strictly increasing box sides, e.g. 10,20,40
        #[arg(long = "Ns")]
        ns: String,
        /// CSV output path (header N,count,method,elapsed_ms)
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON output path for the same rows
        #[arg(long = "json-out")]
        json_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Audit derived (and user-supplied) bound claims against exact counts
    Audit {
        #[command(flatten)]
        input: EqInput,
        #[arg(long = "Ns")]
        ns: String,
        /// Extra lower-bound claims: a constant count that must hold at
        /// every N (repeatable)
        #[arg(long = "claim-lower-const")]
        claim_lower_const: Vec<String>,
        /// Extra upper-bound claims: an exponent like "4" or "33/4"
        /// (repeatable)
        #[arg(long = "claim-upper")]
        claim_upper: Vec<String>,
        /// Domain for user-supplied claims
        #[arg(long, value_enum, default_value = "natural")]
        claim_domain: DomainArg,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendering but pin the spec'd usage exit code,
            // except for --help/--version which are successes
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let budget = Budget::from_env();
    match run(cli, &budget) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::EvaluationBudget { .. } | CountError::MapBudget { .. } => {
                CliError::Budget(e.to_string())
            }
            CountError::TooFewVariables(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn load_equation(input: &EqInput) -> Result<DiagonalEquation, CliError> {
    match (&input.eq, &input.expr) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            from_json(&text).map_err(|d| CliError::Usage(format!("{}: {d}", path.display())))
        }
        (None, Some(expr)) => {
            parse_text(expr).map_err(|d| CliError::Usage(format!("parse error {d}")))
        }
        _ => Err(CliError::Usage("exactly one of --eq FILE or --expr STR is required".into())),
    }
}

fn parse_ns(text: &str) -> Result<Vec<u64>, CliError> {
    let ns: Result<Vec<u64>, _> =
        text.split(',').map(|p| p.trim().parse::<u64>()).collect();
    let ns = ns.map_err(|e| CliError::Usage(format!("bad --Ns list: {e}")))?;
    if ns.is_empty() {
        return Err(CliError::Usage("--Ns list is empty".into()));
    }
    Ok(ns)
}

fn parse_bigint(text: &str, what: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(text.trim())
        .map_err(|_| CliError::Usage(format!("bad {what}: `{text}` is not an integer")))
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let parts: Vec<&str> = text.split('/').collect();
    match parts.as_slice() {
        [n] => Ok(BigRational::from_integer(parse_bigint(n, "exponent")?)),
        [n, d] => Ok(BigRational::new(
            parse_bigint(n, "exponent numerator")?,
            parse_bigint(d, "exponent denominator")?,
        )),
        _ => Err(CliError::Usage(format!("bad exponent `{text}`; use P or P/Q"))),
    }
}

fn run(cli: Cli, budget: &Budget) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Parse { input, json } => {
            let eq = load_equation(&input)?;
            if json {
                println!("{}", to_json(&eq));
            } else {
                println!("canonical: {eq}");
                let d = eq.classify();
                let blocks: Vec<String> = d
                    .blocks
                    .iter()
                    .map(|b| format!("degree {}: {} terms", b.degree, b.term_count))
                    .collect();
                println!("blocks:    {}", blocks.join("; "));
                println!("constant:  {}", eq.constant());
                println!("variables: {}", eq.variables().join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Count { input, domain, n, method, json } => {
            let eq = load_equation(&input)?;
            let domain = Domain { kind: domain.into(), bound: n };
            let result = dioph_core::count_with_method(&eq, &domain, method.into(), budget)?;
            if json {
                let doc = serde_json::json!({
                    "equation": eq.to_string(),
                    "domain": result.domain.kind,
                    "N": n,
                    "count": result.count.to_string(),
                    "method": result.method.to_string(),
                    "elapsed_ms": result.elapsed.as_millis(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                println!(
                    "count = {} ({} in {} ms over {})",
                    result.count,
                    result.method,
                    result.elapsed.as_millis(),
                    domain
                );
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Bound { input, json } => {
            let eq = load_equation(&input)?;
            let analysis = analyze(&eq);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&analysis_json(&analysis)).expect("json")
                );
            } else {
                print_analysis(&analysis);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Generate { input, family, pell_d, pell_fund, base, limit, n, json } => {
            let eq = load_equation(&input)?;
            let fam = build_family(&eq, family, pell_d, pell_fund, base)?;
            let members = match n {
                Some(bound) => fam.members_within(bound),
                None => fam.first_members(limit),
            }
            .map_err(|e| CliError::Usage(format!("family enumeration failed: {e}")))?;
            let members: Vec<Assignment> = members.into_iter().take(limit).collect();
            if json {
                let doc = serde_json::json!({
                    "equation": fam.equation().to_string(),
                    "family": fam.kind().to_string(),
                    "verified": fam.verified,
                    "members": members.iter().map(assignment_json).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                println!("family: {} over `{}` (every member verified)", fam.kind(), fam.equation());
                for m in &members {
                    let parts: Vec<String> =
                        m.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    println!("  {}", parts.join(", "));
                }
                println!("{} members", members.len());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { input, domain, ns, out, json_out, method } => {
            let eq = load_equation(&input)?;
            let ns = parse_ns(&ns)?;
            let outcome = sweep(&eq, domain.into(), &ns, method.into(), budget)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let csv = rows_to_csv(&outcome.rows);
            if let Some(path) = &out {
                std::fs::write(path, &csv)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            } else {
                print!("{csv}");
            }
            if let Some(path) = &json_out {
                let doc = serde_json::to_string_pretty(&rows_to_json(&outcome.rows))
                    .expect("json");
                std::fs::write(path, doc)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            match fit_exponent(&outcome.rows) {
                Ok(fit) => eprintln!(
                    "fit: slope {:.4}, intercept {:.4}, residual {:.3e} over {} points",
                    fit.slope, fit.intercept, fit.residual, fit.points
                ),
                Err(e) => eprintln!("fit: {e}"),
            }
            for (n, reason) in &outcome.refusals {
                eprintln!("refused N = {n}: {reason}");
            }
            if outcome.refusals.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_BUDGET))
            }
        }

        Command::Audit { input, ns, claim_lower_const, claim_upper, claim_domain, json } => {
            let eq = load_equation(&input)?;
            let ns = parse_ns(&ns)?;
            let mut extra: Vec<Claim> = Vec::new();
            for text in &claim_lower_const {
                let value = parse_bigint(text, "--claim-lower-const")?;
                extra.push(Claim {
                    label: format!("user lower bound {value}"),
                    domain: claim_domain.into(),
                    report: BoundReport::lower(
                        BigRational::from_integer(BigInt::from(0)),
                        Regime::Trivial,
                        LowerRule::Constant(value),
                    ),
                });
            }
            for text in &claim_upper {
                let exponent = parse_rational(text)?;
                extra.push(Claim {
                    label: format!("user upper exponent {text}"),
                    domain: claim_domain.into(),
                    report: BoundReport::upper(exponent, true, Regime::Trivial),
                });
            }
            let report = dioph_core::build_report(&eq, &ns, &extra, budget)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report_json(&report)).expect("json")
                );
            } else {
                print_report(&report);
            }
            if report.audit.has_hard_failure() {
                Ok(ExitCode::from(EXIT_AUDIT_FAILURE))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn build_family(
    eq: &DiagonalEquation,
    family: FamilyArg,
    pell_d: Option<String>,
    pell_fund: Option<String>,
    base: Option<String>,
) -> Result<SolutionFamily, CliError> {
    match family {
        FamilyArg::Parametric => dioph_core::parametric_family(eq)
            .map_err(|e| CliError::Usage(format!("parametric family: {e}"))),
        FamilyArg::Pell => {
            let d = match pell_d {
                Some(text) => parse_bigint(&text, "--pell-D")?,
                None => infer_pell_d(eq).ok_or_else(|| {
                    CliError::Usage(
                        "equation is not of the shape x^2 - D*y^2 - 1 = 0; pass --pell-D".into(),
                    )
                })?,
            };
            let fund = match pell_fund {
                Some(text) => {
                    let parts: Vec<&str> = text.split(',').collect();
                    if parts.len() != 2 {
                        return Err(CliError::Usage("--pell-fund wants \"X,Y\"".into()));
                    }
                    (parse_bigint(parts[0], "fundamental x")?, parse_bigint(parts[1], "fundamental y")?)
                }
                None => dioph_core::pell_fundamental(&d).ok_or_else(|| {
                    CliError::Usage(format!(
                        "no fundamental solution found for D = {d} within the search cap; pass --pell-fund"
                    ))
                })?,
            };
            pell_solutions(&d, (&fund.0, &fund.1))
                .map_err(|e| CliError::Usage(format!("pell family: {e}")))
        }
        FamilyArg::Scaling => {
            let base = match base {
                Some(text) => {
                    let vars = eq.variables();
                    let values: Vec<&str> = text.split(',').collect();
                    if values.len() != vars.len() {
                        return Err(CliError::Usage(format!(
                            "--base wants {} comma-separated values for ({})",
                            vars.len(),
                            vars.join(", ")
                        )));
                    }
                    let mut m: Assignment = BTreeMap::new();
                    for (v, t) in vars.iter().zip(values) {
                        m.insert(v.to_string(), parse_bigint(t, "base coordinate")?);
                    }
                    m
                }
                None => {
                    dioph_core::find_scalable_solution(eq)
                        .ok_or_else(|| {
                            CliError::Usage(
                                "no small scalable solution found; pass --base".into(),
                            )
                        })?
                        .0
                }
            };
            scale_solution(eq, &base)
                .map_err(|e| CliError::Usage(format!("scaling family: {e}")))
        }
    }
}

fn infer_pell_d(eq: &DiagonalEquation) -> Option<BigInt> {
    use num_traits::{One, Signed};
    if eq.constant() != &BigInt::from(-1) || eq.terms().len() != 2 {
        return None;
    }
    let (a, b) = (&eq.terms()[0], &eq.terms()[1]);
    if a.exp != 2 || b.exp != 2 {
        return None;
    }
    let (_plus, minus) = if a.coeff.is_one() && b.coeff.is_negative() {
        (a, b)
    } else if b.coeff.is_one() && a.coeff.is_negative() {
        (b, a)
    } else {
        return None;
    };
    Some(-minus.coeff.clone())
}

fn assignment_json(a: &Assignment) -> serde_json::Value {
    serde_json::Value::Object(
        a.iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.to_string())))
            .collect(),
    )
}

fn print_bound_report(report: &BoundReport, indent: &str) {
    let direction = match report.direction {
        dioph_core::Direction::Upper => "upper",
        dioph_core::Direction::Lower => "lower",
    };
    let eps = if report.has_epsilon { " + eps" } else { "" };
    let advisory = if report.is_advisory() { " [ADVISORY: failed precondition]" } else { "" };
    println!(
        "{indent}{direction} N^{}{eps}  [{}]{advisory}",
        report.exponent_text(),
        report.regime
    );
    for p in &report.preconditions {
        println!("{indent}  {} {}", if p.passed { "ok " } else { "FAIL" }, p.description);
    }
    for note in &report.notes {
        println!("{indent}  note: {note}");
    }
    if let Some(rule) = &report.lower_rule {
        println!("{indent}  witness: {}", rule.describe());
    }
}

fn print_analysis(analysis: &dioph_core::Analysis) {
    println!("equation: {}", analysis.equation);
    let d = &analysis.descriptor;
    let blocks: Vec<String> = d
        .blocks
        .iter()
        .map(|b| {
            format!(
                "degree {} x{} ({}+ {}-)",
                b.degree, b.term_count, b.positive_terms, b.negative_terms
            )
        })
        .collect();
    println!(
        "structure: {}; {}; {}",
        blocks.join(", "),
        if d.homogeneous { "homogeneous" } else { "inhomogeneous" },
        if d.all_exponents_even { "all exponents even" } else { "mixed parity" }
    );
    println!();
    if analysis.claims.is_empty() {
        println!("no derived bound claims for this shape");
    }
    for claim in &analysis.claims {
        println!("[{}] ({} domain)", claim.label, claim.domain);
        print_bound_report(&claim.report, "  ");
    }
    if let Some(md) = &analysis.mixed_degree {
        println!(
            "mixed-degree ordering: best {:?}; s-descending recommendation {}",
            md.best_ordering,
            if md.recommended_attains { "attains the minimum" } else { "is not optimal" }
        );
        for b in &md.blocks {
            println!(
                "  block degree {} ({} pairs): moment {}, weight 1/2^{}, exponent {}",
                b.degree,
                b.pairs,
                b.moment,
                b.weight_log2,
                b.report.exponent_text()
            );
        }
    }
    if let Some(plan) = &analysis.composition {
        println!("composition factors:");
        for f in &plan.factors {
            println!("  [{}] {} -> {}", f.variables.join(", "), f.description, f.rule.describe());
        }
    }
    if let Some(s) = &analysis.solvability {
        println!(
            "solvability (k = {}, s = {}): {}; binding condition {}",
            s.k,
            s.s,
            if s.guaranteed { "guaranteed solvable" } else { "not guaranteed" },
            s.binding_condition
        );
        for c in &s.conditions {
            println!("  {} {}", if c.passed { "ok " } else { "FAIL" }, c.description);
        }
        for a in &s.annotations {
            println!("  note: {a}");
        }
    }
    for a in &analysis.annotations {
        println!("annotation: {a}");
    }
}

fn analysis_json(analysis: &dioph_core::Analysis) -> serde_json::Value {
    serde_json::json!({
        "equation": analysis.equation.to_string(),
        "structure": analysis.descriptor,
        "claims": analysis.claims,
        "annotations": analysis.annotations,
        "solvability": analysis.solvability,
        "mixed_degree": analysis.mixed_degree,
        "composition": analysis.composition.as_ref().map(|p| {
            p.factors
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "description": f.description,
                        "variables": f.variables,
                        "rule": f.rule.describe(),
                    })
                })
                .collect::<Vec<_>>()
        }),
    })
}

fn report_json(report: &FullReport) -> serde_json::Value {
    serde_json::json!({
        "analysis": analysis_json(&report.analysis),
        "audit": report.audit,
        "slope_tolerance": dioph_core::SLOPE_TOLERANCE,
    })
}

fn print_report(report: &FullReport) {
    print_analysis(&report.analysis);
    println!();
    println!(
        "audit rows (slope tolerance {} absorbs eps and log factors):",
        dioph_core::SLOPE_TOLERANCE
    );
    println!("{:<10} {:>12} {:>24} {:>12} {:>10}", "domain", "N", "count", "method", "ms");
    for row in &report.audit.rows {
        println!(
            "{:<10} {:>12} {:>24} {:>12} {:>10}",
            row.domain.to_string(),
            row.n,
            row.count.to_string(),
            row.method.to_string(),
            row.elapsed_ms
        );
    }
    for (domain, fit) in &report.audit.fits {
        println!(
            "fit [{domain}]: slope {:.4}, intercept {:.4}, residual {:.3e} ({} points)",
            fit.slope, fit.intercept, fit.residual, fit.points
        );
    }
    if report.audit.findings.is_empty() {
        println!("findings: none — all checked claims hold at these N");
    }
    for f in &report.audit.findings {
        let tag = match f.kind {
            dioph_core::FindingKind::HardFailure => "HARD FAILURE",
            dioph_core::FindingKind::Warning => "warning",
            dioph_core::FindingKind::Note => "note",
        };
        println!("{tag}: [{}] {}", f.claim, f.message);
    }
}
