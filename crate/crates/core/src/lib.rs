//! Exact counting, symbolic exponent bounds, and verified solution families
//! for diagonal Diophantine equations over hypercubes.

pub mod bounds;
pub mod count;
pub mod families;
pub mod equation;
pub mod parse;
pub mod report;
pub mod sweep;

pub use bounds::{
    audit, audit_with_counts, binary_split_exponent, compose_lower, even_moment_exponent,
    explicit_var_upper, hua_exponent, log_family_lower, mixed_degree_upper, natural_to_integer,
    solvability_check, sphere_estimate, thue_scaling_lower, AuditReport, AuditRow, BoundError,
    BoundReport, Claim, CompositionFactor, CompositionPlan, CountTransform, Direction, Finding,
    FindingKind, LowerRule, MixedDegreeOutcome, Precondition, Regime, SolvabilityReport,
    TransformRule, SLOPE_TOLERANCE,
};
pub use count::{
    count_auto, count_bruteforce, count_convolution, count_mitm, count_with_method,
    perm_matching_count, Budget, CountError, CountMethod, RepresentationFunction, SolutionCount,
    EVAL_BUDGET_ENV, MAP_BUDGET_ENV,
};
pub use equation::{
    assignment_of, Assignment, DegreeBlock, DiagonalEquation, Domain, DomainKind, EquationError,
    StructureDescriptor, Term,
};
pub use families::{
    forced_unique, parametric_family, pell_solutions, scale_solution, solve_univariate,
    FamilyError, FamilyKind, ParametricConstruction, SolutionFamily,
};
pub use parse::{from_json, parse_text, to_json, ParseDiagnostic, Severity};
pub use report::{analyze, build_report, find_scalable_solution, pell_fundamental, Analysis, FullReport};
pub use sweep::{
    fit_exponent, least_squares, rows_to_csv, rows_to_json, sweep, FitResult, SweepError,
    SweepOutcome, SweepRow,
};
