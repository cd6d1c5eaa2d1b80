//! Audit corpus: the convergence-analysis equations of the M-FLMS derivation,
//! transcribed into the expression grammar, together with the verdict each
//! one must receive.
//!
//! The main environment uses the muscle preset dimension `n = 9`. The
//! regressor-product pair uses `m = 3` delays and `l = 2` basis functions so
//! the per-delay block length differs from the memory order.

use std::fmt;

use super::ast::ShapeExpr;
use super::infer::{check_system, infer_shape_with, CheckerRules, Rule, Shape, ShapeEnv, ShapeVerdict};
use super::parser::parse_expr;

pub const CORPUS_DIM: usize = 9;

/// Shapes for the error-recursion symbols at weight dimension `n`. With
/// `n = 1` every vector and matrix collapses to a scalar.
pub fn recursion_env(n: usize) -> ShapeEnv {
    let (vector, matrix) = if n == 1 {
        (Shape::Scalar, Shape::Scalar)
    } else {
        (Shape::Vector(n), Shape::Matrix(n, n))
    };
    let mut env = ShapeEnv::new();
    for name in [
        "Psi",
        "Omega_opt",
        "DOmega",
        "DOmega_prev",
        "DOmega_next",
        "EDOmega",
        "EDOmega_prev",
        "EDOmega_next",
    ] {
        env = env.bind(name, vector);
    }
    for name in ["R", "I"] {
        env = env.bind(name, matrix);
    }
    for name in ["s", "eta", "beta", "v", "j", "k", "binom", "lambda_i", "d_i"] {
        env = env.bind(name, Shape::Scalar);
    }
    env.unknown("F")
}

/// Regressor blocks of length `block`, paired with `q_i c` where `c` has
/// length `l`.
pub fn regressor_env(m: usize, l: usize, block: usize) -> ShapeEnv {
    let mut env = ShapeEnv::new().bind("s", Shape::Scalar).bind("c", Shape::Vector(l));
    for i in 1..=m {
        env = env
            .bind(&format!("Psi_{i}"), Shape::Vector(block))
            .bind(&format!("q_{i}"), Shape::Scalar);
    }
    env
}

pub const REGRESSOR_PRODUCT: &str = "s = Psi_1' * (q_1 * c) + Psi_2' * (q_2 * c) + Psi_3' * (q_3 * c)";

pub const ERROR_RECURSION: &str = "DOmega_next = DOmega + beta * (DOmega - DOmega_prev) + eta * Psi * (s - Psi' * (Omega_opt + DOmega)) * (1 + (Omega_opt + DOmega) ^. (1 - v))";

pub const DYAD_PRODUCT: &str = "DOmega_next = DOmega + beta * (DOmega - DOmega_prev) + eta * Psi * s - eta * Psi * Psi' * (Omega_opt + DOmega) + eta * s * Psi * (Omega_opt + DOmega) ^. (1 - v)";

pub const BINOMIAL_EXPANSION: &str = "(Omega_opt + DOmega) ^. j = binom * (Omega_opt ^. k)' * DOmega ^. (j - k)";

pub const EXPANDED_RECURSION: &str = "DOmega_next = DOmega + beta * (DOmega - DOmega_prev) + eta * Psi * s - eta * Psi * Psi' * Omega_opt - eta * Psi * Psi' * DOmega + eta * Psi * s * DOmega ^. (1 - v) + eta * Psi * s * binom * (Omega_opt ^. k)' * DOmega ^. (1 - v - k) - eta * Psi * Psi' * DOmega ^. (2 - v) - eta * Psi * Psi' * binom * Omega_opt' * DOmega ^. (1 - v)";

/// Mean error recursion: `F` multiplies the mean weight error from the right.
pub const F_MEAN_RECURSION: &str =
    "EDOmega_next = EDOmega + beta * (EDOmega - EDOmega_prev) - eta * R * EDOmega + eta * EDOmega * F";

/// Transition matrix form: `F` is added to the correlation matrix.
pub const F_TRANSITION: &str = "EDOmega_next = (I - eta * (R + F)) * EDOmega";

/// Modal form: `F` is subtracted from an eigenvalue.
pub const F_EIGEN_MODE: &str = "d_i = 1 - eta * (lambda_i - F)";

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub equation_id: &'static str,
    pub description: &'static str,
    pub expressions: Vec<String>,
    pub verdict: ShapeVerdict,
}

/// What the golden table demands of one corpus row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    WellFormed(Shape),
    Mismatch(Rule),
    Unsatisfiable,
}

impl Expected {
    pub fn matches(self, verdict: &ShapeVerdict) -> bool {
        match (self, verdict) {
            (Expected::WellFormed(s), ShapeVerdict::WellFormed(t)) => s == *t,
            (Expected::Mismatch(r), ShapeVerdict::Mismatch { rule, .. }) => r == *rule,
            (Expected::Unsatisfiable, ShapeVerdict::Unsatisfiable { .. }) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::WellFormed(s) => write!(f, "well_formed({s})"),
            Expected::Mismatch(r) => write!(f, "mismatch({})", r.name()),
            Expected::Unsatisfiable => write!(f, "unsatisfiable"),
        }
    }
}

/// Verdict summary in the same notation as [`Expected`].
pub fn verdict_label(v: &ShapeVerdict) -> String {
    match v {
        ShapeVerdict::WellFormed(s) => format!("well_formed({s})"),
        ShapeVerdict::Mismatch { rule, .. } => format!("mismatch({})", rule.name()),
        ShapeVerdict::Unsatisfiable { .. } => "unsatisfiable".into(),
    }
}

pub const GOLDEN: [(&str, Expected); 7] = [
    ("regressor_product_original", Expected::Mismatch(Rule::InnerDimension)),
    ("regressor_product_corrected", Expected::WellFormed(Shape::Scalar)),
    ("error_recursion", Expected::Mismatch(Rule::ScalarVectorSum)),
    ("dyad_product", Expected::Mismatch(Rule::VectorVectorProduct)),
    ("binomial_expansion", Expected::Mismatch(Rule::EquationSides)),
    ("expanded_recursion", Expected::Mismatch(Rule::VectorVectorProduct)),
    ("f_function", Expected::Unsatisfiable),
];

fn parse(text: &str) -> ShapeExpr {
    parse_expr(text).unwrap_or_else(|e| panic!("corpus text `{text}` does not parse: {e}"))
}

fn single(
    equation_id: &'static str,
    description: &'static str,
    text: &str,
    env: &ShapeEnv,
    rules: CheckerRules,
) -> AuditEntry {
    let verdict = infer_shape_with(&parse(text), env, rules).expect("corpus symbols are bound");
    AuditEntry {
        equation_id,
        description,
        expressions: vec![text.to_string()],
        verdict,
    }
}

/// Shape verdict for the binomial expansion at weight dimension `n`.
pub fn binomial_expansion_verdict(n: usize, rules: CheckerRules) -> ShapeVerdict {
    infer_shape_with(&parse(BINOMIAL_EXPANSION), &recursion_env(n), rules).expect("corpus symbols are bound")
}

pub fn audit_corpus() -> Vec<AuditEntry> {
    audit_corpus_with(CheckerRules::default())
}

pub fn audit_corpus_with(rules: CheckerRules) -> Vec<AuditEntry> {
    let env = recursion_env(CORPUS_DIM);
    let (m, l) = (3, 2);
    let mut out = vec![
        single(
            "regressor_product_original",
            "regressor blocks of length m paired with q_i c of length l",
            REGRESSOR_PRODUCT,
            &regressor_env(m, l, m),
            rules,
        ),
        single(
            "regressor_product_corrected",
            "regressor blocks [f_1(r(t-i)), .., f_l(r(t-i))] of length l",
            REGRESSOR_PRODUCT,
            &regressor_env(m, l, l),
            rules,
        ),
        single(
            "error_recursion",
            "weight-error recursion with the modulus dropped: 1 + vector power",
            ERROR_RECURSION,
            &env,
            rules,
        ),
        single(
            "dyad_product",
            "regressor times the vector power without a transpose",
            DYAD_PRODUCT,
            &env,
            rules,
        ),
        AuditEntry {
            verdict: binomial_expansion_verdict(CORPUS_DIM, rules),
            ..single(
                "binomial_expansion",
                "binomial series for a vector power: vector left side, scalar right side",
                BINOMIAL_EXPANSION,
                &env,
                rules,
            )
        },
        single(
            "expanded_recursion",
            "recursion after the series substitution",
            EXPANDED_RECURSION,
            &env,
            rules,
        ),
    ];

    let systems = [
        ("mean_recursion", F_MEAN_RECURSION),
        ("transition_matrix", F_TRANSITION),
        ("eigen_mode", F_EIGEN_MODE),
    ];
    let parsed: Vec<(&str, ShapeExpr)> = systems.iter().map(|(s, t)| (*s, parse(t))).collect();
    let refs: Vec<(&str, &ShapeExpr)> = parsed.iter().map(|(s, e)| (*s, e)).collect();
    out.push(AuditEntry {
        equation_id: "f_function",
        description: "F multiplies a vector, is added to R and subtracted from an eigenvalue; the step-size bound also divides by it, an operator the grammar does not have",
        expressions: systems.iter().map(|(_, t)| t.to_string()).collect(),
        verdict: check_system(&refs, &env, "F", rules).expect("corpus symbols are bound"),
    });
    out
}

/// One line per row whose verdict deviates from [`GOLDEN`].
pub fn golden_diff(entries: &[AuditEntry]) -> Vec<String> {
    let mut diffs = Vec::new();
    for (id, expected) in GOLDEN {
        match entries.iter().find(|e| e.equation_id == id) {
            None => diffs.push(format!("{id}: missing from audit")),
            Some(e) if !expected.matches(&e.verdict) => {
                diffs.push(format!("{id}: expected {expected}, got {}", verdict_label(&e.verdict)))
            }
            Some(_) => {}
        }
    }
    for e in entries {
        if !GOLDEN.iter().any(|(id, _)| *id == e.equation_id) {
            diffs.push(format!("{}: not in golden table", e.equation_id));
        }
    }
    diffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_matches_golden_table() {
        let entries = audit_corpus();
        assert_eq!(entries.len(), 7);
        assert_eq!(golden_diff(&entries), Vec::<String>::new());
    }

    #[test]
    fn error_recursion_fails_on_the_scalar_sum() {
        let entries = audit_corpus();
        let e = entries.iter().find(|e| e.equation_id == "error_recursion").unwrap();
        let ShapeVerdict::Mismatch { path, message, .. } = &e.verdict else {
            panic!("{:?}", e.verdict)
        };
        let expr = parse(ERROR_RECURSION);
        let node = expr.at_path(path).unwrap();
        assert_eq!(node.to_string(), "1 + (Omega_opt + DOmega) ^. (1 - v)");
        assert!(message.contains("scalar and complexvector(9)"), "{message}");
    }

    #[test]
    fn dyad_row_fails_on_vector_product() {
        let entries = audit_corpus();
        let e = entries.iter().find(|e| e.equation_id == "dyad_product").unwrap();
        let ShapeVerdict::Mismatch { path, .. } = &e.verdict else {
            panic!()
        };
        let node = parse(DYAD_PRODUCT).at_path(path).unwrap().clone();
        assert_eq!(node.to_string(), "eta * s * Psi * (Omega_opt + DOmega) ^. (1 - v)");
    }

    #[test]
    fn f_constraints_are_scalar_and_matrix() {
        let entries = audit_corpus();
        let e = entries.iter().find(|e| e.equation_id == "f_function").unwrap();
        match &e.verdict {
            ShapeVerdict::Unsatisfiable {
                symbol,
                constraint_a,
                constraint_b: Some(b),
            } => {
                assert_eq!(symbol, "F");
                assert_eq!(constraint_a.admissible, vec![Shape::Scalar]);
                assert_eq!(b.admissible, vec![Shape::Matrix(9, 9)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn binomial_verdict_by_dimension() {
        for n in [2, 3, 9] {
            let v = binomial_expansion_verdict(n, CheckerRules::default());
            assert_eq!(v.rule(), Some(Rule::EquationSides), "n = {n}");
            assert!(v.message().contains(&format!("complexvector({n})")), "{}", v.message());
            assert!(v.message().ends_with("scalar"), "{}", v.message());
        }
        assert_eq!(
            binomial_expansion_verdict(1, CheckerRules::default()),
            ShapeVerdict::WellFormed(Shape::Scalar)
        );
    }

    #[test]
    fn mutation_shows_up_in_the_diff() {
        let entries = audit_corpus_with(CheckerRules {
            scalar_vector_add: true,
        });
        let diff = golden_diff(&entries);
        assert_eq!(diff.len(), 1, "{diff:?}");
        assert!(diff[0].starts_with("error_recursion:"), "{diff:?}");
    }

    #[test]
    fn corpus_text_is_canonical() {
        for text in [
            REGRESSOR_PRODUCT,
            ERROR_RECURSION,
            DYAD_PRODUCT,
            BINOMIAL_EXPANSION,
            EXPANDED_RECURSION,
            F_MEAN_RECURSION,
            F_TRANSITION,
            F_EIGEN_MODE,
        ] {
            let strip = |s: &str| s.split_whitespace().collect::<String>();
            assert_eq!(strip(&parse(text).to_string()), strip(text));
        }
    }
}
