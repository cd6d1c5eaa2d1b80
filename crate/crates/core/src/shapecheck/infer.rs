//! Shape inference.
//!
//! Addition, subtraction and equations need identical shapes; a real vector
//! and a complex vector of the same length are compatible and promote to the
//! complex one. Products follow matrix algebra with one view rule: in a
//! product against a matrix, `vector(n)` reads as an `n x 1` column, which
//! is what makes `psi * psi'` a dyad while `psi * psi` stays undefined.
//! `x ^. e` keeps the shape of `x` but becomes complex when `x` is a vector
//! of unknown sign and `e` is not an integer literal.
//!
//! A symbol bound as unknown is solved by enumeration: every candidate shape
//! over the dimensions present in the environment is tried, and the
//! admissible ones form that expression's constraint on the symbol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::ShapeExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Scalar,
    Vector(usize),
    ComplexVector(usize),
    Matrix(usize, usize),
}

impl Shape {
    fn vector_len(self) -> Option<usize> {
        match self {
            Shape::Vector(n) | Shape::ComplexVector(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_vector(self) -> bool {
        self.vector_len().is_some()
    }

    /// Shared shape of two operands that must agree, with complex promotion.
    fn unify(self, other: Shape) -> Option<Shape> {
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Shape::Vector(n), Shape::ComplexVector(m)) | (Shape::ComplexVector(n), Shape::Vector(m)) if n == m => {
                Some(Shape::ComplexVector(n))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Scalar => write!(f, "scalar"),
            Shape::Vector(n) => write!(f, "vector({n})"),
            Shape::ComplexVector(n) => write!(f, "complexvector({n})"),
            Shape::Matrix(r, c) => write!(f, "matrix({r},{c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Known {
        shape: Shape,
        nonneg: bool,
    },
    /// Shape under audit, solved by enumeration.
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShapeEnv {
    symbols: BTreeMap<String, Binding>,
}

impl ShapeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: &str, shape: Shape) -> Self {
        self.symbols
            .insert(name.to_string(), Binding::Known { shape, nonneg: false });
        self
    }

    /// Binds a symbol whose entries are known to be nonnegative.
    pub fn bind_nonneg(mut self, name: &str, shape: Shape) -> Self {
        self.symbols
            .insert(name.to_string(), Binding::Known { shape, nonneg: true });
        self
    }

    pub fn unknown(mut self, name: &str) -> Self {
        self.symbols.insert(name.to_string(), Binding::Unknown);
        self
    }

    pub fn get(&self, name: &str) -> Option<Binding> {
        self.symbols.get(name).copied()
    }

    /// Candidate shapes for an unknown symbol: scalar, every vector length
    /// and every matrix over the environment's dimensions plus one (the
    /// degenerate 1x1 matrix excluded).
    pub fn candidate_shapes(&self) -> Vec<Shape> {
        let mut dims = BTreeSet::new();
        for b in self.symbols.values() {
            if let Binding::Known { shape, .. } = b {
                match *shape {
                    Shape::Scalar => {}
                    Shape::Vector(n) | Shape::ComplexVector(n) => {
                        dims.insert(n);
                    }
                    Shape::Matrix(r, c) => {
                        dims.insert(r);
                        dims.insert(c);
                    }
                }
            }
        }
        let mut out = vec![Shape::Scalar];
        out.extend(dims.iter().map(|&n| Shape::Vector(n)));
        dims.insert(1);
        for &r in &dims {
            for &c in &dims {
                if (r, c) != (1, 1) {
                    out.push(Shape::Matrix(r, c));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// A scalar added to (or equated with) a vector.
    ScalarVectorSum,
    /// Any other sum of operands with different shapes.
    ShapeSum,
    /// Product of two vectors, undefined without a transpose.
    VectorVectorProduct,
    /// Matrix product with incompatible inner dimensions.
    InnerDimension,
    ElementwiseShapes,
    NonScalarExponent,
    EquationSides,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ScalarVectorSum => "scalar_vector_sum",
            Rule::ShapeSum => "shape_sum",
            Rule::VectorVectorProduct => "vector_vector_product",
            Rule::InnerDimension => "inner_dimension",
            Rule::ElementwiseShapes => "elementwise_shapes",
            Rule::NonScalarExponent => "non_scalar_exponent",
            Rule::EquationSides => "equation_sides",
        }
    }
}

/// Shapes an unknown symbol may take for one expression to check.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub source: String,
    pub admissible: Vec<Shape>,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shapes: Vec<String> = self.admissible.iter().map(Shape::to_string).collect();
        write!(f, "{} requires {{{}}}", self.source, shapes.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeVerdict {
    WellFormed(Shape),
    Mismatch {
        /// Child-index path from the root to the innermost offending node.
        path: Vec<usize>,
        rule: Rule,
        message: String,
    },
    Unsatisfiable {
        symbol: String,
        constraint_a: Constraint,
        /// Absent when a single constraint already admits nothing.
        constraint_b: Option<Constraint>,
    },
}

impl ShapeVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ShapeVerdict::WellFormed(_) => "well_formed",
            ShapeVerdict::Mismatch { .. } => "mismatch",
            ShapeVerdict::Unsatisfiable { .. } => "unsatisfiable",
        }
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            ShapeVerdict::Mismatch { rule, .. } => Some(*rule),
            _ => None,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        matches!(self, ShapeVerdict::WellFormed(_))
    }

    pub fn message(&self) -> String {
        match self {
            ShapeVerdict::WellFormed(s) => format!("well-formed: {s}"),
            ShapeVerdict::Mismatch { message, .. } => message.clone(),
            ShapeVerdict::Unsatisfiable {
                symbol,
                constraint_a,
                constraint_b: Some(b),
            } => format!("no shape for `{symbol}` satisfies both: {constraint_a}; {b}"),
            ShapeVerdict::Unsatisfiable {
                symbol, constraint_a, ..
            } => format!("no shape for `{symbol}` satisfies {constraint_a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeError {
    UnboundSymbol(String),
    /// Enumeration handles a single unknown symbol at a time.
    MultipleUnknowns(Vec<String>),
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeError::UnboundSymbol(s) => write!(f, "unbound symbol `{s}`"),
            ShapeError::MultipleUnknowns(s) => write!(f, "more than one unknown symbol: {}", s.join(", ")),
        }
    }
}

impl std::error::Error for ShapeError {}

/// Switches for individual typing rules. The defaults are the sound rules;
/// the others exist to prove that the audit notices a weakened checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckerRules {
    /// Broadcast a scalar over a vector in sums.
    pub scalar_vector_add: bool,
}

#[derive(Debug, Clone, Copy)]
struct Typed {
    shape: Shape,
    nonneg: bool,
}

struct Failure {
    path: Vec<usize>,
    rule: Rule,
    message: String,
}

struct Checker<'a> {
    env: &'a ShapeEnv,
    rules: CheckerRules,
    /// Assignment for the unknown symbol under trial.
    trial: Option<(&'a str, Shape)>,
}

fn fail<T>(path: &[usize], rule: Rule, message: String) -> Result<T, Failure> {
    Err(Failure {
        path: path.to_vec(),
        rule,
        message,
    })
}

fn is_integer_literal(e: &ShapeExpr) -> bool {
    matches!(e, ShapeExpr::ScalarLit(v) if v.fract() == 0.0)
}

impl Checker<'_> {
    fn child(&self, e: &ShapeExpr, path: &mut Vec<usize>, i: usize) -> Result<Typed, Failure> {
        path.push(i);
        let out = self.infer(e, path);
        path.pop();
        out
    }

    fn infer(&self, expr: &ShapeExpr, path: &mut Vec<usize>) -> Result<Typed, Failure> {
        use ShapeExpr::*;
        match expr {
            Sym(name) => match (self.env.get(name), self.trial) {
                (Some(Binding::Known { shape, nonneg }), _) => Ok(Typed { shape, nonneg }),
                (Some(Binding::Unknown), Some((t, shape))) if t == name => Ok(Typed { shape, nonneg: false }),
                _ => unreachable!("symbols are resolved before inference"),
            },
            ScalarLit(v) => Ok(Typed {
                shape: Shape::Scalar,
                nonneg: *v >= 0.0,
            }),
            Neg(a) => {
                let a = self.child(a, path, 0)?;
                Ok(Typed { nonneg: false, ..a })
            }
            Add(a, b) | Sub(a, b) => {
                let a = self.child(a, path, 0)?;
                let b = self.child(b, path, 1)?;
                let nonneg = matches!(expr, Add(..)) && a.nonneg && b.nonneg;
                if let Some(shape) = a.shape.unify(b.shape) {
                    return Ok(Typed { shape, nonneg });
                }
                let op = if matches!(expr, Add(..)) { "add" } else { "subtract" };
                match (a.shape, b.shape) {
                    (Shape::Scalar, v) | (v, Shape::Scalar) if v.is_vector() => {
                        if self.rules.scalar_vector_add {
                            return Ok(Typed { shape: v, nonneg });
                        }
                        fail(
                            path,
                            Rule::ScalarVectorSum,
                            format!("cannot {op} {} and {}: a scalar is not a vector", a.shape, b.shape),
                        )
                    }
                    _ => fail(path, Rule::ShapeSum, format!("cannot {op} {} and {}", a.shape, b.shape)),
                }
            }
            Mul(a, b) => {
                let a = self.child(a, path, 0)?;
                let b = self.child(b, path, 1)?;
                let nonneg = a.nonneg && b.nonneg;
                let shape = self.product(a.shape, b.shape, path)?;
                Ok(Typed { shape, nonneg })
            }
            ElemMul(a, b) => {
                let a = self.child(a, path, 0)?;
                let b = self.child(b, path, 1)?;
                match a.shape.unify(b.shape) {
                    Some(shape) => Ok(Typed {
                        shape,
                        nonneg: a.nonneg && b.nonneg,
                    }),
                    None => fail(
                        path,
                        Rule::ElementwiseShapes,
                        format!(
                            "element-wise product needs equal shapes, got {} and {}",
                            a.shape, b.shape
                        ),
                    ),
                }
            }
            Transpose(a) => {
                let t = self.child(a, path, 0)?;
                let shape = match t.shape {
                    Shape::Scalar => Shape::Scalar,
                    Shape::Vector(n) | Shape::ComplexVector(n) => Shape::Matrix(1, n),
                    Shape::Matrix(1, n) => Shape::Vector(n),
                    Shape::Matrix(r, c) => Shape::Matrix(c, r),
                };
                Ok(Typed { shape, ..t })
            }
            ElemPow(a, e) => {
                let base = self.child(a, path, 0)?;
                let exp = self.child(e, path, 1)?;
                if exp.shape != Shape::Scalar {
                    return fail(
                        path,
                        Rule::NonScalarExponent,
                        format!("exponent must be a scalar, got {}", exp.shape),
                    );
                }
                let shape = match base.shape {
                    Shape::Vector(n) if !base.nonneg && !is_integer_literal(e) => Shape::ComplexVector(n),
                    s => s,
                };
                Ok(Typed { shape, ..base })
            }
            ElemAbs(a) => {
                let t = self.child(a, path, 0)?;
                let shape = match t.shape {
                    Shape::ComplexVector(n) => Shape::Vector(n),
                    s => s,
                };
                Ok(Typed { shape, nonneg: true })
            }
            Equate(a, b) => {
                let a = self.child(a, path, 0)?;
                let b = self.child(b, path, 1)?;
                match a.shape.unify(b.shape) {
                    Some(shape) => Ok(Typed {
                        shape,
                        nonneg: a.nonneg && b.nonneg,
                    }),
                    None => fail(
                        path,
                        Rule::EquationSides,
                        format!("left side is {} but right side is {}", a.shape, b.shape),
                    ),
                }
            }
        }
    }

    fn product(&self, a: Shape, b: Shape, path: &[usize]) -> Result<Shape, Failure> {
        if a == Shape::Scalar {
            return Ok(b);
        }
        if b == Shape::Scalar {
            return Ok(a);
        }
        if a.is_vector() && b.is_vector() {
            return fail(
                path,
                Rule::VectorVectorProduct,
                format!("product of {a} and {b} is undefined; only an inner or outer (dyad) product with a transpose is defined"),
            );
        }
        let as_matrix = |s: Shape| match s {
            Shape::Vector(n) | Shape::ComplexVector(n) => (n, 1),
            Shape::Matrix(r, c) => (r, c),
            Shape::Scalar => unreachable!(),
        };
        let (ar, ac) = as_matrix(a);
        let (br, bc) = as_matrix(b);
        if ac != br {
            return fail(
                path,
                Rule::InnerDimension,
                format!("cannot multiply {a} by {b}: inner dimensions {ac} and {br} differ"),
            );
        }
        Ok(match (ar, bc) {
            (1, 1) => Shape::Scalar,
            (r, 1) if matches!(b, Shape::ComplexVector(_)) => Shape::ComplexVector(r),
            (r, 1) if b.is_vector() => Shape::Vector(r),
            (r, c) => Shape::Matrix(r, c),
        })
    }
}

fn unknowns<'a>(expr: &'a ShapeExpr, env: &ShapeEnv) -> Result<Vec<&'a str>, ShapeError> {
    let mut out = Vec::new();
    for name in expr.symbols() {
        match env.get(name) {
            None => return Err(ShapeError::UnboundSymbol(name.to_string())),
            Some(Binding::Unknown) => out.push(name),
            Some(Binding::Known { .. }) => {}
        }
    }
    Ok(out)
}

fn run(expr: &ShapeExpr, env: &ShapeEnv, rules: CheckerRules, trial: Option<(&str, Shape)>) -> Result<Shape, Failure> {
    let checker = Checker { env, rules, trial };
    checker.infer(expr, &mut Vec::new()).map(|t| t.shape)
}

pub fn infer_shape(expr: &ShapeExpr, env: &ShapeEnv) -> Result<ShapeVerdict, ShapeError> {
    infer_shape_with(expr, env, CheckerRules::default())
}

/// With an unknown symbol the expression is well-formed when some candidate
/// admits it; the reported shape is the one under the first admissible
/// candidate.
pub fn infer_shape_with(expr: &ShapeExpr, env: &ShapeEnv, rules: CheckerRules) -> Result<ShapeVerdict, ShapeError> {
    let unknown = unknowns(expr, env)?;
    match unknown.as_slice() {
        [] => Ok(match run(expr, env, rules, None) {
            Ok(shape) => ShapeVerdict::WellFormed(shape),
            Err(f) => ShapeVerdict::Mismatch {
                path: f.path,
                rule: f.rule,
                message: f.message,
            },
        }),
        [symbol] => {
            let constraint = constraint_with(expr, env, symbol, "expression", rules)?;
            match constraint.admissible.first() {
                Some(&shape) => Ok(ShapeVerdict::WellFormed(
                    run(expr, env, rules, Some((symbol, shape))).unwrap_or_else(|_| unreachable!()),
                )),
                None => Ok(ShapeVerdict::Unsatisfiable {
                    symbol: symbol.to_string(),
                    constraint_a: constraint,
                    constraint_b: None,
                }),
            }
        }
        many => Err(ShapeError::MultipleUnknowns(
            many.iter().map(|s| s.to_string()).collect(),
        )),
    }
}

/// Candidate shapes of `symbol` under which `expr` type-checks.
pub fn constraint_for(expr: &ShapeExpr, env: &ShapeEnv, symbol: &str, source: &str) -> Result<Constraint, ShapeError> {
    constraint_with(expr, env, symbol, source, CheckerRules::default())
}

fn constraint_with(
    expr: &ShapeExpr,
    env: &ShapeEnv,
    symbol: &str,
    source: &str,
    rules: CheckerRules,
) -> Result<Constraint, ShapeError> {
    let unknown = unknowns(expr, env)?;
    if unknown.iter().any(|u| *u != symbol) {
        return Err(ShapeError::MultipleUnknowns(
            unknown.iter().map(|s| s.to_string()).collect(),
        ));
    }
    let admissible = env
        .candidate_shapes()
        .into_iter()
        .filter(|&cand| run(expr, env, rules, Some((symbol, cand))).is_ok())
        .collect();
    Ok(Constraint {
        source: source.to_string(),
        admissible,
    })
}

/// Checks several expressions that share one unknown symbol. The first pair
/// of constraints with no common shape makes the system unsatisfiable;
/// otherwise the verdict carries the first shape admitted by all of them.
pub fn check_system(
    equations: &[(&str, &ShapeExpr)],
    env: &ShapeEnv,
    symbol: &str,
    rules: CheckerRules,
) -> Result<ShapeVerdict, ShapeError> {
    let constraints = equations
        .iter()
        .map(|(source, expr)| constraint_with(expr, env, symbol, source, rules))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, a) in constraints.iter().enumerate() {
        if a.admissible.is_empty() {
            return Ok(ShapeVerdict::Unsatisfiable {
                symbol: symbol.to_string(),
                constraint_a: a.clone(),
                constraint_b: None,
            });
        }
        for b in &constraints[i + 1..] {
            if !a.admissible.iter().any(|s| b.admissible.contains(s)) {
                return Ok(ShapeVerdict::Unsatisfiable {
                    symbol: symbol.to_string(),
                    constraint_a: a.clone(),
                    constraint_b: Some(b.clone()),
                });
            }
        }
    }
    let common = env
        .candidate_shapes()
        .into_iter()
        .find(|s| constraints.iter().all(|c| c.admissible.contains(s)));
    Ok(match common {
        Some(s) => ShapeVerdict::WellFormed(s),
        None => ShapeVerdict::Unsatisfiable {
            symbol: symbol.to_string(),
            constraint_a: constraints[0].clone(),
            constraint_b: constraints.get(1).cloned(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapecheck::parser::parse_expr;

    fn env() -> ShapeEnv {
        ShapeEnv::new()
            .bind("Psi", Shape::Vector(9))
            .bind("Omega", Shape::Vector(9))
            .bind("Omega_opt", Shape::Vector(9))
            .bind("DOmega", Shape::Vector(9))
            .bind("R", Shape::Matrix(9, 9))
            .bind("A", Shape::Matrix(3, 9))
            .bind("s", Shape::Scalar)
            .bind("v", Shape::Scalar)
            .bind("lambda", Shape::Scalar)
            .bind_nonneg("w", Shape::Vector(9))
            .unknown("F")
    }

    fn verdict(text: &str) -> ShapeVerdict {
        infer_shape(&parse_expr(text).unwrap(), &env()).unwrap()
    }

    #[test]
    fn inner_and_outer_products() {
        assert_eq!(verdict("Psi' * Omega"), ShapeVerdict::WellFormed(Shape::Scalar));
        assert_eq!(verdict("Psi * Psi'"), ShapeVerdict::WellFormed(Shape::Matrix(9, 9)));
        assert_eq!(verdict("R * Psi"), ShapeVerdict::WellFormed(Shape::Vector(9)));
        assert_eq!(verdict("A * R"), ShapeVerdict::WellFormed(Shape::Matrix(3, 9)));
        assert_eq!(verdict("s * Psi"), ShapeVerdict::WellFormed(Shape::Vector(9)));
        assert_eq!(verdict("Psi'' + Psi"), ShapeVerdict::WellFormed(Shape::Vector(9)));
    }

    #[test]
    fn vector_times_vector_is_rejected() {
        let v = verdict("Psi * Omega");
        assert_eq!(v.rule(), Some(Rule::VectorVectorProduct));
        let v = verdict("R * A");
        assert_eq!(v.rule(), Some(Rule::InnerDimension));
    }

    #[test]
    fn scalar_plus_fractional_power_of_vector() {
        let v = verdict("1 + (Omega_opt + DOmega) ^. (1 - v)");
        match v {
            ShapeVerdict::Mismatch { path, rule, message } => {
                assert!(path.is_empty());
                assert_eq!(rule, Rule::ScalarVectorSum);
                assert!(message.contains("scalar"), "{message}");
                assert!(message.contains("complexvector(9)"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mutated_rules_broadcast_scalars() {
        let e = parse_expr("1 + Omega").unwrap();
        let mutated = CheckerRules {
            scalar_vector_add: true,
        };
        assert_eq!(
            infer_shape_with(&e, &env(), mutated).unwrap(),
            ShapeVerdict::WellFormed(Shape::Vector(9))
        );
    }

    #[test]
    fn powers_track_sign_and_integrality() {
        assert_eq!(
            verdict("Omega ^. (1 - v)"),
            ShapeVerdict::WellFormed(Shape::ComplexVector(9))
        );
        assert_eq!(verdict("Omega ^. 2"), ShapeVerdict::WellFormed(Shape::Vector(9)));
        assert_eq!(
            verdict("|Omega| ^. (1 - v)"),
            ShapeVerdict::WellFormed(Shape::Vector(9))
        );
        assert_eq!(verdict("w ^. v"), ShapeVerdict::WellFormed(Shape::Vector(9)));
        assert_eq!(verdict("Omega ^. Psi").rule(), Some(Rule::NonScalarExponent));
        assert_eq!(
            verdict("Psi + Omega ^. v"),
            ShapeVerdict::WellFormed(Shape::ComplexVector(9))
        );
    }

    #[test]
    fn elementwise_product_needs_equal_shapes() {
        assert_eq!(verdict("Psi .* Omega"), ShapeVerdict::WellFormed(Shape::Vector(9)));
        // the norm reading of the modulus leaves a single vector operand
        assert_eq!(verdict("Psi .* (1 + s)").rule(), Some(Rule::ElementwiseShapes));
    }

    #[test]
    fn mismatch_path_points_at_innermost_node() {
        let v = verdict("s + Psi' * (R * (Psi * Omega))");
        match v {
            ShapeVerdict::Mismatch { path, .. } => assert_eq!(path, vec![1, 1, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbound_symbols_are_errors() {
        let e = parse_expr("Psi + nope").unwrap();
        assert_eq!(infer_shape(&e, &env()), Err(ShapeError::UnboundSymbol("nope".into())));
    }

    #[test]
    fn unknown_symbol_constraints() {
        let env = env();
        let c = constraint_for(&parse_expr("Omega + Omega * F").unwrap(), &env, "F", "product").unwrap();
        assert_eq!(c.admissible, vec![Shape::Scalar]);
        let c = constraint_for(&parse_expr("R + F").unwrap(), &env, "F", "sum").unwrap();
        assert_eq!(c.admissible, vec![Shape::Matrix(9, 9)]);
        let c = constraint_for(&parse_expr("lambda - F").unwrap(), &env, "F", "eig").unwrap();
        assert_eq!(c.admissible, vec![Shape::Scalar]);
        assert_eq!(verdict("R + F"), ShapeVerdict::WellFormed(Shape::Matrix(9, 9)));
        let v = verdict("(R + F) * (lambda - F)");
        assert_eq!(v.kind(), "unsatisfiable");
    }

    #[test]
    fn system_of_constraints() {
        let env = env();
        let a = parse_expr("Omega + Omega * F").unwrap();
        let b = parse_expr("R + F").unwrap();
        let c = parse_expr("lambda - F").unwrap();
        let ok = check_system(&[("a", &a), ("c", &c)], &env, "F", CheckerRules::default()).unwrap();
        assert_eq!(ok, ShapeVerdict::WellFormed(Shape::Scalar));
        let bad = check_system(&[("a", &a), ("c", &c), ("b", &b)], &env, "F", CheckerRules::default()).unwrap();
        match bad {
            ShapeVerdict::Unsatisfiable {
                symbol,
                constraint_a,
                constraint_b: Some(constraint_b),
            } => {
                assert_eq!(symbol, "F");
                assert_eq!(constraint_a.source, "a");
                assert_eq!(constraint_b.source, "b");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiple_unknowns_are_rejected() {
        let env = env().unknown("G");
        let e = parse_expr("F + G").unwrap();
        assert!(matches!(infer_shape(&e, &env), Err(ShapeError::MultipleUnknowns(_))));
    }
}
