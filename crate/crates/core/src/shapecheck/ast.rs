use std::fmt;

/// Matrix-expression syntax tree.
///
/// `Equate` is the top-level `lhs = rhs` of an equation; the remaining nodes
/// are ordinary operators. Child indices used in node paths follow the field
/// order (`0` for the left/only operand, `1` for the right operand or the
/// exponent).
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeExpr {
    Sym(String),
    ScalarLit(f64),
    Neg(Box<ShapeExpr>),
    Add(Box<ShapeExpr>, Box<ShapeExpr>),
    Sub(Box<ShapeExpr>, Box<ShapeExpr>),
    Mul(Box<ShapeExpr>, Box<ShapeExpr>),
    /// Component-wise product `a .* b`.
    ElemMul(Box<ShapeExpr>, Box<ShapeExpr>),
    Transpose(Box<ShapeExpr>),
    /// Component-wise power `a ^. e`.
    ElemPow(Box<ShapeExpr>, Box<ShapeExpr>),
    ElemAbs(Box<ShapeExpr>),
    Equate(Box<ShapeExpr>, Box<ShapeExpr>),
}

pub fn sym(name: &str) -> ShapeExpr {
    ShapeExpr::Sym(name.to_string())
}

pub fn lit(value: f64) -> ShapeExpr {
    ShapeExpr::ScalarLit(value)
}

#[allow(clippy::should_implement_trait)]
impl ShapeExpr {
    pub fn add(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn elem_mul(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::ElemMul(Box::new(a), Box::new(b))
    }

    pub fn elem_pow(a: ShapeExpr, e: ShapeExpr) -> Self {
        ShapeExpr::ElemPow(Box::new(a), Box::new(e))
    }

    pub fn equate(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Equate(Box::new(a), Box::new(b))
    }

    pub fn transpose(a: ShapeExpr) -> Self {
        ShapeExpr::Transpose(Box::new(a))
    }

    pub fn neg(a: ShapeExpr) -> Self {
        ShapeExpr::Neg(Box::new(a))
    }

    pub fn abs(a: ShapeExpr) -> Self {
        ShapeExpr::ElemAbs(Box::new(a))
    }

    pub fn children(&self) -> Vec<&ShapeExpr> {
        use ShapeExpr::*;
        match self {
            Sym(_) | ScalarLit(_) => vec![],
            Neg(a) | Transpose(a) | ElemAbs(a) => vec![a],
            Add(a, b) | Sub(a, b) | Mul(a, b) | ElemMul(a, b) | ElemPow(a, b) | Equate(a, b) => vec![a, b],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut ShapeExpr> {
        use ShapeExpr::*;
        match self {
            Sym(_) | ScalarLit(_) => vec![],
            Neg(a) | Transpose(a) | ElemAbs(a) => vec![a],
            Add(a, b) | Sub(a, b) | Mul(a, b) | ElemMul(a, b) | ElemPow(a, b) | Equate(a, b) => vec![a, b],
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&ShapeExpr> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at_path(rest),
        }
    }

    /// Replaces the subtree at `path`; returns false when the path is invalid.
    pub fn replace_at(&mut self, path: &[usize], node: ShapeExpr) -> bool {
        match path.split_first() {
            None => {
                *self = node;
                true
            }
            Some((&i, rest)) => match self.children_mut().into_iter().nth(i) {
                Some(child) => child.replace_at(rest, node),
                None => false,
            },
        }
    }

    /// Every node path in post-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_paths(&mut Vec::new(), &mut out);
        out
    }

    fn collect_paths(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for (i, c) in self.children().into_iter().enumerate() {
            prefix.push(i);
            c.collect_paths(prefix, out);
            prefix.pop();
        }
        out.push(prefix.clone());
    }

    /// Symbol names in first-occurrence order.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let ShapeExpr::Sym(name) = self {
            if !out.contains(&name.as_str()) {
                out.push(name);
            }
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    pub fn node_name(&self) -> &'static str {
        use ShapeExpr::*;
        match self {
            Sym(_) => "Sym",
            ScalarLit(_) => "ScalarLit",
            Neg(_) => "Neg",
            Add(..) => "Add",
            Sub(..) => "Sub",
            Mul(..) => "Mul",
            ElemMul(..) => "ElemMul",
            Transpose(_) => "Transpose",
            ElemPow(..) => "ElemPow",
            ElemAbs(_) => "ElemAbs",
            Equate(..) => "Equate",
        }
    }

    fn precedence(&self) -> u8 {
        use ShapeExpr::*;
        match self {
            Equate(..) => 1,
            Add(..) | Sub(..) => 2,
            Mul(..) | ElemMul(..) => 3,
            Neg(_) => 4,
            ElemPow(..) => 5,
            Transpose(_) => 6,
            Sym(_) | ScalarLit(_) | ElemAbs(_) => 7,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let wrap = self.precedence() < min_prec;
        if wrap {
            f.write_str("(")?;
        }
        use ShapeExpr::*;
        match self {
            Sym(name) => f.write_str(name)?,
            ScalarLit(v) => write!(f, "{v}")?,
            Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 4)?;
            }
            Add(a, b) | Sub(a, b) | Mul(a, b) | ElemMul(a, b) => {
                let (op, prec) = match self {
                    Add(..) => (" + ", 2),
                    Sub(..) => (" - ", 2),
                    Mul(..) => (" * ", 3),
                    _ => (" .* ", 3),
                };
                a.write_at(f, prec)?;
                f.write_str(op)?;
                b.write_at(f, prec + 1)?;
            }
            Equate(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" = ")?;
                b.write_at(f, 2)?;
            }
            ElemPow(a, e) => {
                a.write_at(f, 6)?;
                f.write_str(" ^. ")?;
                e.write_at(f, 4)?;
            }
            Transpose(a) => {
                a.write_at(f, 6)?;
                f.write_str("'")?;
            }
            ElemAbs(a) => {
                f.write_str("|")?;
                a.write_at(f, 1)?;
                f.write_str("|")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical text with minimal parentheses; re-parses to the same tree.
impl fmt::Display for ShapeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
