//! Expression language for template rules.
//!
//! Infix grammar with conventional precedence, tightest to loosest:
//!
//! ```text
//! unary    -> ("-" | "!") unary | primary
//! factor   -> unary   (("*" | "/") unary)*          left associative
//! term     -> factor  (("+" | "-") factor)*         left associative
//! cmp      -> term  (("<" | "<=" | ">" | ">=") term)?   non-associative
//! equality -> cmp   (("==" | "!=") cmp)?                non-associative
//! and      -> equality ("&&" equality)*             left associative
//! or       -> and      ("||" and)*                  left associative
//! primary  -> NUMBER | IDENTIFIER | "(" or ")"
//! ```
//!
//! Comparisons are non-associative: `a < b < c` is a syntax error rather
//! than a silent boolean-vs-number comparison. Numbers are double-precision
//! floats. Evaluation is total and side-effect free; `&&`/`||` do not
//! short-circuit, so a division by zero anywhere in the expression is
//! always reported.

mod eval;
mod parser;

pub use eval::{evaluate, Env, EvalError, Value};
pub use parser::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            BinaryOp::Mul | BinaryOp::Div => 5,
            BinaryOp::Add | BinaryOp::Sub => 4,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 3,
            BinaryOp::Eq | BinaryOp::Ne => 2,
            BinaryOp::And => 1,
            BinaryOp::Or => 0,
        }
    }

    fn non_associative(&self) -> bool {
        matches!(
            self,
            BinaryOp::Lt
                | BinaryOp::Le
                | BinaryOp::Gt
                | BinaryOp::Ge
                | BinaryOp::Eq
                | BinaryOp::Ne
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    Ident(String),
    Unary { op: UnaryOp, operand: Box<Expr> },
    Binary { op: BinaryOp, left: Box<Expr>, right: Box<Expr> },
}

impl Expr {
    pub fn number(n: f64) -> Expr {
        Expr::Number(n)
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_owned())
    }

    pub fn unary(op: UnaryOp, operand: Expr) -> Expr {
        Expr::Unary { op, operand: Box::new(operand) }
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary { op, left: Box::new(left), right: Box::new(right) }
    }

    /// All identifier names appearing anywhere in the expression.
    pub fn free_identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Ident(name) => {
                out.insert(name.clone());
            }
            Expr::Unary { operand, .. } => operand.collect_identifiers(out),
            Expr::Binary { left, right, .. } => {
                left.collect_identifiers(out);
                right.collect_identifiers(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Number(_) | Expr::Ident(_) => 7,
            Expr::Unary { .. } => 6,
            Expr::Binary { op, .. } => op.precedence(),
        }
    }
}

/// Prints the expression with the minimal parentheses needed to re-parse
/// into the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Ident(name) => f.write_str(name),
            Expr::Unary { op, operand } => {
                let sym = match op {
                    UnaryOp::Neg => "-",
                    UnaryOp::Not => "!",
                };
                f.write_str(sym)?;
                if operand.precedence() < 6 {
                    write!(f, "({operand})")
                } else {
                    write!(f, "{operand}")
                }
            }
            Expr::Binary { op, left, right } => {
                let p = op.precedence();
                // non-associative levels parenthesize same-precedence
                // operands on both sides; left-associative ones only on
                // the right
                let left_parens =
                    left.precedence() < p || (left.precedence() == p && op.non_associative());
                let right_parens = right.precedence() <= p;
                if left_parens {
                    write!(f, "({left})")?;
                } else {
                    write!(f, "{left}")?;
                }
                write!(f, " {} ", op.symbol())?;
                if right_parens {
                    write!(f, "({right})")
                } else {
                    write!(f, "{right}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_of_arithmetic() {
        let e = parse("2 + 3 * 4").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinaryOp::Add,
                Expr::number(2.0),
                Expr::binary(BinaryOp::Mul, Expr::number(3.0), Expr::number(4.0)),
            )
        );
    }

    #[test]
    fn comparisons_bind_tighter_than_and() {
        let e = parse("temp > 30 && rh > 60").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinaryOp::And,
                Expr::binary(BinaryOp::Gt, Expr::ident("temp"), Expr::number(30.0)),
                Expr::binary(BinaryOp::Gt, Expr::ident("rh"), Expr::number(60.0)),
            )
        );
    }

    #[test]
    fn chained_comparison_is_rejected() {
        let err = parse("a < b < c").unwrap_err();
        assert_eq!(err.offset, 6);
        // parenthesized form stays legal (if ill-typed at evaluation)
        assert!(parse("(a < b) < c").is_ok());
        assert!(parse("a == b == c").is_err());
    }

    #[test]
    fn free_identifiers_are_a_set() {
        assert_eq!(
            parse("temp > 30").unwrap().free_identifiers(),
            BTreeSet::from(["temp".to_owned()])
        );
        assert!(parse("2 + 2").unwrap().free_identifiers().is_empty());
        assert_eq!(
            parse("(x + y) / x").unwrap().free_identifiers(),
            BTreeSet::from(["x".to_owned(), "y".to_owned()])
        );
    }

    #[test]
    fn display_round_trips_structures() {
        for src in [
            "2 + 3 * 4",
            "(2 + 3) * 4",
            "a - (b - c)",
            "a && b || c && !d",
            "-x * y",
            "-(x * y)",
            "(a < b) < c",
            "x / y / z",
        ] {
            let parsed = parse(src).unwrap();
            let printed = parsed.to_string();
            assert_eq!(parse(&printed).unwrap(), parsed, "printed as {printed}");
        }
    }
}
