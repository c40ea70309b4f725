//! Scalar rate functions γ(t): a small expression language with parsing,
//! evaluation and exact (or quadrature) antiderivatives.

mod antiderivative;
mod parse;

use std::fmt;

pub use antiderivative::{antiderivative, Antiderivative, QUADRATURE_TOL};
pub use parse::parse_rate_expr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("expression evaluates to a non-finite value at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }
}

/// AST of a real function of time. Parameters are substituted as literals
/// when parsing, so the only free variable is `t`.
///
/// Values built through [`parse_rate_expr`] or [`RateExpr::folded`] are in
/// canonical form: constant subtrees are evaluated and neutral elements are
/// removed, so derived `PartialEq` is a usable structural equality.
#[derive(Debug, Clone, PartialEq)]
pub enum RateExpr {
    Num(f64),
    T,
    Neg(Box<RateExpr>),
    Binary(BinOp, Box<RateExpr>, Box<RateExpr>),
    Pow(Box<RateExpr>, i32),
    Call(Func, Box<RateExpr>),
}

// builder names mirror the operators on purpose
#[allow(clippy::should_implement_trait)]
impl RateExpr {
    pub fn num(value: f64) -> Self {
        RateExpr::Num(value)
    }

    pub fn t() -> Self {
        RateExpr::T
    }

    pub fn neg(self) -> Self {
        RateExpr::Neg(Box::new(self))
    }

    pub fn binary(op: BinOp, lhs: RateExpr, rhs: RateExpr) -> Self {
        RateExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn add(self, rhs: RateExpr) -> Self {
        Self::binary(BinOp::Add, self, rhs)
    }

    pub fn sub(self, rhs: RateExpr) -> Self {
        Self::binary(BinOp::Sub, self, rhs)
    }

    pub fn mul(self, rhs: RateExpr) -> Self {
        Self::binary(BinOp::Mul, self, rhs)
    }

    pub fn div(self, rhs: RateExpr) -> Self {
        Self::binary(BinOp::Div, self, rhs)
    }

    pub fn powi(self, exponent: i32) -> Self {
        RateExpr::Pow(Box::new(self), exponent)
    }

    pub fn call(func: Func, arg: RateExpr) -> Self {
        RateExpr::Call(func, Box::new(arg))
    }

    pub fn sin(arg: RateExpr) -> Self {
        Self::call(Func::Sin, arg)
    }

    pub fn cos(arg: RateExpr) -> Self {
        Self::call(Func::Cos, arg)
    }

    pub fn exp(arg: RateExpr) -> Self {
        Self::call(Func::Exp, arg)
    }

    /// Evaluates without the finiteness check.
    fn eval_raw(&self, t: f64) -> f64 {
        match self {
            RateExpr::Num(c) => *c,
            RateExpr::T => t,
            RateExpr::Neg(a) => -a.eval_raw(t),
            RateExpr::Binary(op, a, b) => {
                let (x, y) = (a.eval_raw(t), b.eval_raw(t));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                }
            }
            RateExpr::Pow(a, n) => a.eval_raw(t).powi(*n),
            RateExpr::Call(f, a) => f.apply(a.eval_raw(t)),
        }
    }

    /// Evaluates the expression at `t`.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        let value = self.eval_raw(t);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ExprError::NonFinite { t })
        }
    }

    /// True when the expression does not mention `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            RateExpr::Num(_) => true,
            RateExpr::T => false,
            RateExpr::Neg(a) | RateExpr::Pow(a, _) | RateExpr::Call(_, a) => a.is_constant(),
            RateExpr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            RateExpr::Num(c) => Some(*c),
            _ => None,
        }
    }

    /// Canonical form: constant folding plus removal of neutral elements.
    /// Folding never produces a non-finite literal; such subtrees are kept
    /// symbolic so evaluation reports them.
    pub fn folded(&self) -> RateExpr {
        use RateExpr::*;
        let finite = |v: f64| v.is_finite().then_some(Num(v));
        match self {
            Num(c) => Num(*c),
            T => T,
            Neg(a) => match a.folded() {
                Num(c) => Num(-c),
                Neg(inner) => *inner,
                other => Neg(Box::new(other)),
            },
            Pow(a, n) => {
                let base = a.folded();
                match (&base, *n) {
                    (_, 0) => Num(1.0),
                    (_, 1) => base,
                    (Num(c), n) => finite(c.powi(n)).unwrap_or(Pow(Box::new(base), n)),
                    _ => Pow(Box::new(base), *n),
                }
            }
            Call(f, a) => {
                let arg = a.folded();
                match arg {
                    Num(c) => finite(f.apply(c)).unwrap_or(Call(*f, Box::new(Num(c)))),
                    other => Call(*f, Box::new(other)),
                }
            }
            Binary(op, a, b) => {
                let (x, y) = (a.folded(), b.folded());
                if let (Num(p), Num(q)) = (&x, &y) {
                    let v = match op {
                        BinOp::Add => p + q,
                        BinOp::Sub => p - q,
                        BinOp::Mul => p * q,
                        BinOp::Div => p / q,
                    };
                    if let Some(n) = finite(v) {
                        return n;
                    }
                    return Binary(*op, Box::new(x), Box::new(y));
                }
                let zero = |e: &RateExpr| matches!(e, Num(c) if *c == 0.0);
                let one = |e: &RateExpr| matches!(e, Num(c) if *c == 1.0);
                match op {
                    BinOp::Add if zero(&x) => y,
                    BinOp::Add | BinOp::Sub if zero(&y) => x,
                    BinOp::Sub if zero(&x) => Neg(Box::new(y)).folded(),
                    BinOp::Mul if zero(&x) || zero(&y) => Num(0.0),
                    BinOp::Mul if one(&x) => y,
                    BinOp::Mul | BinOp::Div if one(&y) => x,
                    _ => Binary(*op, Box::new(x), Box::new(y)),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RateExpr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            RateExpr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            RateExpr::Pow(..) => 3,
            _ => 4,
        }
    }
}

/// Prints in the input grammar; the output re-parses to an equal AST.
impl fmt::Display for RateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &RateExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            RateExpr::Num(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{:?})", -c)
            }
            RateExpr::Num(c) => write!(f, "{c:?}"),
            RateExpr::T => write!(f, "t"),
            RateExpr::Neg(a) => {
                // `-` binds a base only, so anything compound gets parentheses.
                write!(f, "-")?;
                wrap(f, a, 4)
            }
            RateExpr::Binary(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                wrap(f, a, prec)?;
                write!(f, " {sym} ")?;
                wrap(f, b, prec + 1)
            }
            RateExpr::Pow(a, n) => {
                wrap(f, a, 4)?;
                if *n < 0 {
                    write!(f, "^-{}", n.unsigned_abs())
                } else {
                    write!(f, "^{n}")
                }
            }
            RateExpr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
