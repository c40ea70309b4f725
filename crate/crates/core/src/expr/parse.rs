//! Recursive-descent parser for the rate grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' int)?
//! base   := number | name | 't' | '(' expr ')'
//!         | ('sin'|'cos'|'exp') '(' expr ')' | '-' base
//! ```

use std::collections::HashMap;

use super::{BinOp, ExprError, Func, RateExpr};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(position: usize, expected: &[&str], found: &Tok) -> ExprError {
    ExprError::Syntax {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.describe(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((pos, tok));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut integral = true;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                integral &= chars[i].1 != '.';
                i += 1;
            }
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let end = chars.get(i).map_or(text.len(), |(p, _)| *p);
            let literal = &text[pos..end];
            let value: f64 = literal.parse().map_err(|_| ExprError::Syntax {
                position: chars[start].0,
                expected: vec!["number".into()],
                found: format!("`{literal}`"),
            })?;
            out.push((pos, Tok::Num(value, integral)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = pos;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(p, _)| *p);
            out.push((start, Tok::Name(text[start..end].to_string())));
            continue;
        }
        return Err(ExprError::Syntax {
            position: pos,
            expected: vec!["number".into(), "name".into(), "operator".into()],
            found: format!("`{c}`"),
        });
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    params: &'a HashMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok, label: &str) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &[label], self.peek()))
        }
    }

    fn expr(&mut self) -> Result<RateExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = RateExpr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<RateExpr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = RateExpr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<RateExpr, ExprError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v, true) if v <= i32::MAX as f64 => {
                let n = v as i32;
                Ok(base.powi(if negative { -n } else { n }))
            }
            other => Err(syntax(pos, &["integer exponent"], &other)),
        }
    }

    fn base(&mut self) -> Result<RateExpr, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v, _) => Ok(RateExpr::Num(v)),
            Tok::Minus => Ok(self.base()?.neg()),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Name(name) => {
                let func = match name.as_str() {
                    "t" => return Ok(RateExpr::T),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    _ => {
                        return self
                            .params
                            .get(&name)
                            .map(|v| RateExpr::Num(*v))
                            .ok_or(ExprError::UnboundParameter(name));
                    }
                };
                self.expect(Tok::LParen, "`(`")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(RateExpr::call(func, arg))
            }
            other => Err(syntax(
                pos,
                &["number", "name", "`t`", "`(`", "function call", "`-`"],
                &other,
            )),
        }
    }
}

/// Parses `text` against the rate grammar, substituting `params` as
/// literals, and returns the folded (canonical) AST.
pub fn parse_rate_expr(text: &str, params: &HashMap<String, f64>) -> Result<RateExpr, ExprError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        at: 0,
        params,
    };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(
            parser.pos(),
            &["operator", "end of input"],
            parser.peek(),
        ));
    }
    Ok(e.folded())
}
