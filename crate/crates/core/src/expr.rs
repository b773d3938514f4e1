//! A small expression language for analytic functions of `z`.
//!
//! Supported syntax: decimal literals (optionally suffixed with `i`), the
//! constants `i` and `pi`, the variable `z`, the binary operators
//! `+ - * / ^`, unary minus, and the functions `exp`, `log`, `sqrt` and
//! `pow(base, exponent)`. All branches are principal. `^` with a constant
//! integer exponent is an integer power; any other exponent goes through
//! the principal `pow`.
//!
//! Every node propagates value, first and second derivative through
//! [`Jet`], so `h'`, `h''` and `v'` come for free with `h` and `v`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticExpr {
    Const(Complex64),
    Var,
    Add(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Sub(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Mul(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Div(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Neg(Box<AnalyticExpr>),
    PowInt(Box<AnalyticExpr>, i32),
    Pow(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Exp(Box<AnalyticExpr>),
    Log(Box<AnalyticExpr>),
    Sqrt(Box<AnalyticExpr>),
}

impl AnalyticExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(syntax(t.column, format!("unexpected `{}`", t.kind)));
        }
        Ok(e)
    }

    /// Value, first and second derivative at `z`.
    pub fn jet(&self, z: Complex64) -> Jet {
        self.eval_jet(Jet::variable(z))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_value(z)
    }

    fn eval_jet(&self, z: Jet) -> Jet {
        use AnalyticExpr::*;
        match self {
            Const(c) => Jet::constant(*c),
            Var => z,
            Add(a, b) => a.eval_jet(z) + b.eval_jet(z),
            Sub(a, b) => a.eval_jet(z) - b.eval_jet(z),
            Mul(a, b) => a.eval_jet(z) * b.eval_jet(z),
            Div(a, b) => a.eval_jet(z) / b.eval_jet(z),
            Neg(a) => -a.eval_jet(z),
            PowInt(a, n) => a.eval_jet(z).powi(*n),
            Pow(a, b) => a.eval_jet(z).pow(b.eval_jet(z)),
            Exp(a) => a.eval_jet(z).exp(),
            Log(a) => a.eval_jet(z).ln(),
            Sqrt(a) => a.eval_jet(z).sqrt(),
        }
    }

    fn eval_value(&self, z: Complex64) -> Complex64 {
        use AnalyticExpr::*;
        match self {
            Const(c) => *c,
            Var => z,
            Add(a, b) => a.eval_value(z) + b.eval_value(z),
            Sub(a, b) => a.eval_value(z) - b.eval_value(z),
            Mul(a, b) => a.eval_value(z) * b.eval_value(z),
            Div(a, b) => a.eval_value(z) / b.eval_value(z),
            Neg(a) => -a.eval_value(z),
            PowInt(a, n) => a.eval_value(z).powi(*n),
            Pow(a, b) => (b.eval_value(z) * a.eval_value(z).ln()).exp(),
            Exp(a) => a.eval_value(z).exp(),
            Log(a) => a.eval_value(z).ln(),
            Sqrt(a) => a.eval_value(z).sqrt(),
        }
    }

    /// Logarithmic derivative `f'/f` at `z`, distributed over products,
    /// quotients and powers so that `exp` factors never have to be formed.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        use AnalyticExpr::*;
        match self {
            Const(_) => Complex64::new(0.0, 0.0),
            Mul(a, b) => a.log_derivative(z) + b.log_derivative(z),
            Div(a, b) => a.log_derivative(z) - b.log_derivative(z),
            Neg(a) => a.log_derivative(z),
            PowInt(a, n) => *n as f64 * a.log_derivative(z),
            Sqrt(a) => 0.5 * a.log_derivative(z),
            Exp(a) => a.jet(z).d1,
            Pow(a, b) if b.is_constant() => b.eval_value(z) * a.log_derivative(z),
            Pow(a, b) => {
                let bj = b.jet(z);
                bj.d1 * a.eval_value(z).ln() + bj.value * a.log_derivative(z)
            }
            _ => {
                let j = self.jet(z);
                j.d1 / j.value
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        use AnalyticExpr::*;
        match self {
            Const(_) => true,
            Var => false,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Neg(a) | PowInt(a, _) | Exp(a) | Log(a) | Sqrt(a) => a.is_constant(),
        }
    }

    /// Evaluates an expression that does not mention `z`.
    pub fn constant_value(&self) -> Option<Complex64> {
        self.is_constant()
            .then(|| self.eval_value(Complex64::new(0.0, 0.0)))
    }
}

impl fmt::Display for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AnalyticExpr::*;
        match self {
            Const(c) if c.im == 0.0 => write!(f, "({:?})", c.re),
            Const(c) => write!(f, "({:?}+{:?}i)", c.re, c.im),
            Var => write!(f, "z"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Neg(a) => write!(f, "(-{a})"),
            PowInt(a, n) => write!(f, "({a}^{n})"),
            Pow(a, b) => write!(f, "pow({a}, {b})"),
            Exp(a) => write!(f, "exp({a})"),
            Log(a) => write!(f, "log({a})"),
            Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

fn syntax(column: usize, message: String) -> Error {
    Error::Syntax {
        line: 1,
        column,
        message,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Imag(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(x) => write!(f, "{x}"),
            TokenKind::Imag(x) => write!(f, "{x}i"),
            TokenKind::Ident(s) => write!(f, "{s}"),
            TokenKind::Op(c) => write!(f, "{c}"),
            TokenKind::LParen => write!(f, "("),
            TokenKind::RParen => write!(f, ")"),
            TokenKind::Comma => write!(f, ","),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-' || chars[j] == '\u{2212}') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i]
                .iter()
                .map(|&ch| if ch == '\u{2212}' { '-' } else { ch })
                .collect();
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(column, format!("malformed number `{text}`")))?;
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !(i + 1 < chars.len() && chars[i + 1].is_alphanumeric());
            if imaginary {
                i += 1;
                out.push(Token {
                    kind: TokenKind::Imag(value),
                    column,
                });
            } else {
                out.push(Token {
                    kind: TokenKind::Number(value),
                    column,
                });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        let kind = match c {
            '+' | '*' | '/' | '^' => TokenKind::Op(c),
            '-' | '\u{2212}' => TokenKind::Op('-'),
            '\u{00d7}' => TokenKind::Op('*'),
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            ',' => TokenKind::Comma,
            _ => return Err(syntax(column, format!("unexpected character `{c}`"))),
        };
        out.push(Token { kind, column });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.column + 1)
    }

    fn expect(&mut self, kind: TokenKind) -> Result<()> {
        match self.next() {
            Some(t) if t.kind == kind => Ok(()),
            Some(t) => Err(syntax(t.column, format!("expected `{kind}`, found `{}`", t.kind))),
            None => Err(syntax(self.end_column(), format!("expected `{kind}`"))),
        }
    }

    fn expr(&mut self) -> Result<AnalyticExpr> {
        let mut lhs = self.term()?;
        while let Some(Token {
            kind: TokenKind::Op(op @ ('+' | '-')),
            ..
        }) = self.peek().cloned()
        {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                AnalyticExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                AnalyticExpr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<AnalyticExpr> {
        let mut lhs = self.unary()?;
        while let Some(Token {
            kind: TokenKind::Op(op @ ('*' | '/')),
            ..
        }) = self.peek().cloned()
        {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                AnalyticExpr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                AnalyticExpr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<AnalyticExpr> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Op('-')) => {
                self.pos += 1;
                Ok(AnalyticExpr::Neg(Box::new(self.unary()?)))
            }
            Some(TokenKind::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<AnalyticExpr> {
        let base = self.primary()?;
        if let Some(Token {
            kind: TokenKind::Op('^'),
            ..
        }) = self.peek()
        {
            self.pos += 1;
            let exponent = self.unary()?;
            if let Some(c) = exponent.constant_value() {
                if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= 1024.0 {
                    return Ok(AnalyticExpr::PowInt(Box::new(base), c.re as i32));
                }
            }
            return Ok(AnalyticExpr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<AnalyticExpr> {
        let end = self.end_column();
        let t = self
            .next()
            .ok_or_else(|| syntax(end, "unexpected end of expression".into()))?;
        match t.kind {
            TokenKind::Number(x) => Ok(AnalyticExpr::Const(Complex64::new(x, 0.0))),
            TokenKind::Imag(x) => Ok(AnalyticExpr::Const(Complex64::new(0.0, x))),
            TokenKind::LParen => {
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) => match name.as_str() {
                "z" => Ok(AnalyticExpr::Var),
                "i" => Ok(AnalyticExpr::Const(Complex64::new(0.0, 1.0))),
                "pi" => Ok(AnalyticExpr::Const(Complex64::new(std::f64::consts::PI, 0.0))),
                "exp" | "log" | "sqrt" => {
                    self.expect(TokenKind::LParen)?;
                    let arg = Box::new(self.expr()?);
                    self.expect(TokenKind::RParen)?;
                    Ok(match name.as_str() {
                        "exp" => AnalyticExpr::Exp(arg),
                        "log" => AnalyticExpr::Log(arg),
                        _ => AnalyticExpr::Sqrt(arg),
                    })
                }
                "pow" => {
                    self.expect(TokenKind::LParen)?;
                    let base = Box::new(self.expr()?);
                    self.expect(TokenKind::Comma)?;
                    let exponent = Box::new(self.expr()?);
                    self.expect(TokenKind::RParen)?;
                    Ok(AnalyticExpr::Pow(base, exponent))
                }
                _ => Err(syntax(t.column, format!("unknown identifier `{name}`"))),
            },
            other => Err(syntax(t.column, format!("unexpected `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_precedence() {
        let e = AnalyticExpr::parse("1 + 2*z^2").unwrap();
        assert_eq!(e.eval(c(3.0, 0.0)), c(19.0, 0.0));
        let e = AnalyticExpr::parse("-z^2").unwrap();
        assert_eq!(e.eval(c(2.0, 0.0)), c(-4.0, 0.0));
        let e = AnalyticExpr::parse("2^3^2").unwrap();
        assert_eq!(e.eval(c(0.0, 0.0)), c(512.0, 0.0));
    }

    #[test]
    fn imaginary_literals() {
        let e = AnalyticExpr::parse("0.3+0.2i").unwrap();
        assert_eq!(e.constant_value(), Some(c(0.3, 0.2)));
        let e = AnalyticExpr::parse("z - i").unwrap();
        assert_eq!(e.eval(c(0.0, 0.0)), c(0.0, -1.0));
        let e = AnalyticExpr::parse("1e-3i").unwrap();
        assert_eq!(e.constant_value(), Some(c(0.0, 1e-3)));
    }

    #[test]
    fn unicode_minus_accepted() {
        let e = AnalyticExpr::parse("\u{2212}0.5").unwrap();
        assert_eq!(e.constant_value(), Some(c(-0.5, 0.0)));
    }

    #[test]
    fn strip_koenigs_value() {
        let e = AnalyticExpr::parse("log((1+z)/(1-z))").unwrap();
        assert!((e.eval(c(0.5, 0.0)).re - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn trident_derivative_matches_hand_computation() {
        // h = log(1+z^2)/2 - log(1+z) has h' = (z-1)/((1+z^2)(1+z)), so h'(0) = -1.
        let e = AnalyticExpr::parse("0.5*log(1+z^2) - log(1+z)").unwrap();
        let j = e.jet(c(0.0, 0.0));
        assert!((j.d1 - c(-1.0, 0.0)).norm() < 1e-15);
        let z0 = c(0.2, -0.3);
        let j = e.jet(z0);
        let expected = (z0 - 1.0) / ((1.0 + z0 * z0) * (1.0 + z0));
        assert!((j.d1 - expected).norm() < 1e-14);
    }

    #[test]
    fn non_integer_exponent_uses_principal_pow() {
        let e = AnalyticExpr::parse("z^0.5").unwrap();
        assert!(matches!(e, AnalyticExpr::Pow(_, _)));
        assert!((e.eval(c(4.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match AnalyticExpr::parse("1 + * z") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            AnalyticExpr::parse("sin(z)"),
            Err(Error::Syntax { column: 1, .. })
        ));
        assert!(AnalyticExpr::parse("(z").is_err());
        assert!(AnalyticExpr::parse("pow(z)").is_err());
    }

    #[test]
    fn display_round_trips() {
        let src = "pow(z - i, 0.5) * exp(0.4*log((1+z)/(1-z))) / sqrt(1 + z^2)";
        let e = AnalyticExpr::parse(src).unwrap();
        let again = AnalyticExpr::parse(&e.to_string()).unwrap();
        let z0 = c(0.1, 0.2);
        assert!((e.eval(z0) - again.eval(z0)).norm() < 1e-15);
    }
}
