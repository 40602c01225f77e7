//! A small expression language for complex-valued scalar, vector and matrix
//! functions of `z`, used in scenario config files.
//!
//! Grammar (see `docs/grammar.md` for the full EBNF): literals are decimals
//! and the imaginary unit (`i` or `𝕚`); variables are `z`, `x = Re z`,
//! `y = Im z`; operators `+ - * / ^` with `^` restricted to integer
//! exponents; functions `exp, sin, cos, conj, re, im, abs`. Vector and
//! matrix values are rectangular bracket nestings of scalar expressions,
//! allowed only at the top level.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

const MAX_DEPTH: usize = 200;

/// Parsed scalar expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(f64),
    ImaginaryUnit,
    Z,
    X,
    Y,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Conj,
    Re,
    Im,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Conj => "conj",
            Func::Re => "re",
            Func::Im => "im",
            Func::Abs => "abs",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "conj" => Func::Conj,
            "re" => Func::Re,
            "im" => Func::Im,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// A parsed expression: a scalar, a vector of scalars, or a rectangular
/// matrix of scalars.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Scalar(Node),
    Vector(Vec<Node>),
    Matrix(Vec<Vec<Node>>),
}

/// Evaluation result of an [`Expr`].
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Complex64),
    Vector(Vec<Complex64>),
    Matrix(Vec<Vec<Complex64>>),
}

impl Value {
    pub fn as_scalar(&self) -> Result<Complex64> {
        match self {
            Value::Scalar(v) => Ok(*v),
            other => Err(Error::ShapeMismatch {
                expected: "scalar".into(),
                got: other.shape_name(),
            }),
        }
    }

    fn shape_name(&self) -> String {
        match self {
            Value::Scalar(_) => "scalar".into(),
            Value::Vector(v) => format!("vector[{}]", v.len()),
            Value::Matrix(m) => format!("matrix[{}x{}]", m.len(), m.first().map_or(0, Vec::len)),
        }
    }
}

// ---------------------------------------------------------------- tokenizer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    tokens: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer {
            src,
            pos: 0,
            tokens: Vec::new(),
        };
        lx.lex()?;
        Ok(lx.tokens)
    }

    fn lex(&mut self) -> Result<()> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let rest = &self.src[self.pos..];
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                self.pos += c.len_utf8();
                continue;
            }
            let start = self.pos;
            let tok = match c {
                '+' => Some(Tok::Plus),
                '-' | '−' => Some(Tok::Minus),
                '*' | '·' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '𝕚' => Some(Tok::Ident("i".into())),
                _ => None,
            };
            if let Some(t) = tok {
                self.pos += c.len_utf8();
                self.tokens.push((start, t));
                continue;
            }
            if c.is_ascii_digit() || c == '.' {
                let mut end = self.pos;
                let mut seen_dot = false;
                let mut seen_exp = false;
                let b = self.src.as_bytes();
                while end < b.len() {
                    let ch = b[end] as char;
                    if ch.is_ascii_digit() {
                        end += 1;
                    } else if ch == '.' && !seen_dot && !seen_exp {
                        seen_dot = true;
                        end += 1;
                    } else if (ch == 'e' || ch == 'E')
                        && !seen_exp
                        && end > self.pos
                        && end + 1 < b.len()
                        && ((b[end + 1] as char).is_ascii_digit()
                            || ((b[end + 1] as char == '+' || b[end + 1] as char == '-')
                                && end + 2 < b.len()
                                && (b[end + 2] as char).is_ascii_digit()))
                    {
                        seen_exp = true;
                        end += 1;
                        if b[end] as char == '+' || b[end] as char == '-' {
                            end += 1;
                        }
                    } else {
                        break;
                    }
                }
                let text = &self.src[self.pos..end];
                let v: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("malformed number '{text}'"),
                    expected: "a decimal literal".into(),
                })?;
                self.pos = end;
                self.tokens.push((start, Tok::Number(v)));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let mut end = self.pos;
                let b = self.src.as_bytes();
                while end < b.len() && (b[end] as char).is_ascii_alphanumeric() {
                    end += 1;
                }
                let name = self.src[self.pos..end].to_string();
                self.pos = end;
                self.tokens.push((start, Tok::Ident(name)));
                continue;
            }
            return Err(Error::Parse {
                offset: start,
                message: format!("unexpected character '{c}'"),
                expected: "a number, identifier or operator".into(),
            });
        }
        Ok(())
    }
}

// ------------------------------------------------------------------ parser

struct Parser {
    tokens: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.idx).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, expected: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.idx += 1;
                Ok(())
            }
            Some(t) => Err(Error::Parse {
                offset: self.offset(),
                message: format!("found {t}"),
                expected: expected.into(),
            }),
            None => Err(Error::Parse {
                offset: self.end,
                message: "unexpected end of input".into(),
                expected: expected.into(),
            }),
        }
    }

    fn parse_sum(&mut self, depth: usize) -> Result<Node> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse {
                offset: self.offset(),
                message: "expression is nested too deeply".into(),
                expected: "a shallower expression".into(),
            });
        }
        let mut lhs = self.parse_term(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    let rhs = self.parse_term(depth + 1)?;
                    lhs = Node::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    let rhs = self.parse_term(depth + 1)?;
                    lhs = Node::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self, depth: usize) -> Result<Node> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse {
                offset: self.offset(),
                message: "expression is nested too deeply".into(),
                expected: "a shallower expression".into(),
            });
        }
        let mut lhs = self.parse_unary(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    let rhs = self.parse_unary(depth + 1)?;
                    lhs = Node::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let rhs = self.parse_unary(depth + 1)?;
                    lhs = Node::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self, depth: usize) -> Result<Node> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse {
                offset: self.offset(),
                message: "expression is nested too deeply".into(),
                expected: "a shallower expression".into(),
            });
        }
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.idx += 1;
            let inner = self.parse_unary(depth + 1)?;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.parse_power(depth + 1)
    }

    fn parse_power(&mut self, depth: usize) -> Result<Node> {
        let base = self.parse_atom(depth + 1)?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.idx += 1;
            let mut sign = 1i32;
            if matches!(self.peek(), Some(Tok::Minus)) {
                self.idx += 1;
                sign = -1;
            }
            let off = self.offset();
            match self.bump() {
                Some(Tok::Number(v)) => {
                    if v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
                        return Err(Error::Parse {
                            offset: off,
                            message: format!("exponent {v} is not an integer"),
                            expected: "an integer exponent".into(),
                        });
                    }
                    Ok(Node::Pow(Box::new(base), sign * v as i32))
                }
                Some(t) => Err(Error::Parse {
                    offset: off,
                    message: format!("found {t}"),
                    expected: "an integer exponent".into(),
                }),
                None => Err(Error::Parse {
                    offset: self.end,
                    message: "unexpected end of input".into(),
                    expected: "an integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self, depth: usize) -> Result<Node> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse {
                offset: self.offset(),
                message: "expression is nested too deeply".into(),
                expected: "a shallower expression".into(),
            });
        }
        let off = self.offset();
        match self.bump() {
            Some(Tok::Number(v)) => Ok(Node::Number(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(Node::ImaginaryUnit),
                "z" => Ok(Node::Z),
                "x" => Ok(Node::X),
                "y" => Ok(Node::Y),
                other => {
                    if let Some(f) = Func::from_name(other) {
                        self.expect(&Tok::LParen, "'(' after function name")?;
                        let arg = self.parse_sum(depth + 1)?;
                        self.expect(&Tok::RParen, "')' closing the call")?;
                        Ok(Node::Call(f, Box::new(arg)))
                    } else {
                        Err(Error::Parse {
                            offset: off,
                            message: format!("unknown identifier '{other}'"),
                            expected: "one of z, x, y, i, exp, sin, cos, conj, re, im, abs".into(),
                        })
                    }
                }
            },
            Some(Tok::LParen) => {
                let inner = self.parse_sum(depth + 1)?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::LBracket) => Err(Error::Parse {
                offset: off,
                message: "matrix literal inside arithmetic".into(),
                expected: "brackets only at the top level".into(),
            }),
            Some(t) => Err(Error::Parse {
                offset: off,
                message: format!("found {t}"),
                expected: "a number, variable, function call or '('".into(),
            }),
            None => Err(Error::Parse {
                offset: self.end,
                message: "unexpected end of input".into(),
                expected: "a number, variable, function call or '('".into(),
            }),
        }
    }

    /// Bracketed row: either a scalar expression or `[e1, e2, ...]`.
    fn parse_row(&mut self) -> Result<Vec<Node>> {
        if matches!(self.peek(), Some(Tok::LBracket)) {
            self.idx += 1;
            let mut row = vec![self.parse_sum(0)?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.idx += 1;
                row.push(self.parse_sum(0)?);
            }
            self.expect(&Tok::RBracket, "']' closing the row")?;
            Ok(row)
        } else {
            Ok(vec![self.parse_sum(0)?])
        }
    }

    fn parse_bracketed(&mut self) -> Result<Expr> {
        let open_off = self.offset();
        self.expect(&Tok::LBracket, "'['")?;
        let first_is_row = matches!(self.peek(), Some(Tok::LBracket));
        if first_is_row {
            // matrix: [[..],[..],...]
            let mut rows = vec![self.parse_row()?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.idx += 1;
                let off = self.offset();
                let row = self.parse_row()?;
                if row.len() != rows[0].len() {
                    return Err(Error::Parse {
                        offset: off,
                        message: format!(
                            "matrix row has {} entries, previous rows have {}",
                            row.len(),
                            rows[0].len()
                        ),
                        expected: "rectangular rows".into(),
                    });
                }
                rows.push(row);
            }
            self.expect(&Tok::RBracket, "']' closing the matrix")?;
            Ok(Expr::Matrix(rows))
        } else {
            // vector: [e1, e2, ...]
            let mut entries = vec![self.parse_sum(0)?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.idx += 1;
                entries.push(self.parse_sum(0)?);
            }
            self.expect(&Tok::RBracket, "']' closing the vector")?;
            if entries.is_empty() {
                return Err(Error::Parse {
                    offset: open_off,
                    message: "empty brackets".into(),
                    expected: "at least one entry".into(),
                });
            }
            Ok(Expr::Vector(entries))
        }
    }
}

/// Parse an expression; on failure the error carries the byte offset and the
/// expected-token set.
pub fn parse(text: &str) -> Result<Expr> {
    let tokens = Lexer::run(text)?;
    let mut p = Parser {
        tokens,
        idx: 0,
        end: text.len(),
    };
    let expr = if matches!(p.peek(), Some(Tok::LBracket)) {
        p.parse_bracketed()?
    } else {
        Expr::Scalar(p.parse_sum(0)?)
    };
    if p.idx != p.tokens.len() {
        return Err(Error::Parse {
            offset: p.offset(),
            message: format!("trailing input: found {}", p.peek().unwrap()),
            expected: "end of input".into(),
        });
    }
    Ok(expr)
}

// -------------------------------------------------------------- evaluation

fn eval_node(node: &Node, z: Complex64) -> Result<Complex64> {
    let v = match node {
        Node::Number(v) => Complex64::new(*v, 0.0),
        Node::ImaginaryUnit => Complex64::new(0.0, 1.0),
        Node::Z => z,
        Node::X => Complex64::new(z.re, 0.0),
        Node::Y => Complex64::new(z.im, 0.0),
        Node::Neg(a) => -eval_node(a, z)?,
        Node::Add(a, b) => eval_node(a, z)? + eval_node(b, z)?,
        Node::Sub(a, b) => eval_node(a, z)? - eval_node(b, z)?,
        Node::Mul(a, b) => eval_node(a, z)? * eval_node(b, z)?,
        Node::Div(a, b) => {
            let den = eval_node(b, z)?;
            if den.norm_sqr() == 0.0 {
                return Err(Error::DivisionByZero(z));
            }
            eval_node(a, z)? / den
        }
        Node::Pow(a, k) => {
            let base = eval_node(a, z)?;
            if *k < 0 && base.norm_sqr() == 0.0 {
                return Err(Error::DivisionByZero(z));
            }
            base.powi(*k)
        }
        Node::Call(f, a) => {
            let arg = eval_node(a, z)?;
            match f {
                Func::Exp => arg.exp(),
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Conj => arg.conj(),
                Func::Re => Complex64::new(arg.re, 0.0),
                Func::Im => Complex64::new(arg.im, 0.0),
                Func::Abs => Complex64::new(arg.norm(), 0.0),
            }
        }
    };
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::EvalOverflow(z));
    }
    Ok(v)
}

/// Evaluate an expression at `z`; the result shape is fixed by the AST.
pub fn eval(expr: &Expr, z: Complex64) -> Result<Value> {
    match expr {
        Expr::Scalar(n) => Ok(Value::Scalar(eval_node(n, z)?)),
        Expr::Vector(v) => Ok(Value::Vector(
            v.iter().map(|n| eval_node(n, z)).collect::<Result<_>>()?,
        )),
        Expr::Matrix(rows) => Ok(Value::Matrix(
            rows.iter()
                .map(|row| row.iter().map(|n| eval_node(n, z)).collect::<Result<_>>())
                .collect::<Result<_>>()?,
        )),
    }
}

// ------------------------------------------------------------ pretty-print

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        _ => 5,
    }
}

fn print_node(node: &Node, out: &mut String) {
    fn child(node: &Node, min_prec: u8, out: &mut String) {
        if precedence(node) < min_prec {
            out.push('(');
            print_node(node, out);
            out.push(')');
        } else {
            print_node(node, out);
        }
    }
    match node {
        Node::Number(v) => out.push_str(&format!("{v}")),
        Node::ImaginaryUnit => out.push('i'),
        Node::Z => out.push('z'),
        Node::X => out.push('x'),
        Node::Y => out.push('y'),
        Node::Neg(a) => {
            out.push('-');
            child(a, 3, out);
        }
        Node::Add(a, b) => {
            child(a, 1, out);
            out.push_str(" + ");
            child(b, 2, out);
        }
        Node::Sub(a, b) => {
            child(a, 1, out);
            out.push_str(" - ");
            child(b, 2, out);
        }
        Node::Mul(a, b) => {
            child(a, 2, out);
            out.push('*');
            child(b, 3, out);
        }
        Node::Div(a, b) => {
            child(a, 2, out);
            out.push('/');
            child(b, 5, out);
        }
        Node::Pow(a, k) => {
            child(a, 5, out);
            out.push('^');
            if *k < 0 {
                out.push_str(&format!("-{}", -(*k as i64)));
            } else {
                out.push_str(&format!("{k}"));
            }
        }
        Node::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            print_node(a, out);
            out.push(')');
        }
    }
}

/// Canonical text form; `parse(pretty(e))` reproduces `e`.
pub fn pretty(expr: &Expr) -> String {
    let mut out = String::new();
    match expr {
        Expr::Scalar(n) => print_node(n, &mut out),
        Expr::Vector(v) => {
            out.push('[');
            for (k, n) in v.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                print_node(n, &mut out);
            }
            out.push(']');
        }
        Expr::Matrix(rows) => {
            out.push('[');
            for (r, row) in rows.iter().enumerate() {
                if r > 0 {
                    out.push_str(", ");
                }
                out.push('[');
                for (k, n) in row.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    print_node(n, &mut out);
                }
                out.push(']');
            }
            out.push(']');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_scalar(text: &str, z: Complex64) -> Complex64 {
        eval(&parse(text).unwrap(), z).unwrap().as_scalar().unwrap()
    }

    #[test]
    fn z_times_conj_z_is_norm_squared() {
        let v = eval_scalar("z*conj(z)", Complex64::new(1.0, 1.0));
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_matrix_literal() {
        let e = parse("[[0,-1],[-1,0]]").unwrap();
        match eval(&e, Complex64::new(0.3, 0.7)).unwrap() {
            Value::Matrix(m) => {
                assert_eq!(m.len(), 2);
                assert_eq!(m[0].len(), 2);
                assert_eq!(m[0][1], Complex64::new(-1.0, 0.0));
                assert_eq!(m[1][0], Complex64::new(-1.0, 0.0));
                assert_eq!(m[0][0], Complex64::new(0.0, 0.0));
            }
            other => panic!("expected matrix, got {other:?}"),
        }
    }

    #[test]
    fn exp_of_two_x_at_half() {
        let v = eval_scalar("exp(2*x)", Complex64::new(0.5, 0.0));
        assert!((v.re - std::f64::consts::E).abs() < 1e-12);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn identity_reconstruction() {
        let z = Complex64::new(3.0, 4.0);
        assert!((eval_scalar("x+i*y", z) - z).norm() < 1e-15);
        // unicode imaginary unit spelling
        assert!((eval_scalar("x+𝕚*y", z) - z).norm() < 1e-15);
    }

    #[test]
    fn simple_arithmetic() {
        let v = eval_scalar("1/(z-2)", Complex64::new(0.0, 0.0));
        assert!((v - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        let v = eval_scalar("conj(z)^2", Complex64::new(1.0, 1.0));
        assert!((v - Complex64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn division_by_zero_reports_point() {
        let e = parse("1/(z-2)").unwrap();
        match eval(&e, Complex64::new(2.0, 0.0)) {
            Err(Error::DivisionByZero(z)) => assert_eq!(z, Complex64::new(2.0, 0.0)),
            other => panic!("expected division by zero, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse("z + * 3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("exp 3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("[[1,2],[3]]") {
            Err(Error::Parse { message, .. }) => assert!(message.contains("entries")),
            other => panic!("expected row mismatch, got {other:?}"),
        }
    }

    #[test]
    fn integer_exponents_only() {
        assert!(parse("z^2").is_ok());
        assert!(parse("z^-1").is_ok());
        assert!(parse("z^1.5").is_err());
        assert!(parse("z^z").is_err());
    }

    #[test]
    fn pretty_parse_is_fixed_point() {
        for text in [
            "z*conj(z)",
            "1/(z-2)",
            "-(x + i*y)^3",
            "exp(2*x) - sin(z)*cos(z)",
            "[[0,-1],[-1,0]]",
            "[z, i*z^2]",
            "2e-3*z + 1.5",
        ] {
            let once = pretty(&parse(text).unwrap());
            let twice = pretty(&parse(&once).unwrap());
            assert_eq!(once, twice, "not a fixed point for {text}");
            // and the reparse evaluates identically
            let z = Complex64::new(0.37, -1.21);
            let a = eval(&parse(text).unwrap(), z).unwrap();
            let b = eval(&parse(&once).unwrap(), z).unwrap();
            match (a, b) {
                (Value::Scalar(a), Value::Scalar(b)) => assert!((a - b).norm() < 1e-12),
                (a, b) => assert_eq!(a, b),
            }
        }
    }

    proptest! {
        #[test]
        fn parser_never_panics(s in "\\PC*") {
            let _ = parse(&s);
        }

        #[test]
        fn parser_never_panics_ascii_soup(s in "[ 0-9a-z+*/()\\[\\],.^-]{0,64}") {
            let _ = parse(&s);
        }

        #[test]
        fn x_plus_iy_equals_z(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let z = Complex64::new(re, im);
            let e = parse("x+i*y").unwrap();
            let v = eval(&e, z).unwrap().as_scalar().unwrap();
            prop_assert!((v - z).norm() < 1e-12);
        }
    }
}
