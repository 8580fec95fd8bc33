//! Parser for polynomial expressions in the matrix-variable syntax.
//!
//! Grammar:
//!   expr   := ['-'] term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := base ('^' uint)?
//!   base   := number | 'x[' uint ',' uint ']' | '(' expr ')'
//!
//! Numbers are integers or a/b rationals. There is no implicit
//! multiplication by juxtaposition.

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Frame;
use crate::poly::{PolyRing, Polynomial};

/// Abstract syntax, exposed so round-trip tests can generate trees
/// directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Var { s: usize, t: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Rat(BigInt, BigInt),
    Var(usize, usize),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r')) {
            self.bump();
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.err("expected a digit"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn small_uint(&mut self, what: &str) -> Result<usize> {
        let n = self.uint()?;
        usize::try_from(&n).map_err(|_| self.err(format!("{what} out of range")))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    /// Tokenize one expression (a single line of input).
    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                b'+' => { self.bump(); Tok::Plus }
                b'-' => { self.bump(); Tok::Minus }
                b'*' => { self.bump(); Tok::Star }
                b'^' => { self.bump(); Tok::Caret }
                b'(' => { self.bump(); Tok::LParen }
                b')' => { self.bump(); Tok::RParen }
                b'0'..=b'9' => {
                    let n = self.uint()?;
                    self.skip_ws();
                    if self.peek() == Some(b'/') {
                        self.bump();
                        self.skip_ws();
                        let d = self.uint()?;
                        if d == BigInt::from(0) {
                            return Err(self.err("zero denominator"));
                        }
                        Tok::Rat(n, d)
                    } else {
                        Tok::Int(n)
                    }
                }
                b'x' => {
                    self.bump();
                    self.expect(b'[')?;
                    self.skip_ws();
                    let s = self.small_uint("row index")?;
                    self.expect(b',')?;
                    self.skip_ws();
                    let t = self.small_uint("column index")?;
                    self.expect(b']')?;
                    Tok::Var(s, t)
                }
                _ => return Err(self.err(format!("unexpected character '{}'", c as char))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err_at(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or(self.end);
        Error::Parse { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = u32::try_from(&n)
                        .map_err(|_| self.err_at("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(self.err_at("expected an integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Num(BigRational::from_integer(n))),
            Some(Tok::Rat(n, d)) => Ok(Expr::Num(BigRational::new(n, d))),
            Some(Tok::Var(s, t)) => Ok(Expr::Var { s, t }),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.err_at("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err_at("expected a number, variable, or '('")),
        }
    }
}

/// Parse a single expression into an AST.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let lexer = Lexer::new(src);
    // position of end-of-input for the "unexpected end" message
    let mut end = (1usize, 1usize);
    for c in src.chars() {
        if c == '\n' {
            end.0 += 1;
            end.1 = 1;
        } else {
            end.1 += 1;
        }
    }
    let toks = lexer.tokens()?;
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_at("trailing input after expression"));
    }
    Ok(e)
}

/// Evaluate an AST in a concrete ring, checking variable indices
/// against the ring's frame.
pub fn eval<F: Field>(ring: &PolyRing<F>, e: &Expr) -> Result<Polynomial<F>> {
    match e {
        Expr::Num(q) => Ok(ring.constant(ring.field.from_big_ratio(q.numer(), q.denom())?)),
        Expr::Var { s, t } => ring.var_st(*s, *t),
        Expr::Neg(a) => Ok(ring.neg(&eval(ring, a)?)),
        Expr::Add(a, b) => Ok(ring.add(&eval(ring, a)?, &eval(ring, b)?)),
        Expr::Sub(a, b) => Ok(ring.sub(&eval(ring, a)?, &eval(ring, b)?)),
        Expr::Mul(a, b) => ring.checked_mul(&eval(ring, a)?, &eval(ring, b)?),
        Expr::Pow(a, e) => {
            let base = eval(ring, a)?;
            let mut acc = ring.one();
            for _ in 0..*e {
                acc = ring.checked_mul(&acc, &base)?;
            }
            Ok(acc)
        }
    }
}

/// Parse one expression and evaluate it in `ring`.
pub fn parse_poly<F: Field>(ring: &PolyRing<F>, src: &str) -> Result<Polynomial<F>> {
    eval(ring, &parse_expr(src)?)
}

/// Parse a newline-separated list of expressions, skipping blank lines
/// and `#` comment lines. Parse errors report the line number within
/// the overall input.
pub fn parse_poly_list<F: Field>(ring: &PolyRing<F>, src: &str) -> Result<Vec<Polynomial<F>>> {
    let mut out = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_poly(ring, line) {
            Ok(p) => out.push(p),
            Err(Error::Parse { col, msg, .. }) => {
                return Err(Error::Parse { line: lineno + 1, col, msg })
            }
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("no polynomials in input"));
    }
    Ok(out)
}

/// The frame needed to evaluate an expression: the maximal (s, t)
/// appearing in it.
pub fn required_frame(e: &Expr) -> Frame {
    fn walk(e: &Expr, rows: &mut usize, cols: &mut usize) {
        match e {
            Expr::Num(_) => {}
            Expr::Var { s, t } => {
                *rows = (*rows).max(*s);
                *cols = (*cols).max(*t);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => walk(a, rows, cols),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                walk(a, rows, cols);
                walk(b, rows, cols);
            }
        }
    }
    let (mut rows, mut cols) = (1, 1);
    walk(e, &mut rows, &mut cols);
    Frame::new(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::MonomialOrder;

    fn ring22() -> PolyRing<Rationals> {
        PolyRing::new(Frame::new(2, 2), Rationals, MonomialOrder::grevlex())
    }

    #[test]
    fn parses_family_generator() {
        let r = ring22();
        let p = parse_poly(&r, "x[1,1]*x[1,2] + x[2,1]*x[2,2]").unwrap();
        assert_eq!(p, crate::family::generator(&r, 1, 2).unwrap());
    }

    #[test]
    fn rationals_negation_powers() {
        let r = ring22();
        let p = parse_poly(&r, "1/2 * x[1,1]^2 - x[2,2]").unwrap();
        assert_eq!(p.num_terms(), 2);
        let q = parse_poly(&r, "-(x[1,1] - x[1,1]) + 3/4").unwrap();
        assert_eq!(q, r.constant(num::BigRational::new(3.into(), 4.into())));
    }

    #[test]
    fn no_juxtaposition() {
        let r = ring22();
        assert!(parse_poly(&r, "2 x[1,1]").is_err());
        assert!(parse_poly(&r, "x[1,1] x[1,2]").is_err());
    }

    #[test]
    fn error_positions() {
        let r = ring22();
        match parse_poly(&r, "x[1,1] + @") {
            Err(Error::Parse { line: 1, col: 10, .. }) => {}
            other => panic!("wrong error: {other:?}"),
        }
        match parse_poly(&r, "x[1,1] *") {
            Err(Error::Parse { .. }) => {}
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn frame_bounds_checked() {
        let r = ring22();
        assert!(parse_poly(&r, "x[3,1]").is_err());
        assert!(parse_poly(&r, "x[1,3]").is_err());
        assert!(parse_poly(&r, "x[0,1]").is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let f = PrimeField::new(7).unwrap();
        let r = PolyRing::new(Frame::new(1, 1), f, MonomialOrder::grevlex());
        let p = parse_poly(&r, "7*x[1,1] + 8").unwrap();
        assert_eq!(p, r.constant(1));
        // 1/2 = 4 mod 7
        let q = parse_poly(&r, "1/2").unwrap();
        assert_eq!(q, r.constant(4));
    }

    #[test]
    fn list_parsing() {
        let r = ring22();
        let src = "x[1,1]\n# comment\n\nx[2,2]^2\n";
        let ps = parse_poly_list(&r, src).unwrap();
        assert_eq!(ps.len(), 2);
        match parse_poly_list(&r, "x[1,1]\nbroken!\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn round_trip_display() {
        let r = ring22();
        for src in [
            "x[1,1]^2 + 2*x[1,2]*x[2,1] - 5",
            "1/3*x[2,2]^4 - x[1,1]",
            "-x[1,1] + x[2,1]^2",
        ] {
            let p = parse_poly(&r, src).unwrap();
            let rendered = r.fmt_poly(&p);
            let back = parse_poly(&r, &rendered).unwrap();
            assert_eq!(p, back, "round trip failed for {src}: rendered {rendered}");
        }
    }

    #[test]
    fn required_frame_computed() {
        let e = parse_expr("x[3,1] * x[1,4] + 2").unwrap();
        assert_eq!(required_frame(&e), Frame::new(3, 4));
    }
}
