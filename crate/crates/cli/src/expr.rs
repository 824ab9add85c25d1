//! Expressions over the three target algebras.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := nat | x<i> | D<i> | e<i> | p<k> | P(<k>) | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit.

use std::fmt;

use steenrod_core::poly::{elementary_symmetric, power_sum};
use steenrod_core::{
    Error, FpScalar, Grading, NilHeckeElement, Polynomial, Prime, Result as CoreResult, SteenrodElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Polynomial,
    NilHecke,
    Steenrod,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Polynomial => "polynomial",
            Target::NilHecke => "nilHecke",
            Target::Steenrod => "Steenrod",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(Sign, Term)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub atom: Atom,
    pub exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Int(u64),
    X(usize),
    D(usize),
    /// Elementary symmetric polynomial `e_i`.
    E(usize),
    /// Power sum `p_k`.
    PowerSum(u32),
    P(u32),
    Group(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(char, u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "'{v}'"),
            Tok::Ident(c, v) => write!(f, "'{c}{v}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, message: String| ParseError { column: column + 1, message };
    let digits = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            return None;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let v = digits(&mut i).ok_or_else(|| err(start, "integer literal too large".into()))?;
                out.push((Tok::Int(v), start));
                continue;
            }
            'x' | 'D' | 'e' | 'p' | 'P' => {
                i += 1;
                if c == 'P' {
                    out.push((Tok::Ident('P', 0), start));
                    continue;
                }
                let v = match digits(&mut i) {
                    Some(v) => v,
                    None if i < chars.len() && chars[i].is_ascii_digit() => {
                        return Err(err(start, "index too large".into()))
                    }
                    None => return Err(err(start, format!("expected an index after '{c}'"))),
                };
                out.push((Tok::Ident(c, v), start));
                continue;
            }
            other => return Err(err(start, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    target: Target,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1 + 1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.column(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let first = if self.peek() == Tok::Minus {
            self.bump();
            Sign::Minus
        } else {
            Sign::Plus
        };
        terms.push((first, self.term()?));
        loop {
            let sign = match self.peek() {
                Tok::Plus => Sign::Plus,
                Tok::Minus => Sign::Minus,
                _ => break,
            };
            self.bump();
            terms.push((sign, self.term()?));
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(Term { factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let atom = self.atom()?;
        let exponent = if self.peek() == Tok::Caret {
            self.bump();
            match self.peek() {
                Tok::Int(v) => {
                    let e = u32::try_from(v).or_else(|_| self.error("exponent too large"))?;
                    self.bump();
                    Some(e)
                }
                other => return self.error(format!("expected a natural-number exponent, found {other}")),
            }
        } else {
            None
        };
        Ok(Factor { atom, exponent })
    }

    fn index(&self, c: char, v: u64) -> Result<usize, ParseError> {
        if v == 0 {
            return self.error(format!("'{c}' indices start at 1"));
        }
        usize::try_from(v).or_else(|_| self.error("index too large"))
    }

    fn allowed(&self, what: &str, ok: bool) -> Result<(), ParseError> {
        if ok {
            Ok(())
        } else {
            self.error(format!("{what} is not allowed in a {} expression", self.target))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.target;
        let atom = match self.peek() {
            Tok::Int(v) => Atom::Int(v),
            Tok::Ident('x', v) => {
                self.allowed("a variable", t != Target::Steenrod)?;
                Atom::X(self.index('x', v)?)
            }
            Tok::Ident('D', v) => {
                self.allowed("a divided difference", t == Target::NilHecke)?;
                Atom::D(self.index('D', v)?)
            }
            Tok::Ident('e', v) => {
                self.allowed("a symmetric polynomial", t != Target::Steenrod)?;
                Atom::E(self.index('e', v)?)
            }
            Tok::Ident('p', v) => {
                self.allowed("a power sum", t != Target::Steenrod)?;
                Atom::PowerSum(self.index('p', v)? as u32)
            }
            Tok::Ident('P', _) => {
                self.allowed("a reduced power", t == Target::Steenrod)?;
                self.bump();
                self.expect(Tok::LParen)?;
                let k = match self.peek() {
                    Tok::Int(v) => u32::try_from(v).or_else(|_| self.error("power too large"))?,
                    other => return self.error(format!("expected the power of P, found {other}")),
                };
                self.bump();
                if self.peek() != Tok::RParen {
                    return self.error(format!("expected ')', found {}", self.peek()));
                }
                Atom::P(k)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Tok::RParen {
                    return self.error(format!("expected ')', found {}", self.peek()));
                }
                Atom::Group(Box::new(inner))
            }
            other => return self.error(format!("expected an operand, found {other}")),
        };
        self.bump();
        Ok(atom)
    }
}

pub fn parse(src: &str, target: Target) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, target };
    let e = p.expr()?;
    if p.peek() != Tok::End {
        return p.error(format!("unexpected {} after expression", p.peek()));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sign, term)) in self.terms.iter().enumerate() {
            match (i, sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => f.write_str("-")?,
                (_, Sign::Plus) => f.write_str(" + ")?,
                (_, Sign::Minus) => f.write_str(" - ")?,
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{}", factor.atom)?;
            if let Some(e) = factor.exponent {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(v) => write!(f, "{v}"),
            Atom::X(i) => write!(f, "x{i}"),
            Atom::D(i) => write!(f, "D{i}"),
            Atom::E(i) => write!(f, "e{i}"),
            Atom::PowerSum(k) => write!(f, "p{k}"),
            Atom::P(k) => write!(f, "P({k})"),
            Atom::Group(e) => write!(f, "({e})"),
        }
    }
}

/// Canonical text form; `parse(render(e))` gives back `e`.
pub fn render(e: &Expr) -> String {
    e.to_string()
}

impl Expr {
    /// The number of polynomial variables the expression refers to.
    pub fn arity(&self) -> usize {
        self.atoms().map(|a| match a {
            Atom::X(i) | Atom::E(i) => *i,
            Atom::D(i) => i + 1,
            _ => 0,
        })
        .max()
        .unwrap_or(0)
    }

    fn atoms(&self) -> Box<dyn Iterator<Item = &Atom> + '_> {
        Box::new(self.terms.iter().flat_map(|(_, t)| t.factors.iter()).flat_map(|f| match &f.atom {
            Atom::Group(inner) => inner.atoms(),
            a => Box::new(std::iter::once(a)) as Box<dyn Iterator<Item = &Atom>>,
        }))
    }
}

/// Evaluation into a ring with integer scalars.
trait Ring: Sized + Clone {
    fn int(&self, v: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

fn eval<R: Ring>(e: &Expr, unit: &R, atom: &dyn Fn(&Atom) -> CoreResult<R>) -> CoreResult<R> {
    let mut acc = unit.int(0);
    for (sign, term) in &e.terms {
        let mut t = unit.int(1);
        for f in &term.factors {
            let base = match &f.atom {
                Atom::Group(inner) => eval(inner, unit, atom)?,
                Atom::Int(v) => unit.int(*v),
                a => atom(a)?,
            };
            let value = match f.exponent {
                None => base,
                Some(k) => (0..k).fold(unit.int(1), |acc, _| acc.mul(&base)),
            };
            t = t.mul(&value);
        }
        acc = match sign {
            Sign::Plus => acc.add(&t),
            Sign::Minus => acc.add(&t.neg()),
        };
    }
    Ok(acc)
}

fn scalar(v: u64, p: Prime) -> FpScalar {
    FpScalar::new((v % p.get() as u64) as i64, p)
}

impl Ring for Polynomial {
    fn int(&self, v: u64) -> Self {
        Polynomial::one(self.prime(), self.num_vars()).scale(scalar(v, self.prime()))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for NilHeckeElement {
    fn int(&self, v: u64) -> Self {
        NilHeckeElement::one(self.prime(), self.num_vars()).scale(scalar(v, self.prime()))
    }
    fn add(&self, other: &Self) -> Self {
        NilHeckeElement::add(self, other)
    }
    fn neg(&self) -> Self {
        self.scale(FpScalar::new(-1, self.prime()))
    }
    fn mul(&self, other: &Self) -> Self {
        NilHeckeElement::mul(self, other)
    }
}

impl Ring for SteenrodElement {
    fn int(&self, v: u64) -> Self {
        SteenrodElement::one(self.prime()).with_grading(self.grading()).scale(scalar(v, self.prime()))
    }
    fn add(&self, other: &Self) -> Self {
        SteenrodElement::add(self, other)
    }
    fn neg(&self) -> Self {
        self.scale(FpScalar::new(-1, self.prime()))
    }
    fn mul(&self, other: &Self) -> Self {
        SteenrodElement::mul(self, other)
    }
}

fn check_arity(e: &Expr, n: usize) -> CoreResult<()> {
    if e.arity() > n {
        return Err(Error::Domain(format!("expression needs {} variables but only {n} are configured", e.arity())));
    }
    Ok(())
}

fn poly_atom(a: &Atom, p: Prime, n: usize) -> CoreResult<Polynomial> {
    match a {
        Atom::X(i) => Ok(Polynomial::var(p, n, *i)),
        Atom::E(i) => elementary_symmetric(*i, n, p),
        Atom::PowerSum(k) => power_sum(*k, n, p),
        other => Err(Error::Domain(format!("'{other}' is not a polynomial"))),
    }
}

pub fn eval_polynomial(e: &Expr, p: Prime, n: usize) -> CoreResult<Polynomial> {
    check_arity(e, n)?;
    eval(e, &Polynomial::zero(p, n), &|a| poly_atom(a, p, n))
}

pub fn eval_nilhecke(e: &Expr, p: Prime, n: usize) -> CoreResult<NilHeckeElement> {
    check_arity(e, n)?;
    eval(e, &NilHeckeElement::zero(p, n), &|a| match a {
        Atom::D(i) => Ok(NilHeckeElement::d(p, n, *i)),
        other => poly_atom(other, p, n).map(|f| NilHeckeElement::multiplication(&f)),
    })
}

pub fn eval_steenrod(e: &Expr, p: Prime, grading: Grading) -> CoreResult<SteenrodElement> {
    eval(e, &SteenrodElement::zero(p).with_grading(grading), &|a| match a {
        Atom::P(k) => Ok(SteenrodElement::power(p, *k).with_grading(grading)),
        other => Err(Error::Domain(format!("'{other}' is not a Steenrod operation"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let e = parse("x1^2*x2 + 3*x3", Target::Polynomial).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.arity(), 3);
        let e = parse("P(2)*P(1)", Target::Steenrod).unwrap();
        assert_eq!(e.terms[0].1.factors.len(), 2);
        let e = parse("D1*D2*D1 - D2*D1*D2", Target::NilHecke).unwrap();
        assert_eq!(e.terms[1].0, Sign::Minus);
        assert!(eval_nilhecke(&e, pr(3), 3).unwrap().is_zero());
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse("x1 ^ 2 *x2+3 * ( x3 - 1 )", Target::Polynomial).unwrap();
        let b = parse("x1^2*x2+3*(x3-1)", Target::Polynomial).unwrap();
        assert_eq!(a, b);
        assert_eq!(render(&a), "x1^2*x2 + 3*(x3 - 1)");
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("x1 x2", Target::Polynomial).unwrap_err();
        assert_eq!(e.column, 4);
        let e = parse("x1 + D1", Target::Polynomial).unwrap_err();
        assert_eq!(e.column, 6);
        assert!(e.message.contains("not allowed"));
        assert!(parse("P(1)*x1", Target::Steenrod).is_err());
        assert!(parse("x0", Target::Polynomial).is_err());
        assert!(parse("(x1", Target::Polynomial).is_err());
        assert!(parse("x1^", Target::Polynomial).is_err());
        assert!(parse("", Target::Polynomial).is_err());
        assert!(parse("x1 # 2", Target::Polynomial).is_err());
    }

    #[test]
    fn evaluation() {
        let p = pr(3);
        let e = parse("-(x1 + x2)^2 + 4", Target::Polynomial).unwrap();
        assert_eq!(eval_polynomial(&e, p, 2).unwrap().to_string(), "2*x1^2 + x1*x2 + 2*x2^2 + 1");
        let e = parse("2*P(1)^2", Target::Steenrod).unwrap();
        assert_eq!(eval_steenrod(&e, p, Grading::Topological).unwrap().to_string(), "2*P(1)*P(1)");
        let e = parse("x3", Target::Polynomial).unwrap();
        assert!(eval_polynomial(&e, p, 2).is_err());
        let e = parse("D1*x1 - x2*D1", Target::NilHecke).unwrap();
        assert_eq!(eval_nilhecke(&e, p, 2).unwrap(), NilHeckeElement::one(p, 2));
    }
}
