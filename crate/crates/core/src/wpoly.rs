//! Weighted-graded polynomial arithmetic in three variables over `Q`,
//! the quotient algebra `A = Q[x1,x2,x3]/(f)`, and the text grammar for
//! polynomial expressions.
//!
//! Monomials carry a fixed weighted-degree order refined by lexicographic
//! order with `x1 > x2 > x3`. Since `(f)` is principal, `{f}` is a Groebner
//! basis for any order, so plain division by `f` computes canonical normal
//! forms in `A`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::qlinalg::Rational;

pub const NVARS: usize = 3;

/// A monomial `x1^a1 x2^a2 x3^a3`.
///
/// The derived `Ord` is plain lexicographic on the exponent triple (with
/// `x1` most significant); it is used as a canonical storage key. Order
/// comparisons that matter mathematically go through [`WeightSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Quotient monomial; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            assert!(other.0[i] <= self.0[i], "monomial not divisible");
            e[i] = self.0[i] - other.0[i];
        }
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for i in 0..NVARS {
            match self.0[i] {
                0 => {}
                e => {
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    if e == 1 {
                        write!(f, "x{}", i + 1)?;
                    } else {
                        write!(f, "x{}^{}", i + 1, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Weight data `(d; d1, d2, d3)`: positive variable weights and the total
/// weight of the defining polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightSystem {
    pub total: i64,
    pub vars: [i64; NVARS],
}

impl WeightSystem {
    pub fn new(total: i64, vars: [i64; NVARS]) -> Self {
        assert!(total >= 1 && vars.iter().all(|&d| d >= 1), "weights must be positive");
        WeightSystem { total, vars }
    }

    /// `d - (d1 + d2 + d3)`, the degree shift governing where cohomology
    /// concentrates.
    pub fn degree_shift(&self) -> i64 {
        self.total - self.vars.iter().sum::<i64>()
    }
}

/// Weighted degree of a monomial under the given weights.
pub fn weighted_degree(m: &Monomial, w: &WeightSystem) -> i64 {
    m.0.iter()
        .zip(&w.vars)
        .map(|(&e, &d)| e as i64 * d)
        .sum()
}

/// Weighted-degree order refined by lex with `x1 > x2 > x3`.
pub fn weighted_cmp(a: &Monomial, b: &Monomial, w: &WeightSystem) -> std::cmp::Ordering {
    weighted_degree(a, w)
        .cmp(&weighted_degree(b, w))
        .then_with(|| a.cmp(b))
}

/// A polynomial in `Q[x1,x2,x3]`: map from monomials to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        Poly::from_monomial(Monomial::var(i), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0;
            let k = e[i];
            e[i] -= 1;
            out.insert(Monomial(e), c * Rational::from_integer((k as i64).into()));
        }
        out
    }

    /// Splits into weighted-homogeneous components keyed by degree.
    pub fn homogeneous_components(&self, w: &WeightSystem) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(weighted_degree(m, w))
                .or_insert_with(Poly::zero)
                .insert(*m, c.clone());
        }
        out
    }

    /// The common weighted degree of all terms, or `None` when the polynomial
    /// is zero or mixes degrees.
    pub fn homogeneous_degree(&self, w: &WeightSystem) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| weighted_degree(m, w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// True when every term has weighted degree `e`; the zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of_degree(&self, w: &WeightSystem, e: i64) -> bool {
        self.terms.keys().all(|m| weighted_degree(m, w) == e)
    }

    /// Largest monomial in the weighted order, with its coefficient.
    pub fn leading_term(&self, w: &WeightSystem) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| weighted_cmp(a, b, w))
            .map(|(m, c)| (*m, c.clone()))
    }
}

impl fmt::Display for Poly {
    /// Canonical printing in the same grammar [`parse_poly`] accepts; the
    /// print-parse cycle is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending lex so x1-heavy terms print first
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                if abs.is_integer() {
                    factors.push(format!("{}", abs.numer()));
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for i in 0..NVARS {
                match m.0[i] {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("defining polynomial is zero")]
    ZeroPolynomial,
    #[error("defining polynomial is a unit")]
    UnitPolynomial,
    #[error("polynomial is not weighted homogeneous: monomial {0} has degree {1}, expected {2}")]
    NotHomogeneous(Monomial, i64, i64),
}

/// The quotient algebra `A = Q[x1,x2,x3]/(f)` for a weighted-homogeneous `f`.
///
/// Normal forms are remainders of division by `f` with respect to the
/// weighted-degree-lex order; the leading monomial of `f` is fixed once at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAlgebra {
    f: Poly,
    weights: WeightSystem,
    lead: Monomial,
    lead_coeff: Rational,
}

impl WeightedAlgebra {
    /// Builds the algebra from `f` and variable weights, deriving the total
    /// weight and validating homogeneity. Irreducibility of `f` (so that `A`
    /// is a domain) is the caller's obligation and is not checked.
    pub fn new(f: Poly, var_weights: [i64; NVARS]) -> Result<Self, AlgebraError> {
        if f.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let probe = WeightSystem::new(1, var_weights);
        let degrees: Vec<i64> = f.terms.keys().map(|m| weighted_degree(m, &probe)).collect();
        let total = degrees[0];
        for (m, &d) in f.terms.keys().zip(&degrees) {
            if d != total {
                return Err(AlgebraError::NotHomogeneous(*m, d, total));
            }
        }
        if total == 0 {
            return Err(AlgebraError::UnitPolynomial);
        }
        let weights = WeightSystem::new(total, var_weights);
        let (lead, lead_coeff) = f.leading_term(&weights).expect("nonzero");
        Ok(WeightedAlgebra {
            f,
            weights,
            lead,
            lead_coeff,
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn leading_monomial(&self) -> &Monomial {
        &self.lead
    }

    /// Partial derivatives of the defining polynomial.
    pub fn jacobian(&self) -> [Poly; NVARS] {
        [self.f.derivative(0), self.f.derivative(1), self.f.derivative(2)]
    }

    /// Remainder of division of `p` by `f`: the canonical representative of
    /// `p` in `A`. Idempotent, `Q`-linear, and no monomial of the result is
    /// divisible by the leading monomial of `f`.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        let mut rem = p.clone();
        loop {
            let target = rem
                .terms
                .iter()
                .filter(|(m, _)| self.lead.divides(m))
                .max_by(|(a, _), (b, _)| weighted_cmp(a, b, &self.weights))
                .map(|(m, c)| (*m, c.clone()));
            let Some((m, c)) = target else {
                return rem;
            };
            let q = Poly::from_monomial(m.div(&self.lead), c / &self.lead_coeff);
            rem = rem.sub(&q.mul(&self.f));
        }
    }

    /// Product followed by normal form.
    pub fn nf_mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&a.mul(b))
    }

    /// Monomial basis of the graded piece `A_e`: monomials of weighted degree
    /// `e` not divisible by the leading monomial of `f`. Empty for `e < 0`.
    pub fn graded_basis(&self, e: i64) -> Vec<Monomial> {
        if e < 0 {
            return Vec::new();
        }
        let w = &self.weights;
        let mut out = Vec::new();
        let max1 = (e / w.vars[0]) as u16;
        for a1 in 0..=max1 {
            let r1 = e - a1 as i64 * w.vars[0];
            let max2 = (r1 / w.vars[1]) as u16;
            for a2 in 0..=max2 {
                let r2 = r1 - a2 as i64 * w.vars[1];
                if r2 % w.vars[2] != 0 {
                    continue;
                }
                let a3 = (r2 / w.vars[2]) as u16;
                let m = Monomial([a1, a2, a3]);
                if !self.lead.divides(&m) {
                    out.push(m);
                }
            }
        }
        out.sort();
        out
    }

    /// Dimension of `A_e`.
    pub fn graded_dim(&self, e: i64) -> usize {
        self.graded_basis(e).len()
    }

    /// Coordinates of a normal-form polynomial in the monomial basis of `A_e`.
    /// Panics if `p` has a monomial outside the basis (i.e. is not a normal
    /// form of degree `e`).
    pub fn coords(&self, p: &Poly, e: i64) -> Vec<Rational> {
        let basis = self.graded_basis(e);
        let index: BTreeMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &p.terms {
            let i = *index
                .get(m)
                .unwrap_or_else(|| panic!("monomial {m:?} outside basis of degree {e}"));
            v[i] = c.clone();
        }
        v
    }
}

// ------------------------------------------------------------------
// Parsing
// ------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("division by a non-constant polynomial at position {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.bump();
                    let at = self.pos;
                    let divisor = self.factor()?;
                    if divisor.is_zero() {
                        return Err(ParseError::DivisionByZero { pos: at });
                    }
                    let c = divisor
                        .terms
                        .get(&Monomial::one())
                        .filter(|_| divisor.num_terms() == 1)
                        .ok_or(ParseError::NonConstantDivisor { pos: at })?;
                    acc = acc.scale(&(Rational::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := atom ['^' uint]
    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let n = self.uint()?;
            let mut acc = Poly::one();
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    // atom := '(' expr ')' | identifier | integer
    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(Poly::constant(Rational::from_integer(n.into())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.src[start..end]).unwrap().to_string();
                self.pos = end;
                match name.as_str() {
                    "x1" => Ok(Poly::var(0)),
                    "x2" => Ok(Poly::var(1)),
                    "x3" => Ok(Poly::var(2)),
                    _ => Err(ParseError::UnknownIdentifier { pos: start, name }),
                }
            }
            Some(_) => Err(self.err("expected `(`, a variable, or a number")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }
}

/// Parses an arithmetic expression in `x1, x2, x3` with integer or rational
/// coefficients, `+ - * / ^` and parentheses. Implicit multiplication is a
/// syntax error; `/` accepts constant divisors only.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser::new(text);
    let poly = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}
