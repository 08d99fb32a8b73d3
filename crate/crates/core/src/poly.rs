//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{format_rational, Integer, Rational};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    /// Lexicographic order on exponent vectors; no zero coefficients.
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("unexpected {found} at offset {offset} in polynomial expression")]
    Syntax { offset: usize, found: String },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable with index `i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Monomial, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exponents, c);
        p
    }

    /// `Σ c_i x_i + c_0`.
    pub fn linear(coefficients: &[Rational]) -> Self {
        let n = coefficients.len();
        let mut p = Self::zero(n);
        for (i, c) in coefficients.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exponents: Monomial, c: Rational) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            if e.iter().sum::<u32>() == d {
                p.add_term(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in other.terms() {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            p.add_term(e.clone(), c * q);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                p.add_term(e, x * y);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms().fold(Rational::zero(), |acc, (e, c)| {
            let value = e
                .iter()
                .zip(point)
                .fold(c.clone(), |v, (&k, x)| v * num::pow(x.clone(), k as usize));
            acc + value
        })
    }

    /// `p(q_1, ..., q_s)` where every `q_i` has the same variable count.
    pub fn compose(&self, substitutions: &[Polynomial]) -> Polynomial {
        assert_eq!(substitutions.len(), self.nvars);
        let m = substitutions.first().map_or(0, Polynomial::nvars);
        let mut out = Polynomial::zero(m);
        for (e, c) in self.terms() {
            let mut t = Polynomial::constant(m, c.clone());
            for (q, &k) in substitutions.iter().zip(e) {
                t = t.mul(&q.pow(k));
            }
            out = out.add(&t);
        }
        out
    }

    /// The lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// `self / divisor` if the division is exact.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lead_e, lead_c) = divisor.leading_term()?;
        let mut remainder = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        while let Some((e, c)) = remainder.leading_term() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Monomial = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let factor = Polynomial::monomial(self.nvars, shift, c / lead_c);
            remainder = remainder.sub(&factor.mul(divisor));
            quotient = quotient.add(&factor);
        }
        Some(quotient)
    }

    /// Renders with variables `{prefix}1, {prefix}2, ...`, highest degree first.
    pub fn to_text(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("{prefix}{}", j + 1)
                    } else {
                        format!("{prefix}{}^{k}", j + 1)
                    }
                })
                .collect();
            let magnitude = c.abs();
            let body = match (factors.is_empty(), magnitude.is_one()) {
                (true, _) => format_rational(&magnitude),
                (false, true) => factors.join("*"),
                (false, false) => format!("{}*{}", format_rational(&magnitude), factors.join("*")),
            };
            match (i, c.is_negative()) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }

    /// Parses sums, products, integer powers, parentheses and rational literals
    /// such as `1/2*d1^2 - (d1 + d2)*d3`. Variables are `{prefix}1..{prefix}nvars`.
    pub fn parse(text: &str, prefix: &str, nvars: usize) -> Result<Self, PolyError> {
        let mut parser = Parser { text, pos: 0, prefix, nvars };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos < text.len() {
            return Err(parser.error());
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    prefix: &'a str,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn error(&self) -> PolyError {
        let found = self.text[self.pos..].chars().next().map_or("end of input".into(), |c| format!("{c:?}"));
        PolyError::Syntax { offset: self.pos, found }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.digits().ok_or_else(|| self.error())?;
            let k: u32 = k.parse().map_err(|_| self.error())?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    /// Negation binds looser than `^`, so `-x^2` is `-(x^2)`.
    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.scale(&-Rational::one()));
        }
        self.power()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = self.text;
        (self.pos > start).then(|| &text[start..self.pos])
    }

    fn primary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let numer: Integer = self.digits().unwrap().parse().expect("digits");
                let mut value = Rational::from_integer(numer);
                if self.text[self.pos..].starts_with('/') {
                    self.pos += 1;
                    let denom: Integer = self.digits().ok_or_else(|| self.error())?.parse().expect("digits");
                    if denom.is_zero() {
                        return Err(self.error());
                    }
                    value /= Rational::from_integer(denom);
                }
                Ok(Polynomial::constant(self.nvars, value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.text[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let index = name
                    .strip_prefix(self.prefix)
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.nvars)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                Ok(Polynomial::var(self.nvars, index - 1))
            }
            _ => Err(self.error()),
        }
    }
}

/// `numerator / denominator` with the denominator's leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

impl RationalFunction {
    /// Cancels each denominator factor that divides the numerator exactly,
    /// then normalizes. Irreducible factors give a fully reduced result.
    pub fn from_factors(numerator: Polynomial, denominator_factors: &[Polynomial]) -> Self {
        let n = numerator.nvars();
        let mut num = numerator;
        let mut den = Polynomial::one(n);
        for f in denominator_factors {
            match num.div_exact(f) {
                Some(q) if !num.is_zero() => num = q,
                _ => den = den.mul(f),
            }
        }
        if num.is_zero() {
            return Self { numerator: num, denominator: Polynomial::one(n) };
        }
        let lead = den.leading_term().expect("nonzero denominator").1.clone();
        let inv = lead.recip();
        Self { numerator: num.scale(&inv), denominator: den.scale(&inv) }
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    /// `None` where the denominator vanishes.
    pub fn evaluate(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.denominator.evaluate(point);
        (!d.is_zero()).then(|| self.numerator.evaluate(point) / d)
    }

    pub fn is_constant(&self) -> bool {
        self.denominator.degree() == Some(0) && self.numerator.degree().map_or(true, |d| d == 0)
    }

    /// Equality as functions, by cross-multiplication.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let p = Polynomial::parse("1/2*d1^2 - (d1 + d2)*d2 + 3", "d", 2).unwrap();
        assert_eq!(p.to_text("d"), "1/2*d1^2 - d1*d2 - d2^2 + 3");
        assert_eq!(Polynomial::parse(&p.to_text("d"), "d", 2).unwrap(), p);
        assert_eq!(Polynomial::parse("-d1", "d", 1).unwrap().to_text("d"), "-d1");
        assert!(Polynomial::parse("d3", "d", 2).is_err());
        assert!(Polynomial::parse("d1 +", "d", 2).is_err());
        assert!(Polynomial::parse("1/0", "d", 2).is_err());
    }

    #[test]
    fn exact_division() {
        let x = Polynomial::parse("(y1 + 2*y2)*(y1 - y2)^2", "y", 2).unwrap();
        let f = Polynomial::parse("y1 - y2", "y", 2).unwrap();
        assert_eq!(
            x.div_exact(&f).unwrap(),
            Polynomial::parse("(y1 + 2*y2)*(y1 - y2)", "y", 2).unwrap()
        );
        assert!(x.div_exact(&Polynomial::parse("y1 + y2", "y", 2).unwrap()).is_none());
    }

    #[test]
    fn rational_function_cancels_common_factors() {
        let w1 = Polynomial::var(2, 0);
        let w2 = Polynomial::var(2, 1);
        let num = w1.mul(&w1).scale(&rat(3, 1));
        let r = RationalFunction::from_factors(num, &[w1.clone(), w2.scale(&rat(2, 1))]);
        assert_eq!(r.numerator.to_text("w"), "3/2*w1");
        assert_eq!(r.denominator.to_text("w"), "w2");
        assert_eq!(r.evaluate(&[rat(2, 1), rat(3, 1)]), Some(rat(1, 1)));
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..6), 0..5).prop_map(
            move |terms| {
                let mut p = Polynomial::zero(nvars);
                for (e, c) in terms {
                    p.add_term(e, rat(c, 1));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn text_round_trip(p in small_poly(3)) {
            prop_assert_eq!(Polynomial::parse(&p.to_text("y"), "y", 3).unwrap(), p);
        }

        #[test]
        fn division_inverts_multiplication(p in small_poly(2), q in small_poly(2)) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!(p.mul(&q).div_exact(&q), Some(p));
        }

        #[test]
        fn composition_agrees_with_evaluation(p in small_poly(2), a in -3i64..4, b in -3i64..4) {
            let subs = [Polynomial::linear(&[rat(1, 1), rat(2, 1)]), Polynomial::linear(&[rat(-1, 1), rat(1, 1)])];
            let point = [rat(a, 1), rat(b, 1)];
            let inner: Vec<Rational> = subs.iter().map(|s| s.evaluate(&point)).collect();
            prop_assert_eq!(p.compose(&subs).evaluate(&point), p.evaluate(&inner));
        }
    }
}
