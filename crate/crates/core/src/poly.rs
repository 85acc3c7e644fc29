//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! [`Poly`] is an arbitrary polynomial in a fixed number of variables `z0..zn`;
//! [`Form`] wraps a [`Poly`] that is homogeneous of a declared degree and is the
//! object every classification routine consumes. Terms are kept in a
//! `BTreeMap` keyed by [`Exponent`], whose `Ord` is degrevlex with
//! `z0 > z1 > ... > zn`, so the last entry of the map is always the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;

pub type Rational = BigRational;

pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Multi-index `(i0, ..., in)` of a monomial `z0^i0 * ... * zn^in`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(powers: Vec<u32>) -> Self {
        Exponent(powers)
    }

    pub fn zeros(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// `z_k^power` in `nvars` variables.
    pub fn pure(nvars: usize, k: usize, power: u32) -> Self {
        let mut powers = vec![0; nvars];
        powers[k] = power;
        Exponent(powers)
    }

    pub fn powers(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn mul(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// The variable index if this is a pure power `z_k^m` with `m >= 1`.
    pub fn pure_power_variable(&self) -> Option<usize> {
        let mut found = None;
        for (k, &p) in self.0.iter().enumerate() {
            if p > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            }
        }
        found
    }

    /// Pairing `<m, r>` with an integer weight vector.
    pub fn weight(&self, r: &[i64]) -> i64 {
        self.0.iter().zip(r).map(|(&p, &w)| p as i64 * w).sum()
    }

    /// Exponent of the permuted monomial: new power of `z_i` is old power of `z_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> Exponent {
        Exponent(perm.iter().map(|&src| self.0[src]).collect())
    }
}

impl Ord for Exponent {
    // degrevlex: higher total degree wins; ties go to the smaller power in the last differing variable
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &p) in self.0.iter().enumerate() {
            if p == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if p == 1 {
                write!(f, "z{k}")?;
            } else {
                write!(f, "z{k}^{p}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial over the rationals. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        Poly::monomial(Exponent::zeros(nvars), value)
    }

    pub fn monomial(exponent: Exponent, coefficient: Rational) -> Self {
        let mut p = Poly::zero(exponent.nvars());
        p.add_term(exponent, coefficient);
        p
    }

    pub fn variable(nvars: usize, k: usize) -> Self {
        Poly::monomial(Exponent::pure(nvars, k, 1), Rational::one())
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponent, Rational)>,
    ) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.nvars(), nvars, "exponent length must match nvars");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending degrevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Option<&Rational> {
        self.terms.get(e)
    }

    pub fn lead_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn lead_exponent(&self) -> Option<&Exponent> {
        self.terms.keys().next_back()
    }

    pub fn lead_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// The common degree if every term has the same degree. The zero polynomial
    /// is homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Exponent::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn add_term(&mut self, exponent: Exponent, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    /// `self * coefficient * z^exponent`.
    pub fn mul_term(&self, exponent: &Exponent, coefficient: &Rational) -> Poly {
        if coefficient.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.mul(exponent), c * coefficient))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.lead_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Content-free integer multiple with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.lead_coefficient().is_some_and(|c| c.is_negative()) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut value = c.clone();
            for (x, &p) in point.iter().zip(e.powers()) {
                if p > 0 {
                    value *= num_traits::pow(x.clone(), p as usize);
                }
            }
            total += value;
        }
        Ok(total)
    }

    /// Partial derivative with respect to `z_k`.
    pub fn partial(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let p = e.powers()[k];
            if p == 0 {
                continue;
            }
            let mut powers = e.powers().to_vec();
            powers[k] -= 1;
            out.add_term(Exponent(powers), c * rat(p as i64));
        }
        out
    }

    /// Substitute `z_k -> images[k]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target_nvars = images.first().map_or(self.nvars, Poly::nvars);
        let max_power = self
            .terms
            .keys()
            .flat_map(|e| e.powers().iter().copied())
            .max()
            .unwrap_or(0);
        let powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|img| {
                let mut table = vec![Poly::constant(target_nvars, Rational::one())];
                for i in 1..=max_power as usize {
                    let next = &table[i - 1] * img;
                    table.push(next);
                }
                table
            })
            .collect();
        let mut out = Poly::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (k, &p) in e.powers().iter().enumerate() {
                if p > 0 {
                    term = &term * &powers[k][p as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Poly> {
        let terms = Parser::new(text, nvars).parse()?;
        Ok(Poly::from_terms(nvars, terms.into_iter().map(|t| (t.0, t.1))))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        out
    }
}

fn write_coefficient_prefix(
    f: &mut fmt::Formatter<'_>,
    c: &Rational,
    first: bool,
    is_constant: bool,
) -> fmt::Result {
    let magnitude = c.abs();
    match (first, c.is_negative()) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if is_constant {
        write!(f, "{magnitude}")
    } else if magnitude.is_one() {
        Ok(())
    } else {
        write!(f, "{magnitude}*")
    }
}

impl fmt::Display for Poly {
    /// Canonical text: terms in descending degrevlex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_constant = e.degree() == 0;
            write_coefficient_prefix(f, c, i == 0, is_constant)?;
            if !is_constant {
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

/// A parsed term with the byte span it came from.
struct RawTerm(Exponent, Rational, std::ops::Range<usize>);

impl<'a> Parser<'a> {
    fn new(text: &'a str, nvars: usize) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn small_number(&mut self, what: &str) -> Result<u32> {
        let text = self.digits()?;
        match text.parse::<u32>() {
            Ok(v) => Ok(v),
            Err(_) => self.error(format!("{what} `{text}` too large")),
        }
    }

    fn parse(mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            let mut term = self.term()?;
            if negative {
                term.1 = -term.1;
            }
            terms.push(term);
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(other) => {
                    return self.error(format!("unexpected character `{}`", other as char))
                }
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        self.skip_ws();
        let start = self.pos;
        let mut powers = vec![0u32; self.nvars];
        let coefficient = match self.peek() {
            Some(b'z') => {
                self.factors(&mut powers)?;
                Rational::one()
            }
            Some(c) if c.is_ascii_digit() => {
                let c = self.coefficient()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.factors(&mut powers)?;
                }
                c
            }
            Some(other) => return self.error(format!("unexpected character `{}`", other as char)),
            None => return self.error("unexpected end of input"),
        };
        Ok(RawTerm(Exponent(powers), coefficient, start..self.pos))
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let numer: BigInt = self.digits()?.parse().expect("digits parse as integer");
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let denom: BigInt = self.digits()?.parse().expect("digits parse as integer");
            if denom.is_zero() {
                return self.error("denominator must be positive");
            }
            return Ok(Rational::new(numer, denom));
        }
        Ok(Rational::from_integer(numer))
    }

    fn factors(&mut self, powers: &mut [u32]) -> Result<()> {
        loop {
            if self.peek() != Some(b'z') {
                return self.error("expected variable `z<index>`");
            }
            self.pos += 1;
            let index_pos = self.pos;
            let index = self.small_number("variable index")? as usize;
            if index >= self.nvars {
                self.pos = index_pos;
                return Err(Error::VariableOutOfRange {
                    index,
                    n: self.nvars - 1,
                });
            }
            let mut power = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                power = self.small_number("exponent")?;
            }
            powers[index] += power;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }
}

/// Homogeneous polynomial of degree `d` in the `n + 1` variables `z0..zn`.
///
/// The zero form exists (empty term set) but every classification entry point
/// rejects it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    n: usize,
    d: u32,
    poly: Poly,
}

/// Gradient and Hessian of a form, as forms of degree `d-1` and `d-2`.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub gradient: Vec<Form>,
    pub hessian: Vec<Vec<Form>>,
}

impl Form {
    pub fn new(n: usize, d: u32, poly: Poly) -> Result<Form> {
        if poly.nvars() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: poly.nvars(),
            });
        }
        if let Some((e, _)) = poly.terms().find(|(e, _)| e.degree() != d) {
            return Err(Error::NotHomogeneous {
                term: e.to_string(),
                found: e.degree(),
                expected: d,
            });
        }
        Ok(Form { n, d, poly })
    }

    /// Build a form from its homogeneous polynomial, reading the degree off the terms.
    pub fn from_poly(n: usize, poly: Poly) -> Result<Form> {
        let d = match poly.homogeneous_degree() {
            Some(d) => d,
            None if poly.is_zero() => return Err(Error::ZeroPolynomial),
            None => {
                let d = poly.lead_exponent().map_or(0, Exponent::degree);
                return Form::new(n, d, poly);
            }
        };
        Form::new(n, d, poly)
    }

    pub fn zero(n: usize, d: u32) -> Form {
        Form {
            n,
            d,
            poly: Poly::zero(n + 1),
        }
    }

    /// Parse text in the polynomial grammar, rejecting zero and non-homogeneous input.
    pub fn parse(text: &str, n: usize, d: u32) -> Result<Form> {
        let terms = Parser::new(text, n + 1).parse()?;
        for RawTerm(e, c, span) in &terms {
            if e.degree() != d && !c.is_zero() {
                return Err(Error::NotHomogeneous {
                    term: text[span.clone()].trim().to_string(),
                    found: e.degree(),
                    expected: d,
                });
            }
        }
        let poly = Poly::from_terms(n + 1, terms.into_iter().map(|t| (t.0, t.1)));
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Form { n, d, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn ensure_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.poly.terms()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.poly.terms().map(|(e, _)| e)
    }

    pub fn coefficient(&self, e: &Exponent) -> Option<&Rational> {
        self.poly.coefficient(e)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.poly.evaluate(point)
    }

    pub fn scale(&self, factor: &Rational) -> Form {
        Form {
            n: self.n,
            d: self.d,
            poly: self.poly.scale(factor),
        }
    }

    pub fn partial(&self, k: usize) -> Form {
        Form {
            n: self.n,
            d: self.d.saturating_sub(1),
            poly: self.poly.partial(k),
        }
    }

    pub fn gradient(&self) -> Vec<Form> {
        (0..=self.n).map(|k| self.partial(k)).collect()
    }

    pub fn derivatives(&self) -> Derivatives {
        let gradient = self.gradient();
        let hessian = (0..=self.n)
            .map(|j| (0..=self.n).map(|k| gradient[j].partial(k)).collect())
            .collect();
        Derivatives { gradient, hessian }
    }

    /// Hessian matrix evaluated at a point.
    pub fn hessian_at(&self, point: &[Rational]) -> Result<RationalMatrix> {
        let Derivatives { hessian, .. } = self.derivatives();
        let rows = hessian
            .iter()
            .map(|row| row.iter().map(|h| h.evaluate(point)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        RationalMatrix::new(rows)
    }

    pub fn gradient_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.gradient().iter().map(|g| g.evaluate(point)).collect()
    }

    /// Change of variables `f -> f o g`: substitute `z_k -> sum_j g[k][j] z_j`.
    ///
    /// This is a right action: `act(g, act(h, f)) == act(h * g, f)`.
    pub fn act(&self, g: &RationalMatrix) -> Result<Form> {
        if g.size() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: g.size(),
            });
        }
        if g.determinant().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let images: Vec<Poly> = (0..self.nvars())
            .map(|k| {
                Poly::from_terms(
                    self.nvars(),
                    (0..self.nvars())
                        .map(|j| (Exponent::pure(self.nvars(), j, 1), g.get(k, j).clone())),
                )
            })
            .collect();
        Ok(Form {
            n: self.n,
            d: self.d,
            poly: self.poly.substitute(&images),
        })
    }

    /// Rename variables: the new power of `z_i` is the old power of `z_{perm[i]}`.
    ///
    /// Equal to `act` by [`RationalMatrix::permutation`]`(perm)`.
    pub fn permute(&self, perm: &[usize]) -> Form {
        assert_eq!(perm.len(), self.nvars(), "permutation length");
        Form {
            n: self.n,
            d: self.d,
            poly: Poly::from_terms(
                self.nvars(),
                self.poly
                    .terms()
                    .map(|(e, c)| (e.permuted(perm), c.clone())),
            ),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}
