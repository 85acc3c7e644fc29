//! Cohomology of the projectivized tangent bundle `P(T_X) -> X` and fiber
//! integration along it.
//!
//! `H*(P(T_X)) = H*(X)[c] / (c^n + c1(T) c^(n-1) + ... + cn(T))` with
//! `c = c1(O(1))`. Two models of `H*(X)` are supported:
//!
//! * [`Mode::Concrete`]: `X = P^n`, `H*(X) = Z[H]/(H^(n+1))`, `c(T) = (1+H)^(n+1)`;
//! * [`Mode::Formal`]: a general `n`-dimensional `X` with Chern roots
//!   `t1..tn` of `T_X` and `l = c1(L)`, truncated above degree `n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Concrete,
    Formal,
}

/// The line bundle `L` being twisted by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineBundle {
    /// `O(d)` on `P^n`.
    Degree(i64),
    /// Generic `L` on a formal `X`; `c1(L)` is the indeterminate `l`.
    Formal,
}

impl LineBundle {
    pub fn mode(self) -> Mode {
        match self {
            LineBundle::Degree(_) => Mode::Concrete,
            LineBundle::Formal => Mode::Formal,
        }
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn base_vars(n: usize, mode: Mode) -> usize {
    match mode {
        Mode::Concrete => 1,
        Mode::Formal => n + 1,
    }
}

/// A class in `H*(X)`: a polynomial in the base generators, truncated above degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseClass {
    n: usize,
    mode: Mode,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl BaseClass {
    pub fn zero(n: usize, mode: Mode) -> Self {
        BaseClass {
            n,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, mode: Mode) -> Self {
        BaseClass::monomial(n, mode, vec![0; base_vars(n, mode)], BigInt::one())
    }

    pub fn monomial(n: usize, mode: Mode, powers: Vec<u32>, coefficient: BigInt) -> Self {
        assert_eq!(powers.len(), base_vars(n, mode));
        let mut out = BaseClass::zero(n, mode);
        out.add_term(powers, coefficient);
        out
    }

    /// `H` in concrete mode.
    pub fn hyperplane(n: usize) -> Self {
        BaseClass::monomial(n, Mode::Concrete, vec![1], BigInt::one())
    }

    /// Chern root `t_i` (1-based) in formal mode.
    pub fn root(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        let mut powers = vec![0; n + 1];
        powers[i - 1] = 1;
        BaseClass::monomial(n, Mode::Formal, powers, BigInt::one())
    }

    /// `l = c1(L)` in formal mode.
    pub fn line_class(n: usize) -> Self {
        let mut powers = vec![0; n + 1];
        powers[n] = 1;
        BaseClass::monomial(n, Mode::Formal, powers, BigInt::one())
    }

    /// `c1(L)` in either mode.
    pub fn first_chern_of(n: usize, bundle: LineBundle) -> Self {
        match bundle {
            LineBundle::Degree(d) => BaseClass::hyperplane(n).scale(&BigInt::from(d)),
            LineBundle::Formal => BaseClass::line_class(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, powers: Vec<u32>, coefficient: BigInt) {
        if coefficient.is_zero() || powers.iter().sum::<u32>() as usize > self.n {
            return;
        }
        let entry = self.terms.entry(powers).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn check_compatible(&self, other: &BaseClass) {
        assert!(
            self.n == other.n && self.mode == other.mode,
            "classes live in different rings"
        );
    }

    pub fn add(&self, other: &BaseClass) -> BaseClass {
        self.check_compatible(other);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BaseClass) -> BaseClass {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, factor: &BigInt) -> BaseClass {
        let mut out = BaseClass::zero(self.n, self.mode);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * factor);
        }
        out
    }

    pub fn mul(&self, other: &BaseClass) -> BaseClass {
        self.check_compatible(other);
        let mut out = BaseClass::zero(self.n, self.mode);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let powers = pa.iter().zip(pb).map(|(a, b)| a + b).collect();
                out.add_term(powers, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> BaseClass {
        (0..k).fold(BaseClass::one(self.n, self.mode), |acc, _| acc.mul(self))
    }

    /// Homogeneous component of degree `k`.
    pub fn graded_part(&self, k: usize) -> BaseClass {
        let mut out = BaseClass::zero(self.n, self.mode);
        for (p, c) in &self.terms {
            if p.iter().sum::<u32>() as usize == k {
                out.add_term(p.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficient of `H^j`, concrete mode only.
    pub fn hyperplane_coefficient(&self, j: u32) -> BigInt {
        assert_eq!(self.mode, Mode::Concrete);
        self.terms.get(&vec![j]).cloned().unwrap_or_default()
    }
}

fn format_monomial(
    f: &mut fmt::Formatter<'_>,
    coefficient: &BigInt,
    factors: &[(String, u32)],
    first: bool,
) -> fmt::Result {
    match (first, coefficient.is_negative()) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let magnitude = coefficient.abs();
    let visible: Vec<&(String, u32)> = factors.iter().filter(|(_, p)| *p > 0).collect();
    if visible.is_empty() {
        return write!(f, "{magnitude}");
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    for (i, (name, p)) in visible.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        if *p == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{p}")?;
        }
    }
    Ok(())
}

fn base_names(n: usize, mode: Mode) -> Vec<String> {
    match mode {
        Mode::Concrete => vec!["H".to_string()],
        Mode::Formal => (1..=n)
            .map(|i| format!("t{i}"))
            .chain(std::iter::once("l".to_string()))
            .collect(),
    }
}

/// Descending degrevlex key on `(c, base...)`.
fn display_order(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    db.cmp(&da).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return x.cmp(y);
            }
        }
        std::cmp::Ordering::Equal
    })
}

impl fmt::Display for BaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = base_names(self.n, self.mode);
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|a, b| display_order(a.0, b.0));
        for (i, (powers, c)) in entries.into_iter().enumerate() {
            let factors: Vec<(String, u32)> =
                names.iter().cloned().zip(powers.iter().copied()).collect();
            format_monomial(f, c, &factors, i == 0)?;
        }
        Ok(())
    }
}

/// A class in `H*(P(T_X))`, stored as `sum_k c^k * w_k` with `w_k` in `H*(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    n: usize,
    mode: Mode,
    parts: BTreeMap<u32, BaseClass>,
}

impl CohomologyClass {
    pub fn zero(n: usize, mode: Mode) -> Self {
        CohomologyClass {
            n,
            mode,
            parts: BTreeMap::new(),
        }
    }

    /// `c^k * w`.
    pub fn c_power_times(k: u32, w: &BaseClass) -> Self {
        let mut out = CohomologyClass::zero(w.n, w.mode);
        out.add_part(k, w.clone());
        out
    }

    pub fn c_power(n: usize, mode: Mode, k: u32) -> Self {
        CohomologyClass::c_power_times(k, &BaseClass::one(n, mode))
    }

    /// `p^*(w)`.
    pub fn pullback(w: &BaseClass) -> Self {
        CohomologyClass::c_power_times(0, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Coefficient `w_k` of `c^k` (in the current, possibly unreduced, representation).
    pub fn c_coefficient(&self, k: u32) -> BaseClass {
        self.parts
            .get(&k)
            .cloned()
            .unwrap_or_else(|| BaseClass::zero(self.n, self.mode))
    }

    pub fn max_c_power(&self) -> Option<u32> {
        self.parts.keys().next_back().copied()
    }

    fn add_part(&mut self, k: u32, w: BaseClass) {
        let sum = match self.parts.remove(&k) {
            Some(existing) => existing.add(&w),
            None => w,
        };
        if !sum.is_zero() {
            self.parts.insert(k, sum);
        }
    }

    pub fn add(&self, other: &CohomologyClass) -> CohomologyClass {
        let mut out = self.clone();
        for (k, w) in &other.parts {
            out.add_part(*k, w.clone());
        }
        out
    }

    pub fn sub(&self, other: &CohomologyClass) -> CohomologyClass {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, factor: &BigInt) -> CohomologyClass {
        let mut out = CohomologyClass::zero(self.n, self.mode);
        for (k, w) in &self.parts {
            out.add_part(*k, w.scale(factor));
        }
        out
    }

    pub fn mul(&self, other: &CohomologyClass) -> CohomologyClass {
        let mut out = CohomologyClass::zero(self.n, self.mode);
        for (ka, wa) in &self.parts {
            for (kb, wb) in &other.parts {
                out.add_part(ka + kb, wa.mul(wb));
            }
        }
        out
    }

    /// Normal form with every `c`-power at most `n - 1`, using
    /// `c^n = -(c1(T) c^(n-1) + ... + cn(T))`.
    pub fn reduce(&self) -> CohomologyClass {
        let tangent = tangent_chern(self.n, self.mode);
        let n = self.n as u32;
        let mut out = self.clone();
        while let Some(k) = out.max_c_power().filter(|&k| k >= n) {
            let w = out.parts.remove(&k).expect("present");
            for (i, ci) in tangent.iter().enumerate().skip(1) {
                out.add_part(k - i as u32, w.mul(ci).scale(&-BigInt::one()));
            }
        }
        out
    }

    /// Terms `(a, k, j)` of `a * c^k * H^j`; concrete mode only.
    pub fn to_triples(&self) -> Result<Vec<(BigInt, u32, u32)>> {
        if self.mode != Mode::Concrete {
            return Err(Error::Precondition(
                "triples are only defined for the concrete model".into(),
            ));
        }
        let mut out: Vec<(BigInt, u32, u32)> = self
            .parts
            .iter()
            .flat_map(|(k, w)| w.terms.iter().map(move |(p, c)| (c.clone(), *k, p[0])))
            .collect();
        out.sort_by(|a, b| display_order(&[a.1, a.2], &[b.1, b.2]));
        Ok(out)
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names: Vec<String> = std::iter::once("c".to_string())
            .chain(base_names(self.n, self.mode))
            .collect();
        let mut entries: Vec<(Vec<u32>, &BigInt)> = self
            .parts
            .iter()
            .flat_map(|(k, w)| {
                w.terms.iter().map(move |(p, c)| {
                    let mut key = vec![*k];
                    key.extend_from_slice(p);
                    (key, c)
                })
            })
            .collect();
        entries.sort_by(|a, b| display_order(&a.0, &b.0));
        for (i, (powers, c)) in entries.into_iter().enumerate() {
            let factors: Vec<(String, u32)> =
                names.iter().cloned().zip(powers.iter().copied()).collect();
            format_monomial(f, c, &factors, i == 0)?;
        }
        Ok(())
    }
}

/// `c_0(T_X), ..., c_n(T_X)`.
pub fn tangent_chern(n: usize, mode: Mode) -> Vec<BaseClass> {
    match mode {
        Mode::Concrete => (0..=n)
            .map(|i| {
                BaseClass::monomial(n, mode, vec![i as u32], binomial(n as i64 + 1, i as i64))
            })
            .collect(),
        Mode::Formal => {
            let roots: Vec<BaseClass> = (1..=n).map(|i| BaseClass::root(n, i)).collect();
            elementary_symmetric(n, mode, &roots)
        }
    }
}

/// Graded pieces of `prod (1 + x_i)`.
fn elementary_symmetric(n: usize, mode: Mode, xs: &[BaseClass]) -> Vec<BaseClass> {
    let mut total = BaseClass::one(n, mode);
    for x in xs {
        total = total.mul(&BaseClass::one(n, mode).add(x));
    }
    (0..=n).map(|k| total.graded_part(k)).collect()
}

/// Chern classes `c_0(E), ..., c_n(E)` of `E = L (x) Omega^1_X`.
///
/// Concrete mode twists `c_i(Omega^1) = (-1)^i c_i(T)` by `c1(L) = dH` using
/// `c_k(E (x) M) = sum_i C(r-i, k-i) c_i(E) c1(M)^(k-i)`; formal mode takes the
/// elementary symmetric functions of the roots `l - t_i`.
pub fn twisted_cotangent_chern(n: usize, bundle: LineBundle) -> Result<Vec<BaseClass>> {
    if n < 1 {
        return Err(Error::Precondition("need n >= 1".into()));
    }
    let mode = bundle.mode();
    match bundle {
        LineBundle::Degree(_) => {
            let cotangent: Vec<BaseClass> = tangent_chern(n, mode)
                .into_iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.scale(&-BigInt::one()) } else { c })
                .collect();
            let line = BaseClass::first_chern_of(n, bundle);
            Ok(twist(&cotangent, &line, n))
        }
        LineBundle::Formal => {
            let line = BaseClass::line_class(n);
            let roots: Vec<BaseClass> =
                (1..=n).map(|i| line.sub(&BaseClass::root(n, i))).collect();
            Ok(elementary_symmetric(n, mode, &roots))
        }
    }
}

/// Chern classes of `E (x) M` for a rank-`rank` bundle `E` and line bundle `M`.
pub fn twist(chern: &[BaseClass], line: &BaseClass, rank: usize) -> Vec<BaseClass> {
    let (n, mode) = (line.n, line.mode);
    (0..chern.len())
        .map(|k| {
            (0..=k).fold(BaseClass::zero(n, mode), |acc, i| {
                let coeff = binomial(rank as i64 - i as i64, (k - i) as i64);
                acc.add(&chern[i].mul(&line.pow((k - i) as u32)).scale(&coeff))
            })
        })
        .collect()
}

/// `sum_i c^(n-i) c_i(E)` before reduction.
pub fn euler_class_unreduced(n: usize, bundle: LineBundle) -> Result<CohomologyClass> {
    let chern = twisted_cotangent_chern(n, bundle)?;
    Ok(chern
        .iter()
        .enumerate()
        .fold(CohomologyClass::zero(n, bundle.mode()), |acc, (i, ci)| {
            acc.add(&CohomologyClass::c_power_times((n - i) as u32, ci))
        }))
}

/// Euler class of `p^*(L (x) Omega^1_X) (x) O(1)`, in reduced normal form.
pub fn euler_class(n: usize, bundle: LineBundle) -> Result<CohomologyClass> {
    Ok(euler_class_unreduced(n, bundle)?.reduce())
}

/// Fiber integration `p_!`: the coefficient of `c^(n-1)` in reduced form.
pub fn pushforward(x: &CohomologyClass) -> BaseClass {
    if x.n == 0 {
        return BaseClass::zero(0, x.mode);
    }
    x.reduce().c_coefficient(x.n as u32 - 1)
}

pub fn pushforward_euler(n: usize, bundle: LineBundle) -> Result<BaseClass> {
    Ok(pushforward(&euler_class(n, bundle)?))
}

/// `n c1(L) - 2 c1(T_X)`; on `P^n` with `L = O(d)` this is `(nd - 2(n+1)) H`.
pub fn closed_form_pushforward(n: usize, bundle: LineBundle) -> BaseClass {
    let mode = bundle.mode();
    let line = BaseClass::first_chern_of(n, bundle).scale(&BigInt::from(n));
    let c1 = tangent_chern(n, mode)[1].scale(&BigInt::from(2));
    line.sub(&c1)
}

/// JSON-friendly coefficient: a number when it fits in `i64`, else a decimal string.
pub fn coefficient_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}
