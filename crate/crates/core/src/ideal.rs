//! Buchberger's algorithm over the rationals in degrevlex order, and the
//! "zero set is only the origin" decision built on top of it.
//!
//! Internally the engine works with content-free integer polynomials and
//! fraction-free reduction steps; the reduced basis handed back to callers is
//! monic with rational coefficients.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Exponent, Form, Poly, Rational};

/// Polynomial ideal in the `n + 1` variables `z0..zn`, given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    n: usize,
    generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(n: usize, generators: Vec<Poly>) -> Result<Ideal> {
        if generators.is_empty() {
            return Err(Error::Precondition("ideal needs at least one generator".into()));
        }
        for g in &generators {
            if g.nvars() != n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n + 1,
                    found: g.nvars(),
                });
            }
            if g.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        Ok(Ideal { n, generators })
    }

    pub fn from_forms(forms: &[Form]) -> Result<Ideal> {
        let n = forms
            .first()
            .map(Form::n)
            .ok_or_else(|| Error::Precondition("ideal needs at least one generator".into()))?;
        Ideal::new(n, forms.iter().map(|f| f.poly().clone()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Poly::is_homogeneous)
    }
}

/// Budget for a single Buchberger run. Exceeding any limit is reported as
/// [`Error::ResourceGuard`].
#[derive(Clone, Debug)]
pub struct GroebnerLimits {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum degree of an S-pair lcm (and hence of any basis element).
    pub max_degree: u32,
    pub deadline: Option<Instant>,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_pairs: 200_000,
            max_degree: 60,
            deadline: None,
        }
    }
}

/// Reduced Groebner basis: monic, sorted by (degree, leading monomial).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    n: usize,
    basis: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn lead_exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.basis.iter().filter_map(Poly::lead_exponent)
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.lead_exponents().any(|e| e.degree() == 0)
    }

    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        normal_form(f, &self.basis)
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn only_origin(&self) -> Result<bool> {
        only_origin(self)
    }

    /// One polynomial per entry in the canonical text grammar.
    pub fn to_lines(&self) -> Vec<String> {
        self.basis.iter().map(ToString::to_string).collect()
    }
}

/// Multivariate division remainder of `f` by `basis`, always dividing by the
/// first basis element whose leading monomial divides the current term.
pub fn normal_form(f: &Poly, basis: &[Poly]) -> Result<Poly> {
    normal_form_with(f, basis, |candidates| candidates[0])
}

/// Division remainder where `choose` picks which of the eligible basis indices
/// (given in increasing order) performs each reduction step. Against a
/// Groebner basis the result does not depend on the choices.
pub fn normal_form_with(
    f: &Poly,
    basis: &[Poly],
    mut choose: impl FnMut(&[usize]) -> usize,
) -> Result<Poly> {
    if basis.is_empty() {
        return Err(Error::Precondition("normal form needs a nonempty basis".into()));
    }
    if let Some(g) = basis.iter().find(|g| g.nvars() != f.nvars()) {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    let mut p = f.clone();
    let mut remainder = Poly::zero(f.nvars());
    let mut candidates = Vec::new();
    while let Some((t, c)) = p.lead_term() {
        let (t, c) = (t.clone(), c.clone());
        candidates.clear();
        candidates.extend(basis.iter().enumerate().filter_map(|(i, g)| {
            g.lead_exponent()
                .filter(|lt| lt.divides(&t))
                .map(|_| i)
        }));
        if candidates.is_empty() {
            remainder.add_term(t.clone(), c.clone());
            p.add_term(t, -c);
            continue;
        }
        let g = &basis[choose(&candidates)];
        let (lt, lc) = g.lead_term().expect("candidate is nonzero");
        let m = t.div(lt).expect("lead term divides");
        p = &p - &g.mul_term(&m, &(&c / lc));
    }
    Ok(remainder)
}

/// True iff the affine zero set of the (homogeneous) ideal is contained in the
/// origin: every variable has a pure power among the leading monomials.
pub fn only_origin(gb: &GroebnerBasis) -> Result<bool> {
    if let Some(bad) = gb.basis.iter().find(|g| !g.is_homogeneous()) {
        return Err(Error::Precondition(format!(
            "only_origin needs a homogeneous basis, got `{bad}`"
        )));
    }
    if gb.is_unit() {
        return Ok(true);
    }
    let mut seen = vec![false; gb.n + 1];
    for e in gb.lead_exponents() {
        if let Some(k) = e.pure_power_variable() {
            seen[k] = true;
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Content-free integer polynomial with positive leading coefficient.
#[derive(Clone, Debug)]
struct IntPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl IntPoly {
    fn from_poly(p: &Poly) -> IntPoly {
        let prim = p.primitive();
        IntPoly {
            terms: prim
                .terms()
                .map(|(e, c)| (e.clone(), c.to_integer()))
                .collect(),
        }
    }

    fn to_monic_poly(&self, nvars: usize) -> Poly {
        let lc = Rational::from_integer(self.lead_coefficient().clone());
        Poly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), Rational::from_integer(c.clone()) / &lc)),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &Exponent {
        self.terms.keys().next_back().expect("nonzero polynomial")
    }

    fn lead_coefficient(&self) -> &BigInt {
        self.terms.values().next_back().expect("nonzero polynomial")
    }

    fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Exponent::degree);
        match degrees.next() {
            Some(first) => degrees.all(|d| d == first),
            None => true,
        }
    }

    fn make_primitive(&mut self) {
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        let negate = self.terms.values().next_back().is_some_and(|c| c.is_negative());
        if content.is_zero() {
            return;
        }
        if !content.is_one() {
            for c in self.terms.values_mut() {
                *c /= &content;
            }
        }
        if negate {
            for c in self.terms.values_mut() {
                *c = -&*c;
            }
        }
    }

    /// `self <- a * self - b * z^m * other`
    fn combine(&mut self, a: &BigInt, b: &BigInt, m: &Exponent, other: &IntPoly) {
        if !a.is_one() {
            for c in self.terms.values_mut() {
                *c *= a;
            }
        }
        for (e, c) in &other.terms {
            let key = e.mul(m);
            let delta = b * c;
            match self.terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(-delta);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() -= delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }
}

/// Fraction-free reduction of `p` by the elements of `reducers`; only the
/// leading term is reduced unless `full` is set.
fn reduce(mut p: IntPoly, reducers: &[&IntPoly], full: bool) -> IntPoly {
    let mut bound: Option<Exponent> = None;
    let mut steps = 0usize;
    loop {
        let found = {
            let mut iter: Box<dyn Iterator<Item = (&Exponent, &BigInt)>> = match &bound {
                _ if !full => Box::new(p.terms.iter().rev().take(1)),
                None => Box::new(p.terms.iter().rev()),
                Some(b) => Box::new(p.terms.range(..b.clone()).rev()),
            };
            iter.find_map(|(e, c)| {
                reducers
                    .iter()
                    .find(|g| g.lead().divides(e))
                    .map(|g| (e.clone(), c.clone(), *g))
            })
        };
        let Some((t, c, g)) = found else { break };
        let lc = g.lead_coefficient();
        let common = c.gcd(lc);
        let a = lc / &common;
        let b = &c / &common;
        let m = t.div(g.lead()).expect("lead divides term");
        p.combine(&a, &b, &m, g);
        bound = Some(t);
        steps += 1;
        if steps % 8 == 0 {
            p.make_primitive();
        }
    }
    p.make_primitive();
    p
}

fn s_polynomial(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let lcm = f.lead().lcm(g.lead());
    let mf = lcm.div(f.lead()).expect("lcm");
    let mg = lcm.div(g.lead()).expect("lcm");
    let (cf, cg) = (f.lead_coefficient(), g.lead_coefficient());
    let common = cf.gcd(cg);
    let a = cg / &common;
    let b = cf / &common;
    // a * mf * f - b * mg * g
    let mut out = IntPoly {
        terms: f.terms.iter().map(|(e, c)| (e.mul(&mf), c.clone())).collect(),
    };
    out.combine(&a, &b, &mg, g);
    out
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponent,
}

struct Engine<'a> {
    polys: Vec<IntPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    limits: &'a GroebnerLimits,
    homogeneous: bool,
}

impl<'a> Engine<'a> {
    fn active_reducers(&self) -> Vec<&IntPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Gebauer-Moeller update on inserting `h`.
    fn insert(&mut self, h: IntPoly) -> Result<()> {
        if self.homogeneous && !h.is_homogeneous() {
            return Err(Error::Internal(
                "Buchberger produced an inhomogeneous element from homogeneous input".into(),
            ));
        }
        let t = self.polys.len();
        let lt_h = h.lead().clone();

        let mut candidates: Vec<Pair> = (0..t)
            .filter(|&i| self.active[i])
            .map(|i| Pair {
                i,
                j: t,
                lcm: self.polys[i].lead().lcm(&lt_h),
            })
            .collect();
        let coprime = |p: &Pair, polys: &[IntPoly]| polys[p.i].lead().is_coprime(&lt_h);

        let mut kept: Vec<Pair> = Vec::new();
        while !candidates.is_empty() {
            let pair = candidates.remove(0);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|other| other.lcm.divides(&pair.lcm));
            if coprime(&pair, &self.polys) || !dominated {
                kept.push(pair);
            }
        }
        kept.retain(|p| !coprime(p, &self.polys));

        self.pairs.retain(|p| {
            !(lt_h.divides(&p.lcm)
                && self.polys[p.i].lead().lcm(&lt_h) != p.lcm
                && self.polys[p.j].lead().lcm(&lt_h) != p.lcm)
        });
        self.pairs.extend(kept);

        for i in 0..t {
            if self.active[i] && lt_h.divides(self.polys[i].lead()) {
                self.active[i] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
        Ok(())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (a.lcm.degree(), a.i, a.j).cmp(&(b.lcm.degree(), b.i, b.j))
            })
            .map(|(idx, _)| idx)?;
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self) -> Result<()> {
        let mut processed = 0usize;
        while let Some(pair) = self.next_pair() {
            processed += 1;
            if processed > self.limits.max_pairs {
                return Err(Error::ResourceGuard(format!(
                    "more than {} S-pairs",
                    self.limits.max_pairs
                )));
            }
            if pair.lcm.degree() > self.limits.max_degree {
                return Err(Error::ResourceGuard(format!(
                    "S-pair degree {} exceeds {}",
                    pair.lcm.degree(),
                    self.limits.max_degree
                )));
            }
            if let Some(deadline) = self.limits.deadline {
                if Instant::now() > deadline {
                    return Err(Error::ResourceGuard("timeout".into()));
                }
            }
            let s = s_polynomial(&self.polys[pair.i], &self.polys[pair.j]);
            let h = reduce(s, &self.active_reducers(), false);
            if !h.is_zero() {
                self.insert(h)?;
            }
        }
        Ok(())
    }
}

/// Reduced Groebner basis of `ideal` in degrevlex order.
pub fn buchberger(ideal: &Ideal, limits: &GroebnerLimits) -> Result<GroebnerBasis> {
    let nvars = ideal.n + 1;
    let homogeneous = ideal.is_homogeneous();
    let mut engine = Engine {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        limits,
        homogeneous,
    };

    let mut inputs: Vec<IntPoly> = ideal.generators.iter().map(IntPoly::from_poly).collect();
    inputs.sort_by(|a, b| {
        (a.lead().degree(), a.lead()).cmp(&(b.lead().degree(), b.lead()))
    });
    for g in inputs {
        if g.lead().degree() > limits.max_degree {
            return Err(Error::ResourceGuard(format!(
                "generator degree {} exceeds {}",
                g.lead().degree(),
                limits.max_degree
            )));
        }
        let h = reduce(g, &engine.active_reducers(), false);
        if !h.is_zero() {
            engine.insert(h)?;
        }
    }
    engine.run()?;

    // The active elements form a minimal basis; reduce tails against each other.
    let minimal: Vec<IntPoly> = engine
        .polys
        .iter()
        .zip(&engine.active)
        .filter(|(_, a)| **a)
        .map(|(p, _)| p.clone())
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (idx, g) in minimal.iter().enumerate() {
        let others: Vec<&IntPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, p)| p)
            .collect();
        let r = reduce(g.clone(), &others, true);
        if r.lead() != g.lead() {
            return Err(Error::Internal("minimal basis element lost its lead term".into()));
        }
        reduced.push(r.to_monic_poly(nvars));
    }
    reduced.sort_by(|a, b| {
        let (la, lb) = (a.lead_exponent().unwrap(), b.lead_exponent().unwrap());
        (la.degree(), la).cmp(&(lb.degree(), lb))
    });

    let gb = GroebnerBasis {
        n: ideal.n,
        basis: reduced,
    };
    for g in &ideal.generators {
        if !gb.contains(g)? {
            return Err(Error::Internal(format!(
                "generator `{g}` does not reduce to zero against the computed basis"
            )));
        }
    }
    Ok(gb)
}
