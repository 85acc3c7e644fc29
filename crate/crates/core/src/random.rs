//! Seeded generators for forms, weights and changes of coordinates, shared by
//! the CLI sampling mode and the test suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::RationalMatrix;
use crate::poly::{rat, ratio, Exponent, Form, Poly, Rational};

/// All exponents of degree `d` in `nvars` variables, in descending degrevlex order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Exponent> {
    fn fill(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Exponent>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Exponent::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for p in (0..=left).rev() {
            prefix.push(p);
            fill(prefix, left - p, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(nvars), d, nvars, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// A form whose coefficients are drawn uniformly from `[-bound, bound]`, each
/// monomial kept with probability `density`. Never returns the zero form.
pub fn random_form<R: Rng>(n: usize, d: u32, bound: i64, density: f64, rng: &mut R) -> Form {
    let support = monomials(n + 1, d);
    loop {
        let poly = Poly::from_terms(
            n + 1,
            support.iter().filter_map(|m| {
                if !rng.gen_bool(density) {
                    return None;
                }
                Some((m.clone(), rat(rng.gen_range(-bound..=bound))))
            }),
        );
        if !poly.is_zero() {
            return Form::new(n, d, poly).expect("monomials have degree d");
        }
    }
}

/// A random form supported on the given monomials.
pub fn random_form_on<R: Rng>(n: usize, d: u32, support: &[Exponent], bound: i64, rng: &mut R) -> Form {
    assert!(bound >= 1);
    let poly = Poly::from_terms(
        n + 1,
        support.iter().map(|m| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-bound..=bound);
            }
            (m.clone(), rat(c))
        }),
    );
    Form::new(n, d, poly).expect("support has degree d")
}

pub fn random_permutation<R: Rng>(len: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    match rng.gen_range(0..7) {
        0 => rat(-2),
        1 => rat(-1),
        2 => ratio(-1, 2),
        3 => rat(0),
        4 => ratio(1, 2),
        5 => rat(1),
        _ => rat(2),
    }
}

/// `L * U` with unit triangular factors and small rational off-diagonal
/// entries; determinant 1.
pub fn random_unimodular<R: Rng>(size: usize, rng: &mut R) -> RationalMatrix {
    let mut lower = RationalMatrix::identity(size);
    let mut upper = RationalMatrix::identity(size);
    for i in 0..size {
        for j in 0..i {
            lower.set(i, j, small_rational(rng));
            upper.set(j, i, small_rational(rng));
        }
    }
    lower.mul(&upper)
}

/// An invertible matrix with small rational entries.
pub fn random_invertible<R: Rng>(size: usize, rng: &mut R) -> RationalMatrix {
    loop {
        let rows = (0..size)
            .map(|_| (0..size).map(|_| small_rational(rng)).collect())
            .collect();
        let m = RationalMatrix::new(rows).expect("square");
        if !num_traits::Zero::is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// Sorted, sum-zero, nonzero integer vector with entries in `[-bound, bound]`.
pub fn random_admissible_weights<R: Rng>(len: usize, bound: i64, rng: &mut R) -> Vec<i64> {
    loop {
        let mut r: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
        let sum: i64 = r.iter().sum();
        if sum != 0 || r.iter().all(|&x| x == 0) {
            // spread the excess over the coordinates when it keeps entries in range
            let last = len - 1;
            let fixed = r[last] - sum;
            if fixed.abs() > bound {
                continue;
            }
            r[last] = fixed;
            if r.iter().all(|&x| x == 0) {
                continue;
            }
        }
        r.sort_unstable_by(|a, b| b.cmp(a));
        return r;
    }
}

/// A form with a node at `e0`: `z0^{d-2} q + sum_{k>=3} z0^{d-k} f_k` in the
/// remaining variables, with `q` a nondegenerate quadric. Requires `d >= 2`.
/// Other singular points are possible but not generic.
pub fn random_form_with_node<R: Rng>(n: usize, d: u32, bound: i64, rng: &mut R) -> Form {
    assert!(d >= 2);
    let nvars = n + 1;
    let lift = |e: &Exponent, k: u32| {
        let mut powers = vec![d - k];
        powers.extend_from_slice(e.powers());
        Exponent::new(powers)
    };
    loop {
        let quadric: Vec<(Exponent, Rational)> = monomials(n, 2)
            .into_iter()
            .map(|e| (e, rat(rng.gen_range(-bound..=bound))))
            .collect();
        let q = Poly::from_terms(n, quadric.iter().cloned());
        let hessian: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| q.partial(i).partial(j).evaluate(&vec![rat(0); n]).expect("constant")).collect())
            .collect();
        if !num_traits::Zero::is_zero(&RationalMatrix::new(hessian).expect("square").determinant()) {
            let mut terms: Vec<(Exponent, Rational)> =
                quadric.iter().map(|(e, c)| (lift(e, 2), c.clone())).collect();
            for k in 3..=d {
                for e in monomials(n, k) {
                    terms.push((lift(&e, k), rat(rng.gen_range(-bound..=bound))));
                }
            }
            return Form::new(n, d, Poly::from_terms(nvars, terms)).expect("degree d");
        }
    }
}

/// A random form supported on `{m : <m, r> <= 0}` for random admissible `r`,
/// in a random coordinate order. Such a form always has a diagonal destabilizer.
pub fn random_destabilized_form<R: Rng>(n: usize, d: u32, bound: i64, rng: &mut R) -> (Form, Vec<i64>) {
    let nvars = n + 1;
    loop {
        let r = random_admissible_weights(nvars, 3, rng);
        let support: Vec<Exponent> = monomials(nvars, d)
            .into_iter()
            .filter(|m| m.weight(&r) <= 0 && rng.gen_bool(0.7))
            .collect();
        if support.is_empty() {
            continue;
        }
        let f = random_form_on(n, d, &support, bound, rng);
        let perm = random_permutation(nvars, rng);
        return (f.permute(&perm), r);
    }
}
