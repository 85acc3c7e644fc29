//! Stabilizer probes: the divisibility bound for finite stabilizers, the
//! diagonal torus fixing a form, and an exact count of monomial symmetries.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix;
use crate::poly::{rat, Exponent, Form, Rational};

/// `prod_{i=2}^{n+1} ((d-1)^{n+1} + (-1)^{i+1} (d-1)^{n+1-i})`.
///
/// For `d = 2` the `i = 2` factor is zero, so the product is zero.
pub fn order_bound(n: usize, d: u32) -> Result<BigInt> {
    if n < 1 || d < 2 {
        return Err(Error::Precondition(format!(
            "order bound needs n >= 1 and d >= 2, got n = {n}, d = {d}"
        )));
    }
    Ok(order_bound_factors(n, d).iter().product())
}

pub fn order_bound_factors(n: usize, d: u32) -> Vec<BigInt> {
    let base = BigInt::from(d - 1);
    let top = num_traits::pow(base.clone(), n + 1);
    (2..=n + 1)
        .map(|i| {
            let tail = num_traits::pow(base.clone(), n + 1 - i);
            if i % 2 == 1 {
                &top + tail
            } else {
                &top - tail
            }
        })
        .collect()
}

/// Dimension of the trace-free diagonal directions `r` with `<m, r> = 0` on the support.
pub fn infinitesimal_diagonal_stabilizer(f: &Form) -> Result<usize> {
    f.ensure_nonzero()?;
    let nvars = f.nvars();
    let mut rows = vec![vec![rat(1); nvars]];
    rows.extend(
        f.support()
            .map(|m| m.powers().iter().map(|&p| rat(p as i64)).collect::<Vec<Rational>>()),
    );
    Ok(nvars - matrix::rank(rows))
}

/// Number of `g` with `g[k][sigma(k)] = zeta^{a_k}` (`zeta` a primitive `k`-th
/// root of unity), `det g = 1` and `act(g, f) = f`.
///
/// Under such `g` the monomial `z^e` becomes `zeta^{<a, e>} z^{sigma(e)}`, so
/// with rational coefficients the scalar must be `+1` or `-1`; everything is
/// decided by exponent arithmetic mod `k`.
pub fn monomial_stabilizer_count(f: &Form, root_order: u32) -> Result<u64> {
    f.ensure_nonzero()?;
    if root_order == 0 {
        return Err(Error::Precondition("root order must be at least 1".into()));
    }
    let k = root_order as u64;
    let nvars = f.nvars();
    let terms: Vec<(&Exponent, &Rational)> = f.terms().collect();
    let perms: Vec<Vec<usize>> = (0..nvars).permutations(nvars).collect();
    let count = perms
        .par_iter()
        .map(|sigma| {
            // image exponents and the sign relating the coefficients
            let mut moves = Vec::with_capacity(terms.len());
            for (e, c) in &terms {
                let mut image = vec![0; nvars];
                for (i, &p) in e.powers().iter().enumerate() {
                    image[sigma[i]] = p;
                }
                let Some(target) = f.coefficient(&Exponent::new(image)) else {
                    return 0;
                };
                let sign = if target == *c {
                    0
                } else if target == &-*c && k % 2 == 0 {
                    k / 2
                } else {
                    return 0;
                };
                moves.push((e.powers().to_vec(), sign));
            }
            let det_target = if permutation_sign(sigma) { 0 } else if k % 2 == 0 { k / 2 } else { return 0 };
            (0..nvars)
                .map(|_| 0..k)
                .multi_cartesian_product()
                .filter(|a| {
                    a.iter().sum::<u64>() % k == det_target
                        && moves.iter().all(|(e, sign)| {
                            e.iter().zip(a).map(|(&p, &x)| p as u64 * x).sum::<u64>() % k == *sign
                        })
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}

/// True for even permutations.
fn permutation_sign(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerProbe {
    pub monomial_count: u64,
    pub infinitesimal_dim: usize,
}

impl StabilizerProbe {
    pub fn compute(f: &Form, root_order: u32) -> Result<Self> {
        Ok(StabilizerProbe {
            monomial_count: monomial_stabilizer_count(f, root_order)?,
            infinitesimal_dim: infinitesimal_diagonal_stabilizer(f)?,
        })
    }

    /// A positive-dimensional diagonal stabilizer means the full stabilizer is infinite.
    pub fn is_infinite(&self) -> bool {
        self.infinitesimal_dim > 0
    }

    /// Lagrange check against the bound; `None` when the stabilizer is infinite.
    pub fn divides(&self, bound: &BigInt) -> Option<bool> {
        if self.is_infinite() {
            return None;
        }
        Some((bound % BigInt::from(self.monomial_count)).is_zero())
    }
}
