//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use nodal::poly::{rat, Exponent, Form, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn form(text: &str, n: usize, d: u32) -> Form {
    Form::parse(text, n, d).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn point(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

pub fn fermat(n: usize, d: u32) -> Form {
    let text = (0..=n).map(|i| format!("z{i}^{d}")).collect::<Vec<_>>().join(" + ");
    form(&text, n, d)
}

/// Every integer vector with entries in `[-bound, bound]`, zero sum and not
/// all zero. Coordinates are not sorted: sorting is what a coordinate
/// permutation does, so this covers all permuted frames at once.
pub fn trace_free_vectors(nvars: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![-bound; nvars];
    loop {
        if current.iter().sum::<i64>() == 0 && current.iter().any(|&x| x != 0) {
            out.push(current.clone());
        }
        let mut i = 0;
        loop {
            if i == nvars {
                return out;
            }
            if current[i] < bound {
                current[i] += 1;
                break;
            }
            current[i] = -bound;
            i += 1;
        }
    }
}

/// Brute-force destabilizer search over small integer weights in all coordinate orders.
pub fn brute_force_destabilizer(support: &[Exponent], vectors: &[Vec<i64>]) -> Option<Vec<i64>> {
    vectors
        .iter()
        .find(|r| {
            support.iter().all(|m| {
                m.powers().iter().zip(r.iter()).map(|(&p, &x)| p as i64 * x).sum::<i64>() <= 0
            })
        })
        .cloned()
}

/// Random subset of the degree-`d` monomials, nonempty.
pub fn random_support<R: Rng>(nvars: usize, d: u32, density: f64, rng: &mut R) -> Vec<Exponent> {
    let all = nodal::random::monomials(nvars, d);
    loop {
        let chosen: Vec<Exponent> = all.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
        if !chosen.is_empty() {
            return chosen;
        }
    }
}

/// Small grid of rationals used for brute-force zero searches.
pub fn grid_values() -> Vec<Rational> {
    vec![
        rat(0),
        rat(1),
        rat(-1),
        rat(2),
        rat(-2),
        nodal::poly::ratio(1, 2),
        nodal::poly::ratio(-1, 2),
    ]
}

pub fn grid_points(nvars: usize) -> Vec<Vec<Rational>> {
    let values = grid_values();
    let mut points = vec![Vec::new()];
    for _ in 0..nvars {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    points
}
