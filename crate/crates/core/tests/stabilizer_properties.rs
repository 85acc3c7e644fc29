mod common;

use nodal::git::{find_diagonal_destabilizer, CoordinateSearch};
use nodal::random::{monomials, random_admissible_weights, random_form_on, random_permutation};
use nodal::stabilizer::{
    infinitesimal_diagonal_stabilizer, monomial_stabilizer_count, order_bound, StabilizerProbe,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

#[test]
fn bound_is_positive_from_cubics_on() {
    for n in 1..=8usize {
        for d in 3..=10u32 {
            assert!(order_bound(n, d).unwrap() > BigInt::zero(), "n = {n}, d = {d}");
        }
        // (d - 1)^{n+1} - (d - 1)^{n-1} vanishes when d = 2
        assert!(order_bound(n, 2).unwrap().is_zero());
    }
}

#[test]
fn fermat_monomial_symmetries_divide_the_bound() {
    for (n, d) in [(1usize, 3u32), (1, 4), (2, 3), (2, 4), (2, 5), (3, 3), (3, 4)] {
        let f = common::fermat(n, d);
        let probe = StabilizerProbe::compute(&f, d).unwrap();
        assert!(!probe.is_infinite());
        let bound = order_bound(n, d).unwrap();
        assert_eq!(probe.divides(&bound), Some(true), "n = {n}, d = {d}: {probe:?} vs {bound}");
    }
}

/// Forms supported on a hyperplane `<m, r> = 0` are fixed by a torus, and are
/// destabilized with weight zero.
#[test]
fn torus_fixed_forms_are_destabilized() {
    let mut rng = common::rng(12);
    let mut checked = 0;
    while checked < 20 {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(2..=5u32);
        let r = random_admissible_weights(n + 1, 3, &mut rng);
        let support: Vec<_> = monomials(n + 1, d).into_iter().filter(|m| m.weight(&r) == 0).collect();
        if support.is_empty() {
            continue;
        }
        let perm = random_permutation(n + 1, &mut rng);
        let f = random_form_on(n, d, &support, 3, &mut rng).permute(&perm);
        assert!(infinitesimal_diagonal_stabilizer(&f).unwrap() > 0);
        let outcome = find_diagonal_destabilizer(&f, CoordinateSearch::AllPermutations).unwrap();
        let cert = outcome.certificate.expect("torus-fixed forms are destabilized");
        assert!(cert.mu <= 0);
        checked += 1;
    }
}

#[test]
fn infinitesimal_stabilizer_of_the_triangle_is_a_torus() {
    let s = common::form("z0*z1*z2", 2, 3);
    let probe = StabilizerProbe::compute(&s, 4).unwrap();
    assert!(probe.is_infinite());
    assert_eq!(probe.infinitesimal_dim, 2);
    // every det-one diagonal matrix of fourth roots fixes s, with the even permutations
    assert!(probe.monomial_count >= 16);
    assert_eq!(probe.divides(&order_bound(2, 3).unwrap()), None);
    let cert = find_diagonal_destabilizer(&s, CoordinateSearch::AllPermutations)
        .unwrap()
        .certificate
        .unwrap();
    assert_eq!((cert.permutation, cert.mu), (vec![0, 1, 2], 0));
}

#[test]
fn spec_examples() {
    assert_eq!(order_bound(2, 4).unwrap(), BigInt::from(672));
    assert_eq!(order_bound(3, 3).unwrap(), BigInt::from(3240));
    assert_eq!(order_bound(2, 3).unwrap(), BigInt::from(54));
    assert_eq!(monomial_stabilizer_count(&common::fermat(2, 4), 4).unwrap(), 96);
    assert_eq!(infinitesimal_diagonal_stabilizer(&common::fermat(2, 5)).unwrap(), 0);
}
