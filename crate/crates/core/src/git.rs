//! Hilbert-Mumford weights for diagonal one-parameter subgroups.
//!
//! For `lambda(t) = diag(t^r0, ..., t^rn)` with `r0 >= ... >= rn`, `sum r = 0`,
//! the weight of `f` is `mu(f, r) = max <m, r>` over the support of `f`, and
//! `mu <= 0` means `f` is not properly stable. The destabilizer search fixes
//! `r0 = 1` (admissible weights always have `r0 > 0`) and decides feasibility
//! of the resulting bounded polytope exactly.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::feasibility::{find_point, Constraint};
use crate::ideal::GroebnerLimits;
use crate::matrix::RationalMatrix;
use crate::poly::{rat, Exponent, Form, Rational};
use crate::random;
use crate::singularity::{classify_with, is_singular_at, SingularityClass};

/// Sorted, trace-free, nonzero integer weights of a diagonal 1-PS.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(r: Vec<i64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(i) = r.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidWeights(format!(
                "not sorted: r{} = {} < r{} = {}",
                i,
                r[i],
                i + 1,
                r[i + 1]
            )));
        }
        let sum: i64 = r.iter().sum();
        if sum != 0 {
            return Err(Error::InvalidWeights(format!("sum is {sum}, expected 0")));
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(WeightVector(r))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k * r` for `k > 0`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::InvalidWeights("scale factor must be positive".into()));
        }
        WeightVector::new(self.0.iter().map(|x| x * k).collect())
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// `max <m, r>` over the support of `f`.
pub fn mu(f: &Form, r: &WeightVector) -> Result<i64> {
    f.ensure_nonzero()?;
    if r.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: r.len(),
        });
    }
    Ok(f.support()
        .map(|m| m.weight(r.as_slice()))
        .max()
        .expect("nonzero form has support"))
}

/// Evidence that `f` is not properly stable: in the frame
/// `f' = permute(act(transform, f), permutation)`, `mu(f', weight) <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DestabilizerCertificate {
    pub permutation: Vec<usize>,
    #[serde(rename = "weights")]
    pub weight: WeightVector,
    pub mu: i64,
    /// Extra change of coordinates applied before the permutation (sampled frames only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<RationalMatrix>,
}

impl DestabilizerCertificate {
    /// The form in the certificate's coordinate frame.
    pub fn frame_form(&self, f: &Form) -> Result<Form> {
        if self.permutation.len() != f.nvars() || !is_permutation(&self.permutation) {
            return Err(Error::InvalidCertificate(format!(
                "{:?} is not a permutation of 0..{}",
                self.permutation,
                f.nvars()
            )));
        }
        let moved = match &self.transform {
            Some(g) => f.act(g)?,
            None => f.clone(),
        };
        Ok(moved.permute(&self.permutation))
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateSearch {
    /// Every coordinate permutation (sampled when `n > 4`).
    AllPermutations,
    /// Permutations as above, then `count` random unimodular changes of
    /// coordinates, each combined with every permutation.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub certificate: Option<DestabilizerCertificate>,
    /// Number of (transform, permutation) frames examined.
    pub searched_frames: usize,
}

const MAX_EXHAUSTIVE_N: usize = 4;
const SAMPLED_PERMUTATIONS: usize = 120;

fn frame_permutations(nvars: usize, seed: u64) -> Vec<Vec<usize>> {
    if nvars <= MAX_EXHAUSTIVE_N + 1 {
        return (0..nvars).permutations(nvars).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perms = vec![(0..nvars).collect::<Vec<_>>()];
    perms.extend((1..SAMPLED_PERMUTATIONS).map(|_| random::random_permutation(nvars, &mut rng)));
    perms
}

/// Rational point of `{r0 = 1, r sorted, sum r = 0, <m, r> <= 0 for m in support}`,
/// scaled to a primitive integer weight vector.
pub fn destabilizing_weights(support: &[Exponent], nvars: usize) -> Option<WeightVector> {
    let zero = || vec![Rational::zero(); nvars];
    let mut constraints = Vec::new();
    let mut pin = zero();
    pin[0] = rat(1);
    constraints.push(Constraint::eq(pin, rat(1)));
    constraints.push(Constraint::eq(vec![rat(1); nvars], rat(0)));
    for i in 0..nvars - 1 {
        let mut row = zero();
        row[i] = rat(-1);
        row[i + 1] = rat(1);
        constraints.push(Constraint::le(row, rat(0)));
    }
    for m in support {
        let row = m.powers().iter().map(|&p| rat(p as i64)).collect();
        constraints.push(Constraint::le(row, rat(0)));
    }
    let point = find_point(nvars, &constraints)?;
    Some(integer_weights(&point))
}

fn integer_weights(point: &[Rational]) -> WeightVector {
    let den = point.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = point
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let r = ints
        .iter()
        .map(|x| (x / &g).to_i64().expect("weights fit in i64"))
        .collect();
    WeightVector::new(r).expect("feasible point is an admissible weight vector")
}

fn search_frame(
    f: &Form,
    transform: Option<&RationalMatrix>,
    perm: &[usize],
) -> Result<Option<DestabilizerCertificate>> {
    let moved = match transform {
        Some(g) => f.act(g)?,
        None => f.clone(),
    };
    let framed = moved.permute(perm);
    let support: Vec<Exponent> = framed.support().cloned().collect();
    let Some(weight) = destabilizing_weights(&support, f.nvars()) else {
        return Ok(None);
    };
    let value = mu(&framed, &weight)?;
    if value > 0 {
        return Err(Error::Internal(format!(
            "feasible weights {:?} give mu = {value} > 0",
            weight.as_slice()
        )));
    }
    Ok(Some(DestabilizerCertificate {
        permutation: perm.to_vec(),
        weight,
        mu: value,
        transform: transform.cloned(),
    }))
}

/// Search diagonal one-parameter subgroups in the requested coordinate frames.
/// The first certificate in canonical frame order is returned; `None` only
/// means no frame searched admits one.
pub fn find_diagonal_destabilizer(f: &Form, search: CoordinateSearch) -> Result<SearchOutcome> {
    f.ensure_nonzero()?;
    let seed = match search {
        CoordinateSearch::AllPermutations => 0,
        CoordinateSearch::Sampled { seed, .. } => seed,
    };
    let perms = frame_permutations(f.nvars(), seed);
    let mut transforms: Vec<Option<RationalMatrix>> = vec![None];
    if let CoordinateSearch::Sampled { count, seed } = search {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        transforms.extend((0..count).map(|_| Some(random::random_unimodular(f.nvars(), &mut rng))));
    }

    let mut searched = 0;
    for transform in &transforms {
        let found = perms
            .par_iter()
            .map(|perm| search_frame(f, transform.as_ref(), perm))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        match found {
            Some(Ok(cert)) => {
                let index = perms
                    .iter()
                    .position(|p| cert.as_ref().is_some_and(|c| &c.permutation == p))
                    .expect("certificate permutation comes from the frame list");
                return Ok(SearchOutcome {
                    certificate: cert,
                    searched_frames: searched + index + 1,
                });
            }
            Some(Err(e)) => return Err(e),
            None => searched += perms.len(),
        }
    }
    Ok(SearchOutcome {
        certificate: None,
        searched_frames: searched,
    })
}

/// The four families of quantities that are positive for every admissible
/// weight vector once `d > n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightInequalities {
    /// `d r0`
    pub pure: i64,
    /// `(d-1) r0 + ri` for `0 < i <= n`
    pub linear: Vec<i64>,
    /// `(d-2) r0 + 2 ri` for `0 < i < n`
    pub square: Vec<i64>,
    /// `(d-2) r0 + ri + rj` for `0 < i < j <= n`
    pub mixed: Vec<((usize, usize), i64)>,
}

impl WeightInequalities {
    pub fn all_positive(&self) -> bool {
        self.pure > 0
            && self.linear.iter().all(|&v| v > 0)
            && self.square.iter().all(|&v| v > 0)
            && self.mixed.iter().all(|(_, v)| *v > 0)
    }
}

/// Raw values of the four families, without checking `d > n + 1`.
pub fn weight_inequality_values(r: &WeightVector, d: u32) -> WeightInequalities {
    let r = r.as_slice();
    let n = r.len() - 1;
    let d = d as i64;
    WeightInequalities {
        pure: d * r[0],
        linear: (1..=n).map(|i| (d - 1) * r[0] + r[i]).collect(),
        square: (1..n).map(|i| (d - 2) * r[0] + 2 * r[i]).collect(),
        mixed: (1..=n)
            .tuple_combinations()
            .map(|(i, j)| ((i, j), (d - 2) * r[0] + r[i] + r[j]))
            .collect(),
    }
}

pub fn check_weight_inequalities(r: &WeightVector, n: usize, d: u32) -> Result<bool> {
    if r.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: r.len(),
        });
    }
    if d as usize <= n + 1 {
        return Err(Error::Precondition(format!(
            "inequalities need d > n + 1 (got n = {n}, d = {d})"
        )));
    }
    Ok(weight_inequality_values(r, d).all_positive())
}

/// The monomials whose coefficients must vanish when `mu <= 0` and `d > n + 1`:
/// `z0^d`, `z0^(d-1) zi`, `z0^(d-2) zi^2` (`0 < i < n`), `z0^(d-2) zi zj` (`0 < i < j`).
pub fn forced_zero_monomials(n: usize, d: u32) -> Vec<Exponent> {
    let nvars = n + 1;
    let mut out = vec![Exponent::pure(nvars, 0, d)];
    for i in 1..=n {
        let mut p = vec![0; nvars];
        p[0] = d - 1;
        p[i] = 1;
        out.push(Exponent::new(p));
    }
    for i in 1..n {
        let mut p = vec![0; nvars];
        p[0] = d - 2;
        p[i] = 2;
        out.push(Exponent::new(p));
    }
    for (i, j) in (1..=n).tuple_combinations() {
        let mut p = vec![0; nvars];
        p[0] = d - 2;
        p[i] = 1;
        p[j] = 1;
        out.push(Exponent::new(p));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsequenceReport {
    /// Forced-zero monomials that nevertheless carry a coefficient.
    pub nonzero_listed: Vec<String>,
    pub coefficients_vanish: bool,
    pub critical_at_e0: bool,
    pub kernel_dim: Option<usize>,
    pub class: SingularityClass,
    pub passed: bool,
}

/// Replay the argument that a destabilized form is worse than nodal: in the
/// certificate's frame the forced coefficients vanish, `e0` is critical with
/// Hessian kernel of dimension at least 2, and the form classifies as degenerate.
pub fn verify_vanishing_consequence(
    f: &Form,
    cert: &DestabilizerCertificate,
) -> Result<ConsequenceReport> {
    verify_vanishing_consequence_with(f, cert, &GroebnerLimits::default())
}

pub fn verify_vanishing_consequence_with(
    f: &Form,
    cert: &DestabilizerCertificate,
    limits: &GroebnerLimits,
) -> Result<ConsequenceReport> {
    f.ensure_nonzero()?;
    let (n, d) = (f.n(), f.d());
    // For n = 1 the forced zeros only give a rank-one Hessian at e0, so the
    // kernel can be a single line (z0*z1^2 is destabilized yet nodal).
    if n < 2 {
        return Err(Error::Precondition(format!(
            "vanishing consequence needs n >= 2 (got n = {n})"
        )));
    }
    if d as usize <= n + 1 {
        return Err(Error::Precondition(format!(
            "vanishing consequence needs d > n + 1 (got n = {n}, d = {d})"
        )));
    }
    let framed = cert.frame_form(f)?;
    let recomputed = mu(&framed, &cert.weight)?;
    if recomputed > 0 {
        return Err(Error::InvalidCertificate(format!(
            "recomputed mu = {recomputed} is positive"
        )));
    }
    if recomputed != cert.mu {
        return Err(Error::InvalidCertificate(format!(
            "recomputed mu = {recomputed} differs from claimed {}",
            cert.mu
        )));
    }

    let nonzero_listed: Vec<String> = forced_zero_monomials(n, d)
        .into_iter()
        .filter(|m| framed.coefficient(m).is_some())
        .map(|m| m.to_string())
        .collect();
    let mut e0 = vec![Rational::zero(); f.nvars()];
    e0[0] = Rational::one();
    let check = is_singular_at(&framed, &e0)?;
    let class = classify_with(&framed, limits)?.class;

    let coefficients_vanish = nonzero_listed.is_empty();
    let passed = coefficients_vanish
        && check.critical
        && check.kernel_dim.is_some_and(|k| k >= 2)
        && class == SingularityClass::Degenerate;
    Ok(ConsequenceReport {
        nonzero_listed,
        coefficients_vanish,
        critical_at_e0: check.critical,
        kernel_dim: check.kernel_dim,
        class,
        passed,
    })
}
