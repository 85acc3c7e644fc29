//! Exact feasibility of small rational linear systems by Fourier-Motzkin
//! elimination, with extraction of a witness point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `a . x <= b`
    Le,
    /// `a . x == b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Le,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        }
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Scale to primitive integer coefficients (positive factor only, so the
    /// direction of an inequality is preserved).
    fn normalized(&self) -> Constraint {
        let mut den = BigInt::one();
        for v in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            den = den.lcm(v.denom());
        }
        let mut num = BigInt::zero();
        for v in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            num = num.gcd(&(v.numer() * (&den / v.denom())));
        }
        if num.is_zero() {
            return self.clone();
        }
        let factor = Rational::new(den, num);
        Constraint {
            coeffs: self.coeffs.iter().map(|c| c * &factor).collect(),
            relation: self.relation,
            rhs: &self.rhs * &factor,
        }
    }
}

/// How one eliminated variable is recovered from the earlier ones.
enum Elimination {
    /// `x_var = (rhs - sum_{k != var} a_k x_k) / a_var`
    Substitution { var: usize, equation: Constraint },
    /// Inequalities that involve `x_var` and possibly lower-index survivors.
    Bounds { var: usize, constraints: Vec<Constraint> },
}

/// A point satisfying every constraint, or `None` if the system is infeasible.
pub fn find_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint width must match nvars");
    }
    let mut system: Vec<Constraint> = constraints.iter().map(Constraint::normalized).collect();
    let mut history: Vec<Elimination> = Vec::new();
    let mut remaining: Vec<usize> = (0..nvars).collect();

    // Equalities first: each one removes a variable by substitution.
    while let Some(pos) = system.iter().position(|c| c.relation == Relation::Eq) {
        let eq = system.swap_remove(pos);
        let Some(var) = eq.coeffs.iter().rposition(|a| !a.is_zero()) else {
            if eq.rhs.is_zero() {
                continue;
            }
            return None;
        };
        system = system
            .into_iter()
            .map(|c| substitute(&c, &eq, var).normalized())
            .collect();
        remaining.retain(|&v| v != var);
        history.push(Elimination::Substitution { var, equation: eq });
    }

    while let Some(var) = remaining.pop() {
        let (involved, mut rest): (Vec<Constraint>, Vec<Constraint>) =
            system.into_iter().partition(|c| !c.coeffs[var].is_zero());
        let (upper, lower): (Vec<&Constraint>, Vec<&Constraint>) =
            involved.iter().partition(|c| c.coeffs[var].is_positive());
        for u in &upper {
            for l in &lower {
                let su = l.coeffs[var].abs();
                let sl = u.coeffs[var].clone();
                let combined = Constraint::le(
                    u.coeffs
                        .iter()
                        .zip(&l.coeffs)
                        .map(|(a, b)| a * &su + b * &sl)
                        .collect(),
                    &u.rhs * &su + &l.rhs * &sl,
                );
                rest.push(combined.normalized());
            }
        }
        let unique: BTreeSet<Constraint> = rest.into_iter().collect();
        system = unique.into_iter().collect();
        history.push(Elimination::Bounds {
            var,
            constraints: involved,
        });
    }

    // Only constant constraints `0 <= rhs` remain.
    if system.iter().any(|c| c.rhs.is_negative()) {
        return None;
    }

    let mut point = vec![Rational::zero(); nvars];
    for step in history.iter().rev() {
        match step {
            Elimination::Bounds { var, constraints } => {
                point[*var] = choose_value(*var, constraints, &point)?;
            }
            Elimination::Substitution { var, equation } => {
                let partial: Rational = equation
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k != var)
                    .map(|(k, a)| a * &point[k])
                    .sum();
                point[*var] = (&equation.rhs - partial) / &equation.coeffs[*var];
            }
        }
    }
    debug_assert!(constraints.iter().all(|c| c.is_satisfied_by(&point)));
    Some(point)
}

fn substitute(c: &Constraint, eq: &Constraint, var: usize) -> Constraint {
    let a = &c.coeffs[var];
    if a.is_zero() {
        return c.clone();
    }
    let factor = a / &eq.coeffs[var];
    Constraint {
        coeffs: c
            .coeffs
            .iter()
            .zip(&eq.coeffs)
            .map(|(ci, ei)| ci - &factor * ei)
            .collect(),
        relation: c.relation,
        rhs: &c.rhs - &factor * &eq.rhs,
    }
}

/// Pick a value for `var` inside its bounds, preferring the integer nearest to zero.
fn choose_value(var: usize, constraints: &[Constraint], point: &[Rational]) -> Option<Rational> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for c in constraints {
        let others: Rational = c
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != var)
            .map(|(k, a)| a * &point[k])
            .sum();
        let bound = (&c.rhs - others) / &c.coeffs[var];
        if c.coeffs[var].is_positive() {
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else {
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    let value = match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some(l), None) => {
            if l.is_negative() {
                Rational::zero()
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h.is_positive() {
                Rational::zero()
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            if l > h {
                return None;
            }
            let zero = Rational::zero();
            let near_zero = if l > zero {
                l.ceil()
            } else if h < zero {
                h.floor()
            } else {
                zero
            };
            if near_zero >= l && near_zero <= h {
                near_zero
            } else {
                (l + h) / Rational::from_integer(BigInt::from(2))
            }
        }
    };
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn v(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn simple_interval() {
        // 1 <= x <= 3/2  has no integer inside except 1
        let cs = vec![
            Constraint::le(v(&[-1]), rat(-1)),
            Constraint::le(v(&[2]), rat(3)),
        ];
        assert_eq!(find_point(1, &cs), Some(v(&[1])));
        let cs = vec![
            Constraint::le(v(&[-2]), rat(-3)),
            Constraint::le(v(&[4]), rat(7)),
        ];
        assert_eq!(find_point(1, &cs), Some(vec![ratio(13, 8)]));
    }

    #[test]
    fn infeasible_pair() {
        let cs = vec![
            Constraint::le(v(&[1, 1]), rat(1)),
            Constraint::le(v(&[-1, 0]), rat(-1)),
            Constraint::le(v(&[0, -1]), rat(-1)),
        ];
        assert_eq!(find_point(2, &cs), None);
    }

    #[test]
    fn equality_and_inequalities() {
        // x + y + z = 0, x = 1, x >= y >= z, y - z <= 2
        let cs = vec![
            Constraint::eq(v(&[1, 1, 1]), rat(0)),
            Constraint::eq(v(&[1, 0, 0]), rat(1)),
            Constraint::le(v(&[-1, 1, 0]), rat(0)),
            Constraint::le(v(&[0, -1, 1]), rat(0)),
            Constraint::le(v(&[0, 1, -1]), rat(2)),
        ];
        let p = find_point(3, &cs).expect("feasible");
        assert!(cs.iter().all(|c| c.is_satisfied_by(&p)));
        assert_eq!(p, v(&[1, 0, -1]));
        // y >= -1/2 and y <= -2/3 together are empty
        let mut bad = cs.clone();
        bad[4] = Constraint::le(v(&[0, 1, -2]), rat(0));
        assert_eq!(find_point(3, &bad), None);
    }

    #[test]
    fn inconsistent_equalities() {
        let cs = vec![
            Constraint::eq(v(&[1, 1]), rat(0)),
            Constraint::eq(v(&[2, 2]), rat(1)),
        ];
        assert_eq!(find_point(2, &cs), None);
    }

    #[test]
    fn unconstrained_variables_default_to_zero() {
        assert_eq!(find_point(2, &[]), Some(v(&[0, 0])));
    }
}
