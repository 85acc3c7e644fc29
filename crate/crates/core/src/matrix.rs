//! Dense square matrices over the rationals: changes of coordinates and
//! evaluated Hessians.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    size: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: bad.len(),
            });
        }
        Ok(RationalMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Self {
        RationalMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    pub fn zeros(size: usize) -> Self {
        RationalMatrix {
            size,
            entries: vec![Rational::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = RationalMatrix::zeros(size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = RationalMatrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Matrix `P` with `P[perm[i]][i] = 1`, so that acting by `P` renames
    /// `z_{perm[i]}` to `z_i`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = RationalMatrix::zeros(perm.len());
        for (i, &src) in perm.iter().enumerate() {
            m.set(src, i, Rational::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.size + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.size.max(1))
            .take(self.size)
            .map(<[Rational]>::to_vec)
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.size).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.size, other.size);
        let mut out = RationalMatrix::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                let mut acc = Rational::zero();
                for k in 0..self.size {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.size)
            .map(|i| (0..self.size).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self.rows())
    }

    pub fn determinant(&self) -> Rational {
        let mut a = self.rows();
        let n = self.size;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= &a[col][col];
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        let n = self.size;
        let mut a = self.rows();
        let mut inv = RationalMatrix::identity(n).rows();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let scale = a[col][col].recip();
            for c in 0..n {
                a[col][c] *= &scale;
                inv[col][c] *= &scale;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let da = &factor * &a[col][c];
                    a[r][c] -= da;
                    let di = &factor * &inv[col][c];
                    inv[r][c] -= di;
                }
            }
        }
        RationalMatrix::new(inv)
    }
}

/// Rank of a (possibly rectangular) rational matrix by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot, rank);
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &rows[rank][col];
            for c in col..ncols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for RationalMatrix {
    /// Rows of entries as strings (`"3"`, `"-1/2"`).
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(serializer)
    }
}
