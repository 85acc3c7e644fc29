//! Smooth / nodal / degenerate classification of hypersurfaces `V(f)`.
//!
//! A nonzero critical point `p` of a form always has `p` in the kernel of the
//! Hessian (homogeneity), so the singularity at `p` is a node exactly when the
//! Hessian has rank `n` there. Globally this becomes two zero-set questions:
//!
//! * jacobian ideal `(d0 f, ..., dn f)` vanishes only at the origin => smooth;
//! * jacobian ideal plus all `n x n` Hessian minors vanishes only at the
//!   origin => every singular point is a node.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::{buchberger, GroebnerBasis, GroebnerLimits, Ideal};
use crate::matrix::RationalMatrix;
use crate::poly::{Exponent, Form, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SingularityClass {
    Smooth,
    Nodal,
    Degenerate,
}

impl std::fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SingularityClass::Smooth => "SMOOTH",
            SingularityClass::Nodal => "NODAL",
            SingularityClass::Degenerate => "DEGENERATE",
        })
    }
}

/// Result of checking a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheck {
    pub critical: bool,
    /// `n + 1 - rank(Hess f(p))`, present only at critical points.
    pub kernel_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCertificate {
    pub point: Vec<Rational>,
    pub check: PointCheck,
}

impl Serialize for PointCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PointCertificate", 3)?;
        let point: Vec<String> = self.point.iter().map(ToString::to_string).collect();
        s.serialize_field("point", &point)?;
        s.serialize_field("critical", &self.check.critical)?;
        s.serialize_field("kernel_dim", &self.check.kernel_dim)?;
        s.end()
    }
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub class: SingularityClass,
    pub jacobian_gb: GroebnerBasis,
    /// Absent when the form is smooth.
    pub nonnode_gb: Option<GroebnerBasis>,
    pub point_certificates: Vec<PointCertificate>,
}

impl SingularityReport {
    /// Run [`is_singular_at`] at each point and attach the results.
    pub fn with_points(mut self, f: &Form, points: &[Vec<Rational>]) -> Result<Self> {
        for p in points {
            let check = is_singular_at(f, p)?;
            self.point_certificates.push(PointCertificate {
                point: p.clone(),
                check,
            });
        }
        Ok(self)
    }
}

impl Serialize for SingularityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SingularityReport", 3)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("jacobian_gb", &self.jacobian_gb.to_lines())?;
        s.serialize_field(
            "nonnode_gb",
            &self.nonnode_gb.as_ref().map(GroebnerBasis::to_lines),
        )?;
        s.end()
    }
}

fn poly_determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::constant(nvars, Rational::from_integer(1.into())),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        size => {
            let mut det = Poly::zero(nvars);
            for col in 0..size {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &poly_determinant(&minor, nvars);
                det = if col % 2 == 0 { &det + &term } else { &det - &term };
            }
            det
        }
    }
}

/// The `n x n` minors of the Hessian, deleting row `i` and column `j`, in
/// row-major order of `(i, j)`. Zero minors are kept here.
pub fn hessian_minors(f: &Form) -> Vec<Poly> {
    let hessian = f.derivatives().hessian;
    let size = f.nvars();
    let mut minors = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let sub: Vec<Vec<Poly>> = (0..size)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..size)
                        .filter(|&c| c != j)
                        .map(|c| hessian[r][c].poly().clone())
                        .collect()
                })
                .collect();
            minors.push(poly_determinant(&sub, size));
        }
    }
    minors
}

/// Jacobian ideal and the non-node ideal (jacobian plus Hessian `n x n` minors).
/// Zero generators are dropped.
pub fn singular_ideals(f: &Form) -> Result<(Ideal, Ideal)> {
    f.ensure_nonzero()?;
    if f.d() == 0 {
        return Err(Error::Precondition("classification needs degree d >= 1".into()));
    }
    let jacobian: Vec<Poly> = f
        .gradient()
        .into_iter()
        .filter(|g| !g.is_zero())
        .map(Form::into_poly)
        .collect();
    let mut nonnode = jacobian.clone();
    if f.d() >= 2 {
        nonnode.extend(hessian_minors(f).into_iter().filter(|m| !m.is_zero()));
    }
    Ok((Ideal::new(f.n(), jacobian)?, Ideal::new(f.n(), nonnode)?))
}

pub fn classify(f: &Form) -> Result<SingularityReport> {
    classify_with(f, &GroebnerLimits::default())
}

pub fn classify_with(f: &Form, limits: &GroebnerLimits) -> Result<SingularityReport> {
    let (jacobian, nonnode) = singular_ideals(f)?;
    let jacobian_gb = buchberger(&jacobian, limits)?;
    if jacobian_gb.only_origin()? {
        return Ok(SingularityReport {
            class: SingularityClass::Smooth,
            jacobian_gb,
            nonnode_gb: None,
            point_certificates: Vec::new(),
        });
    }
    // Same ideal as `nonnode`, but starting from the finished Jacobian basis
    // and the minors already reduced against it saves most of the work.
    let mut generators: Vec<Poly> = jacobian_gb.basis().to_vec();
    for minor in &nonnode.generators()[jacobian.generators().len()..] {
        let rest = jacobian_gb.reduce(minor)?;
        if !rest.is_zero() {
            generators.push(rest);
        }
    }
    let nonnode_gb = buchberger(&Ideal::new(f.n(), generators)?, limits)?;
    let class = if nonnode_gb.only_origin()? {
        SingularityClass::Nodal
    } else {
        SingularityClass::Degenerate
    };
    Ok(SingularityReport {
        class,
        jacobian_gb,
        nonnode_gb: Some(nonnode_gb),
        point_certificates: Vec::new(),
    })
}

/// Is the nonzero point `p` critical for `f`, and if so how large is the
/// Hessian kernel there.
pub fn is_singular_at(f: &Form, p: &[Rational]) -> Result<PointCheck> {
    if p.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: p.len(),
        });
    }
    if p.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("point must be nonzero".into()));
    }
    let critical = f.gradient_at(p)?.iter().all(Zero::is_zero);
    if !critical {
        return Ok(PointCheck {
            critical,
            kernel_dim: None,
        });
    }
    let rank = f.hessian_at(p)?.rank();
    Ok(PointCheck {
        critical,
        kernel_dim: Some(f.nvars() - rank),
    })
}

/// A form of degree `d` that is critical at `p` with Hessian kernel of
/// dimension at least 2 there: `z0^(d-2) * zn^2` moved so that `e0` lands on `p`.
pub fn degenerate_witness(n: usize, d: u32, p: &[Rational]) -> Result<Form> {
    if n < 2 {
        return Err(Error::Precondition("witness construction needs n >= 2".into()));
    }
    if d < 2 {
        return Err(Error::Precondition("witness construction needs d >= 2".into()));
    }
    if p.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: p.len(),
        });
    }
    let pivot = p
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::Precondition("point must be nonzero".into()))?;

    let mut powers = vec![0; n + 1];
    powers[0] = d - 2;
    powers[n] += 2;
    let base = Form::new(
        n,
        d,
        Poly::monomial(Exponent::new(powers), Rational::from_integer(1.into())),
    )?;

    // Columns: p, then the standard basis vectors other than e_pivot. Its
    // inverse sends p to e0, and acting by it moves the critical point e0 of
    // the base form to p.
    let mut columns: Vec<Vec<Rational>> = vec![p.to_vec()];
    for j in (0..=n).filter(|&j| j != pivot) {
        let mut e = vec![Rational::zero(); n + 1];
        e[j] = Rational::from_integer(1.into());
        columns.push(e);
    }
    let frame = RationalMatrix::new(columns)?.transpose();
    base.act(&frame.inverse()?)
}
