//! Planar lattices with exact coordinates.
//!
//! A [`Lattice2`] is given by an ordered basis `x1, x2` of vectors in
//! `Q(sqrt(m))^2`. Reduction is Lagrange's algorithm with exact rounding;
//! the reduced form satisfies `|x1|^2 <= |x2|^2` and `0 <= 2 x1.x2 <= |x1|^2`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_complex, ExactReal};

pub type Vec2 = [ExactReal; 2];

fn dot(u: &Vec2, v: &Vec2) -> Result<ExactReal> {
    u[0].try_mul(&v[0])?.try_add(&u[1].try_mul(&v[1])?)
}

fn sub(u: &Vec2, v: &Vec2) -> Result<Vec2> {
    Ok([u[0].try_sub(&v[0])?, u[1].try_sub(&v[1])?])
}

fn scale_int(v: &Vec2, k: &Integer) -> Vec2 {
    let k = Rational::from(k);
    [v[0].mul_rational(&k), v[1].mul_rational(&k)]
}

fn neg(v: &Vec2) -> Vec2 {
    [-&v[0], -&v[1]]
}

fn is_integer(x: &ExactReal) -> bool {
    x.as_rational().is_some_and(|q| *q.denom() == 1)
}

/// Squared Euclidean norm of a vector.
pub fn norm_sq(v: &Vec2) -> Result<ExactReal> {
    dot(v, v)
}

/// Point `a + b i` of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TauRepr")]
pub struct Tau {
    a: ExactReal,
    b: ExactReal,
}

#[derive(Deserialize)]
struct TauRepr {
    a: ExactReal,
    b: ExactReal,
}

impl TryFrom<TauRepr> for Tau {
    type Error = Error;
    fn try_from(r: TauRepr) -> Result<Self> {
        Tau::new(r.a, r.b)
    }
}

impl Tau {
    pub fn new(a: ExactReal, b: ExactReal) -> Result<Self> {
        a.common_radicand(&b)?;
        if !b.is_positive() {
            return Err(Error::NonPositiveImaginary(b.to_string()));
        }
        Ok(Tau { a, b })
    }

    pub fn a(&self) -> &ExactReal {
        &self.a
    }

    pub fn b(&self) -> &ExactReal {
        &self.b
    }

    /// Radicand of the field holding both coordinates.
    pub fn field(&self) -> u64 {
        self.a.radicand().max(self.b.radicand())
    }

    /// `|tau|^2 = a^2 + b^2`.
    pub fn norm_sq(&self) -> ExactReal {
        self.a
            .square()
            .try_add(&self.b.square())
            .expect("coordinates share a field")
    }

    /// Membership in the strip `0 <= a <= 1/2`, `|tau| >= 1`.
    pub fn in_fundamental_region(&self) -> bool {
        let half = ExactReal::ratio(1, 2);
        self.a.signum() >= 0
            && self.a.cmp_exact(&half).is_ok_and(|o| o != Ordering::Greater)
            && self.norm_sq().cmp_exact(&ExactReal::one()).is_ok_and(|o| o != Ordering::Less)
    }

    pub fn require_fundamental(&self) -> Result<()> {
        if self.in_fundamental_region() {
            Ok(())
        } else {
            Err(Error::NotInFundamentalRegion(self.to_string()))
        }
    }

    /// `a` rational and `b^2` rational.
    pub fn is_arithmetic(&self) -> bool {
        self.a.is_rational() && self.b.square().is_rational()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.a.to_f64(), self.b.to_f64())
    }

    /// The lattice with basis `(1, 0)`, `(a, b)`.
    pub fn lattice(&self) -> Lattice2 {
        Lattice2::from_tau(self)
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_rational() {
            write!(f, "{} + ({})i", self.a, self.b)
        } else {
            write!(f, "({}) + ({})i", self.a, self.b)
        }
    }
}

impl FromStr for Tau {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = parse_complex(s)?;
        Tau::new(a, b)
    }
}

/// Classification of a reduced lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub well_rounded: bool,
    pub semi_stable: bool,
    pub arithmetic: bool,
    pub satisfies_wr_criterion: bool,
}

/// Integer change of basis: row `j` holds the coefficients of the new `y_j`
/// in the old basis, `y_j = u[j][0] x1 + u[j][1] x2`.
pub type Transform = [[Integer; 2]; 2];

/// Rank-2 lattice in the plane with an ordered exact basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2 {
    basis: [Vec2; 2],
    gram: [ExactReal; 3],
    field: u64,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    basis: [Vec2; 2],
    field: u64,
}

impl Serialize for Lattice2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr {
            basis: self.basis.clone(),
            field: self.field,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LatticeRepr::deserialize(d)?;
        let [x1, x2] = r.basis;
        let l = Lattice2::new(x1, x2).map_err(serde::de::Error::custom)?;
        if l.field != r.field && l.field != 1 {
            return Err(serde::de::Error::custom(format!(
                "basis lives in Q(sqrt({})), declared field {}",
                l.field, r.field
            )));
        }
        Ok(l)
    }
}

impl Lattice2 {
    /// Builds a lattice from two linearly independent vectors in one field.
    pub fn new(x1: Vec2, x2: Vec2) -> Result<Self> {
        let mut field = 1;
        for c in x1.iter().chain(x2.iter()) {
            let m = c.radicand();
            if m != 1 {
                if field != 1 && field != m {
                    return Err(Error::IncompatibleRadicands { left: field, right: m });
                }
                field = m;
            }
        }
        let det = x1[0].try_mul(&x2[1])?.try_sub(&x1[1].try_mul(&x2[0])?)?;
        if det.is_zero() {
            return Err(Error::DegenerateBasis);
        }
        let gram = [norm_sq(&x1)?, dot(&x1, &x2)?, norm_sq(&x2)?];
        Ok(Lattice2 {
            basis: [x1, x2],
            gram,
            field,
        })
    }

    /// Lattice with basis `(1, 0)`, `(a, b)`.
    pub fn from_tau(tau: &Tau) -> Self {
        Self::new(
            [ExactReal::one(), ExactReal::zero()],
            [tau.a.clone(), tau.b.clone()],
        )
        .expect("b > 0 gives an independent basis")
    }

    pub fn basis(&self) -> &[Vec2; 2] {
        &self.basis
    }

    pub fn x1(&self) -> &Vec2 {
        &self.basis[0]
    }

    pub fn x2(&self) -> &Vec2 {
        &self.basis[1]
    }

    /// Radicand `m` with all coordinates in `Q(sqrt(m))`.
    pub fn field(&self) -> u64 {
        self.field
    }

    /// `|x1|^2`.
    pub fn n1(&self) -> &ExactReal {
        &self.gram[0]
    }

    /// `x1 . x2`.
    pub fn p(&self) -> &ExactReal {
        &self.gram[1]
    }

    /// `|x2|^2`.
    pub fn n2(&self) -> &ExactReal {
        &self.gram[2]
    }

    pub fn gram(&self) -> [[ExactReal; 2]; 2] {
        let [n1, p, n2] = self.gram.clone();
        [[n1, p.clone()], [p, n2]]
    }

    /// `det(Gram) = |x1|^2 |x2|^2 - (x1.x2)^2 = det(L)^2`.
    pub fn gram_det(&self) -> ExactReal {
        self.gram[0]
            .try_mul(&self.gram[2])
            .and_then(|x| x.try_sub(&self.gram[1].square()))
            .expect("gram entries share a field")
    }

    /// Signed determinant of the basis matrix with columns `x1`, `x2`.
    pub fn basis_det(&self) -> ExactReal {
        let [x1, x2] = &self.basis;
        x1[0]
            .try_mul(&x2[1])
            .and_then(|d| d.try_sub(&x1[1].try_mul(&x2[0])?))
            .expect("basis entries share a field")
    }

    /// Whether the basis is in reduced form.
    pub fn is_reduced(&self) -> bool {
        let [n1, p, n2] = &self.gram;
        let two_p = p.mul_pow2(1);
        n1.cmp_exact(n2).is_ok_and(|o| o != Ordering::Greater)
            && p.signum() >= 0
            && two_p.cmp_exact(n1).is_ok_and(|o| o != Ordering::Greater)
    }

    fn require_reduced(&self) -> Result<()> {
        if self.is_reduced() {
            Ok(())
        } else {
            Err(Error::NotReduced)
        }
    }

    /// Reduced basis of the same lattice.
    pub fn reduce(&self) -> Result<Lattice2> {
        Ok(self.reduce_with_transform()?.0)
    }

    /// Reduced basis together with the unimodular change of basis.
    pub fn reduce_with_transform(&self) -> Result<(Lattice2, Transform)> {
        let one = || Integer::from(1);
        let zero = Integer::new;
        let mut v = self.basis.clone();
        let mut n = [self.gram[0].clone(), self.gram[2].clone()];
        let mut u: Transform = [[one(), zero()], [zero(), one()]];
        loop {
            if n[0].cmp_exact(&n[1])? == Ordering::Greater {
                v.swap(0, 1);
                n.swap(0, 1);
                u.swap(0, 1);
            }
            let p = dot(&v[0], &v[1])?;
            let mu = p.try_div(&n[0])?.round_half_up();
            if mu.cmp0() == Ordering::Equal {
                break;
            }
            v[1] = sub(&v[1], &scale_int(&v[0], &mu))?;
            n[1] = norm_sq(&v[1])?;
            let (r0, r1) = u.split_at_mut(1);
            for (b, a) in r1[0].iter_mut().zip(r0[0].iter()) {
                *b -= Integer::from(&mu * a);
            }
        }
        if dot(&v[0], &v[1])?.is_negative() {
            v[1] = neg(&v[1]);
            for c in u[1].iter_mut() {
                *c = Integer::from(-&*c);
            }
        }
        let [x1, x2] = v;
        Ok((Lattice2::new(x1, x2)?, u))
    }

    /// Exact classification of a reduced lattice.
    pub fn classify(&self) -> Result<ClassLabel> {
        self.require_reduced()?;
        let [n1, p, n2] = &self.gram;
        let det = self.gram_det();
        let well_rounded = n1 == n2;
        let semi_stable = n1.square().cmp_exact(&det)? != Ordering::Less;
        let arithmetic = p.try_div(n1)?.is_rational() && n2.try_div(n1)?.is_rational();
        let lhs = n2.try_sub(p)?.square();
        let rhs = det.mul_rational(&Rational::from(3));
        let satisfies_wr_criterion = lhs.cmp_exact(&rhs)? != Ordering::Greater;
        Ok(ClassLabel {
            well_rounded,
            semi_stable,
            arithmetic,
            satisfies_wr_criterion,
        })
    }

    /// Squared covering radius of a reduced lattice.
    pub fn covering_radius_sq(&self) -> Result<ExactReal> {
        self.require_reduced()?;
        let [n1, p, n2] = &self.gram;
        let num = n1
            .try_add(n2)?
            .try_sub(&p.mul_pow2(1))?
            .try_mul(n1)?
            .try_mul(n2)?;
        num.try_div(&self.gram_det().mul_pow2(2))
    }

    /// Circumcenter of the triangle `0, x1, x2` of a reduced basis.
    ///
    /// Solves `x1 . z = |x1|^2 / 2`, `x2 . z = |x2|^2 / 2`.
    pub fn fundamental_deep_hole(&self) -> Result<Vec2> {
        self.require_reduced()?;
        let [x1, x2] = &self.basis;
        let h1 = self.gram[0].mul_pow2(-1);
        let h2 = self.gram[2].mul_pow2(-1);
        let det = self.basis_det();
        let z1 = h1.try_mul(&x2[1])?.try_sub(&h2.try_mul(&x1[1])?)?.try_div(&det)?;
        let z2 = x1[0].try_mul(&h2)?.try_sub(&x2[0].try_mul(&h1)?)?.try_div(&det)?;
        Ok([z1, z2])
    }

    /// Reduced basis of the lattice spanned by `x1` and the fundamental deep hole.
    pub fn deep_hole_lattice(&self) -> Result<Lattice2> {
        let z = self.fundamental_deep_hole()?;
        Lattice2::new(self.basis[0].clone(), z)?.reduce()
    }

    /// The unique point of the fundamental strip whose lattice is similar to this one.
    pub fn f_representative(&self) -> Result<Tau> {
        let r = self.reduce()?;
        let n1 = r.n1();
        let a = r.p().try_div(n1)?;
        let ratio = r.gram_det().try_div(&n1.square())?;
        let b = ratio.sqrt()?;
        if a.common_radicand(&b).is_err() {
            return Err(Error::UnsupportedField(format!(
                "a = {a} and b = {b} lie in different quadratic fields"
            )));
        }
        Tau::new(a, b)
    }

    /// Coordinates of `v` in the basis.
    pub fn coordinates(&self, v: &Vec2) -> Result<[ExactReal; 2]> {
        let [x1, x2] = &self.basis;
        let det = self.basis_det();
        let c1 = v[0].try_mul(&x2[1])?.try_sub(&v[1].try_mul(&x2[0])?)?.try_div(&det)?;
        let c2 = x1[0].try_mul(&v[1])?.try_sub(&x1[1].try_mul(&v[0])?)?.try_div(&det)?;
        Ok([c1, c2])
    }

    /// Exact lattice membership.
    pub fn contains(&self, v: &Vec2) -> Result<bool> {
        let [c1, c2] = self.coordinates(v)?;
        Ok(is_integer(&c1) && is_integer(&c2))
    }

    /// Whether `v` lies in the closed triangle with vertices `0, x1, x2`.
    pub fn in_fundamental_triangle(&self, v: &Vec2) -> Result<bool> {
        let [c1, c2] = self.coordinates(v)?;
        let s = c1.try_add(&c2)?;
        Ok(c1.signum() >= 0 && c2.signum() >= 0 && s.cmp_exact(&ExactReal::one())? != Ordering::Greater)
    }

    /// Lattice scaled by a nonzero rational.
    pub fn scaled(&self, k: &Rational) -> Result<Lattice2> {
        let s = |v: &Vec2| [v[0].mul_rational(k), v[1].mul_rational(k)];
        Lattice2::new(s(&self.basis[0]), s(&self.basis[1]))
    }
}
