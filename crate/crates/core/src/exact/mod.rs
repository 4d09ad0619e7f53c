//! Exact arithmetic in a real quadratic field `Q(sqrt(m))`.
//!
//! An [`ExactReal`] is `rat + coef * sqrt(radicand)` with rational `rat`,
//! `coef` and a squarefree `radicand >= 1`. Rational values always carry
//! radicand 1, so equality is structural. Mixing two different radicands is
//! reported as [`Error::IncompatibleRadicands`].

mod factor;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use factor::{min_root_multiple, squarefree_decompose, TRIAL_LIMIT};
pub use parse::{parse_complex, parse_real};

/// Number of the form `rat + coef * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    rat: Rational,
    coef: Rational,
    radicand: u64,
}

/// Returns `r * sqrt(m)` with `(r * sqrt(m))^2 = n / d` and `m` squarefree.
pub fn normalize_radicand(n: &Integer, d: &Integer) -> Result<ExactReal> {
    if d.cmp0() == Ordering::Equal {
        return Err(Error::DivisionByZero);
    }
    let q = Rational::from((n.clone(), d.clone()));
    ExactReal::sqrt_rational(&q)
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.cmp0() == Ordering::Less {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if n.is_perfect_square() && d.is_perfect_square() {
        Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
    } else {
        None
    }
}

fn floor_rational(q: &Rational) -> Integer {
    q.clone().floor().into_numer_denom().0
}

fn sign_of(q: &Rational) -> i32 {
    match q.cmp0() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

impl ExactReal {
    /// Canonical constructor; `radicand` must already be squarefree.
    pub(crate) fn from_parts(rat: Rational, coef: Rational, radicand: u64) -> Self {
        if coef.cmp0() == Ordering::Equal || radicand <= 1 {
            let rat = if radicand == 1 { rat + coef } else { rat };
            ExactReal {
                rat,
                coef: Rational::new(),
                radicand: 1,
            }
        } else {
            ExactReal {
                rat,
                coef,
                radicand,
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_parts(Rational::new(), Rational::new(), 1)
    }

    pub fn one() -> Self {
        Self::from(1)
    }

    /// `n / d` for machine integers.
    ///
    /// # Panics
    /// Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from(Rational::from((n, d)))
    }

    /// `coef * sqrt(m)` for any `m >= 0`; square factors of `m` are pulled out.
    pub fn surd(coef: Rational, m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::zero());
        }
        let (square, free) = squarefree_decompose(&Integer::from(m))?;
        let free = free
            .to_u64()
            .ok_or_else(|| Error::RadicandTooLarge(free.to_string()))?;
        Ok(Self::from_parts(Rational::new(), coef * square, free))
    }

    /// `rat + coef * sqrt(m)`.
    pub fn new(rat: Rational, coef: Rational, m: u64) -> Result<Self> {
        Ok(Self::surd(coef, m)?.add_rational(&rat))
    }

    /// Square root of a nonnegative rational as `r * sqrt(m)`.
    pub fn sqrt_rational(q: &Rational) -> Result<Self> {
        if q.cmp0() == Ordering::Less {
            return Err(Error::NegativeRadicand(q.to_string()));
        }
        if q.cmp0() == Ordering::Equal {
            return Ok(Self::zero());
        }
        if let Some(r) = rational_sqrt(q) {
            return Ok(Self::from(r));
        }
        // sqrt(n/d) = sqrt(n d) / d
        let nd = Integer::from(q.numer() * q.denom());
        let (square, free) = squarefree_decompose(&nd)?;
        let free = free
            .to_u64()
            .ok_or_else(|| Error::RadicandTooLarge(free.to_string()))?;
        let coef = Rational::from((square, q.denom().clone()));
        Ok(Self::from_parts(Rational::new(), coef, free))
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.rat.cmp0() == Ordering::Equal
    }

    /// Common radicand of two values, or an error if they live in different fields.
    pub fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.radicand, other.radicand) {
            (1, m) | (m, 1) => Ok(m),
            (l, r) if l == r => Ok(l),
            (l, r) => Err(Error::IncompatibleRadicands { left: l, right: r }),
        }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sr = sign_of(&self.rat);
        if self.is_rational() {
            return sr;
        }
        let ss = sign_of(&self.coef);
        if sr == 0 || sr == ss {
            return ss;
        }
        // opposite signs: compare rat^2 with coef^2 * m
        let r2 = Rational::from(self.rat.square_ref());
        let s2m = Rational::from(self.coef.square_ref()) * Integer::from(self.radicand);
        match r2.cmp(&s2m) {
            Ordering::Greater => sr,
            Ordering::Less => ss,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        Ok(Self::from_parts(
            Rational::from(&self.rat + &other.rat),
            Rational::from(&self.coef + &other.coef),
            m,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        Ok(Self::from_parts(
            Rational::from(&self.rat - &other.rat),
            Rational::from(&self.coef - &other.coef),
            m,
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        if other.is_rational() {
            return Ok(self.mul_rational(&other.rat));
        }
        if self.is_rational() {
            return Ok(other.mul_rational(&self.rat));
        }
        let ss = Rational::from(&self.coef * &other.coef) * Integer::from(m);
        let rat = Rational::from(&self.rat * &other.rat) + ss;
        let coef = Rational::from(&self.rat * &other.coef) + Rational::from(&self.coef * &other.rat);
        Ok(Self::from_parts(rat, coef, m))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.common_radicand(other)?;
        let inv = other.recip()?;
        self.try_mul(&inv)
    }

    /// Field norm `rat^2 - coef^2 * m`.
    pub fn norm(&self) -> Rational {
        let r2 = Rational::from(self.rat.square_ref());
        if self.is_rational() {
            return r2;
        }
        r2 - Rational::from(self.coef.square_ref()) * Integer::from(self.radicand)
    }

    /// Galois conjugate `rat - coef * sqrt(m)`.
    pub fn conj(&self) -> Self {
        Self::from_parts(self.rat.clone(), Rational::from(-&self.coef), self.radicand)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from(Rational::from(self.rat.recip_ref())));
        }
        let n = self.norm();
        let rat = Rational::from(&self.rat / &n);
        let coef = Rational::from(-&self.coef) / &n;
        Ok(Self::from_parts(rat, coef, self.radicand))
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        Self::from_parts(
            Rational::from(&self.rat * q),
            Rational::from(&self.coef * q),
            self.radicand,
        )
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        Self::from_parts(
            Rational::from(&self.rat + q),
            self.coef.clone(),
            self.radicand,
        )
    }

    /// Multiplies by `2^k` (any sign of `k`).
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut rat = self.rat.clone();
        let mut coef = self.coef.clone();
        rat <<= k;
        coef <<= k;
        Self::from_parts(rat, coef, self.radicand)
    }

    pub fn square(&self) -> Self {
        if self.is_rational() {
            return Self::from(Rational::from(self.rat.square_ref()));
        }
        let rat = Rational::from(self.rat.square_ref())
            + Rational::from(self.coef.square_ref()) * Integer::from(self.radicand);
        let mut coef = Rational::from(&self.rat * &self.coef);
        coef <<= 1;
        Self::from_parts(rat, coef, self.radicand)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison; fails only for incompatible radicands.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        let m = self.common_radicand(other)?;
        if m > 1 {
            if self.rat == other.rat {
                return Ok(self.coef.cmp(&other.coef));
            }
            if self.coef == other.coef {
                return Ok(self.rat.cmp(&other.rat));
            }
        }
        Ok(self.try_sub(other)?.signum().cmp(&0))
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> Integer {
        let fr = floor_rational(&self.rat);
        if self.is_rational() {
            return fr;
        }
        let (u, v) = (self.coef.numer(), self.coef.denom());
        let w = (Integer::from(u.square_ref()) * self.radicand).sqrt();
        // floor(coef * sqrt(m)); the surd part is irrational, so ceil = floor + 1
        let (fw, _): (Integer, Integer) = w.div_rem_floor(v.clone());
        let fy = if u.cmp0() == Ordering::Greater {
            fw
        } else {
            -(fw + 1u32)
        };
        let candidate = fr + fy;
        let plus_one = Integer::from(&candidate + 1);
        let diff = self.add_rational(&Rational::from(-plus_one.clone()));
        if diff.signum() >= 0 {
            plus_one
        } else {
            candidate
        }
    }

    /// Nearest integer, halves rounded up: `floor(x + 1/2)`.
    pub fn round_half_up(&self) -> Integer {
        self.add_rational(&Rational::from((1, 2))).floor()
    }

    /// Exact square root when it stays in a single quadratic field.
    ///
    /// Rational inputs always succeed. For `x + y sqrt(m)` with `y != 0` the
    /// root is `r + s sqrt(m)` only when `x^2 - m y^2` is a rational square.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::NegativeRadicand(self.to_string()));
        }
        if self.is_rational() {
            return Self::sqrt_rational(&self.rat);
        }
        let n = self.norm();
        let root_n = rational_sqrt(&n).ok_or_else(|| {
            Error::UnsupportedField(format!("sqrt({self}) is not in Q(sqrt({}))", self.radicand))
        })?;
        // (r + s sqrt m)^2 = x + y sqrt m  =>  r^2 = (x +- sqrt(N)) / 2, s = y / (2r)
        for cand in [
            Rational::from(&self.rat + &root_n),
            Rational::from(&self.rat - &root_n),
        ] {
            let mut half = cand;
            half >>= 1;
            if let Some(r) = rational_sqrt(&half) {
                if r.cmp0() == Ordering::Equal {
                    continue;
                }
                let mut s = Rational::from(&self.coef / &r);
                s >>= 1;
                let root = Self::from_parts(r, s, self.radicand);
                let root = root.abs();
                if root.square() == *self {
                    return Ok(root);
                }
            }
        }
        // (s sqrt m)^2 is rational, so a pure surd root is impossible here
        Err(Error::UnsupportedField(format!(
            "sqrt({self}) is not in Q(sqrt({}))",
            self.radicand
        )))
    }

    /// Nearest double, rounding each part separately.
    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64();
        if self.is_rational() {
            r
        } else {
            r + self.coef.to_f64() * (self.radicand as f64).sqrt()
        }
    }

    /// Same value written in the field `Q(sqrt(m))`; fails if it lives elsewhere.
    pub fn in_field(&self, m: u64) -> Result<Self> {
        if self.is_rational() || self.radicand == m {
            Ok(self.clone())
        } else {
            Err(Error::IncompatibleRadicands {
                left: self.radicand,
                right: m,
            })
        }
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from(Rational::from(n))
    }
}

impl From<Integer> for ExactReal {
    fn from(n: Integer) -> Self {
        Self::from(Rational::from(n))
    }
}

impl From<Rational> for ExactReal {
    fn from(q: Rational) -> Self {
        Self::from_parts(q, Rational::new(), 1)
    }
}

impl std::ops::Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal::from_parts(
            Rational::from(-&self.rat),
            Rational::from(-&self.coef),
            self.radicand,
        )
    }
}

impl std::ops::Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rat);
        }
        let m = self.radicand;
        let abs_coef = Rational::from(self.coef.abs_ref());
        let surd = if abs_coef == 1 {
            format!("sqrt({m})")
        } else {
            format!("{abs_coef}*sqrt({m})")
        };
        let negative = self.coef.cmp0() == Ordering::Less;
        if self.rat.cmp0() == Ordering::Equal {
            if negative {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else if negative {
            write!(f, "{} - {surd}", self.rat)
        } else {
            write!(f, "{} + {surd}", self.rat)
        }
    }
}

impl FromStr for ExactReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_real(s)
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn surd(n: i64, d: i64, m: u64) -> ExactReal {
        ExactReal::surd(q(n, d), m).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let r = normalize_radicand(&Integer::from(4), &Integer::from(1)).unwrap();
        assert_eq!(r, ExactReal::from(2));
        let r = normalize_radicand(&Integer::from(3), &Integer::from(4)).unwrap();
        assert_eq!(r, surd(1, 2, 3));
        let r = normalize_radicand(&Integer::from(12), &Integer::from(25)).unwrap();
        assert_eq!(r, surd(2, 5, 3));
        assert_eq!(r.square(), ExactReal::ratio(12, 25));
        assert!(normalize_radicand(&Integer::from(-1), &Integer::from(2)).is_err());
    }

    #[test]
    fn sign_examples() {
        let x = ExactReal::one().try_sub(&surd(1, 2, 3)).unwrap();
        assert_eq!(x.signum(), 1);
        let x = ExactReal::from(3).try_sub(&surd(2, 1, 3)).unwrap();
        assert_eq!(x.signum(), -1);
        assert_eq!(surd(0, 1, 5).signum(), 0);
    }

    #[test]
    fn arithmetic_examples() {
        let a = ExactReal::one().try_add(&surd(1, 1, 2)).unwrap();
        let b = ExactReal::one().try_sub(&surd(1, 1, 2)).unwrap();
        assert_eq!(a.try_mul(&b).unwrap(), ExactReal::from(-1));
        let x = surd(1, 2, 3).try_div(&surd(1, 1, 3)).unwrap();
        assert_eq!(x, ExactReal::ratio(1, 2));
        assert_eq!(x.radicand(), 1);
        let x = ExactReal::ratio(15, 16).try_div(&ExactReal::from(2)).unwrap();
        assert_eq!(x, ExactReal::ratio(15, 32));
    }

    #[test]
    fn incompatible_radicands_fail() {
        let e = surd(1, 1, 2).try_add(&surd(1, 1, 3)).unwrap_err();
        assert_eq!(e, Error::IncompatibleRadicands { left: 2, right: 3 });
        assert!(surd(1, 1, 2).cmp_exact(&surd(1, 1, 3)).is_err());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            ExactReal::one().try_div(&ExactReal::zero()).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn surd_pulls_out_squares() {
        assert_eq!(surd(1, 1, 12), surd(2, 1, 3));
        assert_eq!(surd(3, 1, 4), ExactReal::from(6));
    }

    #[test]
    fn floor_values() {
        assert_eq!(surd(1, 1, 2).floor(), 1);
        assert_eq!(surd(-1, 1, 2).floor(), -2);
        assert_eq!(ExactReal::ratio(-1, 2).floor(), -1);
        let x = ExactReal::new(q(1, 3), q(7, 5), 3).unwrap();
        // 1/3 + 7/5 * 1.7320508 = 2.7582
        assert_eq!(x.floor(), 2);
        let x = ExactReal::new(q(3, 1), q(-1, 1), 2).unwrap();
        assert_eq!(x.floor(), 1);
        let x = ExactReal::new(q(-3, 1), q(2, 1), 2).unwrap();
        // -3 + 2.828 = -0.17
        assert_eq!(x.floor(), -1);
        assert_eq!(ExactReal::ratio(5, 2).round_half_up(), 3);
        assert_eq!(ExactReal::ratio(-5, 2).round_half_up(), -2);
    }

    #[test]
    fn sqrt_in_field() {
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        let x = ExactReal::new(q(3, 1), q(2, 1), 2).unwrap();
        assert_eq!(x.sqrt().unwrap(), ExactReal::new(q(1, 1), q(1, 1), 2).unwrap());
        // (sqrt 2 - 1)^2 = 3 - 2 sqrt 2
        let x = ExactReal::new(q(3, 1), q(-2, 1), 2).unwrap();
        assert_eq!(x.sqrt().unwrap(), ExactReal::new(q(-1, 1), q(1, 1), 2).unwrap());
        let x = ExactReal::new(q(1, 1), q(1, 1), 2).unwrap();
        assert!(matches!(x.sqrt(), Err(Error::UnsupportedField(_))));
        assert_eq!(ExactReal::ratio(1, 12).sqrt().unwrap(), surd(1, 6, 3));
    }

    #[test]
    fn display_round_trip() {
        let cases = [
            ExactReal::ratio(-7, 3),
            surd(1, 2, 3),
            surd(-1, 1, 5),
            ExactReal::new(q(1, 2), q(-3, 4), 7).unwrap(),
            ExactReal::new(q(-1, 2), q(3, 4), 7).unwrap(),
        ];
        for x in cases {
            let s = x.to_string();
            assert_eq!(s.parse::<ExactReal>().unwrap(), x, "{s}");
        }
        assert_eq!(
            ExactReal::new(q(1, 2), q(3, 4), 7).unwrap().to_string(),
            "1/2 + 3/4*sqrt(7)"
        );
    }

    #[test]
    fn serde_as_string() {
        let x = ExactReal::new(q(1, 2), q(3, 4), 7).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"1/2 + 3/4*sqrt(7)\"");
        let back: ExactReal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
