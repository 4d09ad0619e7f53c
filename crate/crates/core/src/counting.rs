//! Similarity classes with a prescribed deep hole `tau_0 = 1/2 + t i`.
//!
//! The classes whose deep-hole lattice is `Lambda_{tau_0}` form the circle arc
//! `(a - 1/2)^2 + (b - t)^2 = 1/4 + t^2` inside the strip. A line `b = s a`
//! meets that arc exactly once when `s >= q = 2t + sqrt(4t^2 + 1)`, so rational
//! points of the arc correspond to primitive pairs `(alpha, beta)` with
//! `beta >= q alpha`. Over `Q` the number of such pairs of height at most `T`
//! grows like `3 T^2 / (pi^2 q)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::lattice::Tau;
use crate::sequence::dh_step_generic;

/// Signature data of a number field `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSignature {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub disc_abs: u64,
}

impl FieldSignature {
    pub fn new(n: u32, r1: u32, r2: u32, disc_abs: u64) -> Result<Self> {
        if n == 0 || n != r1 + 2 * r2 || disc_abs == 0 {
            return Err(Error::InvalidParameter(format!(
                "signature n = {n}, r1 = {r1}, r2 = {r2}, |disc| = {disc_abs} is not valid"
            )));
        }
        Ok(FieldSignature { n, r1, r2, disc_abs })
    }

    /// The rational field.
    pub fn rationals() -> Self {
        FieldSignature {
            n: 1,
            r1: 1,
            r2: 0,
            disc_abs: 1,
        }
    }
}

fn nonzero_check(x: &[Rational]) -> Result<()> {
    if x.iter().all(|c| c.cmp0() == Ordering::Equal) {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

/// Least positive rational `c` with `c x` integral.
pub fn denominator(x: &[Rational]) -> Result<Rational> {
    nonzero_check(x)?;
    let l = x
        .iter()
        .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()));
    let g = x.iter().fold(Integer::new(), |acc, c| {
        let scaled = Integer::from(&l / c.denom()) * c.numer();
        acc.gcd(&scaled)
    });
    Ok(Rational::from((l, g)))
}

/// The primitive integer point `d(x) x`.
pub fn primitive_point(x: &[Rational]) -> Result<Vec<Integer>> {
    let d = denominator(x)?;
    Ok(x.iter()
        .map(|c| Rational::from(&d * c).into_numer_denom().0)
        .collect())
}

/// Primitive height over `Q`: the largest absolute coordinate of the primitive point.
pub fn primitive_height(x: &[Rational]) -> Result<Integer> {
    Ok(primitive_point(x)?
        .into_iter()
        .map(|c| c.abs())
        .max()
        .expect("nonzero vector"))
}

/// Slope of a line through the origin; `Infinite` is the vertical line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(ExactReal),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Slope::Infinite),
            other => Ok(Slope::Finite(other.parse()?)),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Point of the prescribed-hole arc with the slope that selects it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcPoint {
    pub a: ExactReal,
    pub b: ExactReal,
    pub slope: Slope,
}

impl ArcPoint {
    pub fn tau(&self) -> Result<Tau> {
        Tau::new(self.a.clone(), self.b.clone())
    }

    /// `(a - 1/2)^2 + (b - t)^2 = 1/4 + t^2`.
    pub fn on_circle(&self, t: &ExactReal) -> Result<bool> {
        let lhs = self
            .a
            .add_rational(&Rational::from((-1, 2)))
            .square()
            .try_add(&self.b.try_sub(t)?.square())?;
        let rhs = t.square().add_rational(&Rational::from((1, 4)));
        Ok(lhs.cmp_exact(&rhs)? == Ordering::Equal)
    }
}

/// `q = 2t + sqrt(4t^2 + 1)`, the smallest admissible slope.
pub fn min_slope(t: &ExactReal) -> Result<ExactReal> {
    let root = t.square().mul_pow2(2).add_rational(&Rational::from(1)).sqrt()?;
    t.mul_pow2(1).try_add(&root)
}

/// Float guard band used when the slope test cannot be done in one field.
const SLOPE_GUARD: f64 = 1e-9;

fn slope_admissible(s: &ExactReal, t: &ExactReal) -> Result<bool> {
    match min_slope(t).and_then(|q| s.cmp_exact(&q)) {
        Ok(o) => Ok(o != Ordering::Less),
        Err(Error::IncompatibleRadicands { .. } | Error::UnsupportedField(_)) => {
            let q = 2.0 * t.to_f64() + (4.0 * t.to_f64().powi(2) + 1.0).sqrt();
            let diff = s.to_f64() - q;
            if diff.abs() <= SLOPE_GUARD * q.max(1.0) {
                Err(Error::InvalidParameter(format!(
                    "slope {s} is within the float guard band of the minimum {q}"
                )))
            } else {
                Ok(diff > 0.0)
            }
        }
        Err(e) => Err(e),
    }
}

/// Intersection of the line `b = s a` with the arc of `tau_0 = 1/2 + t i`.
pub fn arc_point_from_slope(s: &Slope, t: &ExactReal) -> Result<ArcPoint> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    match s {
        Slope::Infinite => Ok(ArcPoint {
            a: ExactReal::zero(),
            b: t.mul_pow2(1),
            slope: Slope::Infinite,
        }),
        Slope::Finite(s_val) => {
            if !slope_admissible(s_val, t)? {
                return Err(Error::SlopeBelowMinimum {
                    slope: s_val.to_string(),
                    minimum: min_slope(t).map(|q| q.to_string()).unwrap_or_else(|_| {
                        format!("{:.12}", 2.0 * t.to_f64() + (4.0 * t.to_f64().powi(2) + 1.0).sqrt())
                    }),
                });
            }
            let num = t.try_mul(s_val)?.mul_pow2(1).add_rational(&Rational::from(1));
            let den = s_val.square().add_rational(&Rational::from(1));
            let a = num.try_div(&den)?;
            let b = s_val.try_mul(&a)?;
            Ok(ArcPoint {
                a,
                b,
                slope: s.clone(),
            })
        }
    }
}

/// Whether the deep-hole lattice of `tau` is `Lambda_{tau_0}`.
///
/// Points outside the fundamental strip are never members.
pub fn deep_hole_membership(tau: &Tau, tau0: &Tau) -> Result<bool> {
    if tau0.a() != &ExactReal::ratio(1, 2) {
        return Err(Error::InvalidParameter(format!(
            "prescribed hole {tau0} must have real part 1/2"
        )));
    }
    if !tau.in_fundamental_region() {
        return Ok(false);
    }
    let hole = dh_step_generic(tau)?;
    match hole.cmp_exact(tau0.b()) {
        Ok(o) => Ok(o == Ordering::Equal),
        Err(Error::IncompatibleRadicands { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Result of an enumeration of primitive pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub count: u64,
    pub points: Option<Vec<(u64, u64)>>,
}

/// `t = u / v` with the quantities the slope test needs.
struct SlopeData {
    u: u128,
    v: u128,
    w: u128,
}

impl SlopeData {
    fn new(t: &ExactReal) -> Result<Self> {
        let q = t.as_rational().ok_or_else(|| {
            Error::UnsupportedField(format!("enumeration needs a rational t, got {t}"))
        })?;
        if q.cmp0() != Ordering::Greater {
            return Err(Error::InvalidParameter(format!("t = {q} must be positive")));
        }
        let too_big = || Error::InvalidParameter(format!("t = {q} has too large a height"));
        let u = q.numer().to_u64().ok_or_else(too_big)? as u128;
        let v = q.denom().to_u64().ok_or_else(too_big)? as u128;
        if u > 1 << 30 || v > 1 << 30 {
            return Err(too_big());
        }
        Ok(SlopeData {
            u,
            v,
            w: 4 * u * u + v * v,
        })
    }

    /// Least `beta` with `beta >= q alpha`, for `alpha >= 1`.
    fn beta_min(&self, alpha: u64) -> u128 {
        let a = alpha as u128;
        let root = ceil_sqrt(a * a * self.w);
        (2 * self.u * a + root).div_ceil(self.v)
    }
}

fn ceil_sqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Smallest prime factor of every integer up to `n`.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Number of `beta` in `[lo, hi]` coprime to `alpha`, by inclusion-exclusion
/// over the distinct primes of `alpha`.
fn coprime_in_range(alpha: u64, lo: u64, hi: u64, spf: &[u32]) -> u64 {
    let mut primes = [0u64; 16];
    let mut k = 0;
    let mut rest = alpha as usize;
    while rest > 1 {
        let p = spf[rest] as usize;
        primes[k] = p as u64;
        k += 1;
        while rest.is_multiple_of(p) {
            rest /= p;
        }
    }
    let mut total: i64 = 0;
    for mask in 0u32..(1 << k) {
        let d: u64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).product();
        let c = (hi / d - (lo - 1) / d) as i64;
        if mask.count_ones() % 2 == 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    total as u64
}

fn count_alpha_range(data: &SlopeData, alphas: std::ops::Range<u64>, t_max: u64, spf: &[u32]) -> u64 {
    let mut total = 0;
    for alpha in alphas {
        let lo = data.beta_min(alpha);
        if lo > t_max as u128 {
            break;
        }
        total += coprime_in_range(alpha, lo as u64, t_max, spf);
    }
    total
}

/// Width of the alpha chunks; fixed so the partition does not depend on the thread count.
const CHUNK: u64 = 512;

fn enumerate_impl(t: &ExactReal, t_max: u64, with_points: bool, parallel: bool) -> Result<Enumeration> {
    let data = SlopeData::new(t)?;
    if t_max == 0 {
        return Ok(Enumeration {
            count: 0,
            points: with_points.then(Vec::new),
        });
    }
    if t_max > 1 << 26 {
        return Err(Error::InvalidParameter(format!("T = {t_max} is too large")));
    }
    let spf = spf_sieve(t_max as usize);
    // each chunk stops early once beta_min exceeds T
    let alpha_max = t_max;
    let chunks: Vec<std::ops::Range<u64>> = (1..=alpha_max)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(alpha_max + 1))
        .collect();
    let work = |r: &std::ops::Range<u64>| count_alpha_range(&data, r.clone(), t_max, &spf);
    let per_chunk: Vec<u64> = if parallel {
        chunks.par_iter().map(work).collect()
    } else {
        chunks.iter().map(work).collect()
    };
    // the vertical endpoint (0, 1)
    let count = 1 + per_chunk.iter().sum::<u64>();

    let points = with_points.then(|| {
        let mut pts = vec![(0, 1)];
        for alpha in 1..=alpha_max {
            let lo = data.beta_min(alpha);
            if lo > t_max as u128 {
                break;
            }
            for beta in lo as u64..=t_max {
                if gcd(alpha, beta) == 1 {
                    pts.push((alpha, beta));
                }
            }
        }
        pts
    });
    Ok(Enumeration { count, points })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive pairs `(alpha, beta)` with `alpha >= 0`, `beta >= 1`,
/// `max(alpha, beta) <= T` and `beta >= q alpha`; `(0, 1)` is included.
///
/// Runs in parallel over fixed alpha chunks; the result does not depend on scheduling.
pub fn enumerate_pq(t: &ExactReal, t_max: u64, with_points: bool) -> Result<Enumeration> {
    enumerate_impl(t, t_max, with_points, true)
}

/// Single-threaded [`enumerate_pq`].
pub fn enumerate_pq_serial(t: &ExactReal, t_max: u64, with_points: bool) -> Result<Enumeration> {
    enumerate_impl(t, t_max, with_points, false)
}

/// `zeta(2n)`: closed forms up to `n = 4`, otherwise the series with tail below `1e-12`.
pub fn zeta_even(n: u32) -> f64 {
    use std::f64::consts::PI;
    match n {
        1 => PI.powi(2) / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        _ => {
            let s = 2 * n as i32;
            // tail after K terms is below K^(1-s) / (s-1)
            let mut k = 1u64;
            while (k as f64).powi(1 - s) / (s - 1) as f64 > 1e-12 {
                k += 1;
            }
            (1..=k).rev().map(|j| (j as f64).powi(-s)).sum()
        }
    }
}

/// `q = 2t + sqrt(4t^2 + 1)` in floating point.
pub fn min_slope_f64(t: f64) -> f64 {
    2.0 * t + (4.0 * t * t + 1.0).sqrt()
}

/// Leading term `4^r1 pi^(2 r2) / (8 zeta(2n) q |disc|) * T^(2n)`.
pub fn bound_ht_count(sig: &FieldSignature, t: f64, t_max: f64) -> Result<f64> {
    if t <= 0.0 || t_max < 1.0 {
        return Err(Error::InvalidParameter(format!("need t > 0 and T >= 1, got t = {t}, T = {t_max}")));
    }
    let sig = FieldSignature::new(sig.n, sig.r1, sig.r2, sig.disc_abs)?;
    let q = min_slope_f64(t);
    let c = 4f64.powi(sig.r1 as i32) * std::f64::consts::PI.powi(2 * sig.r2 as i32)
        / (8.0 * zeta_even(sig.n) * q * sig.disc_abs as f64);
    Ok(c * t_max.powi(2 * sig.n as i32))
}

/// Relative slack `eps_T` with `|count / bound - 1| <= eps_T` over `Q`.
///
/// From Mobius inversion of the lattice-point count in the triangle
/// `0 <= q alpha <= beta <= X`, whose error is at most `X/2 + X/q + 1 + q/8`.
pub fn finite_size_slack(t: f64, t_max: u64) -> f64 {
    use std::f64::consts::PI;
    let q = min_slope_f64(t);
    let tt = t_max as f64;
    let harmonic = 1.0 + tt.ln();
    let err = tt / (2.0 * q) + (0.5 + 1.0 / q) * tt * harmonic + tt * (1.0 + q / 8.0);
    err * PI * PI * q / (3.0 * tt * tt)
}

/// Empirical count against the theoretical leading term, for `K = Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub t: ExactReal,
    #[serde(rename = "T")]
    pub t_max: u64,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
    /// Rigorous finite-size slack on the ratio.
    pub epsilon: f64,
    /// The vertical endpoint `(0, 1)` is part of `count`.
    pub includes_endpoint: bool,
}

pub fn counting_report(t: &ExactReal, t_max: u64) -> Result<CountingReport> {
    let e = enumerate_pq(t, t_max, false)?;
    let tf = t.to_f64();
    let bound = bound_ht_count(&FieldSignature::rationals(), tf, t_max as f64)?;
    Ok(CountingReport {
        t: t.clone(),
        t_max,
        count: e.count,
        bound,
        ratio: e.count as f64 / bound,
        epsilon: finite_size_slack(tf, t_max),
        includes_endpoint: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn r(n: i64, d: i64) -> ExactReal {
        ExactReal::ratio(n, d)
    }

    #[test]
    fn denominator_examples() {
        assert_eq!(denominator(&[q(2, 3), q(4, 5)]).unwrap(), q(15, 2));
        assert_eq!(primitive_point(&[q(2, 3), q(4, 5)]).unwrap(), vec![Integer::from(5), Integer::from(6)]);
        assert_eq!(denominator(&[q(3, 1), q(6, 1)]).unwrap(), q(1, 3));
        assert_eq!(denominator(&[q(1, 1), q(0, 1)]).unwrap(), q(1, 1));
        assert_eq!(denominator(&[q(0, 1), q(0, 1)]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn height_examples() {
        assert_eq!(primitive_height(&[q(2, 3), q(4, 5)]).unwrap(), 6);
        assert_eq!(primitive_height(&[q(1, 1), q(0, 1)]).unwrap(), 1);
        assert_eq!(primitive_height(&[q(-1, 1), q(-1, 1)]).unwrap(), 1);
        assert_eq!(
            primitive_point(&[q(-1, 1), q(-1, 1)]).unwrap(),
            vec![Integer::from(-1), Integer::from(-1)]
        );
    }

    #[test]
    fn arc_examples() {
        let t = r(1, 2);
        let p = arc_point_from_slope(&Slope::Finite(r(3, 1)), &t).unwrap();
        assert_eq!((p.a.clone(), p.b.clone()), (r(2, 5), r(6, 5)));
        assert!(p.on_circle(&t).unwrap());
        let p = arc_point_from_slope(&Slope::Infinite, &t).unwrap();
        assert_eq!((p.a.clone(), p.b.clone()), (r(0, 1), r(1, 1)));
        let s: ExactReal = "1 + sqrt(2)".parse().unwrap();
        let p = arc_point_from_slope(&Slope::Finite(s), &t).unwrap();
        assert_eq!(p.a, r(1, 2));
        assert_eq!(p.b, "1/2 + sqrt(2)/2".parse().unwrap());
        assert!(p.on_circle(&t).unwrap());
        assert!(matches!(
            arc_point_from_slope(&Slope::Finite(r(2, 1)), &t),
            Err(Error::SlopeBelowMinimum { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let tau0: Tau = "1/2 + 1/2 i".parse().unwrap();
        let tau = |s: &str| s.parse::<Tau>().unwrap();
        assert!(deep_hole_membership(&tau("2/5 + 6/5 i"), &tau0).unwrap());
        assert!(deep_hole_membership(&tau("i"), &tau0).unwrap());
        assert!(!deep_hole_membership(&tau("1/2 + 2i"), &tau0).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let t = r(1, 2);
        assert_eq!(enumerate_pq(&t, 1, false).unwrap().count, 1);
        let e = enumerate_pq(&t, 3, true).unwrap();
        assert_eq!(e.count, 2);
        assert_eq!(e.points.unwrap(), vec![(0, 1), (1, 3)]);
        assert_eq!(
            enumerate_pq(&t, 500, false).unwrap(),
            enumerate_pq_serial(&t, 500, false).unwrap()
        );
    }

    #[test]
    fn bound_examples() {
        let sig = FieldSignature::rationals();
        let c = 3.0 / (std::f64::consts::PI.powi(2) * (1.0 + 2f64.sqrt()));
        let b = bound_ht_count(&sig, 0.5, 1000.0).unwrap();
        assert!((b / (c * 1e6) - 1.0).abs() < 1e-12);
        assert!((b - 125_905.825_261_053_9).abs() < 1e-6);
        let b = bound_ht_count(&sig, 0.5, 1.0).unwrap();
        assert!((b - 0.1259).abs() < 1e-4);
        let sig = FieldSignature::new(2, 2, 0, 5).unwrap();
        let b = bound_ht_count(&sig, 0.5, 10.0).unwrap();
        assert!((b - 1_530.831_269_149_84).abs() < 1e-9, "{b}");
        assert!(FieldSignature::new(3, 1, 0, 5).is_err());
    }

    #[test]
    fn zeta_series_matches_closed_forms() {
        use std::f64::consts::PI;
        let series = |s: i32| (1..200_000u64).map(|k| (k as f64).powi(-s)).sum::<f64>();
        for n in 1..=4 {
            assert!((zeta_even(n) - series(2 * n as i32)).abs() < 1e-5);
        }
        // zeta(10) = pi^10 / 93555
        assert!((zeta_even(5) - PI.powi(10) / 93555.0).abs() < 1e-12);
    }
}
