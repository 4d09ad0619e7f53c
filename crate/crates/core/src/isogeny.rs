//! Isogenies between consecutive lattices of an arithmetic deep-hole sequence,
//! and a numeric j-invariant.
//!
//! For `tau_{k+1} = dh_step(tau_k)` the fundamental deep hole has finite order
//! `l` in `C / Lambda_{tau_k}` exactly when the lattice is arithmetic. Then
//! `l Lambda_{tau_{k+1}}` is a sublattice of `Lambda_{tau_k}` of index
//! `delta = l^2 b_{k+1} / b_k`, the degree of the induced isogeny.
//!
//! The order satisfies `l <= B = 12 sqrt(3) d_k^4 |tau_k|^4`, which gives
//! `delta <= rho B^2` with `rho = b_{k+1} / b_k`. The sharper `delta <= rho B`
//! is reported per step as `within_bound`; it holds whenever `a_k = 1/2` but
//! can fail on the first step of a sequence with `a_0 != 1/2`
//! (`tau_0 = 8/19 + 9/2 i` gives `delta = 609904625778 > 8.93e9`).

use std::sync::OnceLock;

use num_complex::Complex64;
use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::lattice::Tau;
use crate::sequence::DeepHoleSequence;

fn ser_int<S: Serializer>(x: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn de_int<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Integer, D::Error> {
    let s = String::deserialize(d)?;
    Integer::from_str_radix(&s, 10).map_err(serde::de::Error::custom)
}

fn ser_rat<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn de_rat<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    s.parse::<Rational>().map_err(serde::de::Error::custom)
}

/// Data of one isogeny `C / Lambda_{tau_{k+1}} -> C / Lambda_{tau_k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsogenyStep {
    pub k: usize,
    #[serde(serialize_with = "ser_int", deserialize_with = "de_int")]
    pub d_k: Integer,
    #[serde(serialize_with = "ser_int", deserialize_with = "de_int")]
    pub ell: Integer,
    #[serde(serialize_with = "ser_int", deserialize_with = "de_int")]
    pub delta: Integer,
    /// `12 sqrt(3) b_{k+1} d_k^4 |tau_k|^4 / b_k` as a float.
    pub bound: f64,
    /// The same bound as an exact surd.
    pub bound_exact: ExactReal,
    /// `delta <= bound`, decided exactly.
    pub within_bound: bool,
    /// `rho B^2 = 432 rho d_k^8 |tau_k|^8`, implied by the order bound.
    #[serde(serialize_with = "ser_rat", deserialize_with = "de_rat")]
    pub index_bound: Rational,
}

fn rational_of(x: &ExactReal, what: &str) -> Result<Rational> {
    x.as_rational()
        .cloned()
        .ok_or_else(|| Error::NonArithmetic(format!("{what} = {x} is irrational")))
}

fn lcm(a: &Integer, b: &Integer) -> Integer {
    Integer::from(a.lcm_ref(b))
}

/// Smallest `d >= 1` with `d a` and `d^2 b^2` integral.
///
/// Writing `b = (N/D) sqrt(m)` with `m` squarefree, `v_p(den(b^2))` is
/// `2 v_p(D)` or `2 v_p(D) - 1`, so `d^2 b^2` is integral exactly when `D | d`.
pub fn compute_dk(tau: &Tau) -> Result<Integer> {
    let a = rational_of(tau.a(), "a")?;
    if !tau.b().square().is_rational() {
        return Err(Error::NonArithmetic(format!("b^2 = {} is irrational", tau.b().square())));
    }
    let c = if tau.b().is_rational() {
        tau.b().rat()
    } else {
        tau.b().coef()
    };
    Ok(lcm(a.denom(), c.denom()))
}

/// `rho = b_{k+1} / b_k`, required to be rational.
fn rho(tau_k: &Tau, tau_next: &Tau) -> Result<Rational> {
    let r = tau_next.b().try_div(tau_k.b())?;
    rational_of(&r, "b_{k+1} / b_k")
}

/// Coordinates `(u, v)` of `l tau_{k+1} = u + v tau_k`.
fn coordinates(ell: &Integer, tau_k: &Tau, tau_next: &Tau) -> Result<(Rational, Rational)> {
    let r = rho(tau_k, tau_next)?;
    let a_k = rational_of(tau_k.a(), "a_k")?;
    let a_next = rational_of(tau_next.a(), "a_{k+1}")?;
    let v = Rational::from(&r * ell);
    let u = (a_next - Rational::from(&r * &a_k)) * ell;
    Ok((u, v))
}

/// Least `l >= 1` with `l tau_{k+1}` in `Lambda_{tau_k}`.
pub fn deep_hole_order(tau_k: &Tau, tau_next: &Tau) -> Result<Integer> {
    let r = rho(tau_k, tau_next)?;
    let a_k = rational_of(tau_k.a(), "a_k")?;
    let a_next = rational_of(tau_next.a(), "a_{k+1}")?;
    let shift = a_next - Rational::from(&r * &a_k);
    Ok(lcm(r.denom(), shift.denom()))
}

/// `12 sqrt(3) * rho * d^4 * |tau_k|^4` as an exact surd.
pub fn degree_bound(tau_k: &Tau, tau_next: &Tau) -> Result<ExactReal> {
    let d = compute_dk(tau_k)?;
    let r = rho(tau_k, tau_next)?;
    let n = rational_of(&tau_k.norm_sq(), "|tau_k|^2")?;
    let k = r * Integer::from(d.square_ref()).square() * Rational::from(n.square_ref()) * 12u32;
    ExactReal::surd(k, 3)
}

/// `12 sqrt(3) * d^4 * |tau_k|^4`, the bound on the order `l`.
pub fn order_bound(tau_k: &Tau) -> Result<ExactReal> {
    let d = compute_dk(tau_k)?;
    let n = rational_of(&tau_k.norm_sq(), "|tau_k|^2")?;
    let k = Rational::from(Integer::from(d.square_ref()).square()) * Rational::from(n.square_ref()) * 12u32;
    ExactReal::surd(k, 3)
}

/// `rho * (12 sqrt(3) d^4 |tau_k|^4)^2`, the index bound that follows from [`order_bound`].
pub fn index_bound(tau_k: &Tau, tau_next: &Tau) -> Result<Rational> {
    let d = compute_dk(tau_k)?;
    let r = rho(tau_k, tau_next)?;
    let n = rational_of(&tau_k.norm_sq(), "|tau_k|^2")?;
    let d8 = Integer::from(d.square_ref()).square().square();
    let n4 = Rational::from(n.square_ref()).square();
    Ok(r * d8 * n4 * 432u32)
}

/// Full data of the isogeny attached to the step `tau_k -> tau_{k+1}`.
pub fn isogeny_step(k: usize, tau_k: &Tau, tau_next: &Tau) -> Result<IsogenyStep> {
    let d_k = compute_dk(tau_k)?;
    let ell = deep_hole_order(tau_k, tau_next)?;
    let r = rho(tau_k, tau_next)?;
    let delta_q = Rational::from(ell.square_ref()) * &r;
    if *delta_q.denom() != 1 || delta_q.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Inconsistent(format!("index l^2 rho = {delta_q} is not a positive integer")));
    }
    let delta = delta_q.into_numer_denom().0;

    // l * (1, 0) = l * 1 + 0 * tau_k and l * tau_{k+1} = u + v tau_k
    let (u, v) = coordinates(&ell, tau_k, tau_next)?;
    if *u.denom() != 1 || *v.denom() != 1 {
        return Err(Error::Inconsistent(format!("change of basis [[{ell}, {u}], [0, {v}]] is not integral")));
    }
    let det = Rational::from(&v * &ell);
    if det != delta {
        return Err(Error::Inconsistent(format!("det {det} differs from index {delta}")));
    }

    let bound_exact = degree_bound(tau_k, tau_next)?;
    let within_bound = ExactReal::from(delta.clone()).cmp_exact(&bound_exact)? != std::cmp::Ordering::Greater;
    let index_bound = index_bound(tau_k, tau_next)?;
    if delta > index_bound {
        return Err(Error::Inconsistent(format!("index {delta} exceeds rho B^2 = {index_bound}")));
    }
    Ok(IsogenyStep {
        k,
        d_k,
        ell,
        delta,
        bound: bound_exact.to_f64(),
        bound_exact,
        within_bound,
        index_bound,
    })
}

/// Isogeny data for every step of a sequence.
pub fn isogeny_chain(seq: &DeepHoleSequence) -> Result<Vec<IsogenyStep>> {
    seq.taus
        .windows(2)
        .enumerate()
        .map(|(k, w)| isogeny_step(k, &w[0], &w[1]))
        .collect()
}

/// Leading q-expansion coefficients of `j - 1/q - 744`.
pub const J_COEFFS: [u64; 8] = [
    196884,
    21493760,
    864299970,
    20245856256,
    333202640600,
    4252023300096,
    44656994071935,
    401490886656000,
];

/// Largest accepted number of expansion terms.
pub const MAX_TERMS: usize = 200;

/// Imaginary part below which the expansion is flagged as slowly convergent.
pub const SMALL_B: f64 = 0.2;

/// Coefficients `c_1 .. c_n` of `j(q) = 1/q + 744 + sum c_n q^n`, from `E4^3 / Delta`.
pub fn j_series_coefficients(n: usize) -> Vec<Integer> {
    let len = n + 2;
    // E4 = 1 + 240 sum sigma_3(k) q^k
    let mut e4 = vec![Integer::new(); len];
    e4[0] = Integer::from(1);
    for (k, c) in e4.iter_mut().enumerate().skip(1) {
        let sigma3: u64 = (1..=k as u64).filter(|d| (k as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        *c = Integer::from(sigma3) * 240u32;
    }
    let mul = |x: &[Integer], y: &[Integer]| {
        let mut out = vec![Integer::new(); len];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate().take(len - i) {
                out[i + j] += Integer::from(xi * yj);
            }
        }
        out
    };
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    // P = prod (1 - q^k)^24, so Delta = q P
    let mut p = vec![Integer::new(); len];
    p[0] = Integer::from(1);
    for k in 1..len {
        for _ in 0..24 {
            for i in (k..len).rev() {
                let t = p[i - k].clone();
                p[i] -= t;
            }
        }
    }
    // q j = E4^3 / P
    let mut qj = vec![Integer::new(); len];
    for i in 0..len {
        let mut acc = e4_cubed[i].clone();
        for j in 1..=i {
            acc -= Integer::from(&p[j] * &qj[i - j]);
        }
        qj[i] = acc;
    }
    qj.into_iter().skip(2).collect()
}

fn coefficient_table(n: usize) -> Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let series = j_series_coefficients(MAX_TERMS + 1);
        J_COEFFS
            .iter()
            .map(|&c| c as f64)
            .chain(series.iter().skip(J_COEFFS.len()).map(|c| c.to_f64()))
            .collect()
    });
    table[..n].to_vec()
}

/// Numeric value of `j(tau)` with diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JValue {
    pub re: f64,
    pub im: f64,
    /// `|c_{terms+1} q^{terms+1}|`.
    pub truncation_error: f64,
    pub terms: usize,
    /// Set when `b < 0.2`, where the expansion converges slowly.
    pub warning: Option<String>,
    /// Set when `e^{2 pi b}` exceeds the double range.
    pub overflow: bool,
}

impl JValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `j / 1728`.
    pub fn normalized(&self) -> Complex64 {
        self.value() / 1728.0
    }
}

/// `e^{2 pi i a}`; exact at `a` in `{0, 1/4, 1/2, 3/4}` modulo 1.
fn phase(a: &ExactReal) -> Complex64 {
    if let Some(q) = a.as_rational() {
        let frac = q - Rational::from(q.floor_ref());
        let quarter = Rational::from(&frac * 4u32);
        if *quarter.denom() == 1 {
            return match quarter.numer().to_u32() {
                Some(0) => Complex64::new(1.0, 0.0),
                Some(1) => Complex64::new(0.0, 1.0),
                Some(2) => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        let t = std::f64::consts::TAU * frac.to_f64();
        return Complex64::new(t.cos(), t.sin());
    }
    let t = std::f64::consts::TAU * a.to_f64().rem_euclid(1.0);
    Complex64::new(t.cos(), t.sin())
}

/// `j(tau)` from the q-expansion truncated after `terms` coefficients.
pub fn j_invariant(tau: &Tau, terms: usize) -> Result<JValue> {
    if !(8..=MAX_TERMS).contains(&terms) {
        return Err(Error::InvalidParameter(format!(
            "terms must lie in 8..={MAX_TERMS}, got {terms}"
        )));
    }
    let b = tau.b().to_f64();
    let warning = (b < SMALL_B).then(|| {
        format!("Im(tau) = {b:.6} < {SMALL_B}: q-expansion converges slowly")
    });
    let log_inv_q = std::f64::consts::TAU * b;
    let overflow = log_inv_q > 700.0;
    let ph = phase(tau.a());
    let r = (-log_inv_q).exp();
    let q = ph * r;
    let coeffs = coefficient_table(terms + 1);

    let mut sum = Complex64::new(744.0, 0.0) + ph.conj() * log_inv_q.exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for c in &coeffs[..terms] {
        qn *= q;
        sum += qn * *c;
    }
    let truncation_error = coeffs[terms] * r.powi(terms as i32 + 1);
    Ok(JValue {
        re: sum.re,
        im: sum.im,
        truncation_error,
        terms,
        warning,
        overflow,
    })
}
