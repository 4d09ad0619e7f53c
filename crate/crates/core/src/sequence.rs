//! The deep-hole sequence `tau_0 -> tau_1 -> ... -> tau_n`.
//!
//! Each step replaces `tau = a + b i` by the similarity class of its deep hole
//! lattice, `1/2 + (a^2 + b^2 - a)/(2b) i`, and the iteration stops at the
//! first well-rounded class. All values stay in the field of `tau_0`.

use std::cmp::Ordering;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::lattice::Tau;

/// Extra steps allowed past the applied bound before giving up.
const ITERATION_SLACK: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeepHoleSequence {
    pub taus: Vec<Tau>,
    pub n: usize,
    pub b0: ExactReal,
    /// `log2(2 b0 / sqrt(3))` as a float.
    pub stated_bound: f64,
    /// `max(1, ceil(log2(2 b0 / sqrt(3))))`, computed exactly.
    pub applied_bound: u32,
}

fn is_half(x: &ExactReal) -> bool {
    x.as_rational().is_some_and(|q| *q == Rational::from((1, 2)))
}

/// `b = c sqrt(m)` with no rational part: returns `(c, m)`.
fn pure_surd(b: &ExactReal) -> Option<(&Rational, u64)> {
    if b.is_rational() {
        b.as_rational().map(|q| (q, 1))
    } else if b.rat().cmp0() == Ordering::Equal {
        Some((b.coef(), b.radicand()))
    } else {
        None
    }
}

/// Step at `a = 1/2`, `b = (N/D) sqrt(m)`:
/// `b' = (4 N^2 m - D^2) / (8 N D m) * sqrt(m)`.
///
/// With `gcd(N, D) = 1` and `m` squarefree the only common odd primes of
/// numerator and denominator are those of `gcd(D, m)`, each to the first
/// power, so the fraction is reduced without a full gcd.
fn half_step(c: &Rational, m: u64) -> ExactReal {
    let (n, d) = (c.numer(), c.denom());
    let mut x = Integer::from(n.square_ref()) * m;
    x <<= 2;
    x -= Integer::from(d.square_ref());
    let mut y = Integer::from(n * d) * m;
    y <<= 3;

    let twos = match x.find_one(0) {
        Some(tx) => tx.min(y.find_one(0).expect("y > 0")),
        None => 0,
    };
    x >>= twos;
    y >>= twos;
    let mut g = Integer::from(d.gcd_ref(&Integer::from(m)));
    while g.is_even() {
        g >>= 1;
    }
    if g != 1 {
        x.div_exact_mut(&g);
        y.div_exact_mut(&g);
    }
    // SAFETY: x / y is in lowest terms by the argument above and y > 0.
    let coef = unsafe { Rational::from_canonical(x, y) };
    if m == 1 {
        ExactReal::from(coef)
    } else {
        ExactReal::from_parts(Rational::new(), coef, m)
    }
}

/// Imaginary part of the deep-hole step by direct field arithmetic.
pub fn dh_step_generic(tau: &Tau) -> Result<ExactReal> {
    let (a, b) = (tau.a(), tau.b());
    let num = a.square().try_add(&b.square())?.try_sub(a)?;
    num.try_div(&b.mul_pow2(1))
}

/// One step of the sequence; `tau` must lie in the fundamental strip.
pub fn dh_step(tau: &Tau) -> Result<Tau> {
    tau.require_fundamental()?;
    let b = match (is_half(tau.a()), pure_surd(tau.b())) {
        (true, Some((c, m))) => half_step(c, m),
        _ => dh_step_generic(tau)?,
    };
    Tau::new(ExactReal::ratio(1, 2), b)
}

/// Well-roundedness of `Lambda_tau` at `a = 1/2`: `1/12 <= b^2 <= 3/4`.
///
/// Below `1/12` the vector `(0, 2b)` is shortest and the class is that of
/// `1/2 + i/(4b)`, which lies above the unit arc.
pub fn wr_at_half(b: &ExactReal) -> Result<bool> {
    let b2 = b.square();
    Ok(b2.cmp_exact(&ExactReal::ratio(3, 4))? != Ordering::Greater
        && b2.cmp_exact(&ExactReal::ratio(1, 12))? != Ordering::Less)
}

/// Well-roundedness of `Lambda_tau` by reduction and exact classification.
pub fn is_well_rounded(tau: &Tau) -> Result<bool> {
    Ok(tau.lattice().reduce()?.classify()?.well_rounded)
}

/// `max(1, ceil(log2(2 b0 / sqrt 3)))`: the least `k >= 1` with `4 b0^2 <= 3 * 4^k`.
pub fn applied_bound(b0: &ExactReal) -> Result<u32> {
    let lhs = b0.square().mul_pow2(2);
    let mut k = 1u32;
    loop {
        let rhs = ExactReal::from(Integer::from(3) << (2 * k));
        if lhs.cmp_exact(&rhs)? != Ordering::Greater {
            return Ok(k);
        }
        k += 1;
    }
}

/// `log2(2 b0 / sqrt 3)` in floating point.
pub fn stated_bound(b0: &ExactReal) -> f64 {
    (2.0 * b0.to_f64() / 3f64.sqrt()).log2()
}

/// Iterates the deep-hole step from `tau0` until the lattice is well rounded.
///
/// At least one step is taken, so a well-rounded `tau0` yields `n = 1`.
/// Every `tau_k` with `k >= 1` has `a = 1/2`, where well-roundedness is
/// exactly `b^2 <= 3/4`; heights double at each step, so reducing the
/// terminal lattice is left to [`DeepHoleSequence::validate`].
pub fn deep_hole_sequence(tau0: &Tau) -> Result<DeepHoleSequence> {
    tau0.require_fundamental()?;
    let b0 = tau0.b().clone();
    let applied = applied_bound(&b0)?;
    let cap = applied + ITERATION_SLACK;
    let mut taus = vec![tau0.clone()];
    loop {
        let next = dh_step(taus.last().expect("nonempty"))?;
        let wr = wr_at_half(next.b())?;
        taus.push(next);
        if wr {
            break;
        }
        if taus.len() as u32 > cap {
            return Err(Error::Inconsistent(format!(
                "no well-rounded class after {cap} steps from {tau0}"
            )));
        }
    }
    Ok(DeepHoleSequence {
        n: taus.len() - 1,
        stated_bound: stated_bound(&b0),
        applied_bound: applied,
        b0,
        taus,
    })
}

impl DeepHoleSequence {
    pub fn terminal(&self) -> &Tau {
        self.taus.last().expect("nonempty")
    }

    /// Re-checks every structural invariant of the sequence.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Inconsistent(msg));
        if self.taus.len() != self.n + 1 || self.n == 0 {
            return bad(format!("n = {} with {} points", self.n, self.taus.len()));
        }
        let tau0 = &self.taus[0];
        tau0.require_fundamental()?;
        if *tau0.b() != self.b0 {
            return bad("b0 differs from Im(tau_0)".into());
        }
        if self.applied_bound != applied_bound(&self.b0)? {
            return bad("applied bound does not match b0".into());
        }
        let field = tau0.field();
        for k in 1..=self.n {
            let (prev, cur) = (&self.taus[k - 1], &self.taus[k]);
            if dh_step(prev)? != *cur {
                return bad(format!("tau_{k} is not the deep-hole step of tau_{}", k - 1));
            }
            if field != 1 && cur.field() != 1 && cur.field() != field {
                return Err(Error::IncompatibleRadicands {
                    left: field,
                    right: cur.field(),
                });
            }
            if cur.b().cmp_exact(prev.b())? != Ordering::Less {
                return bad(format!("b_{k} >= b_{}", k - 1));
            }
            if (k >= 2 || is_half(prev.a()))
                && cur.b().cmp_exact(&prev.b().mul_pow2(-1))? != Ordering::Less
            {
                return bad(format!("b_{k} >= b_{} / 2", k - 1));
            }
            let wr = wr_at_half(cur.b())?;
            if k < self.n && (wr || !cur.in_fundamental_region()) {
                return bad(format!("tau_{k} is well rounded or outside the strip"));
            }
        }
        let last = self.terminal();
        if !is_well_rounded(last)? || last.norm_sq().cmp_exact(&ExactReal::one())? == Ordering::Greater {
            return bad("terminal lattice is not well rounded".into());
        }
        if self.n as u32 > self.applied_bound {
            return bad(format!("n = {} exceeds bound {}", self.n, self.applied_bound));
        }
        Ok(())
    }
}
