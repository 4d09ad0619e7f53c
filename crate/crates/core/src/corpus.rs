//! Seeded random inputs for property checks and the command-line `--random` option.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use crate::exact::ExactReal;
use crate::lattice::{Lattice2, Tau, Vec2};

/// Radicands used for `b = r sqrt(m)`.
pub const RADICANDS: [u64; 6] = [1, 2, 3, 5, 6, 7];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational_near(x: f64, den: i64) -> Rational {
    Rational::from(((x * den as f64).round() as i64, den))
}

fn random_a<R: Rng>(rng: &mut R) -> Rational {
    let q: i64 = rng.gen_range(1..=24);
    let p: i64 = rng.gen_range(0..=q / 2);
    Rational::from((p, q))
}

/// `tau` in the strip with rational `a` and `b = r sqrt(m)`, `b` log-uniform in `[lo, hi]`.
pub fn random_tau<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Tau {
    assert!(0.0 < lo && lo <= hi);
    loop {
        let a = random_a(rng);
        let m = *RADICANDS.choose(rng).expect("nonempty");
        let target = (lo.ln() + rng.gen::<f64>() * (hi / lo).ln()).exp();
        let den: i64 = rng.gen_range(1..=32);
        let r = rational_near(target / (m as f64).sqrt(), den);
        if r.cmp0() != std::cmp::Ordering::Greater {
            continue;
        }
        let b = ExactReal::surd(r, m).expect("small radicand");
        let tau = Tau::new(ExactReal::from(a), b).expect("b > 0");
        if tau.in_fundamental_region() {
            return tau;
        }
    }
}

/// Well-rounded class `p/q + i sqrt(q^2 - p^2)/q` on the unit arc.
pub fn random_wr_tau<R: Rng>(rng: &mut R) -> Tau {
    let a = random_a(rng);
    let (p, q) = (a.numer().clone(), a.denom().clone());
    let b2 = Rational::from((Integer::from(&q * &q) - Integer::from(&p * &p), Integer::from(&q * &q)));
    let b = ExactReal::sqrt_rational(&b2).expect("q > p");
    Tau::new(ExactReal::from(a), b).expect("b > 0")
}

/// Arithmetic classes mixing well-rounded, near-arc and tall points.
pub fn random_arithmetic_tau<R: Rng>(rng: &mut R) -> Tau {
    match rng.gen_range(0..3) {
        0 => random_wr_tau(rng),
        1 => random_tau(rng, 0.86, 1.3),
        _ => random_tau(rng, 0.86, 6.0),
    }
}

fn apply(m: &[[Rational; 2]; 2], v: &Vec2) -> Vec2 {
    let row = |r: &[Rational; 2]| {
        v[0].mul_rational(&r[0])
            .try_add(&v[1].mul_rational(&r[1]))
            .expect("one field")
    };
    [row(&m[0]), row(&m[1])]
}

/// A lattice similar to `Lambda_tau`, in a random frame and with a random basis.
///
/// The frame is a rational rotation from a Pythagorean triple, a rational
/// scale and an optional reflection; the basis is moved by a random unimodular matrix.
pub fn disguise<R: Rng>(rng: &mut R, tau: &Tau) -> Lattice2 {
    let (s, t): (i64, i64) = (rng.gen_range(0..6), rng.gen_range(1..6));
    let h = s * s + t * t;
    let (c, sn) = (
        Rational::from((t * t - s * s, h)),
        Rational::from((2 * s * t, h)),
    );
    let scale = Rational::from((rng.gen_range(1..=9i64), rng.gen_range(1..=9i64)));
    let flip = if rng.gen_bool(0.5) { -1 } else { 1 };
    let frame = [
        [Rational::from(&c * &scale), -Rational::from(&sn * &scale)],
        [Rational::from(&sn * &scale) * flip, Rational::from(&c * &scale) * flip],
    ];
    let base = tau.lattice();
    let mut v = [apply(&frame, base.x1()), apply(&frame, base.x2())];
    for _ in 0..rng.gen_range(0..6) {
        match rng.gen_range(0..3) {
            0 => v.swap(0, 1),
            1 => v[1] = [-&v[1][0], -&v[1][1]],
            _ => {
                let k = Rational::from(rng.gen_range(-3..=3i64));
                v[1] = [
                    v[1][0].try_add(&v[0][0].mul_rational(&k)).expect("one field"),
                    v[1][1].try_add(&v[0][1].mul_rational(&k)).expect("one field"),
                ];
            }
        }
    }
    let [x1, x2] = v;
    Lattice2::new(x1, x2).expect("unimodular image of a basis")
}

/// Random basis with coordinates `r + s sqrt(m)`, not necessarily arithmetic.
pub fn random_lattice<R: Rng>(rng: &mut R) -> Lattice2 {
    let m = *RADICANDS.choose(rng).expect("nonempty");
    let coord = |rng: &mut R| {
        let r = Rational::from((rng.gen_range(-12..=12i64), rng.gen_range(1..=6i64)));
        let s = Rational::from((rng.gen_range(-6..=6i64), rng.gen_range(1..=6i64)));
        ExactReal::new(r, s, m).expect("small radicand")
    };
    loop {
        let x1 = [coord(rng), coord(rng)];
        let x2 = [coord(rng), coord(rng)];
        if let Ok(l) = Lattice2::new(x1, x2) {
            return l;
        }
    }
}

/// `count` classes in the strip with `b` log-uniform in `[sqrt(3)/2, b_max]`.
pub fn tau_corpus(seed: u64, count: usize, b_max: f64) -> Vec<Tau> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_tau(&mut r, 3f64.sqrt() / 2.0, b_max))
        .collect()
}

/// `count` arithmetic classes, each with a disguised lattice.
pub fn arithmetic_corpus(seed: u64, count: usize) -> Vec<(Tau, Lattice2)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let tau = random_arithmetic_tau(&mut r);
            let l = disguise(&mut r, &tau);
            (tau, l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(tau_corpus(7, 20, 100.0), tau_corpus(7, 20, 100.0));
        assert_ne!(tau_corpus(7, 20, 100.0), tau_corpus(8, 20, 100.0));
    }

    #[test]
    fn corpus_points_lie_in_strip() {
        for t in tau_corpus(1, 200, 1e6) {
            assert!(t.in_fundamental_region(), "{t}");
        }
        let mut r = rng(3);
        for _ in 0..50 {
            let t = random_wr_tau(&mut r);
            assert_eq!(t.norm_sq(), ExactReal::one());
        }
    }

    #[test]
    fn disguise_preserves_class() {
        for (tau, l) in arithmetic_corpus(11, 60) {
            assert_eq!(l.f_representative().unwrap(), tau);
        }
    }
}
