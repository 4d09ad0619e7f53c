//! Squarefree decomposition by trial division.
//!
//! Trial division runs over all integers below [`TRIAL_LIMIT`]. A cofactor left
//! over after that has only prime factors above the limit; it is classified
//! exactly when it is a perfect square, smaller than the cube of the limit
//! (then it is `p`, `p*q` or `p^2`), or a prime of at most 64 bits. Anything else is reported as
//! [`Error::FactorizationLimit`] instead of being guessed.

use rug::ops::Pow;
use rug::integer::IsPrime;
use rug::Integer;

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u32 = 1 << 20;

/// Trial divisors: 2 and the odd numbers up to the limit. Composite divisors
/// never divide the cofactor once their prime factors have been removed.
fn trial_divisors() -> impl Iterator<Item = u32> {
    std::iter::once(2).chain((3..=TRIAL_LIMIT).step_by(2))
}

/// Writes a positive integer as `square^2 * free` with `free` squarefree.
pub fn squarefree_decompose(n: &Integer) -> Result<(Integer, Integer)> {
    if n.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::InvalidParameter(format!(
            "squarefree decomposition needs a positive integer, got {n}"
        )));
    }
    if n.is_perfect_square() {
        return Ok((n.clone().sqrt(), Integer::from(1)));
    }

    let mut rest = n.clone();
    let mut square = Integer::from(1);
    let mut free = Integer::from(1);
    let mut exhausted = true;

    for p in trial_divisors() {
        if rest == 1 {
            exhausted = false;
            break;
        }
        let p_sq = Integer::from(p) * p;
        if rest < p_sq {
            // rest has no factor <= sqrt(rest), so it is 1 or prime
            free *= &rest;
            rest = Integer::from(1);
            exhausted = false;
            break;
        }
        if rest.is_divisible_u(p) {
            let mut e = 0u32;
            while rest.is_divisible_u(p) {
                rest.div_exact_u_mut(p);
                e += 1;
            }
            if e >= 2 {
                square *= Integer::from(p).pow(e / 2);
            }
            if e % 2 == 1 {
                free *= p;
            }
        }
    }

    if exhausted && rest != 1 {
        if rest.is_perfect_square() {
            square *= rest.sqrt();
        } else {
            let limit = Integer::from(TRIAL_LIMIT);
            let cube = Integer::from(&limit * &limit) * &limit;
            // BPSW has no pseudoprimes below 2^64
            let prime = rest.significant_bits() <= 64 && rest.is_probably_prime(25) != IsPrime::No;
            if rest < cube || prime {
                free *= rest;
            } else {
                return Err(Error::FactorizationLimit(n.to_string()));
            }
        }
    }

    Ok((square, free))
}

/// Smallest positive `e` with `v | e^2`.
pub fn min_root_multiple(v: &Integer) -> Result<Integer> {
    let (square, free) = squarefree_decompose(v)?;
    Ok(square * free)
}
