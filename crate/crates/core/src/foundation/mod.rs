//! Exact arithmetic shared by every other module: rationals, phases
//! `e^{πi r}`, and the gcd bookkeeping behind twisted-curve presentations.

mod phase;
mod rational;

pub use phase::{cyclotomic, Phase, PhaseScale, PhasedScalar};
pub use rational::{ParseRationalError, Rational};

use num_integer::Integer;

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Prime-power factorization by trial division.
pub fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pe = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pe *= p;
            }
            out.push((p, pe));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Splits `l = l1·l2` with `gcd(l1,l2) = gcd(l1,b) = gcd(l2,a) = 1`.
///
/// Prime powers of `l` whose prime divides `a` go to `l1`, those dividing `b`
/// go to `l2`, and the rest go to `l1`.
pub fn canonical_split(l: u64, a: u64, b: u64) -> Result<(u64, u64)> {
    if l == 0 || a == 0 || b == 0 {
        return Err(Error::InvalidComponent(format!("split inputs must be positive (l={l}, a={a}, b={b})")));
    }
    let g = gcd(a, b);
    if g != 1 {
        return Err(Error::InvalidComponent(format!("gcd(a,b)={g} ≠ 1")));
    }
    let (mut l1, mut l2) = (1, 1);
    for (p, pe) in prime_powers(l) {
        if b.is_multiple_of(p) {
            l2 *= pe;
        } else {
            l1 *= pe;
        }
    }
    Ok((l1, l2))
}

/// Modular inverse of `x` mod `m`, if it exists.
pub fn mod_inverse(x: i64, m: i64) -> Option<i64> {
    let e = x.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}
