//! Roots of unity `e^{πi r}` with rational `r`, and exact linear combinations
//! of them.
//!
//! A [`Phase`] stores its exponent reduced into `[0, 2)`. A [`PhasedScalar`]
//! is a finite ℚ-combination of phases; because distinct roots of unity are
//! linearly dependent over ℚ, equality and zero tests reduce modulo the
//! relevant cyclotomic polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use super::rational::Rational;

/// `e^{πi·exponent}`, exponent in `[0, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Phase {
    exponent: Rational,
}

impl Phase {
    pub const ONE: Phase = Phase { exponent: Rational::ZERO };

    pub fn new(exponent: Rational) -> Self {
        Phase { exponent: exponent.rem_euclid(2) }
    }

    pub fn minus_one() -> Self {
        Phase::new(Rational::ONE)
    }

    pub fn exponent(&self) -> Rational {
        self.exponent
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase::new(self.exponent + other.exponent)
    }

    pub fn inverse(&self) -> Phase {
        Phase::new(-self.exponent)
    }

    pub fn pow(&self, n: i64) -> Phase {
        Phase::new(self.exponent * Rational::from(n))
    }

    /// `Some(±1)` when the phase is real.
    pub fn is_sign(&self) -> Option<i8> {
        if self.exponent.is_zero() {
            Some(1)
        } else if self.exponent == Rational::ONE {
            Some(-1)
        } else {
            None
        }
    }

    /// Order of the phase in the group of roots of unity.
    pub fn order(&self) -> u64 {
        // e^{πi p/q} has order 2q / gcd(p, 2q).
        let p = self.exponent.numer();
        let q = self.exponent.denom();
        (2 * q / p.gcd(&(2 * q))) as u64
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{{i*pi*{}}}", self.exponent)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Multiplication by a phase.
pub trait PhaseScale {
    fn scale_phase(&self, p: Phase) -> Self;
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Vec<i128>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i128>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> Vec<i128> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic(d));
        }
    }
    cyclotomic_cache().lock().unwrap().insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &di) in den.iter().enumerate() {
                rem[k + i] -= c * di;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "non-exact cyclotomic division");
    quot
}

/// Finite ℚ-linear combination of phases, kept in a reduced form.
#[derive(Clone, Default)]
pub struct PhasedScalar {
    terms: BTreeMap<Phase, Rational>,
}

impl PhasedScalar {
    pub fn zero() -> Self {
        PhasedScalar::default()
    }

    pub fn one() -> Self {
        PhasedScalar::from_rational(Rational::ONE)
    }

    pub fn from_rational(r: Rational) -> Self {
        PhasedScalar::from_term(Phase::ONE, r)
    }

    pub fn from_phase(p: Phase) -> Self {
        PhasedScalar::from_term(p, Rational::ONE)
    }

    pub fn from_term(p: Phase, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, c);
        PhasedScalar::reduce(terms)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Phase, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational, when it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => {
                let (p, c) = self.terms.iter().next().unwrap();
                p.exponent().is_zero().then_some(*c)
            }
            _ => None,
        }
    }

    pub fn scale(&self, r: Rational) -> Self {
        if r.is_zero() {
            return PhasedScalar::zero();
        }
        PhasedScalar { terms: self.terms.iter().map(|(p, c)| (*p, *c * r)).collect() }
    }

    // Fold exponents into [0,1) using e^{πi(1+t)} = -e^{πi t}, then reduce
    // modulo Φ_{2M}, where every exponent is a multiple of 1/M.
    fn reduce(raw: BTreeMap<Phase, Rational>) -> Self {
        let mut folded: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (p, c) in raw {
            if c.is_zero() {
                continue;
            }
            let e = p.exponent();
            let (e, c) = if e >= Rational::ONE { (e - Rational::ONE, -c) } else { (e, c) };
            *folded.entry(e).or_insert(Rational::ZERO) += c;
        }
        folded.retain(|_, c| !c.is_zero());
        let m = folded.keys().fold(1i128, |acc, e| acc.lcm(&e.denom()));
        if m == 1 {
            return PhasedScalar { terms: folded.into_iter().map(|(e, c)| (Phase::new(e), c)).collect() };
        }
        let mut poly = vec![Rational::ZERO; m as usize];
        for (e, c) in &folded {
            let t = (*e * Rational::from_int(m)).numer() as usize;
            poly[t] += *c;
        }
        let phi = cyclotomic(2 * m as u64);
        let deg = phi.len() - 1;
        for k in (deg..poly.len()).rev() {
            let c = poly[k];
            if c.is_zero() {
                continue;
            }
            for (i, &pi) in phi.iter().enumerate() {
                poly[k - deg + i] -= c * Rational::from_int(pi);
            }
        }
        let terms = poly
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (Phase::new(Rational::new(t as i128, m)), c))
            .collect();
        PhasedScalar { terms }
    }
}

impl PhaseScale for PhasedScalar {
    fn scale_phase(&self, p: Phase) -> Self {
        PhasedScalar::reduce(self.terms.iter().map(|(q, c)| (q.mul(&p), *c)).collect())
    }
}

impl PartialEq for PhasedScalar {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Eq for PhasedScalar {}

impl From<Rational> for PhasedScalar {
    fn from(r: Rational) -> Self {
        PhasedScalar::from_rational(r)
    }
}

impl From<Phase> for PhasedScalar {
    fn from(p: Phase) -> Self {
        PhasedScalar::from_phase(p)
    }
}

impl Add for PhasedScalar {
    type Output = PhasedScalar;
    fn add(self, rhs: PhasedScalar) -> PhasedScalar {
        let mut raw = self.terms;
        for (p, c) in rhs.terms {
            *raw.entry(p).or_insert(Rational::ZERO) += c;
        }
        PhasedScalar::reduce(raw)
    }
}

impl<'a> Add<&'a PhasedScalar> for &'a PhasedScalar {
    type Output = PhasedScalar;
    fn add(self, rhs: &'a PhasedScalar) -> PhasedScalar {
        self.clone() + rhs.clone()
    }
}

impl AddAssign for PhasedScalar {
    fn add_assign(&mut self, rhs: PhasedScalar) {
        *self = std::mem::take(self) + rhs;
    }
}

impl Neg for PhasedScalar {
    type Output = PhasedScalar;
    fn neg(self) -> PhasedScalar {
        PhasedScalar { terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect() }
    }
}

impl Sub for PhasedScalar {
    type Output = PhasedScalar;
    fn sub(self, rhs: PhasedScalar) -> PhasedScalar {
        self + (-rhs)
    }
}

impl<'a> Mul<&'a PhasedScalar> for &'a PhasedScalar {
    type Output = PhasedScalar;
    fn mul(self, rhs: &'a PhasedScalar) -> PhasedScalar {
        let mut raw: BTreeMap<Phase, Rational> = BTreeMap::new();
        for (p, c) in &self.terms {
            for (q, d) in &rhs.terms {
                *raw.entry(p.mul(q)).or_insert(Rational::ZERO) += *c * *d;
            }
        }
        PhasedScalar::reduce(raw)
    }
}

impl Mul for PhasedScalar {
    type Output = PhasedScalar;
    fn mul(self, rhs: PhasedScalar) -> PhasedScalar {
        &self * &rhs
    }
}

impl fmt::Display for PhasedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PhasedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PhasedScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(n: i128, d: i128) -> Phase {
        Phase::new(Rational::new(n, d))
    }

    #[test]
    fn pow_examples() {
        assert_eq!(ph(1, 1).pow(2), Phase::ONE);
        assert_eq!(ph(1, 2).pow(3).exponent(), Rational::new(3, 2));
        assert_eq!(Phase::ONE.pow(17), Phase::ONE);
    }

    #[test]
    fn sign_detection() {
        assert_eq!(Phase::ONE.is_sign(), Some(1));
        assert_eq!(ph(1, 1).is_sign(), Some(-1));
        assert_eq!(ph(1, 2).is_sign(), None);
        assert_eq!(ph(-1, 1).is_sign(), Some(-1));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = PhasedScalar::from_phase(ph(1, 2));
        assert_eq!(&i * &i, PhasedScalar::from_rational(Rational::from_int(-1)));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        // 1 + ω + ω² = 0 with ω = e^{2πi/3}.
        let s = PhasedScalar::one() + PhasedScalar::from_phase(ph(2, 3)) + PhasedScalar::from_phase(ph(4, 3));
        assert!(s.is_zero());
        // e^{πi/3} = 1 + e^{2πi/3}.
        assert_eq!(PhasedScalar::from_phase(ph(1, 3)), PhasedScalar::one() + PhasedScalar::from_phase(ph(2, 3)));
    }

    #[test]
    fn real_values_collapse_to_rationals() {
        // e^{πi/3} + e^{-πi/3} = 1
        let s = PhasedScalar::from_phase(ph(1, 3)) + PhasedScalar::from_phase(ph(-1, 3));
        assert_eq!(s.to_rational(), Some(Rational::ONE));
    }
}
