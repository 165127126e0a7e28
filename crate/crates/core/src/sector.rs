//! Fiber actions on twisted sectors and the age/rank/sign calculus of
//! quantum Serre duality.
//!
//! A sector action is the multiset of fractional weights `f_i ∈ [0,1)` by
//! which a finite-order element acts on the fibers of `E`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bundles::SplitBundle;
use crate::error::{Error, Result};
use crate::foundation::{Phase, Rational};
use crate::twisted_curve::MarkedPoint;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct SectorAction {
    weights: Vec<Rational>,
}

impl SectorAction {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative() || **w >= Rational::ONE) {
            return Err(Error::InvalidWeight(w.to_string()));
        }
        Ok(SectorAction { weights })
    }

    pub fn untwisted(rank: usize) -> Self {
        SectorAction { weights: vec![Rational::ZERO; rank] }
    }

    /// Weights of `E` at a marked point of a split bundle, read off the
    /// terminal component's ages.
    pub fn at_marked_point(bundle: &SplitBundle, pt: MarkedPoint) -> Self {
        SectorAction { weights: bundle.summands().iter().map(|s| s.age_at(pt)).collect() }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// `rank(E_g)`, the number of zero weights.
    pub fn rank_fixed(&self) -> usize {
        self.weights.iter().filter(|w| w.is_zero()).count()
    }

    pub fn age(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// The action of `g^{-1}` on `E`, equivalently of `g` on `E^∨`.
    pub fn inverse_sector(&self) -> SectorAction {
        SectorAction { weights: self.weights.iter().map(|w| (-*w).fract()).collect() }
    }

    /// `(age_g(E) + age_g(E^∨), rank E - rank E_g)`.
    pub fn age_sum_check(&self) -> (Rational, Rational) {
        let lhs = self.age() + self.inverse_sector().age();
        let rhs = Rational::from((self.rank() - self.rank_fixed()) as i64);
        (lhs, rhs)
    }
}

impl TryFrom<Vec<Rational>> for SectorAction {
    type Error = Error;
    fn try_from(w: Vec<Rational>) -> Result<Self> {
        SectorAction::new(w)
    }
}

impl From<SectorAction> for Vec<Rational> {
    fn from(s: SectorAction) -> Self {
        s.weights
    }
}

impl fmt::Display for SectorAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Comma-separated weights; the empty string is the rank-0 action.
impl FromStr for SectorAction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.trim().is_empty() {
            return Ok(SectorAction::default());
        }
        let weights = s
            .split(',')
            .map(|w| w.parse::<Rational>().map_err(|e| Error::InvalidWeight(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        SectorAction::new(weights)
    }
}

/// `β(det E) - age_{g1}(E) + age_{g2}(E^∨)`, the rank of `R¹π_*[u]*E^∨(-x1)`.
pub fn rank_formula(beta_det_e: Rational, g1: &SectorAction, g2: &SectorAction) -> Result<Rational> {
    if g1.rank() != g2.rank() {
        return Err(Error::LengthMismatch(format!("sector actions of rank {} and {}", g1.rank(), g2.rank())));
    }
    Ok(beta_det_e - g1.age() + g2.inverse_sector().age())
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SignResult {
    pub exponent: Rational,
    pub phase: Phase,
    /// `±1` when the exponent is an integer.
    pub sign: Option<i8>,
}

impl SignResult {
    pub fn from_exponent(exponent: Rational) -> Self {
        let phase = Phase::new(exponent);
        SignResult { exponent, phase, sign: phase.is_sign() }
    }

    pub fn is_realizable(&self) -> bool {
        self.exponent.is_integer()
    }

    pub fn require_sign(&self) -> Result<i8> {
        self.sign.filter(|_| self.is_realizable()).ok_or_else(|| Error::NonIntegerExponent(self.exponent.to_string()))
    }
}

/// `(-1)^{rank_formula}`, exact as a phase even when the exponent is not an
/// integer (inputs not coming from an actual bundle).
pub fn sign_cycle(beta_det_e: Rational, g1: &SectorAction, g2: &SectorAction) -> Result<SignResult> {
    Ok(SignResult::from_exponent(rank_formula(beta_det_e, g1, g2)?))
}

/// `e^{πi(β(det E) + rank E)}`.
pub fn sign_invariant(beta_det_e: Rational, rank: usize) -> Phase {
    Phase::new(beta_det_e + Rational::from(rank as i64))
}

/// Both sides of
/// `sign_cycle · e^{πi(age_{g1}(E) + age_{g2}(E) + rank E_{g2})} = e^{πi(β(det E) + rank E)}`.
pub fn sign_consistency(beta_det_e: Rational, g1: &SectorAction, g2: &SectorAction) -> Result<(Phase, Phase)> {
    let cycle = sign_cycle(beta_det_e, g1, g2)?.phase;
    let correction = Phase::new(g1.age() + g2.age() + Rational::from(g2.rank_fixed() as i64));
    Ok((cycle.mul(&correction), sign_invariant(beta_det_e, g1.rank())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(w: &str) -> SectorAction {
        w.parse().unwrap()
    }

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn age_examples() {
        assert_eq!(s("0,0,0").age(), Rational::ZERO);
        assert_eq!(s("1/2").age(), q(1, 2));
        assert_eq!(s("1/3,2/3").age(), Rational::ONE);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(s("0").inverse_sector(), s("0"));
        assert_eq!(s("1/2").inverse_sector(), s("1/2"));
        assert_eq!(s("1/3,0").inverse_sector(), s("2/3,0"));
    }

    #[test]
    fn age_sum_examples() {
        assert_eq!(s("0,0").age_sum_check(), (Rational::ZERO, Rational::ZERO));
        assert_eq!(s("1/2").age_sum_check(), (Rational::ONE, Rational::ONE));
        assert_eq!(s("1/5,3/5,0").age_sum_check(), (Rational::from(2i64), Rational::from(2i64)));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_formula(Rational::from(3i64), &s("0"), &s("0")).unwrap(), Rational::from(3i64));
        assert_eq!(rank_formula(q(1, 2), &s("0"), &s("1/2")).unwrap(), Rational::ONE);
        assert_eq!(rank_formula(Rational::ZERO, &s("0"), &s("0")).unwrap(), Rational::ZERO);
        assert!(matches!(rank_formula(Rational::ZERO, &s("0"), &s("0,0")), Err(Error::LengthMismatch(_))));
    }

    #[test]
    fn sign_examples() {
        let r = sign_cycle(Rational::from(2i64), &s("0"), &s("0")).unwrap();
        assert_eq!(r.sign, Some(1));
        let r = sign_cycle(q(1, 2), &s("0"), &s("1/2")).unwrap();
        assert_eq!(r.require_sign().unwrap(), -1);
        let r = sign_cycle(q(1, 3), &s("0"), &s("0")).unwrap();
        assert!(!r.is_realizable());
        assert!(matches!(r.require_sign(), Err(Error::NonIntegerExponent(_))));

        assert_eq!(sign_invariant(Rational::ZERO, 0), Phase::ONE);
        assert_eq!(sign_invariant(Rational::ONE, 1), Phase::ONE);
        assert_eq!(sign_invariant(q(1, 2), 1).exponent(), q(3, 2));
    }

    #[test]
    fn consistency_on_examples() {
        let (l, r) = sign_consistency(q(1, 2), &s("0"), &s("1/2")).unwrap();
        assert_eq!(l, r);
        let (l, r) = sign_consistency(q(7, 3), &s("1/3,0"), &s("2/3,0")).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn rejects_out_of_range_weights() {
        assert!("1".parse::<SectorAction>().is_err());
        assert!("-1/2".parse::<SectorAction>().is_err());
        assert_eq!("".parse::<SectorAction>().unwrap().rank(), 0);
    }
}
