//! Weak semi-positivity, weak convexity and weak concavity of split bundles
//! on two-pointed chains, and the log-canonical triviality certificate.
//!
//! A split bundle `⊕ L_i` is
//! - weakly semi-positive when every `L_i` has degree `≥ 0` on every component,
//! - weakly convex when `Σ h¹(C, L_i(-x2)) = 0`,
//! - weakly concave on the dual when `Σ h⁰(C, L_i^∨(-x1)) = 0`.
//!
//! The three flags are computed independently; [`ConvexityVerdict::check_theorems`]
//! then asserts semi-positive ⇒ convex and convex ⇔ dual-concave.

use serde::Serialize;

use crate::bundles::{canonical_bundle, ChainBundle, EqLineBundle, SplitBundle, TwistSign};
use crate::cohomology::{h_chain, h_chain_pieces, PieceCache};
use crate::error::{Error, Result};
use crate::twisted_curve::{CurveChain, MarkedPoint};

/// Per-summand data that the verdict on a split bundle is assembled from.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SummandProfile {
    /// Components on which the summand has negative degree.
    pub negative_components: Vec<usize>,
    /// `h¹(C, L(-x2))`.
    pub h1_minus_x2: usize,
    /// `h⁰(C, L^∨(-x1))`.
    pub h0_dual_minus_x1: usize,
}

impl SummandProfile {
    pub fn of(summand: &ChainBundle) -> Result<Self> {
        SummandProfile::of_pieces(summand.pieces(), &mut PieceCache::new())
    }

    /// The profile of the chain bundle with the given balanced pieces.
    pub fn of_pieces(pieces: &[EqLineBundle], cache: &mut PieceCache) -> Result<Self> {
        let negative_components =
            pieces.iter().enumerate().filter(|(_, p)| p.degree().is_negative()).map(|(j, _)| j).collect();
        let mut work: Vec<EqLineBundle> = pieces.to_vec();
        let last = work.len() - 1;
        work[last] = pieces[last].twist_marked(MarkedPoint::X2, TwistSign::Minus);
        let h1_minus_x2 = h_chain_pieces(&work, cache)?.h1;
        for (w, p) in work.iter_mut().zip(pieces) {
            *w = p.dual();
        }
        work[0] = work[0].twist_marked(MarkedPoint::X1, TwistSign::Minus);
        let h0_dual_minus_x1 = h_chain_pieces(&work, cache)?.h0;
        Ok(SummandProfile { negative_components, h1_minus_x2, h0_dual_minus_x1 })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Witnesses {
    /// `(summand, component)` pairs with negative degree.
    pub negative_degree: Vec<(usize, usize)>,
    /// Summands with `h¹(L_i(-x2)) > 0`.
    pub not_convex: Vec<usize>,
    /// Summands with `h⁰(L_i^∨(-x1)) > 0`.
    pub not_concave: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ConvexityVerdict {
    pub weakly_semipositive: bool,
    pub weakly_convex: bool,
    pub weakly_concave_dual: bool,
    pub witnesses: Witnesses,
}

impl ConvexityVerdict {
    pub fn from_profiles(profiles: &[SummandProfile]) -> Self {
        let mut w = Witnesses::default();
        for (i, p) in profiles.iter().enumerate() {
            w.negative_degree.extend(p.negative_components.iter().map(|&j| (i, j)));
            if p.h1_minus_x2 > 0 {
                w.not_convex.push(i);
            }
            if p.h0_dual_minus_x1 > 0 {
                w.not_concave.push(i);
            }
        }
        ConvexityVerdict {
            weakly_semipositive: w.negative_degree.is_empty(),
            weakly_convex: profiles.iter().map(|p| p.h1_minus_x2).sum::<usize>() == 0,
            weakly_concave_dual: profiles.iter().map(|p| p.h0_dual_minus_x1).sum::<usize>() == 0,
            witnesses: w,
        }
    }

    /// Fails naming the first violated implication.
    pub fn check_theorems(&self) -> Result<()> {
        if self.weakly_semipositive && !self.weakly_convex {
            return Err(Error::Inconsistent(format!(
                "weakly semi-positive but not weakly convex (summands {:?})",
                self.witnesses.not_convex
            )));
        }
        if self.weakly_convex != self.weakly_concave_dual {
            return Err(Error::Inconsistent(format!(
                "weak convexity ({}) differs from weak concavity of the dual ({})",
                self.weakly_convex, self.weakly_concave_dual
            )));
        }
        Ok(())
    }
}

pub fn profiles(bundle: &SplitBundle) -> Result<Vec<SummandProfile>> {
    bundle.summands().iter().map(SummandProfile::of).collect()
}

pub fn convexity_verdict(bundle: &SplitBundle) -> Result<ConvexityVerdict> {
    Ok(ConvexityVerdict::from_profiles(&profiles(bundle)?))
}

/// Degree `≥ 0` on every component, with offending `(summand, component)`s.
pub fn is_weakly_semipositive(bundle: &SplitBundle) -> (bool, Vec<(usize, usize)>) {
    let witnesses: Vec<_> = bundle
        .summands()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.pieces().iter().enumerate().filter(|(_, p)| p.degree().is_negative()).map(move |(j, _)| (i, j))
        })
        .collect();
    (witnesses.is_empty(), witnesses)
}

pub fn is_weakly_convex_on(bundle: &SplitBundle) -> Result<bool> {
    let mut total = 0;
    for s in bundle.summands() {
        total += h_chain(&s.twist_marked(MarkedPoint::X2, TwistSign::Minus))?.h1;
    }
    Ok(total == 0)
}

pub fn is_weakly_concave_on_dual(bundle: &SplitBundle) -> Result<bool> {
    let mut total = 0;
    for s in bundle.summands() {
        total += h_chain(&s.dual().twist_marked(MarkedPoint::X1, TwistSign::Minus))?.h0;
    }
    Ok(total == 0)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LogCanonicalCertificate {
    pub components: usize,
    /// `h⁰, h¹` of `ω_C(x1 + x2)`.
    pub log_canonical: (usize, usize),
    /// `h⁰, h¹` of `ω_C(x2)`.
    pub omega_x2: (usize, usize),
}

/// `ω_C(x1+x2)` restricted to a component is `ω_{C_j}` twisted by both of
/// its special points; the certificate checks it is trivial piecewise and
/// that `ω_C(x2)` has no cohomology.
pub fn log_canonical_certificate(chain: &CurveChain) -> Result<LogCanonicalCertificate> {
    let validity = chain.validate();
    if !validity.is_valid() {
        return Err(Error::InvalidChain(validity.violations));
    }
    let mut pieces = Vec::with_capacity(chain.len());
    for (j, &comp) in chain.components().iter().enumerate() {
        let log = canonical_bundle(comp)
            .twist_marked(MarkedPoint::X1, TwistSign::Plus)
            .twist_marked(MarkedPoint::X2, TwistSign::Plus);
        if log.k1() != 0 || log.k2() != 0 || log.d() != 0 {
            return Err(Error::CertificateFailure(format!("component {j}: ω(x1+x2) = {log} is not O^{{0,0}}(0)")));
        }
        pieces.push(log);
    }
    let log = ChainBundle::new(chain.clone(), pieces)?;
    let r = h_chain(&log)?;
    if (r.h0, r.h1) != (1, 0) {
        return Err(Error::CertificateFailure(format!("h0(ω(x1+x2)) = {}, h1 = {}; expected 1 and 0", r.h0, r.h1)));
    }
    let omega_x2 = h_chain(&log.twist_marked(MarkedPoint::X1, TwistSign::Minus))?;
    if (omega_x2.h0, omega_x2.h1) != (0, 0) {
        return Err(Error::CertificateFailure(format!(
            "h0(ω(x2)) = {}, h1(ω(x2)) = {}; both should vanish",
            omega_x2.h0, omega_x2.h1
        )));
    }
    Ok(LogCanonicalCertificate {
        components: chain.len(),
        log_canonical: (r.h0, r.h1),
        omega_x2: (omega_x2.h0, omega_x2.h1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted_curve::TwistedComponent;

    fn p1() -> TwistedComponent {
        TwistedComponent::projective_line()
    }

    fn on_p1(degrees: &[i64]) -> SplitBundle {
        SplitBundle::new(degrees.iter().map(|&d| ChainBundle::on_component(EqLineBundle::new(p1(), 0, 0, d))).collect())
            .unwrap()
    }

    #[test]
    fn semipositivity_examples() {
        assert!(is_weakly_semipositive(&on_p1(&[1, 0])).0);
        assert_eq!(is_weakly_semipositive(&on_p1(&[-1])), (false, vec![(0, 0)]));

        let chain = CurveChain::with_unit_degrees(vec![p1(), p1()]).unwrap();
        let b =
            ChainBundle::new(chain, vec![EqLineBundle::new(p1(), 0, 0, 1), EqLineBundle::new(p1(), 0, 0, -1)]).unwrap();
        let split = SplitBundle::new(vec![b]).unwrap();
        assert_eq!(is_weakly_semipositive(&split), (false, vec![(0, 1)]));
    }

    #[test]
    fn convexity_examples() {
        assert!(!is_weakly_convex_on(&on_p1(&[-1])).unwrap());
        let p12 = TwistedComponent::new(1, 2, 1, 1).unwrap();
        let b = SplitBundle::new(vec![ChainBundle::on_component(EqLineBundle::trivial(p12))]).unwrap();
        assert!(is_weakly_convex_on(&b).unwrap());
        assert!(is_weakly_concave_on_dual(&on_p1(&[2])).unwrap());
        assert!(is_weakly_concave_on_dual(&on_p1(&[0])).unwrap());
        assert!(!is_weakly_concave_on_dual(&on_p1(&[-1])).unwrap());
    }

    #[test]
    fn verdict_witnesses() {
        let v = convexity_verdict(&on_p1(&[3, -2, 0])).unwrap();
        assert!(!v.weakly_semipositive && !v.weakly_convex && !v.weakly_concave_dual);
        assert_eq!(v.witnesses.negative_degree, vec![(1, 0)]);
        assert_eq!(v.witnesses.not_convex, vec![1]);
        assert_eq!(v.witnesses.not_concave, vec![1]);
        v.check_theorems().unwrap();
    }

    #[test]
    fn certificate_examples() {
        let c = log_canonical_certificate(&CurveChain::single(p1())).unwrap();
        assert_eq!(c.log_canonical, (1, 0));
        let chain = CurveChain::with_unit_degrees(vec![p1(); 3]).unwrap();
        assert_eq!(log_canonical_certificate(&chain).unwrap().omega_x2, (0, 0));
        let twisted = TwistedComponent::present(4, 6).unwrap();
        log_canonical_certificate(&CurveChain::single(twisted)).unwrap();
    }
}
