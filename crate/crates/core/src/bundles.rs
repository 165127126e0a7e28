//! Equivariant line bundles `O^{k1,k2}(d)` on `ℙ(a,b)/μ_l`, their gluings
//! over chains, and split bundles.
//!
//! `O^{k1,k2}(d)` is the quotient of `(ℂ² \ 0) × ℂ` with the fiber coordinate
//! scaled by `λ^d ζ1^{k1 m1} ζ2^{k2 m2}`. The monomial `x^i y^j` is a section
//! exactly when `a·i + b·j = d`, `i ≡ k1 (mod l1)` and `j ≡ k2 (mod l2)`, so
//! `x` is a section of `O^{1,0}(a) = O(x2)` and `y` of `O^{0,1}(b) = O(x1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{mod_inverse, Rational};
use crate::twisted_curve::{CurveChain, MarkedPoint, TwistedComponent};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EqLineBundle {
    comp: TwistedComponent,
    k1: u64,
    k2: u64,
    d: i64,
}

/// Bundle data without its component, as it appears in JSON.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BundleData {
    pub k1: i64,
    pub k2: i64,
    pub d: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum TwistSign {
    Plus,
    Minus,
}

impl TwistSign {
    pub fn from_i64(s: i64) -> Option<TwistSign> {
        match s {
            1 => Some(TwistSign::Plus),
            -1 => Some(TwistSign::Minus),
            _ => None,
        }
    }
}

impl EqLineBundle {
    /// `k1`, `k2` are reduced into `[0, l1)`, `[0, l2)`.
    pub fn new(comp: TwistedComponent, k1: i64, k2: i64, d: i64) -> Self {
        EqLineBundle { comp, k1: k1.rem_euclid(comp.l1() as i64) as u64, k2: k2.rem_euclid(comp.l2() as i64) as u64, d }
    }

    pub fn from_data(comp: TwistedComponent, data: BundleData) -> Self {
        EqLineBundle::new(comp, data.k1, data.k2, data.d)
    }

    pub fn trivial(comp: TwistedComponent) -> Self {
        EqLineBundle::new(comp, 0, 0, 0)
    }

    pub fn comp(&self) -> TwistedComponent {
        self.comp
    }
    pub fn k1(&self) -> u64 {
        self.k1
    }
    pub fn k2(&self) -> u64 {
        self.k2
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn data(&self) -> BundleData {
        BundleData { k1: self.k1 as i64, k2: self.k2 as i64, d: self.d }
    }

    /// `d / (a·b·l1·l2)`.
    pub fn degree(&self) -> Rational {
        let c = self.comp;
        Rational::new(self.d as i128, (c.a() * c.b() * c.l()) as i128)
    }

    pub fn tensor(&self, other: &EqLineBundle) -> Result<EqLineBundle> {
        if self.comp != other.comp {
            return Err(Error::ComponentMismatch(format!("cannot tensor bundles on {} and {}", self.comp, other.comp)));
        }
        Ok(EqLineBundle::new(self.comp, (self.k1 + other.k1) as i64, (self.k2 + other.k2) as i64, self.d + other.d))
    }

    pub fn dual(&self) -> EqLineBundle {
        EqLineBundle::new(self.comp, -(self.k1 as i64), -(self.k2 as i64), -self.d)
    }

    /// `O(pt)` on the component: `O(x1) = O^{0,1}(b)`, `O(x2) = O^{1,0}(a)`.
    pub fn point_bundle(comp: TwistedComponent, pt: MarkedPoint) -> EqLineBundle {
        match pt {
            MarkedPoint::X1 => EqLineBundle::new(comp, 0, 1, comp.b() as i64),
            MarkedPoint::X2 => EqLineBundle::new(comp, 1, 0, comp.a() as i64),
        }
    }

    pub fn twist_marked(&self, pt: MarkedPoint, sign: TwistSign) -> EqLineBundle {
        let o = EqLineBundle::point_bundle(self.comp, pt);
        let o = match sign {
            TwistSign::Plus => o,
            TwistSign::Minus => o.dual(),
        };
        self.tensor(&o).expect("same component")
    }

    /// Age of the fiber at a marked point, for the isotropy generator that
    /// rotates the local chart coordinate by `e^{2πi/r}`.
    pub fn age_at(&self, pt: MarkedPoint) -> Rational {
        let (a, b, l1, l2) = (self.comp.a() as i64, self.comp.b() as i64, self.comp.l1() as i64, self.comp.l2() as i64);
        let (k1, k2, d) = (self.k1 as i64, self.k2 as i64, self.d);
        // Weights, in units of 1/r, of the generator (ζ1, ζ2, e^{-2πi/(a l1)})
        // at X1 (resp. (ζ1, ζ2, e^{-2πi/(b l2)}) at X2) on the chart
        // coordinate and on the fiber.
        let (r, chart, fiber) = match pt {
            MarkedPoint::X1 => (a * l1 * l2, a * l1 - b * l2, a * l2 * k1 + a * l1 * k2 - l2 * d),
            MarkedPoint::X2 => (b * l1 * l2, b * l2 - a * l1, b * l2 * k1 + b * l1 * k2 - l1 * d),
        };
        if r == 1 {
            return Rational::ZERO;
        }
        let inv = mod_inverse(chart, r).expect("chart weight is a unit mod the isotropy order");
        let w = ((fiber.rem_euclid(r) as i128) * (inv as i128)).rem_euclid(r as i128);
        Rational::new(w, r as i128)
    }

    /// True when the isotropy group at `pt` acts trivially on the fiber.
    pub fn trivial_at(&self, pt: MarkedPoint) -> bool {
        self.age_at(pt).is_zero()
    }
}

impl fmt::Display for EqLineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O^{{{},{}}}({}) on {}", self.k1, self.k2, self.d, self.comp)
    }
}

/// `ω = O(-x1) ⊗ O(-x2)`, so that `ω(x1 + x2)` is the trivial bundle.
pub fn canonical_bundle(comp: TwistedComponent) -> EqLineBundle {
    let o1 = EqLineBundle::point_bundle(comp, MarkedPoint::X1).dual();
    let o2 = EqLineBundle::point_bundle(comp, MarkedPoint::X2).dual();
    o1.tensor(&o2).expect("same component")
}

/// A line bundle on a chain, one piece per component, balanced at nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainBundle {
    chain: CurveChain,
    pieces: Vec<EqLineBundle>,
}

impl ChainBundle {
    pub fn new(chain: CurveChain, pieces: Vec<EqLineBundle>) -> Result<Self> {
        let validity = chain.validate();
        if !validity.is_valid() {
            return Err(Error::InvalidChain(validity.violations));
        }
        if pieces.len() != chain.len() {
            return Err(Error::InvalidBundle(format!(
                "{} pieces for a chain of {} components",
                pieces.len(),
                chain.len()
            )));
        }
        for (j, (p, c)) in pieces.iter().zip(chain.components()).enumerate() {
            if p.comp() != *c {
                return Err(Error::ComponentMismatch(format!("piece {j} lives on {} but the chain has {c}", p.comp())));
            }
        }
        for (node, w) in pieces.windows(2).enumerate() {
            let left = w[0].age_at(MarkedPoint::X2);
            let right = w[1].age_at(MarkedPoint::X1);
            if !(left + right).is_integer() {
                return Err(Error::InvalidBundle(format!("unbalanced node {node}: branch ages {left} and {right}")));
            }
        }
        Ok(ChainBundle { chain, pieces })
    }

    pub fn on_component(piece: EqLineBundle) -> Self {
        ChainBundle { chain: CurveChain::single(piece.comp()), pieces: vec![piece] }
    }

    pub fn trivial(chain: &CurveChain) -> Result<Self> {
        let pieces = chain.components().iter().map(|c| EqLineBundle::trivial(*c)).collect();
        ChainBundle::new(chain.clone(), pieces)
    }

    pub fn chain(&self) -> &CurveChain {
        &self.chain
    }

    pub fn pieces(&self) -> &[EqLineBundle] {
        &self.pieces
    }

    pub fn degree(&self) -> Rational {
        self.pieces.iter().map(|p| p.degree()).sum()
    }

    pub fn dual(&self) -> ChainBundle {
        ChainBundle { chain: self.chain.clone(), pieces: self.pieces.iter().map(|p| p.dual()).collect() }
    }

    pub fn tensor(&self, other: &ChainBundle) -> Result<ChainBundle> {
        if self.chain != other.chain {
            return Err(Error::ComponentMismatch("bundles live on different chains".into()));
        }
        let pieces = self.pieces.iter().zip(&other.pieces).map(|(p, q)| p.tensor(q)).collect::<Result<Vec<_>>>()?;
        Ok(ChainBundle { chain: self.chain.clone(), pieces })
    }

    /// Twist by `±pt` on the terminal component carrying `pt`.
    pub fn twist_marked(&self, pt: MarkedPoint, sign: TwistSign) -> ChainBundle {
        let mut pieces = self.pieces.clone();
        let j = self.chain.terminal(pt);
        pieces[j] = pieces[j].twist_marked(pt, sign);
        ChainBundle { chain: self.chain.clone(), pieces }
    }

    /// Age at a marked point of the chain.
    pub fn age_at(&self, pt: MarkedPoint) -> Rational {
        self.pieces[self.chain.terminal(pt)].age_at(pt)
    }
}

/// `[u]*E = ⊕ L_i`, all summands on one chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitBundle {
    summands: Vec<ChainBundle>,
}

impl SplitBundle {
    pub fn new(summands: Vec<ChainBundle>) -> Result<Self> {
        if let Some(first) = summands.first() {
            if summands.iter().any(|s| s.chain() != first.chain()) {
                return Err(Error::ComponentMismatch("summands live on different chains".into()));
            }
        }
        Ok(SplitBundle { summands })
    }

    pub fn summands(&self) -> &[ChainBundle] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn chain(&self) -> Option<&CurveChain> {
        self.summands.first().map(|s| s.chain())
    }

    /// `β(det E)`, the total degree.
    pub fn det_degree(&self) -> Rational {
        self.summands.iter().map(|s| s.degree()).sum()
    }

    pub fn dual(&self) -> SplitBundle {
        SplitBundle { summands: self.summands.iter().map(|s| s.dual()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(a: u64, b: u64, l1: u64, l2: u64) -> TwistedComponent {
        TwistedComponent::new(a, b, l1, l2).unwrap()
    }

    #[test]
    fn tensor_examples() {
        let p1 = TwistedComponent::projective_line();
        let t = EqLineBundle::new(p1, 0, 0, 1).tensor(&EqLineBundle::new(p1, 0, 0, 2)).unwrap();
        assert_eq!(t, EqLineBundle::new(p1, 0, 0, 3));

        let c = comp(2, 3, 2, 1);
        let l = EqLineBundle::new(c, 1, 0, 2);
        assert_eq!(l.tensor(&l.dual()).unwrap(), EqLineBundle::trivial(c));
        let m = EqLineBundle::new(c, 1, 0, 1);
        assert_eq!(m.tensor(&m).unwrap(), EqLineBundle::new(c, 0, 0, 2));

        assert!(matches!(
            EqLineBundle::trivial(p1).tensor(&EqLineBundle::trivial(c)),
            Err(Error::ComponentMismatch(_))
        ));
    }

    #[test]
    fn dual_examples() {
        let p1 = TwistedComponent::projective_line();
        assert_eq!(EqLineBundle::new(p1, 0, 0, 3).dual(), EqLineBundle::new(p1, 0, 0, -3));
        let c = comp(1, 1, 2, 1);
        assert_eq!(EqLineBundle::new(c, 1, 0, 0).dual(), EqLineBundle::new(c, 1, 0, 0));
    }

    #[test]
    fn twist_examples() {
        let p1 = TwistedComponent::projective_line();
        assert_eq!(
            EqLineBundle::trivial(p1).twist_marked(MarkedPoint::X2, TwistSign::Minus),
            EqLineBundle::new(p1, 0, 0, -1)
        );
        let p12 = comp(1, 2, 1, 1);
        assert_eq!(
            EqLineBundle::new(p12, 0, 0, -1).twist_marked(MarkedPoint::X1, TwistSign::Minus),
            EqLineBundle::new(p12, 0, 0, -3)
        );
    }

    #[test]
    fn point_bundle_degrees() {
        for (a, b, l1, l2) in [(1, 1, 1, 1), (2, 3, 2, 1), (3, 2, 1, 5), (1, 4, 3, 1)] {
            let c = comp(a, b, l1, l2);
            for pt in [MarkedPoint::X1, MarkedPoint::X2] {
                let o = EqLineBundle::point_bundle(c, pt);
                assert_eq!(o.degree(), Rational::new(1, c.isotropy_order(pt) as i128));
                // O(pt) has age 1/r at pt and 0 at the other point.
                assert_eq!(o.age_at(pt), Rational::new(1, c.isotropy_order(pt) as i128).fract());
                assert_eq!(o.age_at(pt.other()), Rational::ZERO);
            }
        }
    }

    #[test]
    fn age_examples() {
        let p1 = TwistedComponent::projective_line();
        assert_eq!(EqLineBundle::new(p1, 0, 0, 5).age_at(MarkedPoint::X2), Rational::ZERO);
        let p12 = comp(1, 2, 1, 1);
        assert_eq!(EqLineBundle::new(p12, 0, 0, 1).age_at(MarkedPoint::X2), Rational::new(1, 2));
        let p13 = comp(1, 3, 1, 1);
        assert_eq!(EqLineBundle::new(p13, 0, 0, 1).age_at(MarkedPoint::X2), Rational::new(1, 3));
    }

    #[test]
    fn canonical_bundle_examples() {
        let p1 = TwistedComponent::projective_line();
        assert_eq!(canonical_bundle(p1), EqLineBundle::new(p1, 0, 0, -2));
        let p23 = comp(2, 3, 1, 1);
        assert_eq!(canonical_bundle(p23), EqLineBundle::new(p23, 0, 0, -5));
        for c in [comp(2, 3, 2, 1), comp(3, 4, 1, 5), comp(1, 1, 2, 3)] {
            let log = canonical_bundle(c)
                .twist_marked(MarkedPoint::X1, TwistSign::Plus)
                .twist_marked(MarkedPoint::X2, TwistSign::Plus);
            assert_eq!(log, EqLineBundle::trivial(c));
        }
    }

    #[test]
    fn unbalanced_node_is_rejected() {
        let p12 = comp(1, 2, 1, 1);
        let p21 = comp(2, 1, 1, 1);
        let chain = CurveChain::with_unit_degrees(vec![p12, p21]).unwrap();
        // Age 1/2 at X2 of P(1,2) needs age 1/2 at X1 of P(2,1).
        let ok =
            ChainBundle::new(chain.clone(), vec![EqLineBundle::new(p12, 0, 0, 1), EqLineBundle::new(p21, 0, 0, 1)]);
        assert!(ok.is_ok());
        let bad = ChainBundle::new(chain, vec![EqLineBundle::new(p12, 0, 0, 1), EqLineBundle::new(p21, 0, 0, 2)]);
        assert!(matches!(bad, Err(Error::InvalidBundle(_))));
    }
}
