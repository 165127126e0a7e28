//! Smooth two-pointed twisted rational curves `ℙ(a,b)/μ_l` and linear
//! chains of them.
//!
//! A component is the quotient of `ℂ² \ 0` by `μ_{l1} × μ_{l2} × ℂ*` acting as
//! `(ζ1^{m1}, ζ2^{m2}, λ)·(x, y) = (λ^a ζ1^{m1} x, λ^b ζ2^{m2} y)`. The marked
//! point `X1 = (1,0)` has isotropy of order `a·l1·l2`, `X2 = (0,1)` has order
//! `b·l1·l2`, and the generic point has trivial isotropy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{canonical_split, gcd, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComponentRepr", into = "ComponentRepr")]
pub struct TwistedComponent {
    a: u64,
    b: u64,
    l1: u64,
    l2: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum MarkedPoint {
    X1,
    X2,
}

impl MarkedPoint {
    pub fn other(self) -> MarkedPoint {
        match self {
            MarkedPoint::X1 => MarkedPoint::X2,
            MarkedPoint::X2 => MarkedPoint::X1,
        }
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkedPoint::X1 => "x1",
            MarkedPoint::X2 => "x2",
        })
    }
}

/// Where to read an isotropy group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurvePoint {
    Marked(MarkedPoint),
    Generic,
}

impl From<MarkedPoint> for CurvePoint {
    fn from(p: MarkedPoint) -> Self {
        CurvePoint::Marked(p)
    }
}

impl TwistedComponent {
    pub fn new(a: u64, b: u64, l1: u64, l2: u64) -> Result<Self> {
        if a == 0 || b == 0 || l1 == 0 || l2 == 0 {
            return Err(Error::InvalidComponent(format!("a, b, l1, l2 must be positive (got {a}, {b}, {l1}, {l2})")));
        }
        let checks = [
            ("gcd(a,b)", gcd(a, b)),
            ("gcd(l1,l2)", gcd(l1, l2)),
            ("gcd(l1,b)", gcd(l1, b)),
            ("gcd(l2,a)", gcd(l2, a)),
        ];
        for (name, g) in checks {
            if g != 1 {
                return Err(Error::InvalidComponent(format!("{name}={g} ≠ 1")));
            }
        }
        Ok(TwistedComponent { a, b, l1, l2 })
    }

    /// The presentation of `ℙ_[c,d]`.
    pub fn present(c: u64, d: u64) -> Result<Self> {
        if c == 0 || d == 0 {
            return Err(Error::InvalidComponent(format!("isotropy orders must be positive (got c={c}, d={d})")));
        }
        let l = gcd(c, d);
        let (a, b) = (c / l, d / l);
        let (l1, l2) = canonical_split(l, a, b)?;
        TwistedComponent::new(a, b, l1, l2)
    }

    pub fn projective_line() -> Self {
        TwistedComponent { a: 1, b: 1, l1: 1, l2: 1 }
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn l1(&self) -> u64 {
        self.l1
    }
    pub fn l2(&self) -> u64 {
        self.l2
    }
    pub fn l(&self) -> u64 {
        self.l1 * self.l2
    }

    /// `c`, the isotropy order at `X1`.
    pub fn c(&self) -> u64 {
        self.a * self.l()
    }

    /// `d`, the isotropy order at `X2`.
    pub fn d(&self) -> u64 {
        self.b * self.l()
    }

    pub fn isotropy_order(&self, pt: impl Into<CurvePoint>) -> u64 {
        match pt.into() {
            CurvePoint::Marked(MarkedPoint::X1) => self.c(),
            CurvePoint::Marked(MarkedPoint::X2) => self.d(),
            CurvePoint::Generic => 1,
        }
    }
}

impl fmt::Display for TwistedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l() == 1 {
            write!(f, "P({},{})", self.a, self.b)
        } else {
            write!(f, "P({},{})/mu_{}[{}x{}]", self.a, self.b, self.l(), self.l1, self.l2)
        }
    }
}

/// JSON form: either `{"c":…,"d":…}` or `{"a":…,"b":…,"l1":…,"l2":…}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentRepr {
    Explicit { a: u64, b: u64, l1: u64, l2: u64 },
    Orders { c: u64, d: u64 },
}

impl TryFrom<ComponentRepr> for TwistedComponent {
    type Error = Error;
    fn try_from(r: ComponentRepr) -> Result<Self> {
        match r {
            ComponentRepr::Explicit { a, b, l1, l2 } => TwistedComponent::new(a, b, l1, l2),
            ComponentRepr::Orders { c, d } => TwistedComponent::present(c, d),
        }
    }
}

impl From<TwistedComponent> for ComponentRepr {
    fn from(t: TwistedComponent) -> Self {
        ComponentRepr::Explicit { a: t.a, b: t.b, l1: t.l1, l2: t.l2 }
    }
}

/// A linear chain: `X2` of component `j` is glued to `X1` of component `j+1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveChain {
    components: Vec<TwistedComponent>,
    degree_tags: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ChainViolation {
    Empty,
    TagCount { components: usize, tags: usize },
    NodeIsotropyMismatch { node: usize, left: u64, right: u64 },
    NonPositiveDegree { component: usize, degree: Rational },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::Empty => write!(f, "chain has no components"),
            ChainViolation::TagCount { components, tags } => {
                write!(f, "{components} components but {tags} degree tags")
            }
            ChainViolation::NodeIsotropyMismatch { node, left, right } => {
                write!(f, "node isotropy mismatch at node {node}: {left} vs {right}")
            }
            ChainViolation::NonPositiveDegree { component, degree } => {
                write!(f, "component {component} has non-positive degree {degree}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ChainValidity {
    pub violations: Vec<ChainViolation>,
}

impl ChainValidity {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CurveChain {
    /// Builds a chain without checking it; see [`CurveChain::validate`].
    pub fn new_unchecked(components: Vec<TwistedComponent>, degree_tags: Vec<Rational>) -> Self {
        CurveChain { components, degree_tags }
    }

    pub fn new(components: Vec<TwistedComponent>, degree_tags: Vec<Rational>) -> Result<Self> {
        let chain = CurveChain::new_unchecked(components, degree_tags);
        let v = chain.validate();
        if v.is_valid() {
            Ok(chain)
        } else {
            Err(Error::InvalidChain(v.violations))
        }
    }

    /// Chain with every degree tag equal to 1.
    pub fn with_unit_degrees(components: Vec<TwistedComponent>) -> Result<Self> {
        let tags = vec![Rational::ONE; components.len()];
        CurveChain::new(components, tags)
    }

    pub fn single(comp: TwistedComponent) -> Self {
        CurveChain { components: vec![comp], degree_tags: vec![Rational::ONE] }
    }

    pub fn components(&self) -> &[TwistedComponent] {
        &self.components
    }

    pub fn degree_tags(&self) -> &[Rational] {
        &self.degree_tags
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    /// Component index carrying the marked point.
    pub fn terminal(&self, pt: MarkedPoint) -> usize {
        match pt {
            MarkedPoint::X1 => 0,
            MarkedPoint::X2 => self.components.len() - 1,
        }
    }

    pub fn validate(&self) -> ChainValidity {
        let mut violations = Vec::new();
        if self.components.is_empty() {
            violations.push(ChainViolation::Empty);
        }
        if self.components.len() != self.degree_tags.len() {
            violations
                .push(ChainViolation::TagCount { components: self.components.len(), tags: self.degree_tags.len() });
        }
        for (node, pair) in self.components.windows(2).enumerate() {
            let left = pair[0].isotropy_order(MarkedPoint::X2);
            let right = pair[1].isotropy_order(MarkedPoint::X1);
            if left != right {
                violations.push(ChainViolation::NodeIsotropyMismatch { node, left, right });
            }
        }
        for (component, &degree) in self.degree_tags.iter().enumerate() {
            if degree <= Rational::ZERO {
                violations.push(ChainViolation::NonPositiveDegree { component, degree });
            }
        }
        ChainValidity { violations }
    }
}
