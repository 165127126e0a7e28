//! `h⁰` and `h¹` of equivariant line bundles on components and chains.
//!
//! On a component both groups are spanned by monomials: `H⁰` by invariant
//! monomials `x^i y^j` with `i, j ≥ 0`, `H¹` by invariant Čech classes
//! `x^{-p} y^{-q}` with `p, q ≥ 1`. `h¹` is also computed independently as
//! `h⁰(ω ⊗ L^∨)` and the two must agree. On a chain the normalization
//! sequence reduces everything to the rank of the node evaluation map.

use std::collections::HashMap;

use serde::Serialize;

use crate::bundles::{canonical_bundle, ChainBundle, EqLineBundle, TwistSign};
use crate::error::{Error, Result};
use crate::foundation::Rational;
use crate::linalg::{self, Matrix};
use crate::twisted_curve::MarkedPoint;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Method {
    Oracle,
    RiemannRoch,
    Chain,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub euler_char: Rational,
    pub method: Method,
}

/// Exponent pairs `(i, j)` of a monomial basis. For `H¹` the exponents are
/// the negative pairs `(-p, -q)`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SectionBasis {
    pub monomials: Vec<(i64, i64)>,
}

impl SectionBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Index of the basis monomial that does not vanish at `pt`, if any.
    /// `x^i y^j` is nonzero at `X2 = (0,1)` iff `i = 0` and at `X1` iff `j = 0`.
    pub fn nonvanishing_at(&self, pt: MarkedPoint) -> Option<usize> {
        self.monomials.iter().position(|&(i, j)| match pt {
            MarkedPoint::X1 => j == 0,
            MarkedPoint::X2 => i == 0,
        })
    }
}

fn congruent(x: i64, k: u64, m: u64) -> bool {
    (x - k as i64).rem_euclid(m as i64) == 0
}

// Solutions (i, j) of a·i + b·j = target with i, j ≥ min and the congruences
// i ≡ ci (mod l1), j ≡ cj (mod l2).
fn lattice_points(a: i64, b: i64, target: i64, min: i64, residues: (i64, u64, i64, u64)) -> Vec<(i64, i64)> {
    let (ci, l1, cj, l2) = residues;
    let mut out = Vec::new();
    let mut i = min;
    while a * i + b * min <= target {
        let rest = target - a * i;
        if rest % b == 0 {
            let j = rest / b;
            if congruent(i, ci.rem_euclid(l1 as i64) as u64, l1) && congruent(j, cj.rem_euclid(l2 as i64) as u64, l2) {
                out.push((i, j));
            }
        }
        i += 1;
    }
    out
}

pub fn h0_component(l: &EqLineBundle) -> (usize, SectionBasis) {
    let c = l.comp();
    let monomials =
        lattice_points(c.a() as i64, c.b() as i64, l.d(), 0, (l.k1() as i64, c.l1(), l.k2() as i64, c.l2()));
    (monomials.len(), SectionBasis { monomials })
}

/// Invariant Čech classes `x^{-p} y^{-q}`, `p, q ≥ 1`, `a·p + b·q = -d`.
pub fn h1_negative_monomials(l: &EqLineBundle) -> (usize, SectionBasis) {
    let c = l.comp();
    // -p ≡ k1 (mod l1) and -q ≡ k2 (mod l2).
    let pts =
        lattice_points(c.a() as i64, c.b() as i64, -l.d(), 1, (-(l.k1() as i64), c.l1(), -(l.k2() as i64), c.l2()));
    let monomials: Vec<_> = pts.into_iter().map(|(p, q)| (-p, -q)).collect();
    (monomials.len(), SectionBasis { monomials })
}

/// `h¹` through Serre duality, `h⁰(ω ⊗ L^∨)`.
pub fn h1_serre(l: &EqLineBundle) -> usize {
    let dual = canonical_bundle(l.comp()).tensor(&l.dual()).expect("same component");
    h0_component(&dual).0
}

/// `h¹` by negative monomials, cross-checked against Serre duality.
pub fn h1_component(l: &EqLineBundle) -> Result<(usize, SectionBasis)> {
    let (n, basis) = h1_negative_monomials(l);
    let serre = h1_serre(l);
    if n != serre {
        return Err(Error::Inconsistent(format!("h1({l}): negative monomials give {n}, Serre duality gives {serre}")));
    }
    Ok((n, basis))
}

/// `deg L + 1 - age_{x1}(L) - age_{x2}(L)`.
pub fn riemann_roch_check(l: &EqLineBundle) -> Rational {
    l.degree() + Rational::ONE - l.age_at(MarkedPoint::X1) - l.age_at(MarkedPoint::X2)
}

pub fn h_component(l: &EqLineBundle) -> Result<CohomologyReport> {
    let (h0, _) = h0_component(l);
    let (h1, _) = h1_component(l)?;
    Ok(CohomologyReport { h0, h1, euler_char: riemann_roch_check(l), method: Method::Oracle })
}

/// What the normalization sequence needs from one piece of a chain bundle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PieceCohomology {
    pub sections: SectionBasis,
    pub h1: usize,
    pub euler_char: Rational,
    /// Whether the isotropy at `X2` acts trivially on the fiber.
    pub trivial_at_x2: bool,
}

impl PieceCohomology {
    pub fn of(l: &EqLineBundle) -> Result<Self> {
        Ok(PieceCohomology {
            sections: h0_component(l).1,
            h1: h1_component(l)?.0,
            euler_char: riemann_roch_check(l),
            trivial_at_x2: l.trivial_at(MarkedPoint::X2),
        })
    }
}

/// Memoized [`PieceCohomology`] for repeated chain computations.
#[derive(Clone, Debug, Default)]
pub struct PieceCache {
    map: HashMap<EqLineBundle, PieceCohomology>,
}

impl PieceCache {
    pub fn new() -> Self {
        PieceCache::default()
    }

    pub fn get(&mut self, l: &EqLineBundle) -> Result<&PieceCohomology> {
        if !self.map.contains_key(l) {
            let data = PieceCohomology::of(l)?;
            self.map.insert(*l, data);
        }
        Ok(&self.map[l])
    }
}

/// Cohomology of a line bundle on a chain via the normalization sequence
/// `0 → H⁰(C,L) → ⊕ H⁰(C_j,L_j) →F ⊕ H⁰(n_j, L|n_j) → H¹(C,L) → ⊕ H¹(C_j,L_j) → 0`.
pub fn h_chain(bundle: &ChainBundle) -> Result<CohomologyReport> {
    let parts = bundle.pieces().iter().map(PieceCohomology::of).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&PieceCohomology> = parts.iter().collect();
    assemble_chain(&refs)
}

/// [`h_chain`] on the pieces of a balanced chain bundle, with per-piece data
/// drawn from `cache`.
pub fn h_chain_pieces(pieces: &[EqLineBundle], cache: &mut PieceCache) -> Result<CohomologyReport> {
    for p in pieces {
        cache.get(p)?;
    }
    let refs: Vec<&PieceCohomology> = pieces.iter().map(|p| &cache.map[p]).collect();
    assemble_chain(&refs)
}

/// The normalization-sequence computation from per-piece data.
pub fn assemble_chain(parts: &[&PieceCohomology]) -> Result<CohomologyReport> {
    let mut h1_parts = 0;
    let mut euler = Rational::ZERO;
    let mut total = 0;
    for p in parts {
        h1_parts += p.h1;
        euler += p.euler_char;
        total += p.sections.len();
    }

    // One row per node whose isotropy acts trivially on the fiber; other
    // nodes contribute no target space. Only monomials that survive at some
    // node give nonzero columns, so the columns are indexed by
    // (component, monomial) pairs as they are met.
    let mut columns: Vec<(usize, usize)> = Vec::new();
    let mut column_of = |comp: usize, idx: usize| match columns.iter().position(|&c| c == (comp, idx)) {
        Some(p) => p,
        None => {
            columns.push((comp, idx));
            columns.len() - 1
        }
    };
    let mut sparse_rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for node in 0..parts.len().saturating_sub(1) {
        if !parts[node].trivial_at_x2 {
            continue;
        }
        let mut row = Vec::new();
        for (idx, &(i, _)) in parts[node].sections.monomials.iter().enumerate() {
            if i == 0 {
                row.push((column_of(node, idx), Rational::ONE));
            }
        }
        for (idx, &(_, j)) in parts[node + 1].sections.monomials.iter().enumerate() {
            if j == 0 {
                row.push((column_of(node + 1, idx), -Rational::ONE));
            }
        }
        sparse_rows.push(row);
    }
    let width = columns.len();
    let f: Matrix = sparse_rows
        .into_iter()
        .map(|entries| {
            let mut row = vec![Rational::ZERO; width];
            for (c, v) in entries {
                row[c] = v;
            }
            row
        })
        .collect();
    let rows = f.len();
    let rank = linalg::rank(&f);
    euler -= Rational::from(rows as i64);

    let h0 = total - rank;
    let h1 = h1_parts + (rows - rank);
    if Rational::from(h0 as i64) - Rational::from(h1 as i64) != euler {
        return Err(Error::Inconsistent(format!(
            "chain cohomology h0={h0}, h1={h1} disagrees with Riemann-Roch {euler}"
        )));
    }
    Ok(CohomologyReport { h0, h1, euler_char: euler, method: Method::Chain })
}

pub fn h_twisted(bundle: &ChainBundle, pt: MarkedPoint, sign: TwistSign) -> Result<CohomologyReport> {
    h_chain(&bundle.twist_marked(pt, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted_curve::{CurveChain, TwistedComponent};

    fn comp(a: u64, b: u64, l1: u64, l2: u64) -> TwistedComponent {
        TwistedComponent::new(a, b, l1, l2).unwrap()
    }

    fn p1() -> TwistedComponent {
        TwistedComponent::projective_line()
    }

    #[test]
    fn h0_examples() {
        for d in 0..10 {
            assert_eq!(h0_component(&EqLineBundle::new(p1(), 0, 0, d)).0, (d + 1) as usize);
        }
        let (n, b) = h0_component(&EqLineBundle::new(comp(1, 2, 1, 1), 0, 0, 3));
        assert_eq!(n, 2);
        assert_eq!(b.monomials, vec![(1, 1), (3, 0)]);
        let (n, b) = h0_component(&EqLineBundle::new(comp(1, 1, 2, 1), 0, 0, 2));
        assert_eq!(n, 2);
        assert_eq!(b.monomials, vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn h1_examples() {
        for (a, b, l1, l2) in [(1, 1, 1, 1), (2, 3, 2, 1), (1, 2, 3, 1)] {
            for d in 0..8 {
                for k1 in 0..l1 as i64 {
                    let l = EqLineBundle::new(comp(a, b, l1, l2), k1, 0, d);
                    assert_eq!(h1_component(&l).unwrap().0, 0);
                }
            }
        }
        assert_eq!(h1_component(&EqLineBundle::new(p1(), 0, 0, -2)).unwrap().0, 1);
        let (n, b) = h1_component(&EqLineBundle::new(comp(1, 2, 1, 1), 0, 0, -3)).unwrap();
        assert_eq!(n, 1);
        assert_eq!(b.monomials, vec![(-1, -1)]);
    }

    #[test]
    fn riemann_roch_examples() {
        assert_eq!(riemann_roch_check(&EqLineBundle::new(p1(), 0, 0, 3)), Rational::from(4i64));
        let l = EqLineBundle::new(comp(1, 2, 1, 1), 0, 0, 3);
        assert_eq!(riemann_roch_check(&l), Rational::from(2i64));
        let r = h_component(&l).unwrap();
        assert_eq!((r.h0, r.h1), (2, 0));
        for c in [p1(), comp(2, 3, 2, 1), comp(3, 1, 1, 4)] {
            assert_eq!(riemann_roch_check(&EqLineBundle::trivial(c)), Rational::ONE);
        }
    }

    fn two_lines(d0: i64, d1: i64) -> ChainBundle {
        let chain = CurveChain::with_unit_degrees(vec![p1(), p1()]).unwrap();
        ChainBundle::new(chain, vec![EqLineBundle::new(p1(), 0, 0, d0), EqLineBundle::new(p1(), 0, 0, d1)]).unwrap()
    }

    #[test]
    fn chain_examples() {
        let r = h_chain(&two_lines(1, 0)).unwrap();
        assert_eq!((r.h0, r.h1), (2, 0));
        let r = h_chain(&two_lines(-1, -1)).unwrap();
        assert_eq!((r.h0, r.h1), (0, 1));
        for len in 1..=6 {
            for c in [p1(), comp(1, 1, 2, 1)] {
                let chain = CurveChain::with_unit_degrees(vec![c; len]).unwrap();
                let r = h_chain(&ChainBundle::trivial(&chain).unwrap()).unwrap();
                assert_eq!((r.h0, r.h1), (1, 0), "len {len} on {c}");
            }
        }
    }

    #[test]
    fn twisted_examples() {
        let b = ChainBundle::on_component(EqLineBundle::new(p1(), 0, 0, 2));
        assert_eq!(h_twisted(&b, MarkedPoint::X2, TwistSign::Minus).unwrap().h1, 0);
        let b = ChainBundle::on_component(EqLineBundle::new(p1(), 0, 0, -1));
        assert_eq!(h_twisted(&b, MarkedPoint::X2, TwistSign::Minus).unwrap().h1, 1);
        let b = ChainBundle::on_component(EqLineBundle::new(comp(1, 2, 1, 1), 0, 0, -1));
        assert_eq!(h_twisted(&b, MarkedPoint::X1, TwistSign::Minus).unwrap().h1, 1);
    }

    #[test]
    fn pure_power_section_exists_when_isotropy_is_trivial() {
        for (a, b, l1, l2) in [(1, 1, 1, 1), (2, 3, 2, 1), (3, 2, 1, 5), (1, 4, 3, 1), (2, 1, 3, 1)] {
            let c = comp(a, b, l1, l2);
            for d in 0..=12 {
                for k1 in 0..l1 as i64 {
                    for k2 in 0..l2 as i64 {
                        let l = EqLineBundle::new(c, k1, k2, d);
                        let (_, basis) = h0_component(&l);
                        for pt in [MarkedPoint::X1, MarkedPoint::X2] {
                            if l.trivial_at(pt) {
                                assert!(basis.nonvanishing_at(pt).is_some(), "{l} at {pt}");
                            } else {
                                assert!(basis.nonvanishing_at(pt).is_none(), "{l} at {pt}");
                            }
                        }
                    }
                }
            }
        }
    }
}
