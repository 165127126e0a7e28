//! Brute-force oracles for ages and section counts, checked against the
//! library on small components.
//!
//! The oracles enumerate group elements of `μ_{l1} × μ_{l2} × ℂ*` directly
//! and share no code with the library beyond the component and bundle
//! constructors.

use orbicurve_core::bundles::{ChainBundle, EqLineBundle};
use orbicurve_core::cohomology::{h0_component, h1_component, h_chain};
use orbicurve_core::twisted_curve::{CurveChain, MarkedPoint, TwistedComponent};
use orbicurve_core::Rational;

fn components(max_ab: u64, max_l: u64) -> Vec<TwistedComponent> {
    let mut out = Vec::new();
    for a in 1..=max_ab {
        for b in 1..=max_ab {
            for l1 in 1..=max_l {
                for l2 in 1..=max_l {
                    if l1 * l2 <= max_l {
                        if let Ok(c) = TwistedComponent::new(a, b, l1, l2) {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Stabilizer of a marked point. Each element is `(n, m1, m2)` with
/// `λ = e^{2πi n/(a l1)}` at `X1` (resp. `e^{2πi n/(b l2)}` at `X2`) and is
/// stored as its chart and fiber weights, as numerators over `denom`.
struct Stabilizer {
    denom: i64,
    elements: Vec<(i64, i64)>,
}

fn stabilizer(l: &EqLineBundle, pt: MarkedPoint) -> Stabilizer {
    let c = l.comp();
    let (a, b, l1, l2) = (c.a() as i64, c.b() as i64, c.l1() as i64, c.l2() as i64);
    let (k1, k2, d) = (l.k1() as i64, l.k2() as i64, l.d());
    let mut elements = Vec::new();
    match pt {
        MarkedPoint::X1 => {
            // Fixes x = 1: λ^a ζ1^{m1} = 1. The chart coordinate is y.
            let denom = a * l1 * l2;
            for n in 0..a * l1 {
                for m1 in 0..l1 {
                    for m2 in 0..l2 {
                        if (n + m1) % l1 != 0 {
                            continue;
                        }
                        let chart = (b * n * l2 + m2 * a * l1).rem_euclid(denom);
                        let fiber = (d * n * l2 + m1 * k1 * a * l2 + m2 * k2 * a * l1).rem_euclid(denom);
                        elements.push((chart, fiber));
                    }
                }
            }
            Stabilizer { denom, elements }
        }
        MarkedPoint::X2 => {
            // Fixes y = 1: λ^b ζ2^{m2} = 1. The chart coordinate is x.
            let denom = b * l1 * l2;
            for n in 0..b * l2 {
                for m1 in 0..l1 {
                    for m2 in 0..l2 {
                        if (n + m2) % l2 != 0 {
                            continue;
                        }
                        let chart = (a * n * l1 + m1 * b * l2).rem_euclid(denom);
                        let fiber = (d * n * l1 + m1 * k1 * b * l2 + m2 * k2 * b * l1).rem_euclid(denom);
                        elements.push((chart, fiber));
                    }
                }
            }
            Stabilizer { denom, elements }
        }
    }
}

/// The age read off the stabilizer element that rotates the chart
/// coordinate by `e^{2πi/r}`.
fn age_oracle(l: &EqLineBundle, pt: MarkedPoint) -> Rational {
    let s = stabilizer(l, pt);
    let generators: Vec<_> = s.elements.iter().filter(|&&(chart, _)| chart == 1 % s.denom).collect();
    assert_eq!(generators.len(), 1, "{l} at {pt}: expected one chart generator");
    Rational::new(generators[0].1 as i128, s.denom as i128)
}

/// Counts monomials `x^i y^j` in the given exponent box that transform under
/// every sampled group element by the fiber character. The torus factor is
/// sampled at the primitive `N`-th root of unity with `N` prime and larger
/// than any weight difference in the box.
fn invariant_count(l: &EqLineBundle, exponents: impl Iterator<Item = (i64, i64)>) -> usize {
    const N: i64 = 997;
    let c = l.comp();
    let (a, b, l1, l2) = (c.a() as i64, c.b() as i64, c.l1() as i64, c.l2() as i64);
    let (k1, k2, d) = (l.k1() as i64, l.k2() as i64, l.d());
    let mut count = 0;
    for (i, j) in exponents {
        assert!((a * i + b * j - d).abs() < N);
        let torus = (a * i + b * j - d).rem_euclid(N) == 0;
        let mut finite = true;
        for m1 in 0..l1 {
            for m2 in 0..l2 {
                // Monomial weight minus fiber weight, over l1·l2.
                let diff = (m1 * (i - k1) * l2 + m2 * (j - k2) * l1).rem_euclid(l1 * l2);
                finite &= diff == 0;
            }
        }
        if torus && finite {
            count += 1;
        }
    }
    count
}

fn h0_oracle(l: &EqLineBundle) -> usize {
    let bound = l.d().max(0) + 1;
    invariant_count(l, (0..=bound).flat_map(move |i| (0..=bound).map(move |j| (i, j))))
}

fn h1_oracle(l: &EqLineBundle) -> usize {
    let bound = (-l.d()).max(0) + 1;
    invariant_count(l, (1..=bound).flat_map(move |p| (1..=bound).map(move |q| (-p, -q))))
}

fn bundles_on(c: TwistedComponent, d_min: i64, d_max: i64) -> Vec<EqLineBundle> {
    let mut out = Vec::new();
    for k1 in 0..c.l1() as i64 {
        for k2 in 0..c.l2() as i64 {
            for d in d_min..=d_max {
                out.push(EqLineBundle::new(c, k1, k2, d));
            }
        }
    }
    out
}

#[test]
fn stabilizer_orders_match_isotropy() {
    for c in components(5, 4) {
        let l = EqLineBundle::trivial(c);
        assert_eq!(stabilizer(&l, MarkedPoint::X1).elements.len() as u64, c.c(), "{c}");
        assert_eq!(stabilizer(&l, MarkedPoint::X2).elements.len() as u64, c.d(), "{c}");
    }
}

#[test]
fn ages_match_group_enumeration() {
    for c in components(5, 4) {
        for l in bundles_on(c, -12, 12) {
            for pt in [MarkedPoint::X1, MarkedPoint::X2] {
                assert_eq!(l.age_at(pt), age_oracle(&l, pt), "{l} at {pt}");
            }
        }
    }
}

#[test]
fn section_counts_match_group_enumeration() {
    for c in components(5, 4) {
        for l in bundles_on(c, -15, 15) {
            assert_eq!(h0_component(&l).0, h0_oracle(&l), "h0 of {l}");
            assert_eq!(h1_component(&l).unwrap().0, h1_oracle(&l), "h1 of {l}");
        }
    }
}

#[test]
fn frozen_ages_and_counts() {
    // O(1) on P(1,3): age 0 at the smooth point and 1/3 at the Z/3 point.
    let p13 = TwistedComponent::new(1, 3, 1, 1).unwrap();
    let o1 = EqLineBundle::new(p13, 0, 0, 1);
    assert_eq!(o1.age_at(MarkedPoint::X1), Rational::ZERO);
    assert_eq!(o1.age_at(MarkedPoint::X2), Rational::new(1, 3));
    // O(3) on P(1,2): sections x^3 and x y.
    let p12 = TwistedComponent::new(1, 2, 1, 1).unwrap();
    let o3 = EqLineBundle::new(p12, 0, 0, 3);
    assert_eq!(h0_oracle(&o3), 2);
    assert_eq!(h0_component(&o3).0, 2);
    // O(-4) on P(1,1): h1 = 3.
    let p11 = TwistedComponent::projective_line();
    let m4 = EqLineBundle::new(p11, 0, 0, -4);
    assert_eq!(h1_oracle(&m4), 3);
    assert_eq!(h1_component(&m4).unwrap().0, 3);
}

/// On a two-component chain the evaluation map has one row when the node is
/// untwisted, and it is nonzero exactly when some piece has a section that
/// does not vanish at the node. Such a section is `y^j` on the left piece or
/// `x^i` on the right piece.
fn two_chain_h0_oracle(left: &EqLineBundle, right: &EqLineBundle) -> usize {
    let total = h0_oracle(left) + h0_oracle(right);
    if !age_oracle(left, MarkedPoint::X2).is_zero() {
        return total;
    }
    let left_hits = invariant_count(left, (0..=left.d().max(0)).map(|j| (0, j)));
    let right_hits = invariant_count(right, (0..=right.d().max(0)).map(|i| (i, 0)));
    total - usize::from(left_hits + right_hits > 0)
}

#[test]
fn two_component_chains_match_oracle() {
    let comps = components(3, 2);
    let mut checked = 0;
    for &c1 in &comps {
        for &c2 in &comps {
            if c1.d() != c2.c() {
                continue;
            }
            let Ok(chain) = CurveChain::with_unit_degrees(vec![c1, c2]) else { continue };
            for l in bundles_on(c1, -6, 6) {
                for r in bundles_on(c2, -6, 6) {
                    let Ok(bundle) = ChainBundle::new(chain.clone(), vec![l, r]) else { continue };
                    let report = h_chain(&bundle).unwrap();
                    assert_eq!(report.h0, two_chain_h0_oracle(&l, &r), "{l} | {r}");
                    let euler = Rational::from(report.h0 as i64) - Rational::from(report.h1 as i64);
                    assert_eq!(euler, report.euler_char, "{l} | {r}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} chain bundles checked");
}
