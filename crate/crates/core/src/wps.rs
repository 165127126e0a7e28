//! Chen–Ruan state spaces of weighted projective spaces `X = ℙ(w_1,…,w_n)`
//! carrying a split bundle `E = ⊕ O(k_j)`.
//!
//! Twisted sectors are indexed by `f = k/w_i ∈ [0,1)`. The sector `X_f` is
//! the weighted projective space on the weights `w_i` with `f·w_i ∈ ℤ`, with
//! cohomology `ℚ[H]/H^{m_f}` (`m_f` the number of fixed weights) and
//! `∫_{X_f} H^{m_f - 1} = 1/∏ w_i`. Ambient classes of the zero locus `Z` and
//! compact-type classes of the total space of `E^∨` are both represented by
//! their preimages `H^t·1_f` with `t < m_f - rank E_f`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{Phase, PhasedScalar, Rational};
use crate::linalg::{self, Matrix};
use crate::sector::SectorAction;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WPSModel {
    weights: Vec<u64>,
    #[serde(alias = "bundle")]
    bundle_degrees: Vec<u64>,
}

impl WPSModel {
    /// At least two positive weights and positive bundle degrees. An empty
    /// bundle list is accepted as the degenerate rank-0 case.
    pub fn new(weights: Vec<u64>, bundle_degrees: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidModel(format!("need at least 2 weights, got {}", weights.len())));
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0) {
            return Err(Error::InvalidModel(format!("weight {w} is not positive")));
        }
        if let Some(k) = bundle_degrees.iter().find(|&&k| k == 0) {
            return Err(Error::InvalidModel(format!("bundle degree {k} is not positive")));
        }
        Ok(WPSModel { weights, bundle_degrees })
    }

    /// Re-checks invariants after deserialization.
    pub fn validated(self) -> Result<Self> {
        WPSModel::new(self.weights, self.bundle_degrees)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn bundle_degrees(&self) -> &[u64] {
        &self.bundle_degrees
    }

    pub fn rank(&self) -> usize {
        self.bundle_degrees.len()
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn det_degree(&self) -> u64 {
        self.bundle_degrees.iter().sum()
    }

    /// The sector labelled `f`, if its fixed set is nonempty.
    pub fn sector(&self, f: Rational) -> Option<Sector> {
        if f.is_negative() || f >= Rational::ONE {
            return None;
        }
        let fixed: Vec<usize> =
            (0..self.weights.len()).filter(|&i| (f * Rational::from(self.weights[i])).is_integer()).collect();
        if fixed.is_empty() {
            return None;
        }
        let fiber = self.bundle_degrees.iter().map(|&k| (f * Rational::from(k)).fract()).collect();
        Some(
            Sector {
                f,
                fixed_weight_indices: fixed,
                fixed_weights: Vec::new(),
                fiber_weights: SectorAction::new(fiber).expect("fractional parts lie in [0,1)"),
                bundle_degrees: self.bundle_degrees.clone(),
            }
            .with_weights(&self.weights),
        )
    }

    /// All sectors, sorted by `f`, starting with the untwisted one.
    pub fn enumerate_sectors(&self) -> Vec<Sector> {
        let mut fs: Vec<Rational> =
            self.weights.iter().flat_map(|&w| (0..w).map(move |k| Rational::new(k as i128, w as i128))).collect();
        fs.sort();
        fs.dedup();
        fs.into_iter().filter_map(|f| self.sector(f)).collect()
    }

    /// The ordered basis `H^t·1_f` (`t < m_f - rank E_f`) of the state space
    /// shared by the ambient part of `Z` and the compact-type part of `E^∨`.
    pub fn reduced_basis(&self) -> Vec<BasisElement> {
        self.enumerate_sectors()
            .iter()
            .flat_map(|s| (0..s.reduced_dim()).map(move |t| BasisElement { sector: s.f, power: t }))
            .collect()
    }
}

impl fmt::Display for WPSModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|x| x.to_string()).collect();
        let k: Vec<String> = self.bundle_degrees.iter().map(|x| format!("O({x})")).collect();
        write!(f, "P({})", w.join(","))?;
        if !k.is_empty() {
            write!(f, " with {}", k.join("+"))?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Sector {
    pub f: Rational,
    pub fixed_weight_indices: Vec<usize>,
    pub fixed_weights: Vec<u64>,
    /// `⟨f·k_j⟩` for every summand.
    pub fiber_weights: SectorAction,
    #[serde(skip)]
    bundle_degrees: Vec<u64>,
}

impl Sector {
    fn with_weights(mut self, weights: &[u64]) -> Self {
        self.fixed_weights = self.fixed_weight_indices.iter().map(|&i| weights[i]).collect();
        self
    }

    pub fn dim(&self) -> usize {
        self.fixed_weight_indices.len() - 1
    }

    /// `m_f`, the dimension of `ℚ[H]/H^{m_f}`.
    pub fn ring_dim(&self) -> usize {
        self.fixed_weight_indices.len()
    }

    /// `rank E_f`.
    pub fn fixed_rank(&self) -> usize {
        self.fiber_weights.rank_fixed()
    }

    /// `m_f - rank E_f`, the dimension of the image of `e(E_f)·`.
    pub fn reduced_dim(&self) -> usize {
        self.ring_dim().saturating_sub(self.fixed_rank())
    }

    pub fn age(&self) -> Rational {
        self.fiber_weights.age()
    }

    pub fn dual_age(&self) -> Rational {
        self.fiber_weights.inverse_sector().age()
    }

    /// The label of `ι(X_f)`.
    pub fn inverse_label(&self) -> Rational {
        (-self.f).fract()
    }

    /// `e(E_f) = c·H^s` as `(c, s)`, with `c = ∏ k_j` over the summands
    /// fixed by the sector.
    pub fn euler_class(&self) -> (Rational, usize) {
        let mut c = Rational::ONE;
        for (w, &k) in self.fiber_weights.weights().iter().zip(&self.bundle_degrees) {
            if w.is_zero() {
                c *= Rational::from(k);
            }
        }
        (c, self.fixed_rank())
    }

    fn top_integral(&self) -> Rational {
        Rational::ONE / Rational::from(self.fixed_weights.iter().product::<u64>())
    }

    /// `∫_{X_f} H^power`.
    pub fn integrate(&self, power: usize) -> Result<Rational> {
        match power.cmp(&self.dim()) {
            std::cmp::Ordering::Greater => Err(Error::PowerExceedsDimension { power, dim: self.dim() }),
            std::cmp::Ordering::Equal => Ok(self.top_integral()),
            std::cmp::Ordering::Less => Ok(Rational::ZERO),
        }
    }

    /// `∫_{X_f} H^power` where powers beyond the dimension vanish in the ring.
    fn integrate_truncated(&self, power: usize) -> Rational {
        if power == self.dim() {
            self.top_integral()
        } else {
            Rational::ZERO
        }
    }
}

/// `∫_{X_f} H^power` for the sector `s` of `m`.
pub fn integrate(m: &WPSModel, s: &Sector, power: usize) -> Result<Rational> {
    debug_assert!(m.sector(s.f).as_ref() == Some(s));
    s.integrate(power)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct BasisElement {
    pub sector: Rational,
    pub power: usize,
}

/// A class on the inertia stack: per sector, the coefficients of `H^t`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct StateSpaceElement {
    components: BTreeMap<Rational, BTreeMap<usize, PhasedScalar>>,
}

impl StateSpaceElement {
    pub fn zero() -> Self {
        StateSpaceElement::default()
    }

    /// `c·H^power·1_f`; powers beyond the sector dimension vanish.
    pub fn monomial(m: &WPSModel, f: Rational, power: usize, c: impl Into<PhasedScalar>) -> Result<Self> {
        let s = m.sector(f).ok_or_else(|| Error::InvalidModel(format!("{m} has no sector {f}")))?;
        let mut e = StateSpaceElement::zero();
        let c = c.into();
        if power <= s.dim() && !c.is_zero() {
            e.components.entry(f).or_default().insert(power, c);
        }
        Ok(e)
    }

    pub fn basis(m: &WPSModel, b: BasisElement) -> Self {
        StateSpaceElement::monomial(m, b.sector, b.power, Rational::ONE).expect("basis sector exists")
    }

    pub fn coefficient(&self, f: Rational, power: usize) -> PhasedScalar {
        self.components.get(&f).and_then(|c| c.get(&power)).cloned().unwrap_or_else(PhasedScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational, usize, &PhasedScalar)> {
        self.components.iter().flat_map(|(f, c)| c.iter().map(move |(t, v)| (*f, *t, v)))
    }

    pub fn add(&self, other: &StateSpaceElement) -> StateSpaceElement {
        let mut out = self.clone();
        for (f, t, v) in other.terms() {
            let slot = out.components.entry(f).or_default().entry(t).or_insert_with(PhasedScalar::zero);
            *slot += v.clone();
        }
        out.prune();
        out
    }

    pub fn scale(&self, c: &PhasedScalar) -> StateSpaceElement {
        let mut out = StateSpaceElement {
            components: self
                .components
                .iter()
                .map(|(f, cs)| (*f, cs.iter().map(|(t, v)| (*t, v * c)).collect()))
                .collect(),
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        for c in self.components.values_mut() {
            c.retain(|_, v| !v.is_zero());
        }
        self.components.retain(|_, c| !c.is_empty());
    }
}

/// `Σ_f ∫_{X_f} α_f · (ι*β)_f · w_f`, with `w_f = c_f H^{s_f}`.
fn twisted_pairing(
    m: &WPSModel,
    alpha: &StateSpaceElement,
    beta: &StateSpaceElement,
    weight: impl Fn(&Sector) -> (Rational, usize),
) -> PhasedScalar {
    let mut total = PhasedScalar::zero();
    for (f, t, a) in alpha.terms() {
        let s = m.sector(f).expect("element lives on sectors of the model");
        let (c, shift) = weight(&s);
        if c.is_zero() {
            continue;
        }
        let inv = s.inverse_label();
        for (g, u, b) in beta.terms() {
            if g != inv {
                continue;
            }
            let v = s.integrate_truncated(t + u + shift);
            if !v.is_zero() {
                total += (a * b).scale(v * c);
            }
        }
    }
    total
}

/// The Chen–Ruan Poincaré pairing `Σ_f ∫_{X_f} α_f ∪ (ι*β)_f`.
pub fn cr_pairing(m: &WPSModel, alpha: &StateSpaceElement, beta: &StateSpaceElement) -> PhasedScalar {
    twisted_pairing(m, alpha, beta, |_| (Rational::ONE, 0))
}

/// The pairing of `Z`: `Σ_f ∫_{X_f} α ∪ ι*β ∪ e(E_f)` on preimage classes.
pub fn ambient_pairing_z(m: &WPSModel, alpha: &StateSpaceElement, beta: &StateSpaceElement) -> PhasedScalar {
    twisted_pairing(m, alpha, beta, Sector::euler_class)
}

/// The compact-type pairing of `E^∨`: `Σ_f ∫_{X_f} α ∪ ι*(β ∪ e(E^∨_f))`,
/// where `e(E^∨_f) = (-1)^{rank E_f} e(E_f)`.
pub fn compact_type_pairing(m: &WPSModel, alpha: &StateSpaceElement, beta: &StateSpaceElement) -> PhasedScalar {
    twisted_pairing(m, alpha, beta, |s| {
        let (c, shift) = s.euler_class();
        let sign = if shift % 2 == 0 { Rational::ONE } else { -Rational::ONE };
        (c * sign, shift)
    })
}

/// `Δ̃(i_*α) = e^{πi age_f(E)}·j*α`, sector by sector.
pub fn delta_tilde(m: &WPSModel, gamma: &StateSpaceElement) -> StateSpaceElement {
    let mut out = StateSpaceElement::zero();
    for (f, t, c) in gamma.terms() {
        let s = m.sector(f).expect("element lives on sectors of the model");
        let phase = PhasedScalar::from_phase(Phase::new(s.age()));
        let term = StateSpaceElement::monomial(m, f, t, c * &phase).expect("sector exists");
        out = out.add(&term);
    }
    out
}

/// Gram matrix of a pairing on the reduced basis, required to be rational.
pub fn gram_matrix(
    m: &WPSModel,
    pairing: fn(&WPSModel, &StateSpaceElement, &StateSpaceElement) -> PhasedScalar,
) -> Matrix {
    let basis: Vec<_> = m.reduced_basis().into_iter().map(|b| StateSpaceElement::basis(m, b)).collect();
    basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| pairing(m, x, y).to_rational().expect("pairings of basis classes are rational"))
                .collect()
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub model: String,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl VerificationReport {
    fn new(m: &WPSModel) -> Self {
        VerificationReport { model: m.to_string(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }
}

/// Checks `⟨Δ̃γ1, Δ̃γ2⟩^Z = (-1)^r ⟨γ1, γ2⟩^{ct}` on all pairs of reduced
/// basis classes, together with the sector-level age-sum identity.
pub fn verify_pairing_comparison(m: &WPSModel) -> VerificationReport {
    let mut report = VerificationReport::new(m);
    for s in m.enumerate_sectors() {
        let lhs = s.age() + s.dual_age();
        let rhs = Rational::from((m.rank() - s.fixed_rank()) as i64);
        report.check(lhs == rhs, || format!("sector {}: age sum {lhs} ≠ {rhs}", s.f));
    }
    let sign = PhasedScalar::from_phase(Phase::minus_one().pow(m.rank() as i64));
    let basis: Vec<_> = m.reduced_basis();
    for &b1 in &basis {
        let g1 = StateSpaceElement::basis(m, b1);
        let d1 = delta_tilde(m, &g1);
        for &b2 in &basis {
            let g2 = StateSpaceElement::basis(m, b2);
            let d2 = delta_tilde(m, &g2);
            let lhs = ambient_pairing_z(m, &d1, &d2);
            let rhs = &sign * &compact_type_pairing(m, &g1, &g2);
            report.check(lhs == rhs, || {
                format!(
                    "<Dt(H^{}·1_{}), Dt(H^{}·1_{})>^Z = {lhs} but (-1)^r<.,.>^ct = {rhs}",
                    b1.power, b1.sector, b2.power, b2.sector
                )
            });
        }
    }
    report
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SectorDims {
    pub f: Rational,
    pub ring_dim: usize,
    pub image_dim: usize,
    pub ambient_dim: usize,
}

/// Per sector, the rank of `e(E_f)·` on `ℚ[H]/H^{m_f}` against the modelled
/// ambient dimension, and nondegeneracy of the ambient pairing.
pub fn verify_delta_iso_dims(m: &WPSModel) -> (VerificationReport, Vec<SectorDims>) {
    let mut report = VerificationReport::new(m);
    let mut dims = Vec::new();
    for s in m.enumerate_sectors() {
        let n = s.ring_dim();
        let (c, shift) = s.euler_class();
        let mut mult = linalg::zeros(n, n);
        for t in 0..n {
            if t + shift < n {
                mult[t + shift][t] = c;
            }
        }
        let image_dim = linalg::rank(&mult);
        report.check(image_dim == s.reduced_dim(), || {
            format!("sector {}: im e(E_f) has dim {image_dim}, expected {}", s.f, s.reduced_dim())
        });
        dims.push(SectorDims { f: s.f, ring_dim: n, image_dim, ambient_dim: s.reduced_dim() });
    }
    let gram = gram_matrix(m, ambient_pairing_z);
    let r = linalg::rank(&gram);
    report.check(r == gram.len(), || format!("ambient pairing has rank {r} on a {}-dim space", gram.len()));
    (report, dims)
}
