//! Truncated Novikov series, `z^{-1}`-Laurent coefficients, the fundamental
//! solution `L(z)` built from tables of two-pointed invariants, and the
//! operator identity `L^Z ∘ Δ̃ = Δ̃ ∘ L^{E^∨}|_{q^β ↦ e^{πiβ(det E)} q^β}`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{Phase, PhaseScale, PhasedScalar, Rational};
use crate::linalg::{self, Matrix};
use crate::wps::{ambient_pairing_z, compact_type_pairing, gram_matrix, BasisElement, WPSModel};

/// An effective class, recorded by its values on a generating set of line
/// bundles: the ordering functional `β(L_θ)`, `β(det E)`, and any others.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct EffClass {
    pub theta: Rational,
    #[serde(rename = "detE")]
    pub det_e: Rational,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<Rational>,
}

impl EffClass {
    pub fn zero() -> Self {
        EffClass { theta: Rational::ZERO, det_e: Rational::ZERO, extra: Vec::new() }
    }

    pub fn new(theta: Rational, det_e: Rational) -> Self {
        EffClass { theta, det_e, extra: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_zero() && self.det_e.is_zero() && self.extra.iter().all(|x| x.is_zero())
    }

    /// The ordering functional is nonnegative and vanishes only on `β = 0`.
    pub fn validate(&self) -> Result<()> {
        if self.theta.is_negative() || (self.theta.is_zero() && !self.is_zero()) {
            return Err(Error::InconsistentTable(format!(
                "class {self} is not effective: β(L_θ) = {} must be positive for β ≠ 0",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &EffClass) -> EffClass {
        let n = self.extra.len().max(other.extra.len());
        let get = |v: &[Rational], i: usize| v.get(i).copied().unwrap_or(Rational::ZERO);
        EffClass {
            theta: self.theta + other.theta,
            det_e: self.det_e + other.det_e,
            extra: (0..n).map(|i| get(&self.extra, i) + get(&other.extra, i)).collect(),
        }
    }

    /// `e^{πi β(det E)}`.
    pub fn det_phase(&self) -> Phase {
        Phase::new(self.det_e)
    }
}

impl fmt::Display for EffClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={}, detE={}", self.theta, self.det_e)?;
        for x in &self.extra {
            write!(f, ", {x}")?;
        }
        write!(f, ")")
    }
}

/// Coefficient rings for Novikov series.
pub trait Coefficient: Clone + PartialEq + PhaseScale {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Coefficient for PhasedScalar {
    fn zero() -> Self {
        PhasedScalar::zero()
    }
    fn is_zero(&self) -> bool {
        PhasedScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// A finite Laurent polynomial in `z`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ZLaurent {
    coeffs: BTreeMap<i64, PhasedScalar>,
}

impl ZLaurent {
    pub fn one() -> Self {
        ZLaurent::monomial(0, PhasedScalar::one())
    }

    pub fn monomial(z_power: i64, c: PhasedScalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(z_power, c);
        }
        ZLaurent { coeffs }
    }

    pub fn coefficient(&self, z_power: i64) -> PhasedScalar {
        self.coeffs.get(&z_power).cloned().unwrap_or_else(PhasedScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &PhasedScalar)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    fn from_map(mut coeffs: BTreeMap<i64, PhasedScalar>) -> Self {
        coeffs.retain(|_, v| !v.is_zero());
        ZLaurent { coeffs }
    }
}

impl PhaseScale for ZLaurent {
    fn scale_phase(&self, p: Phase) -> Self {
        ZLaurent::from_map(self.coeffs.iter().map(|(k, v)| (*k, v.scale_phase(p))).collect())
    }
}

impl Coefficient for ZLaurent {
    fn zero() -> Self {
        ZLaurent::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            *out.entry(*k).or_insert_with(PhasedScalar::zero) += v.clone();
        }
        ZLaurent::from_map(out)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, PhasedScalar> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                *out.entry(i + j).or_insert_with(PhasedScalar::zero) += a * b;
            }
        }
        ZLaurent::from_map(out)
    }
}

impl fmt::Display for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(k, v)| format!("({v})z^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_β c_β q^β`, keeping only classes with `β(L_θ) ≤ order`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NovikovSeries<C> {
    order: Rational,
    terms: BTreeMap<EffClass, C>,
}

impl<C: Coefficient> NovikovSeries<C> {
    pub fn zero(order: Rational) -> Self {
        NovikovSeries { order, terms: BTreeMap::new() }
    }

    pub fn monomial(beta: EffClass, c: C, order: Rational) -> Self {
        let mut s = NovikovSeries::zero(order);
        s.add_term(beta, c);
        s
    }

    pub fn constant(c: C, order: Rational) -> Self {
        NovikovSeries::monomial(EffClass::zero(), c, order)
    }

    pub fn order(&self) -> Rational {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EffClass, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, beta: &EffClass) -> C {
        self.terms.get(beta).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c q^β`, dropping it when `β` lies beyond the truncation order.
    pub fn add_term(&mut self, beta: EffClass, c: C) {
        if beta.theta > self.order || c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&beta) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = NovikovSeries { order: self.order.min(other.order), terms: BTreeMap::new() };
        for (b, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = NovikovSeries::zero(self.order.min(other.order));
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                out.add_term(b1.add(b2), c1.mul(c2));
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = NovikovSeries::zero(self.order);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c));
        }
        out
    }

    /// `q^β ↦ e^{πi β(det E)} q^β`.
    pub fn change_novikov(&self) -> Self {
        let mut out = NovikovSeries::zero(self.order);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c.scale_phase(b.det_phase()));
        }
        out
    }
}

/// [`NovikovSeries::change_novikov`] as a free function.
pub fn change_novikov<C: Coefficient>(s: &NovikovSeries<C>) -> NovikovSeries<C> {
    s.change_novikov()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct KernelTerm {
    pub psi_power: u32,
    pub sign: i8,
    pub z_power: i64,
}

/// `1/(-z-ψ) = Σ_k (-1)^{k+1} ψ^k z^{-k-1}` for `k ≤ a_max`.
pub fn expand_psi_kernel(a_max: u32) -> Vec<KernelTerm> {
    (0..=a_max)
        .map(|k| KernelTerm { psi_power: k, sign: if k % 2 == 0 { -1 } else { 1 }, z_power: -(k as i64) - 1 })
        .collect()
}

/// `⟨T_row ψ^{psi_power}, T_col⟩_{0,β} = value`, with the sectors of the two
/// insertions recorded for consistency checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub beta: EffClass,
    pub sectors: [Rational; 2],
    pub psi_power: u32,
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantTable {
    pub entries: Vec<TableEntry>,
}

impl InvariantTable {
    pub fn new(entries: Vec<TableEntry>) -> Self {
        InvariantTable { entries }
    }

    /// Indices in range, insertion sectors matching the basis, and every
    /// class effective.
    pub fn check_against(&self, basis: &[BasisElement]) -> Result<()> {
        for (n, e) in self.entries.iter().enumerate() {
            e.beta.validate().map_err(|err| Error::InconsistentTable(format!("entry {n}: {err}")))?;
            for (slot, idx) in [("row", e.row), ("col", e.col)] {
                if idx >= basis.len() {
                    return Err(Error::InconsistentTable(format!(
                        "entry {n}: {slot} {idx} outside a basis of size {}",
                        basis.len()
                    )));
                }
            }
            for (slot, idx, f) in [(0, e.row, e.sectors[0]), (1, e.col, e.sectors[1])] {
                if basis[idx].sector != f {
                    return Err(Error::InconsistentTable(format!(
                        "entry {n}: sectors[{slot}] = {f} but basis element {idx} lies in sector {}",
                        basis[idx].sector
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `L(z)` as a matrix: `entries[j][b]` is the coefficient of `T_j` in
/// `L(z)(T_b)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LOperator {
    pub entries: Vec<Vec<NovikovSeries<ZLaurent>>>,
}

impl LOperator {
    pub fn identity(dim: usize, order: Rational) -> Self {
        let entries = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|b| {
                        if j == b {
                            NovikovSeries::constant(ZLaurent::one(), order)
                        } else {
                            NovikovSeries::zero(order)
                        }
                    })
                    .collect()
            })
            .collect();
        LOperator { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// The `β = 0`, `z^0` part.
    pub fn leading_term(&self) -> Vec<Vec<PhasedScalar>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|s| s.coefficient(&EffClass::zero()).coefficient(0)).collect())
            .collect()
    }

    pub fn change_novikov(&self) -> Self {
        LOperator { entries: self.entries.iter().map(|r| r.iter().map(|s| s.change_novikov()).collect()).collect() }
    }

    /// `L ∘ diag(phases)`.
    pub fn then_diag(&self, phases: &[Phase]) -> Self {
        LOperator {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().zip(phases).map(|(s, p)| s.map(|c| c.scale_phase(*p))).collect())
                .collect(),
        }
    }

    /// `diag(phases) ∘ L`.
    pub fn diag_then(&self, phases: &[Phase]) -> Self {
        LOperator {
            entries: self
                .entries
                .iter()
                .zip(phases)
                .map(|(r, p)| r.iter().map(|s| s.map(|c| c.scale_phase(*p))).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|j| (0..j).all(|b| self.entries[j][b] == self.entries[b][j]))
    }
}

/// One table entry with a possibly phased value.
#[derive(Clone, Debug)]
pub struct RawEntry {
    pub beta: EffClass,
    pub psi_power: u32,
    pub row: usize,
    pub col: usize,
    pub value: PhasedScalar,
}

impl From<&TableEntry> for RawEntry {
    fn from(e: &TableEntry) -> Self {
        RawEntry {
            beta: e.beta.clone(),
            psi_power: e.psi_power,
            row: e.row,
            col: e.col,
            value: PhasedScalar::from_rational(e.value),
        }
    }
}

/// `L(T_b) = T_b + Σ q^β (-1)^{a+1} z^{-a-1} ⟨T_b ψ^a, T_i⟩_β T^i`, with the
/// dual basis `T^i = Σ_j (G^{-1})_{ji} T_j`. Entries with `β(L_θ) > order`
/// or `ψ`-power above `psi_max` are dropped.
pub fn build_l_raw(entries: &[RawEntry], pairing: &Matrix, order: Rational, psi_max: u32) -> Result<LOperator> {
    let dim = pairing.len();
    let ginv = linalg::inverse(pairing)
        .ok_or_else(|| Error::DegeneratePairing(format!("{dim}x{dim} pairing matrix is singular")))?;
    let kernel = expand_psi_kernel(psi_max);
    let mut l = LOperator::identity(dim, order);
    for e in entries {
        if e.row >= dim || e.col >= dim {
            return Err(Error::InconsistentTable(format!(
                "entry ({}, {}) outside a {dim}-dim state space",
                e.row, e.col
            )));
        }
        let Some(k) = kernel.get(e.psi_power as usize) else { continue };
        let signed = e.value.scale(Rational::from(k.sign as i64));
        for (j, ginv_row) in ginv.iter().enumerate() {
            let g = ginv_row[e.col];
            if g.is_zero() {
                continue;
            }
            l.entries[j][e.row].add_term(e.beta.clone(), ZLaurent::monomial(k.z_power, signed.scale(g)));
        }
    }
    Ok(l)
}

pub fn build_l(table: &InvariantTable, pairing: &Matrix, order: Rational, psi_max: u32) -> Result<LOperator> {
    let raw: Vec<RawEntry> = table.entries.iter().map(RawEntry::from).collect();
    build_l_raw(&raw, pairing, order, psi_max)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OperatorViolation {
    pub beta: EffClass,
    pub z_power: i64,
    pub row: usize,
    pub col: usize,
    pub lhs: PhasedScalar,
    pub rhs: PhasedScalar,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QsdReport {
    pub model: String,
    pub dim: usize,
    pub entries: usize,
    pub compared_coefficients: usize,
    pub first_violation: Option<OperatorViolation>,
}

impl QsdReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Compares two operators coefficientwise, returning the number of compared
/// coefficients and the first difference.
pub fn compare_operators(lhs: &LOperator, rhs: &LOperator) -> (usize, Option<OperatorViolation>) {
    let mut count = 0;
    for j in 0..lhs.dim() {
        for b in 0..lhs.dim() {
            let (x, y) = (&lhs.entries[j][b], &rhs.entries[j][b]);
            let mut betas: Vec<&EffClass> = x.terms().map(|(k, _)| k).chain(y.terms().map(|(k, _)| k)).collect();
            betas.sort();
            betas.dedup();
            for beta in betas {
                let (cx, cy) = (x.coefficient(beta), y.coefficient(beta));
                let mut zs: Vec<i64> = cx.terms().map(|(k, _)| k).chain(cy.terms().map(|(k, _)| k)).collect();
                zs.sort();
                zs.dedup();
                for z in zs {
                    count += 1;
                    let (vx, vy) = (cx.coefficient(z), cy.coefficient(z));
                    if vx != vy {
                        return (
                            count,
                            Some(OperatorViolation {
                                beta: beta.clone(),
                                z_power: z,
                                row: j,
                                col: b,
                                lhs: vx,
                                rhs: vy,
                            }),
                        );
                    }
                }
            }
        }
    }
    (count, None)
}

/// Builds the table of `Z` from the table of `E^∨` by
/// `⟨Δ̃γ1 ψ^a, Δ̃γ2⟩^Z_β = e^{πi(β(det E) + rank E)} ⟨γ1 ψ^a, γ2⟩^{E^∨}_β`,
/// expressed in the untwisted basis `j*(H^t 1_f)`, then checks the operator
/// identity with both `L`-operators built from their own pairings.
pub fn verify_qsd_operator_identity(
    table_e: &InvariantTable,
    model: &WPSModel,
    order: Rational,
    psi_max: u32,
) -> Result<QsdReport> {
    let basis = model.reduced_basis();
    table_e.check_against(&basis)?;
    let phases: Vec<Phase> =
        basis.iter().map(|b| Phase::new(model.sector(b.sector).expect("basis sector exists").age())).collect();
    let g_ct = gram_matrix(model, compact_type_pairing);
    let g_z = gram_matrix(model, ambient_pairing_z);
    let rank = Rational::from(model.rank() as i64);

    let raw_e: Vec<RawEntry> = table_e.entries.iter().map(RawEntry::from).collect();
    let raw_z: Vec<RawEntry> = raw_e
        .iter()
        .map(|e| {
            let phase = Phase::new(e.beta.det_e + rank).mul(&phases[e.row].inverse()).mul(&phases[e.col].inverse());
            RawEntry { value: e.value.scale_phase(phase), ..e.clone() }
        })
        .collect();

    let l_e = build_l_raw(&raw_e, &g_ct, order, psi_max)?;
    let l_z = build_l_raw(&raw_z, &g_z, order, psi_max)?;
    let lhs = l_z.then_diag(&phases);
    let rhs = l_e.change_novikov().diag_then(&phases);
    let (compared, first_violation) = compare_operators(&lhs, &rhs);
    Ok(QsdReport {
        model: model.to_string(),
        dim: basis.len(),
        entries: table_e.entries.len(),
        compared_coefficients: compared,
        first_violation,
    })
}

/// A random table on the reduced basis of `model`: classes with
/// `β(L_θ) ∈ {1/2, 1, …, order}`, `β(det E) = β(L_θ)·deg(det E)/w` for a
/// random weight `w`, small rational values.
pub fn random_table<R: Rng>(model: &WPSModel, rng: &mut R, order: u32, psi_max: u32, entries: usize) -> InvariantTable {
    let basis = model.reduced_basis();
    if basis.is_empty() || order == 0 {
        return InvariantTable::default();
    }
    let det = model.det_degree() as i128;
    let out = (0..entries)
        .map(|_| {
            let theta = Rational::new(rng.gen_range(1..=2 * order as i128), 2);
            let w = model.weights()[rng.gen_range(0..model.weights().len())] as i128;
            let row = rng.gen_range(0..basis.len());
            let col = rng.gen_range(0..basis.len());
            TableEntry {
                beta: EffClass::new(theta, theta * Rational::new(det, w)),
                sectors: [basis[row].sector, basis[col].sector],
                psi_power: rng.gen_range(0..=psi_max),
                row,
                col,
                value: Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
            }
        })
        .collect();
    InvariantTable::new(out)
}
