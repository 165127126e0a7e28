//! Exhaustive and seeded-random verification suites over bounded families of
//! components, chains, bundles, sector actions and weighted projective
//! models.
//!
//! Every suite returns a [`SuiteReport`]. Work fans out over a rayon pool
//! whose size is capped by `ORBICURVE_WORKERS`; partial reports are merged
//! in input order so results do not depend on scheduling.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::{ChainBundle, EqLineBundle, TwistSign};
use crate::cohomology::{
    h0_component, h1_component, h1_negative_monomials, h1_serre, h_chain, riemann_roch_check, PieceCache,
};
use crate::convexity::{log_canonical_certificate, ConvexityVerdict, SummandProfile};
use crate::error::{Error, Result};
use crate::foundation::{gcd, Rational};
use crate::novikov::{random_table, verify_qsd_operator_identity};
use crate::sector::{rank_formula, sign_consistency, SectorAction};
use crate::twisted_curve::{CurveChain, MarkedPoint, TwistedComponent};
use crate::wps::{verify_delta_iso_dims, verify_pairing_comparison, WPSModel};

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records one case.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(describe);
        }
    }

    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(describe());
        }
    }

    /// Merges a later partial report into this one.
    pub fn absorb(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} cases, {} failures)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures
        )?;
        if let Some(c) = &self.first_counterexample {
            write!(f, "; first counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Worker count from `ORBICURVE_WORKERS`, defaulting to rayon's choice.
pub fn worker_count() -> Option<usize> {
    std::env::var("ORBICURVE_WORKERS").ok().and_then(|s| s.trim().parse().ok()).filter(|&n| n > 0)
}

/// Maps `f` over `items` in parallel and merges the partial reports in order.
fn fan_out<T: Sync>(name: &str, items: &[T], f: impl Fn(&T) -> SuiteReport + Sync + Send) -> SuiteReport {
    let run = || items.par_iter().map(&f).collect::<Vec<_>>();
    let parts = match worker_count().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(run),
        None => run(),
    };
    let mut report = SuiteReport::new(name);
    for p in parts {
        report.absorb(p);
    }
    report
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// Every valid component with `a, b ≤ max_ab` and `l1·l2 ≤ max_l`.
pub fn component_family(max_ab: u64, max_l: u64) -> Vec<TwistedComponent> {
    let mut out = Vec::new();
    for a in 1..=max_ab {
        for b in 1..=max_ab {
            if gcd(a, b) != 1 {
                continue;
            }
            for l1 in 1..=max_l {
                for l2 in 1..=max_l / l1 {
                    if let Ok(c) = TwistedComponent::new(a, b, l1, l2) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// Every line bundle `O^{k1,k2}(d)` on `comp` with `d_min ≤ d ≤ d_max`.
pub fn piece_family(comp: TwistedComponent, d_min: i64, d_max: i64) -> Vec<EqLineBundle> {
    let mut out = Vec::new();
    for k1 in 0..comp.l1() as i64 {
        for k2 in 0..comp.l2() as i64 {
            for d in d_min..=d_max {
                out.push(EqLineBundle::new(comp, k1, k2, d));
            }
        }
    }
    out
}

/// Every chain of length `≤ max_len` whose nodes have matching isotropy.
pub fn chain_family(comps: &[TwistedComponent], max_len: usize) -> Vec<CurveChain> {
    chain_family_from(comps, comps, max_len)
}

/// Calls `f` on the pieces of every balanced chain bundle on `chain` whose
/// pieces have `d_min ≤ d ≤ d_max`.
pub fn for_each_piece_tuple(chain: &CurveChain, d_min: i64, d_max: i64, mut f: impl FnMut(&[EqLineBundle])) {
    let families: Vec<Vec<EqLineBundle>> = chain.components().iter().map(|&c| piece_family(c, d_min, d_max)).collect();
    let mut stack: Vec<EqLineBundle> = Vec::with_capacity(chain.len());
    fn go(families: &[Vec<EqLineBundle>], stack: &mut Vec<EqLineBundle>, f: &mut dyn FnMut(&[EqLineBundle])) {
        let j = stack.len();
        if j == families.len() {
            f(stack);
            return;
        }
        for p in &families[j] {
            if let Some(prev) = stack.last() {
                if !(prev.age_at(MarkedPoint::X2) + p.age_at(MarkedPoint::X1)).is_integer() {
                    continue;
                }
            }
            stack.push(*p);
            go(families, stack, f);
            stack.pop();
        }
    }
    go(&families, &mut stack, &mut f);
}

/// Calls `f` on every balanced chain bundle on `chain` whose pieces have
/// `d_min ≤ d ≤ d_max`.
pub fn for_each_chain_bundle(chain: &CurveChain, d_min: i64, d_max: i64, mut f: impl FnMut(ChainBundle)) {
    for_each_piece_tuple(chain, d_min, d_max, |pieces| {
        f(ChainBundle::new(chain.clone(), pieces.to_vec()).expect("balanced by construction"))
    });
}

// ---------------------------------------------------------------------------
// Component-level suites
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ComponentGrid {
    pub max_ab: u64,
    pub max_l: u64,
    pub d_min: i64,
    pub d_max: i64,
}

fn component_suite(
    name: &str,
    grid: ComponentGrid,
    check: impl Fn(&EqLineBundle) -> std::result::Result<(), String> + Sync + Send,
) -> SuiteReport {
    let comps = component_family(grid.max_ab, grid.max_l);
    fan_out(name, &comps, |&c| {
        let mut r = SuiteReport::new(name);
        for l in piece_family(c, grid.d_min, grid.d_max) {
            let outcome = check(&l);
            r.record(outcome.is_ok(), || format!("{l} on {c}: {}", outcome.unwrap_err()));
        }
        r
    })
}

/// `h¹ = 0` for every bundle of nonnegative degree parameter.
pub fn suite_h1_vanishing(grid: ComponentGrid) -> SuiteReport {
    component_suite("h1-vanishing", grid, |l| match h1_component(l) {
        Ok((0, _)) => Ok(()),
        Ok((n, _)) => Err(format!("h1 = {n}")),
        Err(e) => Err(e.to_string()),
    })
}

/// Negative-monomial `h¹` equals Serre-duality `h¹`.
pub fn suite_h1_two_path(grid: ComponentGrid) -> SuiteReport {
    component_suite("h1-two-path", grid, |l| {
        let (direct, _) = h1_negative_monomials(l);
        let serre = h1_serre(l);
        if direct == serre {
            Ok(())
        } else {
            Err(format!("negative monomials {direct}, Serre duality {serre}"))
        }
    })
}

/// `h⁰ - h¹ = deg + 1 - age_{x1} - age_{x2}` exactly.
pub fn suite_riemann_roch(grid: ComponentGrid) -> SuiteReport {
    component_suite("riemann-roch", grid, |l| {
        let h0 = h0_component(l).0 as i64;
        let h1 = h1_negative_monomials(l).0 as i64;
        let rr = riemann_roch_check(l);
        if Rational::from(h0 - h1) == rr {
            Ok(())
        } else {
            Err(format!("h0 - h1 = {} but Riemann-Roch gives {rr}", h0 - h1))
        }
    })
}

// ---------------------------------------------------------------------------
// Chain-level suites
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ChainGrid {
    pub max_ab: u64,
    pub max_l: u64,
    pub d_min: i64,
    pub d_max: i64,
    pub max_len: usize,
}

fn describe_pieces(pieces: &[EqLineBundle]) -> String {
    let parts: Vec<String> = pieces.iter().map(|p| format!("{p} on {}", p.comp())).collect();
    format!("[{}]", parts.join(", "))
}

fn describe_bundle(b: &ChainBundle) -> String {
    describe_pieces(b.pieces())
}

/// Distinct summand profiles on one chain, with a representative and the
/// number of bundles sharing each profile.
struct ProfileClasses {
    classes: Vec<(SummandProfile, ChainBundle, u64)>,
}

impl ProfileClasses {
    fn collect(
        chain: &CurveChain,
        d_min: i64,
        d_max: i64,
        report: &mut SuiteReport,
        per_bundle: impl Fn(&[EqLineBundle], &SummandProfile, &mut SuiteReport),
    ) -> Self {
        let mut cache = PieceCache::new();
        let mut index: HashMap<SummandProfile, usize> = HashMap::new();
        let mut classes: Vec<(SummandProfile, ChainBundle, u64)> = Vec::new();
        for_each_piece_tuple(chain, d_min, d_max, |pieces| match SummandProfile::of_pieces(pieces, &mut cache) {
            Ok(p) => {
                per_bundle(pieces, &p, report);
                match index.get(&p) {
                    Some(&i) => classes[i].2 += 1,
                    None => {
                        index.insert(p.clone(), classes.len());
                        let rep = ChainBundle::new(chain.clone(), pieces.to_vec()).expect("balanced by construction");
                        classes.push((p, rep, 1));
                    }
                }
            }
            Err(e) => report.record(false, || format!("{}: {e}", describe_pieces(pieces))),
        });
        ProfileClasses { classes }
    }

    /// Calls `f` on every unordered pair of profile classes (with
    /// repetition), passing the number of bundle pairs it stands for.
    fn for_each_pair(
        &self,
        mut f: impl FnMut(&(SummandProfile, ChainBundle, u64), &(SummandProfile, ChainBundle, u64), u64),
    ) {
        for i in 0..self.classes.len() {
            for j in i..self.classes.len() {
                let (ni, nj) = (self.classes[i].2, self.classes[j].2);
                let pairs = if i == j { ni * (ni + 1) / 2 } else { ni * nj };
                f(&self.classes[i], &self.classes[j], pairs);
            }
        }
    }
}

fn record_many(report: &mut SuiteReport, n: u64, ok: bool, describe: impl FnOnce() -> String) {
    report.cases += n;
    if !ok {
        report.failures += n;
        if report.first_counterexample.is_none() {
            report.first_counterexample = Some(describe());
        }
    }
}

/// Weakly semi-positive split bundles of rank `≤ 2` are weakly convex.
///
/// Rank-2 cases are decided from the profiles of their summands, since
/// cohomology of a direct sum is the sum of the summands' cohomology.
pub fn suite_weak_convexity(grid: ChainGrid) -> SuiteReport {
    let name = "thm-weak-convexity";
    let chains = chain_family(&component_family(grid.max_ab, grid.max_l), grid.max_len);
    fan_out(name, &chains, |chain| {
        let mut r = SuiteReport::new(name);
        let classes = ProfileClasses::collect(chain, grid.d_min, grid.d_max, &mut r, |b, p, r| {
            let v = ConvexityVerdict::from_profiles(std::slice::from_ref(p));
            r.record(!v.weakly_semipositive || v.weakly_convex, || {
                format!("{} is weakly semi-positive but h1(L(-x2)) = {}", describe_pieces(b), p.h1_minus_x2)
            });
        });
        classes.for_each_pair(|(p, b, _), (q, c, _), n| {
            let v = ConvexityVerdict::from_profiles(&[p.clone(), q.clone()]);
            record_many(&mut r, n, !v.weakly_semipositive || v.weakly_convex, || {
                format!("{} + {} is weakly semi-positive but not weakly convex", describe_bundle(b), describe_bundle(c))
            });
        });
        r
    })
}

/// Weak convexity of `E` is equivalent to weak concavity of `E^∨`, summand by
/// summand and for rank-2 sums.
pub fn suite_weak_concavity(grid: ChainGrid) -> SuiteReport {
    let name = "thm-weak-concavity";
    let chains = chain_family(&component_family(grid.max_ab, grid.max_l), grid.max_len);
    fan_out(name, &chains, |chain| {
        let mut r = SuiteReport::new(name);
        let classes = ProfileClasses::collect(chain, grid.d_min, grid.d_max, &mut r, |b, p, r| {
            r.record(p.h0_dual_minus_x1 == p.h1_minus_x2, || {
                format!(
                    "{}: h0(L^v(-x1)) = {} but h1(L(-x2)) = {}",
                    describe_pieces(b),
                    p.h0_dual_minus_x1,
                    p.h1_minus_x2
                )
            });
        });
        classes.for_each_pair(|(p, b, _), (q, c, _), n| {
            let v = ConvexityVerdict::from_profiles(&[p.clone(), q.clone()]);
            record_many(&mut r, n, v.weakly_convex == v.weakly_concave_dual, || {
                format!(
                    "{} + {}: convex {} but dual concave {}",
                    describe_bundle(b),
                    describe_bundle(c),
                    v.weakly_convex,
                    v.weakly_concave_dual
                )
            });
        });
        r
    })
}

/// The log-canonical certificate on every chain of the family.
pub fn suite_log_canonical(max_ab: u64, max_l: u64, max_len: usize) -> SuiteReport {
    let name = "log-canonical";
    let comps = component_family(max_ab, max_l);
    fan_out(name, &comps, |&first| {
        let mut r = SuiteReport::new(name);
        let starts = [first];
        for chain in chain_family_from(&starts, &comps, max_len) {
            let out = log_canonical_certificate(&chain);
            r.record(out.is_ok(), || format!("{chain:?}: {}", out.unwrap_err()));
        }
        r
    })
}

/// Chains of length `≤ max_len` starting with one of `starts`.
pub fn chain_family_from(starts: &[TwistedComponent], comps: &[TwistedComponent], max_len: usize) -> Vec<CurveChain> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<TwistedComponent>> = starts.iter().map(|&c| vec![c]).collect();
    for len in 1..=max_len {
        out.extend(layer.iter().map(|cs| CurveChain::with_unit_degrees(cs.clone()).expect("matched nodes")));
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for cs in &layer {
            let order = cs.last().expect("nonempty").isotropy_order(MarkedPoint::X2);
            next.extend(comps.iter().filter(|c| c.isotropy_order(MarkedPoint::X1) == order).map(|&c| {
                let mut ext = cs.clone();
                ext.push(c);
                ext
            }));
        }
        layer = next;
    }
    out
}

/// Per-summand data for the rank formula on a single component.
struct RankPiece {
    bundle: EqLineBundle,
    convex: bool,
    h1_dual_minus_x1: usize,
    age_x1: Rational,
    age_x2: Rational,
}

/// On every weakly convex split bundle of rank `≤ 2` on a single component,
/// the rank formula equals `Σ h¹(L_i^∨(-x1))` and is a nonnegative integer;
/// the sign-consistency identity holds on the same data.
pub fn suite_rank_formula(grid: ComponentGrid) -> SuiteReport {
    let name = "rank-formula";
    let comps = component_family(grid.max_ab, grid.max_l);
    fan_out(name, &comps, |&c| {
        let mut r = SuiteReport::new(name);
        let mut pieces = Vec::new();
        for l in piece_family(c, grid.d_min, grid.d_max) {
            let b = ChainBundle::on_component(l);
            let convex = h_chain(&b.twist_marked(MarkedPoint::X2, TwistSign::Minus));
            let dual = h_chain(&b.dual().twist_marked(MarkedPoint::X1, TwistSign::Minus));
            match (convex, dual) {
                (Ok(cv), Ok(du)) => pieces.push(RankPiece {
                    bundle: l,
                    convex: cv.h1 == 0,
                    h1_dual_minus_x1: du.h1,
                    age_x1: l.age_at(MarkedPoint::X1),
                    age_x2: l.age_at(MarkedPoint::X2),
                }),
                (Err(e), _) | (_, Err(e)) => r.record(false, || format!("{l} on {c}: {e}")),
            }
        }
        let convex: Vec<&RankPiece> = pieces.iter().filter(|p| p.convex).collect();
        let mut check = |summands: &[&RankPiece]| {
            let beta = summands.iter().map(|p| p.bundle.degree()).sum::<Rational>();
            let g1 = SectorAction::new(summands.iter().map(|p| p.age_x1).collect()).expect("ages lie in [0,1)");
            let g2 = SectorAction::new(summands.iter().map(|p| p.age_x2).collect()).expect("ages lie in [0,1)");
            let direct: usize = summands.iter().map(|p| p.h1_dual_minus_x1).sum();
            let describe = || {
                let names: Vec<String> = summands.iter().map(|p| p.bundle.to_string()).collect();
                format!("{} on {c}", names.join(" + "))
            };
            match rank_formula(beta, &g1, &g2) {
                Ok(v) => r.record(v == Rational::from(direct as i64) && !v.is_negative() && v.is_integer(), || {
                    format!("{}: rank formula {v}, direct count {direct}", describe())
                }),
                Err(e) => r.record(false, || format!("{}: {e}", describe())),
            }
            match sign_consistency(beta, &g1, &g2) {
                Ok((lhs, rhs)) => r.record(lhs == rhs, || format!("{}: sign consistency {lhs} vs {rhs}", describe())),
                Err(e) => r.record(false, || format!("{}: {e}", describe())),
            }
        };
        for (i, p) in convex.iter().enumerate() {
            check(&[p]);
            for q in &convex[i..] {
                check(&[p, q]);
            }
        }
        r
    })
}

// ---------------------------------------------------------------------------
// Sector, state-space and operator suites
// ---------------------------------------------------------------------------

fn random_action(rng: &mut ChaCha8Rng, max_rank: usize, max_den: i128) -> SectorAction {
    let rank = rng.gen_range(0..=max_rank);
    let weights = (0..rank)
        .map(|_| {
            let den = rng.gen_range(1..=max_den);
            Rational::new(rng.gen_range(0..den), den)
        })
        .collect();
    SectorAction::new(weights).expect("weights lie in [0,1)")
}

/// Age-sum identity on random actions, and the sign-consistency identity on
/// random data whose rank formula is a nonnegative integer.
pub fn suite_age_sum_sign(seed: u64, trials: usize, max_den: i128) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = SuiteReport::new("age-sum-sign");
    for _ in 0..trials {
        let g1 = random_action(&mut rng, 6, max_den);
        let (lhs, rhs) = g1.age_sum_check();
        r.record(lhs == rhs, || format!("{g1}: age sum {lhs} vs {rhs}"));

        let g2 = SectorAction::new(
            (0..g1.rank())
                .map(|_| {
                    let den = rng.gen_range(1..=max_den);
                    Rational::new(rng.gen_range(0..den), den)
                })
                .collect(),
        )
        .expect("weights lie in [0,1)");
        let n = Rational::from(rng.gen_range(0..=6i64));
        let beta = n + g1.age() - g2.inverse_sector().age();
        match sign_consistency(beta, &g1, &g2) {
            Ok((lhs, rhs)) => {
                let realizable = rank_formula(beta, &g1, &g2).map(|v| v == n).unwrap_or(false);
                r.record(lhs == rhs && realizable, || format!("beta {beta}, g1 {g1}, g2 {g2}: {lhs} vs {rhs}"))
            }
            Err(e) => r.record(false, || format!("beta {beta}, g1 {g1}, g2 {g2}: {e}")),
        }
    }
    r
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct WpsGrid {
    pub max_n: usize,
    pub max_weight: u64,
    pub max_rank: usize,
    pub max_k: u64,
}

fn multisets(max_len: usize, min_len: usize, max_value: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn go(cur: &mut Vec<u64>, lo: u64, max_value: u64, max_len: usize, min_len: usize, out: &mut Vec<Vec<u64>>) {
        if cur.len() >= min_len {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for v in lo..=max_value {
            cur.push(v);
            go(cur, v, max_value, max_len, min_len, out);
            cur.pop();
        }
    }
    go(&mut Vec::new(), 1, max_value, max_len, min_len, &mut out);
    out
}

/// Every model with `2 ≤ n ≤ max_n` weights up to `max_weight` and up to
/// `max_rank` bundle degrees up to `max_k`, weights and degrees as sorted
/// multisets.
pub fn wps_family(grid: WpsGrid) -> Vec<WPSModel> {
    let weights = multisets(grid.max_n, 2, grid.max_weight);
    let bundles = multisets(grid.max_rank, 0, grid.max_k);
    weights
        .iter()
        .flat_map(|w| bundles.iter().map(move |k| WPSModel::new(w.clone(), k.clone()).expect("valid grid model")))
        .collect()
}

pub fn suite_pairing_comparison(grid: WpsGrid) -> SuiteReport {
    let name = "pairing-comparison";
    let models = wps_family(grid);
    fan_out(name, &models, |m| {
        let mut r = SuiteReport::new(name);
        let pc = verify_pairing_comparison(m);
        r.record(pc.passed(), || format!("{m}: {}", pc.violations.join("; ")));
        let (iso, _) = verify_delta_iso_dims(m);
        r.record(iso.passed(), || format!("{m}: {}", iso.violations.join("; ")));
        r
    })
}

/// Seeded random tables on models of the pairing family whose reduced state
/// space has dimension between 1 and `max_dim`, always including
/// `ℙ(1,1,2,2)` with `O(1)`.
pub fn suite_qsd_operator(seed: u64, trials: usize, max_order: u32, max_dim: usize) -> SuiteReport {
    let name = "qsd-operator";
    let mut models: Vec<WPSModel> = wps_family(WpsGrid { max_n: 5, max_weight: 4, max_rank: 2, max_k: 4 })
        .into_iter()
        .filter(|m| m.rank() > 0 && (1..=max_dim).contains(&m.reduced_basis().len()))
        .collect();
    let featured = WPSModel::new(vec![1, 1, 2, 2], vec![1]).expect("valid model");
    if let Some(pos) = models.iter().position(|m| *m == featured) {
        models.swap(0, pos);
    }
    let jobs: Vec<(usize, u64)> = (0..trials).map(|t| (t, seed.wrapping_add(t as u64))).collect();
    fan_out(name, &jobs, |&(t, s)| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let model = if t % 4 == 0 { &models[0] } else { &models[rng.gen_range(0..models.len())] };
        let order = rng.gen_range(1..=max_order);
        let psi_max = rng.gen_range(0..=3);
        let n_entries = rng.gen_range(0..=12);
        let table = random_table(model, &mut rng, order, psi_max, n_entries);
        let mut r = SuiteReport::new(name);
        match verify_qsd_operator_identity(&table, model, Rational::from(order as i64), psi_max) {
            Ok(rep) => r.record(rep.passed(), || format!("{model}, seed {s}: {:?}", rep.first_violation)),
            Err(e) => r.record(false, || format!("{model}, seed {s}: {e}")),
        }
        r
    })
}

// ---------------------------------------------------------------------------
// Named suites with default bounds
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum SuiteName {
    H1Vanishing,
    H1TwoPath,
    RiemannRoch,
    WeakConvexity,
    WeakConcavity,
    LogCanonical,
    RankFormula,
    AgeSumSign,
    PairingComparison,
    QsdOperator,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        SuiteName::H1Vanishing,
        SuiteName::H1TwoPath,
        SuiteName::RiemannRoch,
        SuiteName::WeakConvexity,
        SuiteName::WeakConcavity,
        SuiteName::LogCanonical,
        SuiteName::RankFormula,
        SuiteName::AgeSumSign,
        SuiteName::PairingComparison,
        SuiteName::QsdOperator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::H1Vanishing => "h1-vanishing",
            SuiteName::H1TwoPath => "h1-two-path",
            SuiteName::RiemannRoch => "riemann-roch",
            SuiteName::WeakConvexity => "thm-weak-convexity",
            SuiteName::WeakConcavity => "thm-weak-concavity",
            SuiteName::LogCanonical => "log-canonical",
            SuiteName::RankFormula => "rank-formula",
            SuiteName::AgeSumSign => "age-sum-sign",
            SuiteName::PairingComparison => "pairing-comparison",
            SuiteName::QsdOperator => "qsd-operator",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = SuiteName::ALL.iter().map(|n| n.as_str()).collect();
            Error::InvalidModel(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Optional overrides of a suite's default bounds. `max_d` bounds `|d|`
/// (or `d` for suites restricted to nonnegative degrees); `max_a` bounds
/// both `a` and `b`, or the weights for the weighted projective suites.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SuiteOptions {
    pub max_a: Option<u64>,
    pub max_l: Option<u64>,
    pub max_d: Option<i64>,
    pub max_len: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub order: Option<u32>,
}

pub const DEFAULT_SEED: u64 = 20240601;

pub fn run_suite(name: SuiteName, o: SuiteOptions) -> SuiteReport {
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let comp_grid = |ab: u64, l: u64, d: i64, nonneg: bool| {
        let d = o.max_d.unwrap_or(d);
        ComponentGrid {
            max_ab: o.max_a.unwrap_or(ab),
            max_l: o.max_l.unwrap_or(l),
            d_min: if nonneg { 0 } else { -d },
            d_max: d,
        }
    };
    let chain_grid = |nonneg: bool| {
        let d = o.max_d.unwrap_or(8);
        ChainGrid {
            max_ab: o.max_a.unwrap_or(4),
            max_l: o.max_l.unwrap_or(4),
            d_min: if nonneg { 0 } else { -d },
            d_max: d,
            max_len: o.max_len.unwrap_or(3),
        }
    };
    match name {
        SuiteName::H1Vanishing => suite_h1_vanishing(comp_grid(6, 6, 12, true)),
        SuiteName::H1TwoPath => suite_h1_two_path(comp_grid(6, 6, 12, false)),
        SuiteName::RiemannRoch => suite_riemann_roch(comp_grid(6, 6, 12, false)),
        SuiteName::WeakConvexity => suite_weak_convexity(chain_grid(true)),
        SuiteName::WeakConcavity => suite_weak_concavity(chain_grid(false)),
        SuiteName::LogCanonical => {
            suite_log_canonical(o.max_a.unwrap_or(4), o.max_l.unwrap_or(4), o.max_len.unwrap_or(6))
        }
        SuiteName::RankFormula => suite_rank_formula(comp_grid(4, 4, 8, false)),
        SuiteName::AgeSumSign => suite_age_sum_sign(seed, o.trials.unwrap_or(10_000), 12),
        SuiteName::PairingComparison => suite_pairing_comparison(WpsGrid {
            max_n: o.max_len.unwrap_or(5),
            max_weight: o.max_a.unwrap_or(4),
            max_rank: 2,
            max_k: o.max_d.map(|d| d.max(1) as u64).unwrap_or(4),
        }),
        SuiteName::QsdOperator => suite_qsd_operator(seed, o.trials.unwrap_or(1000), o.order.unwrap_or(4), 6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let comps = component_family(2, 2);
        // (1,1),(1,2),(2,1) with (l1,l2) ∈ {(1,1),(2,1),(1,2)} where allowed.
        assert!(comps.contains(&TwistedComponent::projective_line()));
        assert!(comps.iter().all(|c| c.a() <= 2 && c.b() <= 2 && c.l() <= 2));
        let chains = chain_family(&[TwistedComponent::projective_line()], 3);
        assert_eq!(chains.len(), 3);
        assert_eq!(wps_family(WpsGrid { max_n: 2, max_weight: 2, max_rank: 1, max_k: 1 }).len(), 3 * 2);
    }

    #[test]
    fn chain_bundles_are_balanced() {
        let c = TwistedComponent::new(1, 2, 1, 1).unwrap();
        let d = TwistedComponent::new(2, 1, 1, 1).unwrap();
        let chain = CurveChain::with_unit_degrees(vec![c, d]).unwrap();
        let mut n = 0;
        for_each_chain_bundle(&chain, 0, 3, |b| {
            assert!((b.pieces()[0].age_at(MarkedPoint::X2) + b.pieces()[1].age_at(MarkedPoint::X1)).is_integer());
            n += 1;
        });
        // The two branch ages must both vanish or both equal 1/2.
        assert_eq!(n, 8);
    }

    #[test]
    fn small_suites_pass() {
        let g = ComponentGrid { max_ab: 3, max_l: 3, d_min: -4, d_max: 4 };
        for r in [suite_h1_two_path(g), suite_riemann_roch(g), suite_rank_formula(g)] {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0);
        }
        let cg = ChainGrid { max_ab: 2, max_l: 2, d_min: -2, d_max: 2, max_len: 2 };
        assert!(suite_weak_concavity(cg).passed());
        assert!(suite_weak_convexity(ChainGrid { d_min: 0, ..cg }).passed());
        assert!(suite_log_canonical(2, 2, 3).passed());
        assert!(suite_age_sum_sign(1, 200, 12).passed());
        assert!(suite_qsd_operator(3, 10, 2, 6).passed());
    }

    #[test]
    fn reports_merge_in_order() {
        let mut a = SuiteReport::new("x");
        a.record(true, || unreachable!());
        let mut b = SuiteReport::new("x");
        b.record(false, || "first".into());
        let mut c = SuiteReport::new("x");
        c.record(false, || "second".into());
        a.absorb(b);
        a.absorb(c);
        assert_eq!((a.cases, a.failures), (3, 2));
        assert_eq!(a.first_counterexample.as_deref(), Some("first"));
    }

    #[test]
    fn suite_names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert!("nope".parse::<SuiteName>().is_err());
    }
}
