//! Invariant suite run over a corpus of posets, and the report it produces.
//!
//! Every check is recorded as a named verdict on a case record. A case is a
//! poset, a `(poset, matching)` pair, a `(poset, automorphism)` pair, or a
//! full `(poset, matching, automorphism)` triple.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{enumerate_matchings, mobius_matrix_oracle, Manifest};
use crate::matching::{enumerate_special_matchings, find_special_matching, is_special, verify_lifting, Matching};
use crate::poset::{automorphisms, Poset, PosetJson};
use crate::zircon::{
    component_extrema, definitions_agree, fixed_point_matching, fixed_point_subposet,
    greedy_descend_with_order, is_zircon, matching_family, orbit_components, Direction,
};

pub const THEOREM: &str = "theorem_fixed_point_matching";
pub const COROLLARY: &str = "corollary_fixed_point_zircon";
pub const LIFTING: &str = "lifting_property";
pub const DEFINITIONS: &str = "definitions_agree";
pub const SPHERICITY: &str = "mobius_sphericity";
pub const ENUMERATION_ORACLE: &str = "special_enumeration_oracle";
pub const MOBIUS_ORACLE: &str = "mobius_oracle";
pub const FAMILY_SPECIAL: &str = "family_members_special";
pub const EXTREMA_UNIQUE: &str = "component_extrema_unique";
pub const GREEDY_ENDPOINT: &str = "greedy_endpoint_independent";
pub const FIXED_EXTREMAL: &str = "fixed_points_extremal";
pub const MIN_MAX_FIXED: &str = "min_fixed_iff_max_fixed";
pub const IDEAL_UNIQUE_MIN: &str = "zircon_ideal_unique_minimum";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub cap_matchings: usize,
    /// Seeded shuffles of the matching order per greedy-descent check.
    pub shuffles: usize,
    /// Run the brute-force oracle comparisons.
    pub oracles: bool,
    /// Skip triples whose automorphism is the identity.
    pub skip_identity: bool,
    /// Also run the suite on every interval `[x, y]` of each poset that has a
    /// special matching and a non-trivial automorphism.
    pub intervals: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            cap_matchings: crate::matching::DEFAULT_MATCHING_CAP,
            shuffles: 20,
            oracles: true,
            skip_identity: false,
            intervals: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub poset: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matching: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub automorphism: Option<usize>,
    pub verdicts: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub witnesses: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub info: BTreeMap<String, u64>,
}

impl CaseRecord {
    fn new(poset: &str, matching: Option<usize>, automorphism: Option<usize>) -> Self {
        CaseRecord {
            poset: poset.to_string(),
            matching,
            automorphism,
            verdicts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            info: BTreeMap::new(),
        }
    }

    fn record(&mut self, check: &str, outcome: Result<(), String>) {
        let passed = outcome.is_ok();
        // A check that already failed on this case stays failed.
        let slot = self.verdicts.entry(check.to_string()).or_insert(true);
        *slot &= passed;
        if let Err(w) = outcome {
            self.witnesses.entry(check.to_string()).or_insert(w);
        }
    }

    fn sort_key(&self) -> (Option<usize>, Option<usize>) {
        (self.matching, self.automorphism)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub posets: u64,
    /// Corpus posets per element count.
    pub posets_by_size: BTreeMap<usize, u64>,
    pub cases: u64,
    pub checks: BTreeMap<String, CheckCounts>,
    pub violations: u64,
    pub truncated_enumerations: u64,
}

impl Summary {
    pub fn from_records(posets: u64, records: &[CaseRecord], truncated: u64) -> Self {
        let mut s = Summary { posets, truncated_enumerations: truncated, ..Default::default() };
        for r in records {
            s.cases += 1;
            for (check, &ok) in &r.verdicts {
                let c = s.checks.entry(check.clone()).or_default();
                if ok {
                    c.passed += 1;
                } else {
                    c.failed += 1;
                    s.violations += 1;
                }
            }
        }
        s
    }

    pub fn passed(&self, check: &str) -> u64 {
        self.checks.get(check).map_or(0, |c| c.passed)
    }

    pub fn failed(&self, check: &str) -> u64 {
        self.checks.get(check).map_or(0, |c| c.failed)
    }
}

/// A poset whose checks panicked, kept for reproduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanicRecord {
    pub poset: String,
    pub message: String,
    pub serialized: PosetJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: Manifest,
    pub options: SweepOptions,
    pub records: Vec<CaseRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub panics: Vec<PanicRecord>,
    /// Present only when timing was requested, so default reports stay
    /// byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_ms: Option<u64>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.summary.violations == 0 && self.panics.is_empty()
    }
}

/// Outcome of running the suite on one poset.
#[derive(Debug, Clone, Default)]
pub struct PosetOutcome {
    pub records: Vec<CaseRecord>,
    pub truncated: bool,
    /// Number of `(M, φ)` triples on which the theorem check ran.
    pub theorem_cases: u64,
}

fn ids(p: &Poset, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().map(|&x| p.id(x)).collect();
    format!("{v:?}")
}

/// [`check_poset`] on the poset itself and, with `opts.intervals`, on each
/// of its intervals that admits a special matching and a non-trivial
/// automorphism. Interval cases are named `name[x,y]`.
pub fn check_poset_and_intervals(name: &str, poset: &Poset, opts: &SweepOptions) -> PosetOutcome {
    let mut out = check_poset(name, poset, opts);
    if !opts.intervals {
        return out;
    }
    for x in poset.linear_extension().to_vec() {
        for y in poset.up_set(x).ones() {
            if x == y {
                continue;
            }
            let interval = poset.interval(x, y).expect("x <= y");
            if interval.len() % 2 == 1
                || automorphisms(&interval).len() < 2
                || find_special_matching(&interval).is_none()
            {
                continue;
            }
            let sub = check_poset(&format!("{name}[{},{}]", poset.id(x), poset.id(y)), &interval, opts);
            out.truncated |= sub.truncated;
            out.theorem_cases += sub.theorem_cases;
            out.records.extend(sub.records);
        }
    }
    out
}

/// Runs every applicable check on one poset.
pub fn check_poset(name: &str, poset: &Poset, opts: &SweepOptions) -> PosetOutcome {
    let mut out = PosetOutcome::default();
    let enumeration = enumerate_special_matchings(poset, opts.cap_matchings);
    out.truncated = enumeration.truncated;
    let specials = enumeration.matchings;
    let auts = automorphisms(poset);
    let zircon = is_zircon(poset);

    let mut base = CaseRecord::new(name, None, None);
    base.info.insert("special_matchings".into(), specials.len() as u64);
    base.info.insert("automorphisms".into(), auts.len() as u64);
    base.record(
        DEFINITIONS,
        if definitions_agree(poset) { Ok(()) } else { Err(format!("is_zircon = {zircon}")) },
    );
    if zircon {
        base.record(SPHERICITY, check_sphericity(poset));
        base.record(IDEAL_UNIQUE_MIN, check_ideal_minima(poset));
    }
    if opts.oracles {
        base.record(ENUMERATION_ORACLE, check_enumeration_oracle(poset, &specials, enumeration.truncated));
        base.record(MOBIUS_ORACLE, check_mobius_oracle(poset));
    }
    out.records.push(base);

    for (mi, m) in specials.iter().enumerate() {
        let mut rec = CaseRecord::new(name, Some(mi), None);
        let outcome = match verify_lifting(poset, m) {
            Ok(None) => Ok(()),
            Ok(Some(v)) => Err(format!("x={:?} y={:?} clause {}", v.x, v.y, v.clause)),
            Err(e) => Err(e.to_string()),
        };
        rec.record(LIFTING, outcome);
        out.records.push(rec);
    }

    let bounded = poset.is_bounded();
    for (ai, phi) in auts.iter().enumerate() {
        if opts.skip_identity && phi.is_identity() {
            continue;
        }
        if zircon {
            let mut rec = CaseRecord::new(name, None, Some(ai));
            let outcome = match fixed_point_subposet(poset, phi) {
                Ok(fixed) if is_zircon(&fixed) => Ok(()),
                Ok(fixed) => Err(format!("fixed points {:?} do not form a zircon", fixed.ids())),
                Err(e) => Err(e.to_string()),
            };
            rec.record(COROLLARY, outcome);
            if bounded && !specials.is_empty() {
                let distinct: BTreeSet<Vec<usize>> = specials
                    .iter()
                    .filter_map(|m| fixed_point_matching(poset, m, phi).ok())
                    .map(|r| r.matching.partners().to_vec())
                    .collect();
                rec.info.insert("distinct_fixed_point_matchings".into(), distinct.len() as u64);
            }
            out.records.push(rec);
        }
        if !bounded {
            continue;
        }
        for (mi, m) in specials.iter().enumerate() {
            out.theorem_cases += 1;
            let mut rec = CaseRecord::new(name, Some(mi), Some(ai));
            let seed = (mi as u64) << 32 | ai as u64;
            check_triple(poset, m, phi, seed, opts, &mut rec);
            out.records.push(rec);
        }
    }
    out
}

fn check_triple(
    poset: &Poset,
    m: &Matching,
    phi: &crate::poset::PosetMap,
    seed: u64,
    opts: &SweepOptions,
    rec: &mut CaseRecord,
) {
    let theorem = fixed_point_matching(poset, m, phi)
        .map(|r| {
            rec.info.insert("order_N".into(), r.family.order as u64);
            rec.info.insert("fixed_points".into(), r.fixed_points.len() as u64);
        })
        .map_err(|e| e.to_string());
    rec.record(THEOREM, theorem);

    let family = match matching_family(poset, m, phi) {
        Ok(f) => {
            rec.record(FAMILY_SPECIAL, Ok(()));
            f
        }
        Err(e) => {
            rec.record(FAMILY_SPECIAL, Err(e.to_string()));
            return;
        }
    };
    let components = orbit_components(poset, &family);
    let mut extrema = Vec::with_capacity(components.len());
    for comp in &components {
        match component_extrema(poset, comp) {
            Ok(e) => {
                rec.record(EXTREMA_UNIQUE, Ok(()));
                extrema.push(e);
            }
            Err(e) => {
                rec.record(EXTREMA_UNIQUE, Err(e.to_string()));
                return;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k_order: Vec<usize> = (1..=family.order).collect();
    for _ in 0..opts.shuffles.max(1) {
        k_order.shuffle(&mut rng);
        for (comp, &(lo, hi)) in components.iter().zip(&extrema) {
            for &q in comp {
                let down = greedy_descend_with_order(poset, &family, q, Direction::Down, &k_order);
                let up = greedy_descend_with_order(poset, &family, q, Direction::Up, &k_order);
                let outcome = if down != lo {
                    Err(format!("down from {} ends at {}, min is {}", poset.id(q), poset.id(down), poset.id(lo)))
                } else if up != hi {
                    Err(format!("up from {} ends at {}, max is {}", poset.id(q), poset.id(up), poset.id(hi)))
                } else {
                    Ok(())
                };
                rec.record(GREEDY_ENDPOINT, outcome);
            }
        }
    }

    for (comp, &(lo, hi)) in components.iter().zip(&extrema) {
        for &p in comp.iter().filter(|&&p| phi.apply(p) == p) {
            rec.record(
                FIXED_EXTREMAL,
                if p == lo || p == hi { Ok(()) } else { Err(format!("{} in {}", poset.id(p), ids(poset, comp))) },
            );
        }
        let lo_fixed = phi.apply(lo) == lo;
        let hi_fixed = phi.apply(hi) == hi;
        rec.record(
            MIN_MAX_FIXED,
            if lo_fixed == hi_fixed { Ok(()) } else { Err(format!("component {}", ids(poset, comp))) },
        );
    }
}

/// `μ(x, y) = (-1)^(ρ(y) - ρ(x))` on every interval.
pub fn check_sphericity(poset: &Poset) -> Result<(), String> {
    let rank = poset.rank_function().ok_or("no rank function")?;
    for x in 0..poset.len() {
        for y in poset.up_set(x).ones() {
            let mu = poset.mobius(x, y).map_err(|e| e.to_string())?;
            let expect = if (rank[y] - rank[x]) % 2 == 0 { 1 } else { -1 };
            if mu != expect {
                return Err(format!("mu({}, {}) = {mu}, expected {expect}", poset.id(x), poset.id(y)));
            }
        }
    }
    Ok(())
}

fn check_ideal_minima(poset: &Poset) -> Result<(), String> {
    for x in 0..poset.len() {
        let ideal = poset.principal_ideal(x);
        if ideal.minimal_elements().len() != 1 {
            return Err(format!("ideal below {} has several minimal elements", poset.id(x)));
        }
    }
    Ok(())
}

fn check_enumeration_oracle(poset: &Poset, specials: &[Matching], truncated: bool) -> Result<(), String> {
    if truncated {
        return Ok(());
    }
    let fast: BTreeSet<&Matching> = specials.iter().collect();
    if fast.len() != specials.len() {
        return Err("enumeration returned duplicates".into());
    }
    let brute: Vec<Matching> = enumerate_matchings(poset).into_iter().filter(|m| is_special(poset, m)).collect();
    let brute: BTreeSet<&Matching> = brute.iter().collect();
    if fast != brute {
        return Err(format!("search found {}, brute force {}", fast.len(), brute.len()));
    }
    Ok(())
}

fn check_mobius_oracle(poset: &Poset) -> Result<(), String> {
    let oracle = mobius_matrix_oracle(poset);
    for x in 0..poset.len() {
        for y in poset.up_set(x).ones() {
            let mu = poset.mobius(x, y).map_err(|e| e.to_string())?;
            if mu != oracle[x][y] {
                return Err(format!("mu({}, {}): {mu} vs {}", poset.id(x), poset.id(y), oracle[x][y]));
            }
        }
    }
    Ok(())
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".to_string())
}

/// Runs the suite over a corpus on the current rayon pool. Records are sorted
/// by corpus position, then matching index, then automorphism index.
pub fn run_sweep(config: &Manifest, corpus: &[(String, Poset)], opts: &SweepOptions) -> SweepReport {
    let outcomes: Vec<Result<PosetOutcome, PanicRecord>> = corpus
        .par_iter()
        .map(|(name, p)| {
            catch_unwind(AssertUnwindSafe(|| check_poset_and_intervals(name, p, opts))).map_err(|e| PanicRecord {
                poset: name.clone(),
                message: panic_message(e),
                serialized: p.to_json(),
            })
        })
        .collect();

    let mut records = Vec::new();
    let mut panics = Vec::new();
    let mut truncated = 0;
    for outcome in outcomes {
        match outcome {
            Ok(mut o) => {
                o.records.sort_by(|a, b| a.poset.cmp(&b.poset).then(a.sort_key().cmp(&b.sort_key())));
                truncated += u64::from(o.truncated);
                records.extend(o.records);
            }
            Err(p) => panics.push(p),
        }
    }
    let mut summary = Summary::from_records(corpus.len() as u64, &records, truncated);
    for (_, p) in corpus {
        *summary.posets_by_size.entry(p.len()).or_default() += 1;
    }
    SweepReport {
        config: config.clone(),
        options: *opts,
        records,
        summary,
        panics,
        duration_ms: None,
    }
}
