//! Complete matchings on Hasse diagrams, the special condition, and the
//! lifting property.

use serde::{Deserialize, Serialize};

use crate::error::MatchingError;
use crate::poset::{Poset, PosetMap};

/// Default bound on how many matchings an enumeration may return.
pub const DEFAULT_MATCHING_CAP: usize = 1_000_000;

/// A fixed-point-free involution pairing each element with a Hasse neighbor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    partner: Vec<usize>,
}

impl Matching {
    /// Validates `partner` against the matching invariants on `poset`.
    pub fn new(poset: &Poset, partner: Vec<usize>) -> Result<Self, MatchingError> {
        if let Some(reason) = matching_defect(poset, &partner) {
            return Err(MatchingError::NotMatching(reason));
        }
        Ok(Matching { partner })
    }

    pub(crate) fn new_unchecked(partner: Vec<usize>) -> Self {
        Matching { partner }
    }

    pub fn from_pairs<S: AsRef<str>>(poset: &Poset, pairs: &[(S, S)]) -> Result<Self, MatchingError> {
        let mut partner = vec![usize::MAX; poset.len()];
        for (a, b) in pairs {
            let (a, b) = (poset.index_of(a.as_ref())?, poset.index_of(b.as_ref())?);
            for (x, y) in [(a, b), (b, a)] {
                if partner[x] != usize::MAX && partner[x] != y {
                    return Err(MatchingError::NotMatching(format!(
                        "{:?} is paired twice",
                        poset.id(x)
                    )));
                }
                partner[x] = y;
            }
        }
        Matching::new(poset, partner)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.partner[x]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// Pairs `(x, M(x))` with `x < M(x)` by index.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x < y)
            .map(|(x, &y)| (x, y))
            .collect()
    }

    /// `f ∘ M ∘ f⁻¹`.
    pub fn conjugate(&self, f: &PosetMap) -> Matching {
        let mut partner = vec![0; self.partner.len()];
        for (x, &y) in self.partner.iter().enumerate() {
            partner[f.apply(x)] = f.apply(y);
        }
        Matching { partner }
    }

    pub fn to_json(&self, poset: &Poset) -> MatchingJson {
        let mut pairs: Vec<[String; 2]> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (poset.id(a).to_string(), poset.id(b).to_string());
                if a <= b {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        pairs.sort();
        MatchingJson { pairs }
    }

    pub fn from_json(poset: &Poset, json: &MatchingJson) -> Result<Self, MatchingError> {
        let pairs: Vec<(&str, &str)> =
            json.pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        Matching::from_pairs(poset, &pairs)
    }
}

/// Matching wire format: each unordered pair once, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingJson {
    pub pairs: Vec<[String; 2]>,
}

fn matching_defect(poset: &Poset, partner: &[usize]) -> Option<String> {
    if partner.len() != poset.len() {
        return Some(format!(
            "defined on {} of {} elements",
            partner.len(),
            poset.len()
        ));
    }
    for (x, &y) in partner.iter().enumerate() {
        if y >= poset.len() {
            return Some(format!("{:?} is unmatched", poset.id(x)));
        }
        if partner[y] != x {
            return Some(format!("not an involution at {:?}", poset.id(x)));
        }
        if !(poset.is_cover(x, y) || poset.is_cover(y, x)) {
            return Some(format!(
                "{:?} and {:?} are not a Hasse edge",
                poset.id(x),
                poset.id(y)
            ));
        }
    }
    None
}

pub fn is_matching(poset: &Poset, partner: &[usize]) -> bool {
    matching_defect(poset, partner).is_none()
}

/// The first cover `p ⋖ q` with `M(p) != q` and `M(p) ≮ M(q)`, if any.
pub fn special_violation(poset: &Poset, m: &Matching) -> Option<(usize, usize)> {
    poset
        .covers()
        .iter()
        .copied()
        .find(|&(p, q)| !cover_is_special(poset, m.partners(), p, q))
}

#[inline]
fn cover_is_special(poset: &Poset, partner: &[usize], p: usize, q: usize) -> bool {
    partner[p] == q || poset.lt(partner[p], partner[q])
}

pub fn is_special(poset: &Poset, m: &Matching) -> bool {
    special_violation(poset, m).is_none()
}

/// Checked form: rejects non-matchings and reports the violating cover by id.
pub fn check_special(poset: &Poset, m: &Matching) -> Result<(), MatchingError> {
    if let Some(reason) = matching_defect(poset, m.partners()) {
        return Err(MatchingError::NotMatching(reason));
    }
    match special_violation(poset, m) {
        None => Ok(()),
        Some((p, q)) => Err(MatchingError::NotSpecial(
            poset.id(p).to_string(),
            poset.id(q).to_string(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub matchings: Vec<Matching>,
    /// Set when the search stopped at the cap with work remaining.
    pub truncated: bool,
}

struct SpecialSearch<'a> {
    poset: &'a Poset,
    partner: Vec<usize>,
    cap: usize,
    out: Vec<Matching>,
    truncated: bool,
}

impl SpecialSearch<'_> {
    fn decided_covers_ok(&self, x: usize) -> bool {
        let p = self.poset;
        let partner = &self.partner;
        p.upper_covers(x)
            .iter()
            .all(|&q| partner[q] == usize::MAX || cover_is_special(p, partner, x, q))
            && p
                .lower_covers(x)
                .iter()
                .all(|&q| partner[q] == usize::MAX || cover_is_special(p, partner, q, x))
    }

    fn run(&mut self) {
        if self.truncated {
            return;
        }
        let Some(x) = self.partner.iter().position(|&y| y == usize::MAX) else {
            if self.out.len() >= self.cap {
                self.truncated = true;
                return;
            }
            self.out.push(Matching::new_unchecked(self.partner.clone()));
            return;
        };
        for y in self.poset.hasse_neighbors(x) {
            if self.partner[y] != usize::MAX {
                continue;
            }
            self.partner[x] = y;
            self.partner[y] = x;
            if self.decided_covers_ok(x) && self.decided_covers_ok(y) {
                self.run();
            }
            self.partner[x] = usize::MAX;
            self.partner[y] = usize::MAX;
            if self.truncated {
                return;
            }
        }
    }
}

/// All special matchings, pairing the lowest unmatched element first.
pub fn enumerate_special_matchings(poset: &Poset, cap: usize) -> Enumeration {
    if poset.len() % 2 == 1 {
        return Enumeration { matchings: Vec::new(), truncated: false };
    }
    let mut search = SpecialSearch {
        poset,
        partner: vec![usize::MAX; poset.len()],
        cap,
        out: Vec::new(),
        truncated: false,
    };
    search.run();
    Enumeration { matchings: search.out, truncated: search.truncated }
}

/// Some special matching, if one exists.
pub fn find_special_matching(poset: &Poset) -> Option<Matching> {
    let mut found = enumerate_special_matchings(poset, 1).matchings;
    found.pop()
}

/// A pair `x < y` with `M(y) < y` at which the lifting property fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingViolation {
    pub x: String,
    pub y: String,
    /// `"i"` when `M(x) ≰ y`, `"ii"` when `M(x) < x` but `M(x) ≮ M(y)`.
    pub clause: String,
}

/// Checks both lifting clauses over every `x < y` with `M(y) < y`.
pub fn verify_lifting(poset: &Poset, m: &Matching) -> Result<Option<LiftingViolation>, MatchingError> {
    check_special(poset, m)?;
    let n = poset.len();
    for y in 0..n {
        let my = m.apply(y);
        if !poset.lt(my, y) {
            continue;
        }
        for x in poset.down_set(y).ones().filter(|&x| x != y) {
            let mx = m.apply(x);
            let clause = if !poset.leq(mx, y) {
                Some("i")
            } else if poset.lt(mx, x) && !poset.lt(mx, my) {
                Some("ii")
            } else {
                None
            };
            if let Some(clause) = clause {
                return Ok(Some(LiftingViolation {
                    x: poset.id(x).to_string(),
                    y: poset.id(y).to_string(),
                    clause: clause.to_string(),
                }));
            }
        }
    }
    Ok(None)
}
