//! Zircons under both definitions, and the fixed-point matching built from a
//! special matching and a poset automorphism.
//!
//! Given a special matching `M` and an automorphism `φ` of order `N`, the
//! conjugates `M_k = φ^k ∘ M ∘ φ^-k` are special as well. Their union splits
//! the poset into components, each with a unique minimum and maximum; every
//! `φ`-fixed element is one of the two extremes of its component, and pairing
//! the extremes gives a special matching on the fixed-point subposet.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{MatchingError, ZirconError};
use crate::matching::{check_special, find_special_matching, special_violation, Matching};
use crate::poset::{is_automorphism, Poset, PosetMap};

/// Definition via principal ideals: every ideal below a non-minimal element
/// admits a special matching.
pub fn is_zircon(poset: &Poset) -> bool {
    (0..poset.len())
        .filter(|&x| !poset.lower_covers(x).is_empty())
        .all(|x| find_special_matching(&poset.principal_ideal(x)).is_some())
}

/// Ranked formulation: a rank function exists and every non-trivial principal
/// ideal admits a special matching.
pub fn is_zircon_ranked(poset: &Poset) -> bool {
    poset.is_ranked()
        && (0..poset.len())
            .filter(|&x| poset.down_set(x).count_ones(..) > 1)
            .all(|x| find_special_matching(&poset.principal_ideal(x)).is_some())
}

pub fn definitions_agree(poset: &Poset) -> bool {
    is_zircon(poset) == is_zircon_ranked(poset)
}

fn require_automorphism(poset: &Poset, f: &PosetMap) -> Result<(), ZirconError> {
    if is_automorphism(poset, f) {
        Ok(())
    } else {
        Err(crate::error::PosetError::NotAutomorphism.into())
    }
}

fn require_special(poset: &Poset, m: &Matching) -> Result<(), ZirconError> {
    check_special(poset, m).map_err(ZirconError::from)
}

/// `f ∘ M ∘ f⁻¹`.
pub fn transform_matching(poset: &Poset, m: &Matching, f: &PosetMap) -> Result<Matching, ZirconError> {
    require_automorphism(poset, f)?;
    if m.len() != poset.len() {
        return Err(MatchingError::NotMatching("size mismatch".into()).into());
    }
    Ok(m.conjugate(f))
}

/// The conjugates of one special matching under the powers of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    pub base: Matching,
    pub automorphism: PosetMap,
    pub order: usize,
    /// `members[k - 1]` is `M_k`; the last entry equals `base`.
    pub members: Vec<Matching>,
}

impl MatchingFamily {
    pub fn member(&self, k: usize) -> &Matching {
        &self.members[k - 1]
    }
}

pub fn matching_family(poset: &Poset, m: &Matching, phi: &PosetMap) -> Result<MatchingFamily, ZirconError> {
    require_automorphism(poset, phi)?;
    require_special(poset, m)?;
    let order = phi.order();
    let mut members = Vec::with_capacity(order);
    let mut power = phi.clone();
    for k in 1..=order {
        let mk = m.conjugate(&power);
        if let Some((p, q)) = special_violation(poset, &mk) {
            return Err(ZirconError::TransformedNotSpecial {
                index: k,
                p: poset.id(p).to_string(),
                q: poset.id(q).to_string(),
            });
        }
        members.push(mk);
        power = phi.compose(&power);
    }
    debug_assert_eq!(members.last(), Some(m));
    Ok(MatchingFamily {
        base: m.clone(),
        automorphism: phi.clone(),
        order,
        members,
    })
}

/// Component of `p` in the graph whose edges are `{x, M_k(x)}` over all `k`.
pub fn orbit_component(poset: &Poset, family: &MatchingFamily, p: usize) -> Vec<usize> {
    let mut seen = vec![false; poset.len()];
    seen[p] = true;
    let mut out = vec![p];
    let mut queue = VecDeque::from([p]);
    while let Some(x) = queue.pop_front() {
        for mk in &family.members {
            let y = mk.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All orbit components, ordered by their smallest element.
pub fn orbit_components(poset: &Poset, family: &MatchingFamily) -> Vec<Vec<usize>> {
    let mut seen = vec![false; poset.len()];
    let mut out = Vec::new();
    for p in 0..poset.len() {
        if seen[p] {
            continue;
        }
        let comp = orbit_component(poset, family, p);
        comp.iter().for_each(|&x| seen[x] = true);
        out.push(comp);
    }
    out
}

/// Unique `(min, max)` of the subposet induced on `component`.
pub fn component_extrema(poset: &Poset, component: &[usize]) -> Result<(usize, usize), ZirconError> {
    let minima: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&x| !component.iter().any(|&y| poset.lt(y, x)))
        .collect();
    let maxima: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&x| !component.iter().any(|&y| poset.lt(x, y)))
        .collect();
    let first = component.first().map(|&x| poset.id(x).to_string()).unwrap_or_default();
    match (minima.as_slice(), maxima.as_slice()) {
        ([lo], [hi]) => Ok((*lo, *hi)),
        ([_], _) => Err(ZirconError::NonUniqueExtremum(first, "maximal")),
        _ => Err(ZirconError::NonUniqueExtremum(first, "minimal")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

/// Applies members of the family while they strictly move `q` in `direction`,
/// always trying the smallest `k` first.
pub fn greedy_descend(poset: &Poset, family: &MatchingFamily, q: usize, direction: Direction) -> usize {
    let order: Vec<usize> = (1..=family.order).collect();
    greedy_descend_with_order(poset, family, q, direction, &order)
}

/// As [`greedy_descend`], trying indices in the order given by `k_order`.
pub fn greedy_descend_with_order(
    poset: &Poset,
    family: &MatchingFamily,
    q: usize,
    direction: Direction,
    k_order: &[usize],
) -> usize {
    let mut current = q;
    loop {
        let step = k_order.iter().map(|&k| family.member(k).apply(current)).find(|&y| match direction {
            Direction::Down => poset.lt(y, current),
            Direction::Up => poset.lt(current, y),
        });
        match step {
            Some(y) => current = y,
            None => return current,
        }
    }
}

/// Induced subposet on the fixed points of `phi`, in the original index order.
pub fn fixed_point_subposet(poset: &Poset, phi: &PosetMap) -> Result<Poset, ZirconError> {
    require_automorphism(poset, phi)?;
    Ok(poset.induced_subposet(&phi.fixed_points()))
}

/// Output of [`fixed_point_matching`].
#[derive(Debug, Clone)]
pub struct FixedPointMatching {
    pub family: MatchingFamily,
    pub components: Vec<Vec<usize>>,
    /// `(min, max)` per entry of `components`.
    pub extrema: Vec<(usize, usize)>,
    /// Fixed points of `phi` as indices of the original poset.
    pub fixed_points: Vec<usize>,
    pub subposet: Poset,
    /// Matching on `subposet`, in its own indices.
    pub matching: Matching,
}

/// Builds the matching on the fixed-point subposet that sends each fixed
/// point to the opposite extreme of its orbit component, then re-verifies
/// that the result is a special matching.
pub fn fixed_point_matching(
    poset: &Poset,
    m: &Matching,
    phi: &PosetMap,
) -> Result<FixedPointMatching, ZirconError> {
    let (bottom, top) = poset.bounds().ok_or(ZirconError::NotBounded)?;
    let family = matching_family(poset, m, phi)?;
    let fixed_points = phi.fixed_points();
    if fixed_points.is_empty() {
        return Err(ZirconError::NoFixedPoints);
    }
    debug_assert!(phi.apply(bottom) == bottom && phi.apply(top) == top);

    let components = orbit_components(poset, &family);
    let mut component_of = vec![0; poset.len()];
    let mut extrema = Vec::with_capacity(components.len());
    for (ci, comp) in components.iter().enumerate() {
        comp.iter().for_each(|&x| component_of[x] = ci);
        extrema.push(component_extrema(poset, comp)?);
    }

    let subposet = poset.induced_subposet(&fixed_points);
    let mut position = vec![usize::MAX; poset.len()];
    for (i, &p) in fixed_points.iter().enumerate() {
        position[p] = i;
    }
    let mut partner = Vec::with_capacity(fixed_points.len());
    for &p in &fixed_points {
        let (lo, hi) = extrema[component_of[p]];
        let image = if p == hi {
            lo
        } else if p == lo {
            hi
        } else {
            return Err(ZirconError::FixedPointNotExtremal(poset.id(p).to_string()));
        };
        if position[image] == usize::MAX {
            return Err(ZirconError::InvalidResult(format!(
                "partner {:?} of {:?} is not fixed",
                poset.id(image),
                poset.id(p)
            )));
        }
        partner.push(position[image]);
    }
    let matching = Matching::new(&subposet, partner)
        .map_err(|e| ZirconError::InvalidResult(e.to_string()))?;
    if let Some((p, q)) = special_violation(&subposet, &matching) {
        return Err(ZirconError::InvalidResult(format!(
            "not special at cover ({:?}, {:?})",
            subposet.id(p),
            subposet.id(q)
        )));
    }
    Ok(FixedPointMatching {
        family,
        components,
        extrema,
        fixed_points,
        subposet,
        matching,
    })
}

/// Per-triple report record for `(P, M, φ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub n: usize,
    #[serde(rename = "order_N")]
    pub order_n: usize,
    pub components: Vec<Vec<String>>,
    pub fixed_points: Vec<String>,
    pub special: bool,
    pub witness: Option<[String; 2]>,
}

impl TripleReport {
    pub fn new(poset: &Poset, result: &FixedPointMatching) -> Self {
        let ids = |xs: &[usize]| xs.iter().map(|&x| poset.id(x).to_string()).collect::<Vec<_>>();
        let witness = special_violation(&result.subposet, &result.matching).map(|(p, q)| {
            [result.subposet.id(p).to_string(), result.subposet.id(q).to_string()]
        });
        TripleReport {
            n: poset.len(),
            order_n: result.family.order,
            components: result.components.iter().map(|c| ids(c)).collect(),
            fixed_points: ids(&result.fixed_points),
            special: witness.is_none(),
            witness,
        }
    }
}
