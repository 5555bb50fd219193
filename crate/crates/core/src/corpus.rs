//! Small-poset corpora and brute-force oracles.
//!
//! Nothing in here reuses the search or recursion code it is meant to check:
//! matchings are enumerated without the special filter, and Möbius values
//! come from inverting the zeta matrix.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::matching::Matching;
use crate::poset::{are_isomorphic, invariant_key, Poset, RelationMode};

/// Hard cap for exhaustive enumeration.
pub const MAX_EXHAUSTIVE_N: usize = 7;

/// Number of isomorphism classes of posets on `n = 0, 1, ..., 6` elements.
pub const UNLABELED_POSET_COUNTS: [usize; 7] = [1, 1, 2, 5, 16, 63, 318];

/// Strict up-sets as bitmasks over at most [`MAX_EXHAUSTIVE_N`] elements.
type Masks = Vec<u8>;

fn masks_to_poset(up: &Masks) -> Poset {
    let n = up.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| up[x] >> y & 1 == 1).map(move |y| (x, y)))
        .collect();
    Poset::from_indices(n, &pairs, RelationMode::Relations).expect("generated relation is a partial order")
}

fn down_masks(up: &Masks) -> Masks {
    let n = up.len();
    (0..n)
        .map(|y| (0..n).filter(|&x| up[x] >> y & 1 == 1).fold(0u8, |m, x| m | 1 << x))
        .collect()
}

fn is_down_closed(mask: u8, down: &Masks) -> bool {
    (0..down.len()).all(|x| mask >> x & 1 == 0 || down[x] & !mask == 0)
}

fn is_up_closed(mask: u8, up: &Masks) -> bool {
    (0..up.len()).all(|x| mask >> x & 1 == 0 || up[x] & !mask == 0)
}

/// Extends every poset on `k` elements by a new element `k`.
///
/// The new element sits above a down-closed set `D` and below an up-closed
/// set `U`; transitivity requires every `d` in `D` to lie below every `u` in
/// `U` already. With `natural` set only `U = ∅` is used, which produces the
/// naturally labelled posets (`x < y` implies `x < y` as integers).
fn extend(level: &[Masks], natural: bool) -> Vec<Masks> {
    let mut out = Vec::new();
    for up in level {
        let k = up.len();
        let down = down_masks(up);
        let full: u8 = if k == 0 { 0 } else { (1u16 << k).wrapping_sub(1) as u8 };
        for d in 0..=full {
            if !is_down_closed(d, &down) {
                continue;
            }
            let common_up = (0..k)
                .filter(|&x| d >> x & 1 == 1)
                .fold(full, |m, x| m & up[x]);
            let mut push = |u: u8| {
                let mut next = up.clone();
                for x in 0..k {
                    if d >> x & 1 == 1 {
                        next[x] |= 1 << k;
                    }
                }
                next.push(u);
                out.push(next);
            };
            if natural {
                push(0);
                continue;
            }
            // Subsets of common_up, including the empty set.
            let mut u = common_up;
            loop {
                if is_up_closed(u, up) {
                    push(u);
                }
                if u == 0 {
                    break;
                }
                u = (u - 1) & common_up;
            }
        }
    }
    out
}

fn relations_on(n: usize, natural: bool) -> Vec<Masks> {
    let mut level: Vec<Masks> = vec![Vec::new()];
    for _ in 0..n {
        level = extend(&level, natural);
    }
    level
}

/// Every poset on the labelled set `{0, ..., n-1}`.
pub fn labeled_posets(n: usize) -> Result<Vec<Poset>, CorpusError> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(CorpusError::TooLarge { n, cap: MAX_EXHAUSTIVE_N });
    }
    Ok(relations_on(n, false).iter().map(masks_to_poset).collect())
}

/// Posets on `n` elements: one per isomorphism class when `canonical`,
/// otherwise all labelled posets.
pub fn enumerate_posets(n: usize, canonical: bool) -> Result<Vec<Poset>, CorpusError> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(CorpusError::TooLarge { n, cap: MAX_EXHAUSTIVE_N });
    }
    if !canonical {
        return labeled_posets(n);
    }
    // Every class has a naturally labelled member, so those suffice.
    let mut classes: Vec<Poset> = Vec::new();
    let mut buckets: HashMap<_, Vec<usize>> = HashMap::new();
    for masks in relations_on(n, true) {
        let p = masks_to_poset(&masks);
        let bucket = buckets.entry((p.covers().len(), invariant_key(&p))).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&classes[i], &p).is_some()) {
            continue;
        }
        bucket.push(classes.len());
        classes.push(p);
    }
    Ok(classes)
}

/// All isomorphism classes on `1..=max_n` elements, tagged `n{n}-{index}`.
pub fn exhaustive_corpus(max_n: usize) -> Result<Vec<(String, Poset)>, CorpusError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for (i, p) in enumerate_posets(n, true)?.into_iter().enumerate() {
            out.push((format!("n{n}-{i:04}"), p));
        }
    }
    Ok(out)
}

/// Every perfect matching of the Hasse diagram, with no special filter.
pub fn enumerate_matchings(poset: &Poset) -> Vec<Matching> {
    fn go(p: &Poset, partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
        let Some(x) = partner.iter().position(|&y| y == usize::MAX) else {
            out.push(Matching::new_unchecked(partner.clone()));
            return;
        };
        let edges = p
            .covers()
            .iter()
            .filter_map(|&(a, b)| match (a == x, b == x) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect::<Vec<_>>();
        for y in edges {
            if partner[y] == usize::MAX {
                partner[x] = y;
                partner[y] = x;
                go(p, partner, out);
                partner[x] = usize::MAX;
                partner[y] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if poset.len().is_multiple_of(2) {
        go(poset, &mut vec![usize::MAX; poset.len()], &mut out);
    }
    out
}

/// The full Möbius matrix, `mu[x][y]`, from inverting the zeta matrix by
/// back substitution along a linear extension.
pub fn mobius_matrix_oracle(poset: &Poset) -> Vec<Vec<i64>> {
    let n = poset.len();
    // Own linear extension: sort by number of strict predecessors.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| ((0..n).filter(|&z| poset.lt(z, x)).count(), x));
    let zeta = |i: usize, j: usize| i64::from(poset.leq(order[i], order[j]));

    // zeta is unit upper-triangular in this order; solve zeta * inv = I.
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        for i in (0..n).rev() {
            let mut v = i64::from(i == j);
            for k in i + 1..n {
                v -= zeta(i, k) * inv[k][j];
            }
            inv[i][j] = v;
        }
    }
    let mut mu = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mu[order[i]][order[j]] = inv[i][j];
        }
    }
    mu
}

pub fn mobius_oracle(poset: &Poset, x: usize, y: usize) -> Result<i64, crate::error::PosetError> {
    if !poset.leq(x, y) {
        return Err(crate::error::PosetError::NotLeq(poset.id(x).into(), poset.id(y).into()));
    }
    Ok(mobius_matrix_oracle(poset)[x][y])
}

/// Random order on `0..n`: each pair `i < j` is related with probability
/// `density`, then closed and reduced.
pub fn random_poset(n: usize, seed: u64, density: f64) -> Result<Poset, CorpusError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(CorpusError::Density(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Ok(Poset::from_indices(n, &pairs, RelationMode::Relations).expect("forward pairs are acyclic"))
}

/// [`random_poset`] on `n - 2` inner elements with a new bottom `0` and top
/// `n - 1` adjoined, so the result is bounded.
pub fn bounded_random_poset(n: usize, seed: u64, density: f64) -> Result<Poset, CorpusError> {
    let inner = random_poset(n.saturating_sub(2), seed, density)?;
    let top = inner.len() + 1;
    let mut pairs: Vec<(usize, usize)> = inner.covers().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    for x in 1..top {
        pairs.push((0, x));
        pairs.push((x, top));
    }
    pairs.push((0, top));
    Ok(Poset::from_indices(top + 1, &pairs, RelationMode::Relations).expect("bounded extension is acyclic"))
}

/// Sweep manifest:
/// `{"mode": "exhaustive", "max_n": 6}` or
/// `{"mode": "random", "n": 10, "seeds": [...], "density": 0.3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum Manifest {
    Exhaustive { max_n: usize },
    Random { n: usize, seeds: Vec<u64>, density: f64 },
}

impl Manifest {
    /// Materializes the corpus described by the manifest. Random posets are
    /// made bounded (see [`bounded_random_poset`]).
    pub fn corpus(&self) -> Result<Vec<(String, Poset)>, CorpusError> {
        match self {
            Manifest::Exhaustive { max_n } => {
                if *max_n > MAX_EXHAUSTIVE_N {
                    return Err(CorpusError::TooLarge { n: *max_n, cap: MAX_EXHAUSTIVE_N });
                }
                exhaustive_corpus(*max_n)
            }
            Manifest::Random { n, seeds, density } => seeds
                .iter()
                .map(|&s| Ok((format!("r{n}-s{s}"), bounded_random_poset(*n, s, *density)?)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        assert_eq!(enumerate_posets(1, true).unwrap().len(), 1);
        assert_eq!(enumerate_posets(3, true).unwrap().len(), 5);
        assert!(matches!(enumerate_posets(8, true), Err(CorpusError::TooLarge { .. })));
    }

    #[test]
    fn labeled_counts() {
        // Labelled posets: 1, 1, 3, 19, 219, 4231.
        let counts: Vec<usize> = (0..=5).map(|n| labeled_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219, 4231]);
    }

    #[test]
    fn matchings_brute_force() {
        let d = Poset::from_indices(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers).unwrap();
        assert_eq!(enumerate_matchings(&d).len(), 2);
        let chain = Poset::from_indices(4, &[(0, 1), (1, 2), (2, 3)], RelationMode::Covers).unwrap();
        let ms = enumerate_matchings(&chain);
        assert_eq!(ms, vec![Matching::new_unchecked(vec![1, 0, 3, 2])]);
        let odd = Poset::from_indices(3, &[], RelationMode::Covers).unwrap();
        assert!(enumerate_matchings(&odd).is_empty());
    }

    #[test]
    fn mobius_oracle_diamond() {
        let d = Poset::from_indices(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers).unwrap();
        assert_eq!(mobius_oracle(&d, 0, 3).unwrap(), 1);
        assert_eq!(mobius_oracle(&d, 2, 2).unwrap(), 1);
        assert!(mobius_oracle(&d, 1, 2).is_err());
    }

    #[test]
    fn random_extremes() {
        let a = random_poset(6, 1, 0.0).unwrap();
        assert!(a.covers().is_empty());
        let c = random_poset(6, 1, 1.0).unwrap();
        assert_eq!(c.covers(), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        assert!(random_poset(3, 1, 1.5).is_err());
        assert!(bounded_random_poset(10, 3, 0.3).unwrap().is_bounded());
    }

    #[test]
    fn manifest_json() {
        let m: Manifest = serde_json::from_str(r#"{"mode": "exhaustive", "max_n": 4}"#).unwrap();
        assert_eq!(m, Manifest::Exhaustive { max_n: 4 });
        let m: Manifest =
            serde_json::from_str(r#"{"mode": "random", "n": 10, "seeds": [1, 2], "density": 0.3}"#).unwrap();
        assert_eq!(m.corpus().unwrap().len(), 2);
        assert!(serde_json::from_str::<Manifest>(r#"{"mode": "bogus"}"#).is_err());
    }
}
