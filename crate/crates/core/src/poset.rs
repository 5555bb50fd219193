//! Finite posets stored as a Hasse diagram together with the cached
//! reachability closure.
//!
//! Elements are addressed internally by their position in [`Poset::ids`];
//! the string ids are what get serialized. Locally-finite hypotheses are
//! vacuous here: every poset is finite.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::PosetError;

/// How the pairs handed to [`Poset::build`] are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationMode {
    /// The pairs are exactly the cover relations; redundant pairs are rejected.
    Covers,
    /// The pairs generate the order; closure and reduction are computed.
    Relations,
}

#[derive(Debug, Clone)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    /// `up[x]` holds every `y` with `x <= y`.
    up: Vec<FixedBitSet>,
    /// `down[y]` holds every `x` with `x <= y`.
    down: Vec<FixedBitSet>,
    linear_extension: Vec<usize>,
    rank: Option<Vec<u32>>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.covers == other.covers
    }
}

impl Eq for Poset {}

impl Poset {
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        pairs: &[(S, S)],
        mode: RelationMode,
    ) -> Result<Self, PosetError> {
        let ids: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(PosetError::DuplicateId(id.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| PosetError::UnknownId(s.to_string()))
        };
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_index_pairs(ids, &edges, mode)
    }

    /// Build from integer-labelled elements `0..n`.
    pub fn from_indices(
        n: usize,
        pairs: &[(usize, usize)],
        mode: RelationMode,
    ) -> Result<Self, PosetError> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_index_pairs(ids, pairs, mode)
    }

    pub fn from_index_pairs(
        ids: Vec<String>,
        pairs: &[(usize, usize)],
        mode: RelationMode,
    ) -> Result<Self, PosetError> {
        let n = ids.len();
        let mut rel = identity_relation(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::UnknownId(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(PosetError::Cycle(ids[a].clone(), ids[b].clone()));
            }
            rel[a].insert(b);
        }
        close_by_squaring(&mut rel);
        for x in 0..n {
            for y in rel[x].ones() {
                if y != x && rel[y].contains(x) {
                    return Err(PosetError::Cycle(ids[x].clone(), ids[y].clone()));
                }
            }
        }
        let poset = Self::from_closure(ids, rel);
        if mode == RelationMode::Covers {
            let covers: HashSet<(usize, usize)> = poset.covers.iter().copied().collect();
            for &(a, b) in pairs {
                if !covers.contains(&(a, b)) {
                    return Err(PosetError::RedundantCover(
                        poset.ids[a].clone(),
                        poset.ids[b].clone(),
                    ));
                }
            }
        }
        Ok(poset)
    }

    /// `up` must already be reflexive, transitive and antisymmetric.
    pub(crate) fn from_closure(ids: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = ids.len();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }

        // x ⋖ y iff x < y and nothing lies strictly between them.
        let mut covers = Vec::new();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for x in 0..n {
            for y in up[x].ones() {
                if x == y {
                    continue;
                }
                let mut between = up[x].clone();
                between.intersect_with(&down[y]);
                if between.count_ones(..) == 2 {
                    covers.push((x, y));
                    upper[x].push(y);
                    lower[y].push(x);
                }
            }
        }

        let mut linear_extension: Vec<usize> = (0..n).collect();
        linear_extension.sort_by_key(|&x| (down[x].count_ones(..), x));

        let mut poset = Poset {
            ids,
            index,
            covers,
            upper,
            lower,
            up,
            down,
            linear_extension,
            rank: None,
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
        };
        poset.rank = poset.solve_rank();
        poset
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, PosetError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| PosetError::UnknownId(id.to_string()))
    }

    /// Cover pairs `(x, y)` with `x ⋖ y`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Elements `y` with `x ⋖ y` or `y ⋖ x`, in index order.
    pub fn hasse_neighbors(&self, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.upper[x].iter().chain(&self.lower[x]).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.upper[x].contains(&y)
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.up[x].contains(y)
    }

    pub fn leq_ids(&self, x: &str, y: &str) -> Result<bool, PosetError> {
        Ok(self.leq(self.index_of(x)?, self.index_of(y)?))
    }

    /// Everything `>= x`, including `x`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Everything `<= x`, including `x`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// Elements sorted so that `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear_extension
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    /// `(min, max)` when the poset has a unique minimal and a unique maximal element.
    pub fn bounds(&self) -> Option<(usize, usize)> {
        let (mins, maxs) = (self.minimal_elements(), self.maximal_elements());
        match (mins.as_slice(), maxs.as_slice()) {
            ([lo], [hi]) => Some((*lo, *hi)),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds().is_some()
    }

    pub fn induced_subposet(&self, subset: &[usize]) -> Poset {
        let mut members: Vec<usize> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = members.len();
        let mut rel = vec![FixedBitSet::with_capacity(m); m];
        for (i, &x) in members.iter().enumerate() {
            for y in self.up[x].ones() {
                if let Some(&j) = pos.get(&y) {
                    rel[i].insert(j);
                }
            }
        }
        let ids = members.iter().map(|&x| self.ids[x].clone()).collect();
        Poset::from_closure(ids, rel)
    }

    pub fn induced_subposet_ids<S: AsRef<str>>(&self, subset: &[S]) -> Result<Poset, PosetError> {
        let idx = subset
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.induced_subposet(&idx))
    }

    pub fn principal_ideal(&self, x: usize) -> Poset {
        let members: Vec<usize> = self.down[x].ones().collect();
        self.induced_subposet(&members)
    }

    pub fn interval(&self, x: usize, y: usize) -> Result<Poset, PosetError> {
        if !self.leq(x, y) {
            return Err(self.not_leq(x, y));
        }
        let mut members = self.up[x].clone();
        members.intersect_with(&self.down[y]);
        Ok(self.induced_subposet(&members.ones().collect::<Vec<_>>()))
    }

    pub(crate) fn not_leq(&self, x: usize, y: usize) -> PosetError {
        PosetError::NotLeq(self.ids[x].clone(), self.ids[y].clone())
    }

    /// Rank function normalized to 0 at the lowest level of each connected
    /// component, or `None` if the cover constraints are inconsistent.
    pub fn rank_function(&self) -> Option<&[u32]> {
        self.rank.as_deref()
    }

    pub fn is_ranked(&self) -> bool {
        self.rank.is_some()
    }

    fn solve_rank(&self) -> Option<Vec<u32>> {
        let n = self.len();
        let mut level: Vec<Option<i64>> = vec![None; n];
        let mut rank = vec![0u32; n];
        for start in 0..n {
            if level[start].is_some() {
                continue;
            }
            level[start] = Some(0);
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let lx = level[x].unwrap();
                let steps = self.upper[x].iter().map(|&y| (y, lx + 1));
                let steps = steps.chain(self.lower[x].iter().map(|&y| (y, lx - 1)));
                for (y, want) in steps {
                    match level[y] {
                        None => {
                            level[y] = Some(want);
                            component.push(y);
                            queue.push_back(y);
                        }
                        Some(have) if have != want => return None,
                        Some(_) => {}
                    }
                }
            }
            let base = component.iter().map(|&x| level[x].unwrap()).min().unwrap();
            for &x in &component {
                rank[x] = (level[x].unwrap() - base) as u32;
            }
        }
        Some(rank)
    }

    /// Connected components of the Hasse diagram, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in self.upper[x].iter().chain(&self.lower[x]) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn mobius(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        if !self.leq(x, y) {
            return Err(self.not_leq(x, y));
        }
        Ok(self.mobius_row(x)[y])
    }

    pub fn mobius_ids(&self, x: &str, y: &str) -> Result<i64, PosetError> {
        self.mobius(self.index_of(x)?, self.index_of(y)?)
    }

    /// `mu(x, z)` for every `z`; zero outside the up-set of `x`.
    fn mobius_row(&self, x: usize) -> &[i64] {
        self.mobius_rows[x].get_or_init(|| {
            let mut row = vec![0i64; self.len()];
            row[x] = 1;
            for &y in &self.linear_extension {
                if y == x || !self.leq(x, y) {
                    continue;
                }
                let mut between = self.up[x].clone();
                between.intersect_with(&self.down[y]);
                let sum: i64 = between.ones().filter(|&z| z != y).map(|z| row[z]).sum();
                row[y] = -sum;
            }
            row
        })
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.ids.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| [self.ids[a].clone(), self.ids[b].clone()])
                .collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, PosetError> {
        let pairs: Vec<(&str, &str)> =
            json.covers.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let elements: Vec<&str> = json.elements.iter().map(String::as_str).collect();
        Poset::build(&elements, &pairs, RelationMode::Covers)
    }

    /// Graphviz rendering: edges point upward along covers, and graded posets
    /// get one `rank=same` group per level.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for id in &self.ids {
            out.push_str(&format!("  \"{}\";\n", escape(id)));
        }
        if let Some(rank) = &self.rank {
            let mut levels: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (x, &r) in rank.iter().enumerate() {
                levels.entry(r).or_default().push(x);
            }
            for (r, xs) in levels {
                let names: Vec<String> =
                    xs.iter().map(|&x| format!("\"{}\"", escape(&self.ids[x]))).collect();
                out.push_str(&format!("  {{ rank=same; /* {} */ {}; }}\n", r, names.join("; ")));
            }
        }
        for &(a, b) in &self.covers {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                escape(&self.ids[a]),
                escape(&self.ids[b])
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn identity_relation(n: usize) -> Vec<FixedBitSet> {
    (0..n)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(i);
            row
        })
        .collect()
}

/// Replace `rel` by `rel ∘ rel` until it stops growing; `rel` must be reflexive.
fn close_by_squaring(rel: &mut [FixedBitSet]) {
    loop {
        let mut changed = false;
        let snapshot = rel.to_vec();
        for row in rel.iter_mut() {
            let before = row.count_ones(..);
            let mut next = row.clone();
            for j in row.ones() {
                next.union_with(&snapshot[j]);
            }
            if next.count_ones(..) != before {
                changed = true;
            }
            *row = next;
        }
        if !changed {
            break;
        }
    }
}

/// Poset wire format: `{"elements": [...], "covers": [["a","b"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

/// A bijection on the elements of some poset, stored by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosetMap {
    image: Vec<usize>,
}

impl PosetMap {
    pub fn identity(n: usize) -> Self {
        PosetMap { image: (0..n).collect() }
    }

    /// Wraps `image` without checking anything beyond length.
    pub fn from_images(image: Vec<usize>) -> Self {
        PosetMap { image }
    }

    /// Build a validated automorphism of `poset`.
    pub fn automorphism(poset: &Poset, image: Vec<usize>) -> Result<Self, PosetError> {
        let map = PosetMap { image };
        if !is_automorphism(poset, &map) {
            return Err(PosetError::NotAutomorphism);
        }
        Ok(map)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        PosetMap { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PosetMap) -> Self {
        PosetMap {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.image.len()).filter(|&x| self.image[x] == x).collect()
    }

    /// Lengths of the cycles of the permutation, in order of first element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Multiplicative order, as the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        self.cycle_lengths()
            .into_iter()
            .fold(1, num_integer::lcm)
    }

    pub fn to_json(&self, poset: &Poset) -> MapJson {
        MapJson {
            map: self
                .image
                .iter()
                .enumerate()
                .map(|(i, &x)| (poset.id(i).to_string(), poset.id(x).to_string()))
                .collect(),
        }
    }

    /// Reads a map; missing ids are fixed.
    pub fn from_json(poset: &Poset, json: &MapJson) -> Result<Self, PosetError> {
        let mut image: Vec<usize> = (0..poset.len()).collect();
        for (k, v) in &json.map {
            image[poset.index_of(k)?] = poset.index_of(v)?;
        }
        Ok(PosetMap { image })
    }
}

/// Map wire format: `{"map": {"a": "b", ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub map: BTreeMap<String, String>,
}

pub fn is_automorphism(poset: &Poset, map: &PosetMap) -> bool {
    let n = poset.len();
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in map.images() {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    (0..n).all(|x| (0..n).all(|y| poset.leq(x, y) == poset.leq(map.apply(x), map.apply(y))))
}

/// Invariants an order isomorphism must preserve, used to prune the search.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Signature {
    down_degree: usize,
    up_degree: usize,
    rank: Option<u32>,
    below: usize,
    above: usize,
}

fn signatures(p: &Poset) -> Vec<Signature> {
    (0..p.len())
        .map(|x| Signature {
            down_degree: p.lower[x].len(),
            up_degree: p.upper[x].len(),
            rank: p.rank.as_ref().map(|r| r[x]),
            below: p.down[x].count_ones(..),
            above: p.up[x].count_ones(..),
        })
        .collect()
}

/// Sorted multiset of per-element signatures; equal for isomorphic posets.
pub fn invariant_key(p: &Poset) -> Vec<(usize, usize, Option<u32>, usize, usize)> {
    let mut key: Vec<_> = signatures(p)
        .into_iter()
        .map(|s| (s.down_degree, s.up_degree, s.rank, s.below, s.above))
        .collect();
    key.sort_unstable();
    key
}

struct IsoSearch<'a> {
    p: &'a Poset,
    q: &'a Poset,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
    limit: usize,
    found: Vec<PosetMap>,
}

impl IsoSearch<'_> {
    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.found.push(PosetMap { image: self.image.clone() });
            return;
        }
        let x = self.order[depth];
        for ci in 0..self.candidates[x].len() {
            let y = self.candidates[x][ci];
            if self.used[y] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&a| {
                let b = self.image[a];
                self.p.leq(a, x) == self.q.leq(b, y) && self.p.leq(x, a) == self.q.leq(y, b)
            });
            if !consistent {
                continue;
            }
            self.image[x] = y;
            self.used[y] = true;
            self.run(depth + 1);
            self.used[y] = false;
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

fn isomorphisms(p: &Poset, q: &Poset, limit: usize) -> Vec<PosetMap> {
    if p.len() != q.len() || p.covers.len() != q.covers.len() {
        return Vec::new();
    }
    let sp = signatures(p);
    let mut sq = signatures(q);
    // Ranks are only comparable when both sides are graded.
    if p.rank.is_some() != q.rank.is_some() {
        return Vec::new();
    }
    if p.rank.is_none() {
        sq.iter_mut().for_each(|s| s.rank = None);
    }
    let candidates = sp
        .iter()
        .map(|s| (0..q.len()).filter(|&y| sq[y] == *s).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut search = IsoSearch {
        p,
        q,
        order: p.linear_extension.clone(),
        candidates,
        image: vec![0; p.len()],
        used: vec![false; q.len()],
        limit,
        found: Vec::new(),
    };
    search.run(0);
    search.found
}

/// Every order automorphism of `poset`; the identity is always first.
pub fn automorphisms(poset: &Poset) -> Vec<PosetMap> {
    let mut maps = isomorphisms(poset, poset, usize::MAX);
    maps.sort_by(|a, b| (!a.is_identity()).cmp(&!b.is_identity()).then_with(|| a.image.cmp(&b.image)));
    maps
}

/// An order isomorphism `p -> q`, if one exists.
pub fn are_isomorphic(p: &Poset, q: &Poset) -> Option<PosetMap> {
    isomorphisms(p, q, 1).pop()
}
