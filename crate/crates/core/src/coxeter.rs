//! Finite Coxeter groups of types A, B, D and I2(m) in concrete models,
//! their Bruhat orders, descent matchings and diagram automorphisms.
//!
//! Generators are numbered from 0 internally and labelled `s1, s2, ...`:
//!
//! * `A_n`: permutations of `n + 1` letters, `s_i = (i, i+1)`.
//! * `B_n`: signed permutations, `s1` negates the first letter and
//!   `s_{i+1} = (i, i+1)`.
//! * `D_n`: even-signed permutations, `s1 = (1, -2)(2, -1)` and
//!   `s_{i+1} = (i, i+1)`; `s1` and `s2` form the fork attached to `s3`.
//! * `I2(m)`: the dihedral group `{r^k f^e}` with `s1 = f`, `s2 = r f`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::CoxeterError;
use crate::matching::{special_violation, Matching};
use crate::poset::{is_automorphism, Poset, PosetMap, RelationMode};

pub const DEFAULT_ORDER_CAP: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    I2(usize),
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) => n,
            CoxeterType::I2(_) => 2,
        }
    }

    /// Group order from the closed formulas, `None` on overflow.
    pub fn group_order(self) -> Option<usize> {
        let factorial = |n: usize| (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        match self {
            CoxeterType::A(n) => factorial(n + 1),
            CoxeterType::B(n) => factorial(n)?.checked_mul(1usize.checked_shl(n as u32)?),
            CoxeterType::D(n) => factorial(n)?.checked_mul(1usize.checked_shl(n as u32 - 1)?),
            CoxeterType::I2(m) => m.checked_mul(2),
        }
    }

    /// Coxeter matrix in the generator numbering described at module level.
    pub fn coxeter_matrix(self) -> Vec<Vec<usize>> {
        let r = self.rank();
        let mut m = vec![vec![2; r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut set = |i: usize, j: usize, v: usize| {
            m[i][j] = v;
            m[j][i] = v;
        };
        match self {
            CoxeterType::A(n) => (1..n).for_each(|i| set(i - 1, i, 3)),
            CoxeterType::B(n) => {
                if n >= 2 {
                    set(0, 1, 4);
                }
                (2..n).for_each(|i| set(i - 1, i, 3));
            }
            CoxeterType::D(n) => {
                if n >= 3 {
                    set(0, 2, 3);
                }
                (2..n).for_each(|i| set(i - 1, i, 3));
            }
            CoxeterType::I2(k) => set(0, 1, k),
        }
        m
    }

    fn validate(self) -> Result<(), CoxeterError> {
        let ok = match self {
            CoxeterType::A(n) | CoxeterType::B(n) => n >= 1,
            CoxeterType::D(n) => n >= 2,
            CoxeterType::I2(m) => m >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(CoxeterError::InvalidType(self.to_string()))
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::I2(m) => write!(f, "I2:{m}"),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = CoxeterError;

    /// Accepts `A3`, `B3`, `D4` and `I2:7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoxeterError::InvalidType(s.to_string());
        let t = s.trim();
        let ty = if let Some(m) = t.strip_prefix("I2:") {
            CoxeterType::I2(m.parse().map_err(|_| bad())?)
        } else {
            let (head, n) = t.split_at(t.chars().next().ok_or_else(bad)?.len_utf8());
            let n: usize = n.parse().map_err(|_| bad())?;
            match head {
                "A" | "a" => CoxeterType::A(n),
                "B" | "b" => CoxeterType::B(n),
                "D" | "d" => CoxeterType::D(n),
                _ => return Err(bad()),
            }
        };
        ty.validate().map_err(|_| bad())?;
        Ok(ty)
    }
}

/// Concrete form of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Model {
    /// One-line notation of a permutation of `0..n`.
    Permutation(Vec<u8>),
    /// Window notation `[w(1), ..., w(n)]` of a signed permutation.
    Signed(Vec<i8>),
    /// `r^rotation f^reflection` in the dihedral group of order `2m`.
    Dihedral { rotation: usize, reflection: bool },
}

fn identity_model(ty: CoxeterType) -> Model {
    match ty {
        CoxeterType::A(n) => Model::Permutation((0..=n as u8).collect()),
        CoxeterType::B(n) | CoxeterType::D(n) => Model::Signed((1..=n as i8).collect()),
        CoxeterType::I2(_) => Model::Dihedral { rotation: 0, reflection: false },
    }
}

fn dihedral_mul(m: usize, a: (usize, bool), b: (usize, bool)) -> (usize, bool) {
    let rot = if a.1 { (a.0 + m - b.0) % m } else { (a.0 + b.0) % m };
    (rot, a.1 ^ b.1)
}

fn dihedral_generator(s: usize) -> (usize, bool) {
    (s, true)
}

/// Swap the letters at window positions `i` and `i + 1`.
fn swap_positions<T: Copy>(w: &mut [T], i: usize) {
    w.swap(i, i + 1);
}

/// `w·s`: acts on positions.
fn right_multiply(ty: CoxeterType, w: &Model, s: usize) -> Model {
    match (ty, w) {
        (CoxeterType::A(_), Model::Permutation(p)) => {
            let mut p = p.clone();
            swap_positions(&mut p, s);
            Model::Permutation(p)
        }
        (CoxeterType::B(_), Model::Signed(v)) => {
            let mut v = v.clone();
            if s == 0 {
                v[0] = -v[0];
            } else {
                swap_positions(&mut v, s - 1);
            }
            Model::Signed(v)
        }
        (CoxeterType::D(_), Model::Signed(v)) => {
            let mut v = v.clone();
            if s == 0 {
                let (a, b) = (v[0], v[1]);
                v[0] = -b;
                v[1] = -a;
            } else {
                swap_positions(&mut v, s - 1);
            }
            Model::Signed(v)
        }
        (CoxeterType::I2(m), Model::Dihedral { rotation, reflection }) => {
            let (r, e) = dihedral_mul(m, (*rotation, *reflection), dihedral_generator(s));
            Model::Dihedral { rotation: r, reflection: e }
        }
        _ => unreachable!("model does not match type"),
    }
}

/// `s·w`: acts on values.
fn left_multiply(ty: CoxeterType, w: &Model, s: usize) -> Model {
    match (ty, w) {
        (CoxeterType::A(_), Model::Permutation(p)) => Model::Permutation(
            p.iter()
                .map(|&v| match v as usize {
                    x if x == s => v + 1,
                    x if x == s + 1 => v - 1,
                    _ => v,
                })
                .collect(),
        ),
        (CoxeterType::B(_), Model::Signed(v)) => Model::Signed(
            v.iter()
                .map(|&x| {
                    if s == 0 {
                        if x.abs() == 1 {
                            -x
                        } else {
                            x
                        }
                    } else {
                        swap_value(x, s as i8)
                    }
                })
                .collect(),
        ),
        (CoxeterType::D(_), Model::Signed(v)) => Model::Signed(
            v.iter()
                .map(|&x| {
                    if s == 0 {
                        match x {
                            1 => -2,
                            -1 => 2,
                            2 => -1,
                            -2 => 1,
                            _ => x,
                        }
                    } else {
                        swap_value(x, s as i8)
                    }
                })
                .collect(),
        ),
        (CoxeterType::I2(m), Model::Dihedral { rotation, reflection }) => {
            let (r, e) = dihedral_mul(m, dihedral_generator(s), (*rotation, *reflection));
            Model::Dihedral { rotation: r, reflection: e }
        }
        _ => unreachable!("model does not match type"),
    }
}

/// Exchange the values `±i` and `±(i+1)`, keeping signs.
fn swap_value(x: i8, i: i8) -> i8 {
    let sign = x.signum();
    match x.abs() {
        a if a == i => sign * (i + 1),
        a if a == i + 1 => sign * i,
        _ => x,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub model: Model,
    pub length: usize,
    /// ShortLex-minimal reduced word, as 0-based generator indices.
    pub word: Vec<usize>,
}

impl GroupElement {
    /// `e`, or the reduced word such as `s1s2s1`.
    pub fn label(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word.iter().map(|s| format!("s{}", s + 1)).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A finite Coxeter system with its full element table.
///
/// Element indices follow ShortLex order of the reduced words, so index 0 is
/// the identity. The same indices are used by [`CoxeterSystem::bruhat_poset`].
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    kind: CoxeterType,
    matrix: Vec<Vec<usize>>,
    elements: Vec<GroupElement>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    reflections: Vec<usize>,
    bruhat: OnceLock<Poset>,
}

impl CoxeterSystem {
    pub fn new(kind: CoxeterType) -> Result<Self, CoxeterError> {
        Self::with_cap(kind, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(kind: CoxeterType, cap: usize) -> Result<Self, CoxeterError> {
        kind.validate()?;
        let expected = kind.group_order().unwrap_or(usize::MAX);
        if expected > cap {
            return Err(CoxeterError::OrderCap(expected, cap));
        }
        let rank = kind.rank();

        // Breadth-first search with generators tried in increasing order
        // discovers each element first through its ShortLex-minimal word.
        let identity = identity_model(kind);
        let mut index: HashMap<Model, usize> = HashMap::from([(identity.clone(), 0)]);
        let mut elements = vec![GroupElement { model: identity, length: 0, word: Vec::new() }];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            let mut row = vec![0; rank];
            for (s, slot) in row.iter_mut().enumerate() {
                let next = right_multiply(kind, &elements[w].model, s);
                *slot = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= cap {
                            return Err(CoxeterError::OrderCap(i + 1, cap));
                        }
                        let mut word = elements[w].word.clone();
                        word.push(s);
                        elements.push(GroupElement {
                            model: next.clone(),
                            length: elements[w].length + 1,
                            word,
                        });
                        index.insert(next, i);
                        queue.push_back(i);
                        i
                    }
                };
            }
            if right.len() <= w {
                right.resize(w + 1, Vec::new());
            }
            right[w] = row;
        }
        if elements.len() != expected {
            return Err(CoxeterError::Model(format!(
                "{kind} enumerated {} elements, expected {expected}",
                elements.len()
            )));
        }

        let mut left = vec![vec![0; rank]; elements.len()];
        for (w, el) in elements.iter().enumerate() {
            for (s, slot) in left[w].iter_mut().enumerate() {
                let m = left_multiply(kind, &el.model, s);
                *slot = *index
                    .get(&m)
                    .ok_or_else(|| CoxeterError::Model("left product left the table".into()))?;
            }
        }

        let mut sys = CoxeterSystem {
            kind,
            matrix: kind.coxeter_matrix(),
            elements,
            right,
            left,
            inverse: Vec::new(),
            reflections: Vec::new(),
            bruhat: OnceLock::new(),
        };
        sys.inverse = (0..sys.len())
            .map(|w| sys.evaluate(sys.elements[w].word.iter().rev().copied()))
            .collect();
        let mut reflections = BTreeSet::new();
        for w in 0..sys.len() {
            for s in 0..rank {
                reflections.insert(sys.multiply(sys.right[w][s], sys.inverse[w]));
            }
        }
        sys.reflections = reflections.into_iter().collect();
        sys.check_model()?;
        Ok(sys)
    }

    fn check_model(&self) -> Result<(), CoxeterError> {
        let rank = self.rank();
        for s in 0..rank {
            for t in 0..rank {
                let st = self.right[self.right[0][s]][t];
                let mut power = 0;
                let mut order = 0;
                for k in 1..=2 * self.len() {
                    power = self.multiply(power, st);
                    if power == 0 {
                        order = k;
                        break;
                    }
                }
                if order != self.matrix[s][t] {
                    return Err(CoxeterError::Model(format!(
                        "order of s{}s{} is {order}, matrix says {}",
                        s + 1,
                        t + 1,
                        self.matrix[s][t]
                    )));
                }
            }
        }
        for w in 0..self.len() {
            let expect = self.elements[w].length;
            for s in 0..rank {
                let (ws, sw) = (self.right[w][s], self.left[w][s]);
                for v in [ws, sw] {
                    if self.elements[v].length.abs_diff(expect) != 1 {
                        return Err(CoxeterError::Model("generator step changed length by != 1".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> CoxeterType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn coxeter_matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, w: usize) -> &GroupElement {
        &self.elements[w]
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn label(&self, w: usize) -> String {
        self.elements[w].label()
    }

    pub fn generator(&self, s: usize) -> usize {
        self.right[0][s]
    }

    pub fn longest_element(&self) -> usize {
        self.len() - 1
    }

    pub fn right_mul(&self, w: usize, s: usize) -> usize {
        self.right[w][s]
    }

    pub fn left_mul(&self, w: usize, s: usize) -> usize {
        self.left[w][s]
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    /// Reflections `w s w⁻¹`, as element indices.
    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    /// Product of generators, left to right.
    pub fn evaluate(&self, word: impl IntoIterator<Item = usize>) -> usize {
        word.into_iter().fold(0, |w, s| self.right[w][s])
    }

    pub fn multiply(&self, u: usize, v: usize) -> usize {
        self.elements[v].word.iter().fold(u, |w, &s| self.right[w][s])
    }

    /// Index of the element with the given label (`e` or `s1s2...`).
    pub fn find(&self, label: &str) -> Option<usize> {
        (0..self.len()).find(|&w| self.label(w) == label)
    }

    pub fn is_descent(&self, w: usize, s: usize, side: Side) -> bool {
        let v = match side {
            Side::Right => self.right[w][s],
            Side::Left => self.left[w][s],
        };
        self.length(v) < self.length(w)
    }

    pub fn descents(&self, w: usize, side: Side) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_descent(w, s, side)).collect()
    }

    /// Bruhat order: `v ⋖ w` when `v = w t` for a reflection `t` and
    /// `ℓ(v) = ℓ(w) - 1`. Element ids are reduced-word labels.
    pub fn bruhat_poset(&self) -> &Poset {
        self.bruhat.get_or_init(|| self.build_bruhat())
    }

    fn build_bruhat(&self) -> Poset {
        let mut covers = Vec::new();
        for w in 0..self.len() {
            for &t in &self.reflections {
                let v = self.multiply(w, t);
                if self.length(v) + 1 == self.length(w) {
                    covers.push((v, w));
                }
            }
        }
        let ids = (0..self.len()).map(|w| self.label(w)).collect();
        Poset::from_index_pairs(ids, &covers, RelationMode::Covers)
            .expect("reflection covers form a Hasse diagram")
    }

    /// The matching `x ↦ xs` (or `sx`) on the Bruhat ideal below `w`,
    /// checked to be special. Returns the ideal together with the matching.
    pub fn descent_matching(&self, w: usize, s: usize, side: Side) -> Result<(Poset, Matching), CoxeterError> {
        if !self.is_descent(w, s, side) {
            return Err(CoxeterError::NotDescent(s + 1, side.name(), self.label(w)));
        }
        self.descent_matching_in(self.bruhat_poset(), w, s, side)
    }

    /// As [`CoxeterSystem::descent_matching`], reusing a precomputed Bruhat poset.
    pub fn descent_matching_in(
        &self,
        bruhat: &Poset,
        w: usize,
        s: usize,
        side: Side,
    ) -> Result<(Poset, Matching), CoxeterError> {
        if !self.is_descent(w, s, side) {
            return Err(CoxeterError::NotDescent(s + 1, side.name(), self.label(w)));
        }
        let members: Vec<usize> = bruhat.down_set(w).ones().collect();
        let ideal = bruhat.induced_subposet(&members);
        let mut position = vec![usize::MAX; self.len()];
        for (i, &x) in members.iter().enumerate() {
            position[x] = i;
        }
        let mut partner = Vec::with_capacity(members.len());
        for &x in &members {
            let y = match side {
                Side::Right => self.right[x][s],
                Side::Left => self.left[x][s],
            };
            if position[y] == usize::MAX {
                return Err(CoxeterError::Model(format!(
                    "{} leaves the ideal below {}",
                    self.label(y),
                    self.label(w)
                )));
            }
            partner.push(position[y]);
        }
        let matching = Matching::new(&ideal, partner)?;
        if let Some((p, q)) = special_violation(&ideal, &matching) {
            return Err(crate::error::MatchingError::NotSpecial(
                ideal.id(p).to_string(),
                ideal.id(q).to_string(),
            )
            .into());
        }
        Ok((ideal, matching))
    }

    pub fn diagram_automorphism(&self, generator_map: Vec<usize>) -> Result<DiagramAutomorphism, CoxeterError> {
        DiagramAutomorphism::new(self, generator_map)
    }

    /// The non-trivial diagram involution of `A_n`, `D_n`, `B_2` or `I2(m)`.
    pub fn flip(&self) -> Result<DiagramAutomorphism, CoxeterError> {
        let r = self.rank();
        let map = match self.kind {
            CoxeterType::A(n) => (0..n).rev().collect(),
            CoxeterType::D(n) if n >= 2 => {
                let mut m: Vec<usize> = (0..n).collect();
                m.swap(0, 1);
                m
            }
            CoxeterType::B(2) | CoxeterType::I2(_) => vec![1, 0],
            _ => {
                return Err(CoxeterError::InvalidDiagramAutomorphism(format!(
                    "{} has no flip",
                    self.kind
                )))
            }
        };
        debug_assert_eq!(map.len(), r);
        self.diagram_automorphism(map)
    }

    /// Parses `id`, `flip`, or a 1-based image list such as `3,2,1`.
    pub fn parse_theta(&self, spec: &str) -> Result<DiagramAutomorphism, CoxeterError> {
        match spec.trim() {
            "id" => self.diagram_automorphism((0..self.rank()).collect()),
            "flip" => self.flip(),
            other => {
                let map = other
                    .split(',')
                    .map(|t| {
                        let t = t.trim();
                        t.strip_prefix('s')
                            .unwrap_or(t)
                            .parse::<usize>()
                            .ok()
                            .filter(|&k| k >= 1)
                            .map(|k| k - 1)
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| CoxeterError::InvalidDiagramAutomorphism(other.to_string()))?;
                self.diagram_automorphism(map)
            }
        }
    }

    /// `w ↦ θ(w⁻¹)`, checked to be an involutive automorphism of the Bruhat order.
    pub fn twisted_map(&self, theta: &DiagramAutomorphism) -> Result<PosetMap, CoxeterError> {
        let map = PosetMap::from_images(
            (0..self.len()).map(|w| theta.apply(self.inverse[w])).collect(),
        );
        if !map.compose(&map).is_identity() {
            return Err(CoxeterError::Model("twisted map is not an involution".into()));
        }
        if !is_automorphism(self.bruhat_poset(), &map) {
            return Err(CoxeterError::Model("twisted map is not a Bruhat automorphism".into()));
        }
        Ok(map)
    }

    /// `{w : θ(w) = w⁻¹}`, sorted by index.
    pub fn twisted_involutions(&self, theta: &DiagramAutomorphism) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| theta.apply(w) == self.inverse[w])
            .collect()
    }

    /// Bruhat order restricted to the twisted involutions.
    pub fn twisted_involution_poset(&self, theta: &DiagramAutomorphism) -> Poset {
        self.bruhat_poset().induced_subposet(&self.twisted_involutions(theta))
    }

    /// Bruhat order restricted to `{w : θ(w) = w}`.
    pub fn fix_subgroup_poset(&self, theta: &DiagramAutomorphism) -> Poset {
        let fixed: Vec<usize> = (0..self.len()).filter(|&w| theta.apply(w) == w).collect();
        self.bruhat_poset().induced_subposet(&fixed)
    }
}

/// An involutive permutation of the generators preserving the Coxeter matrix,
/// extended to the whole group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    generator_map: Vec<usize>,
    element_map: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(sys: &CoxeterSystem, generator_map: Vec<usize>) -> Result<Self, CoxeterError> {
        let r = sys.rank();
        let invalid = |why: String| CoxeterError::InvalidDiagramAutomorphism(why);
        if generator_map.len() != r || generator_map.iter().any(|&s| s >= r) {
            return Err(invalid(format!("expected a permutation of {r} generators")));
        }
        let mut seen = vec![false; r];
        for &s in &generator_map {
            if std::mem::replace(&mut seen[s], true) {
                return Err(invalid("not a permutation".into()));
            }
        }
        if (0..r).any(|s| generator_map[generator_map[s]] != s) {
            return Err(invalid("not involutive".into()));
        }
        let m = sys.coxeter_matrix();
        for s in 0..r {
            for t in 0..r {
                if m[generator_map[s]][generator_map[t]] != m[s][t] {
                    return Err(invalid(format!(
                        "m(s{}, s{}) is not preserved",
                        s + 1,
                        t + 1
                    )));
                }
            }
        }

        // Letter-wise action on the stored reduced words, then validated as a
        // homomorphism on every generator product.
        let element_map: Vec<usize> = sys
            .elements()
            .iter()
            .map(|el| sys.evaluate(el.word.iter().map(|&s| generator_map[s])))
            .collect();
        for w in 0..sys.len() {
            for s in 0..r {
                if element_map[sys.right_mul(w, s)] != sys.right_mul(element_map[w], generator_map[s]) {
                    return Err(CoxeterError::Model("diagram automorphism is not a homomorphism".into()));
                }
            }
        }
        Ok(DiagramAutomorphism { generator_map, element_map })
    }

    pub fn generator_map(&self) -> &[usize] {
        &self.generator_map
    }

    pub fn apply(&self, w: usize) -> usize {
        self.element_map[w]
    }

    pub fn is_identity(&self) -> bool {
        self.generator_map.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// The action on group elements as a map on the Bruhat poset.
    pub fn as_poset_map(&self) -> PosetMap {
        PosetMap::from_images(self.element_map.clone())
    }
}
