use std::collections::BTreeSet;

use proptest::prelude::*;
use zircon_core::corpus::{enumerate_matchings, exhaustive_corpus};
use zircon_core::coxeter::{CoxeterSystem, CoxeterType, Side};
use zircon_core::matching::{
    enumerate_special_matchings, is_special, special_violation, verify_lifting, Matching,
    DEFAULT_MATCHING_CAP,
};
use zircon_core::poset::{are_isomorphic, automorphisms, Poset, PosetMap, RelationMode};
use zircon_core::zircon::*;

struct Hexagon {
    w: CoxeterSystem,
    p: Poset,
}

impl Hexagon {
    fn new() -> Self {
        let w = CoxeterSystem::new(CoxeterType::A(2)).unwrap();
        let p = w.bruhat_poset().clone();
        Hexagon { w, p }
    }

    fn ix(&self, s: &str) -> usize {
        self.p.index_of(s).unwrap()
    }

    /// `x ↦ x s` on the whole group.
    fn right_mult(&self, s: usize) -> Matching {
        let partner = (0..self.w.len()).map(|x| self.w.right_mul(x, s)).collect();
        Matching::new(&self.p, partner).unwrap()
    }

    fn flip(&self) -> PosetMap {
        let theta = self.w.flip().unwrap();
        PosetMap::automorphism(&self.p, theta.as_poset_map().images().to_vec()).unwrap()
    }
}

fn diamond() -> Poset {
    Poset::from_indices(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers).unwrap()
}

#[test]
fn hexagon_right_multiplication_is_special() {
    let h = Hexagon::new();
    let m = h.right_mult(0);
    assert!(is_special(&h.p, &m));
    assert_eq!(h.p.covers().len(), 8);
    assert_eq!(verify_lifting(&h.p, &m), Ok(None));
    // Agrees with the descent matching on the ideal below w0 (= the whole poset).
    let (ideal, dm) = h.w.descent_matching(h.w.longest_element(), 0, Side::Right).unwrap();
    assert_eq!(ideal, h.p);
    assert_eq!(dm, m);
}

#[test]
fn n_poset_witness() {
    let n = Poset::build(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "d")], RelationMode::Covers).unwrap();
    let m = Matching::from_pairs(&n, &[("a", "c"), ("b", "d")]).unwrap();
    let (p, q) = special_violation(&n, &m).unwrap();
    assert_eq!((n.id(p), n.id(q)), ("a", "d"));
}

#[test]
fn diamond_enumeration_matches_brute_force() {
    let d = diamond();
    let all = enumerate_matchings(&d);
    assert_eq!(all.len(), 2);
    assert!(all.iter().all(|m| is_special(&d, m)));
    let found = enumerate_special_matchings(&d, DEFAULT_MATCHING_CAP).matchings;
    assert_eq!(found.iter().collect::<BTreeSet<_>>(), all.iter().collect::<BTreeSet<_>>());
}

#[test]
fn enumeration_equals_filtered_brute_force_on_corpus() {
    for (name, p) in exhaustive_corpus(6).unwrap() {
        let e = enumerate_special_matchings(&p, DEFAULT_MATCHING_CAP);
        assert!(!e.truncated);
        let fast: BTreeSet<_> = e.matchings.iter().cloned().collect();
        assert_eq!(fast.len(), e.matchings.len(), "{name}: duplicates");
        let brute: BTreeSet<_> = enumerate_matchings(&p).into_iter().filter(|m| is_special(&p, m)).collect();
        assert_eq!(fast, brute, "{name}");
        for m in &e.matchings {
            assert_eq!(verify_lifting(&p, m), Ok(None), "{name}");
        }
    }
}

#[test]
fn specialness_is_invariant_under_automorphisms() {
    for (name, p) in exhaustive_corpus(6).unwrap() {
        let auts = automorphisms(&p);
        for m in enumerate_matchings(&p) {
            for f in &auts {
                assert_eq!(is_special(&p, &m), is_special(&p, &m.conjugate(f)), "{name}");
            }
        }
    }
}

#[test]
fn hexagon_zircon_definitions() {
    let h = Hexagon::new();
    assert!(is_zircon(&h.p));
    assert!(is_zircon_ranked(&h.p));
    assert!(definitions_agree(&h.p));
    let n = Poset::from_indices(4, &[(0, 2), (0, 3), (1, 3)], RelationMode::Covers).unwrap();
    assert!(!is_zircon(&n) && !is_zircon_ranked(&n) && definitions_agree(&n));
}

#[test]
fn hexagon_transform_and_family() {
    let h = Hexagon::new();
    let m1 = h.right_mult(0);
    let m2 = h.right_mult(1);
    let flip = h.flip();
    let t = transform_matching(&h.p, &m1, &flip).unwrap();
    assert_eq!(t, m2);
    let pairs: Vec<[String; 2]> = t.to_json(&h.p).pairs;
    let expect = [["e", "s2"], ["s1", "s1s2"], ["s1s2s1", "s2s1"]];
    assert_eq!(pairs, expect.map(|[a, b]| [a.to_string(), b.to_string()]));

    let family = matching_family(&h.p, &m1, &flip).unwrap();
    assert_eq!(family.order, 2);
    assert_eq!(family.members, vec![m2, m1.clone()]);
    assert_eq!(orbit_component(&h.p, &family, h.ix("e")).len(), 6);
    let all: Vec<usize> = (0..6).collect();
    assert_eq!(component_extrema(&h.p, &all).unwrap(), (h.ix("e"), h.ix("s1s2s1")));
    assert_eq!(greedy_descend(&h.p, &family, h.ix("s1s2s1"), Direction::Down), h.ix("e"));

    let id = matching_family(&h.p, &m1, &PosetMap::identity(6)).unwrap();
    assert_eq!(id.order, 1);
    assert_eq!(orbit_component(&h.p, &id, h.ix("s2")), vec![h.ix("s2"), h.ix("s2s1")]);
}

#[test]
fn hexagon_fixed_point_matching() {
    let h = Hexagon::new();
    let flip = h.flip();
    let sub = fixed_point_subposet(&h.p, &flip).unwrap();
    assert_eq!(sub.ids(), &["e", "s1s2s1"]);
    assert_eq!(sub.covers(), &[(0, 1)]);
    let r = fixed_point_matching(&h.p, &h.right_mult(0), &flip).unwrap();
    assert_eq!(r.matching.to_json(&r.subposet).pairs, vec![["e".to_string(), "s1s2s1".to_string()]]);
    assert_eq!(r.components.len(), 1);

    let r = fixed_point_matching(&h.p, &h.right_mult(0), &PosetMap::identity(6)).unwrap();
    assert_eq!(r.matching, h.right_mult(0));

    let report = serde_json::to_value(TripleReport::new(&h.p, &r)).unwrap();
    assert_eq!(report["order_N"], 1);
    assert_eq!(report["special"], true);
    assert!(report["witness"].is_null());
}

#[test]
fn diamond_fixed_point_matching_matches_chain() {
    let d = diamond();
    let m = Matching::from_pairs(&d, &[("0", "1"), ("2", "3")]).unwrap();
    let swap = PosetMap::automorphism(&d, vec![0, 2, 1, 3]).unwrap();
    let r = fixed_point_matching(&d, &m, &swap).unwrap();
    let chain = Poset::from_indices(2, &[(0, 1)], RelationMode::Covers).unwrap();
    assert!(are_isomorphic(&r.subposet, &chain).is_some());
    assert_eq!(r.matching.to_json(&r.subposet).pairs, vec![["0".to_string(), "3".to_string()]]);
}

/// Bounded corpus posets with their special matchings and automorphisms.
type Case = (String, Poset, Vec<Matching>, Vec<PosetMap>);

fn bounded_cases() -> Vec<Case> {
    exhaustive_corpus(6)
        .unwrap()
        .into_iter()
        .filter(|(_, p)| p.is_bounded())
        .filter_map(|(name, p)| {
            let ms = enumerate_special_matchings(&p, DEFAULT_MATCHING_CAP).matchings;
            if ms.is_empty() {
                return None;
            }
            let auts = automorphisms(&p);
            Some((name, p, ms, auts))
        })
        .collect()
}

#[test]
fn greedy_descent_ignores_matching_order() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    for (name, p, ms, auts) in bounded_cases() {
        for (mi, m) in ms.iter().enumerate() {
            for (ai, phi) in auts.iter().enumerate() {
                let family = matching_family(&p, m, phi).unwrap();
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64((mi * 131 + ai) as u64);
                let mut order: Vec<usize> = (1..=family.order).collect();
                for q in 0..p.len() {
                    let comp = orbit_component(&p, &family, q);
                    let (lo, hi) = component_extrema(&p, &comp).unwrap();
                    for _ in 0..20 {
                        order.shuffle(&mut rng);
                        assert_eq!(greedy_descend_with_order(&p, &family, q, Direction::Down, &order), lo, "{name}");
                        assert_eq!(greedy_descend_with_order(&p, &family, q, Direction::Up, &order), hi, "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn zircon_ideals_have_unique_minimum() {
    for (name, p) in exhaustive_corpus(6).unwrap() {
        if !is_zircon(&p) {
            continue;
        }
        for x in 0..p.len() {
            assert_eq!(p.principal_ideal(x).minimal_elements().len(), 1, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugated_special_matchings_stay_special(index in 0usize..1000) {
        static CASES: std::sync::OnceLock<Vec<Case>> = std::sync::OnceLock::new();
        let cases = CASES.get_or_init(bounded_cases);
        let (_, p, ms, auts) = &cases[index % cases.len()];
        for m in ms {
            for f in auts {
                prop_assert!(is_special(p, &transform_matching(p, m, f).unwrap()));
            }
        }
    }
}
