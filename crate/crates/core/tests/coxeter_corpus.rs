use zircon_core::corpus::{
    bounded_random_poset, enumerate_posets, random_poset, Manifest, UNLABELED_POSET_COUNTS,
};
use zircon_core::coxeter::{CoxeterSystem, CoxeterType, Side};
use zircon_core::matching::is_special;
use zircon_core::poset::{are_isomorphic, is_automorphism, Poset, RelationMode};
use zircon_core::zircon::{fixed_point_subposet, is_zircon};
use zircon_core::CoxeterError;

fn sys(spec: &str) -> CoxeterSystem {
    CoxeterSystem::new(spec.parse().unwrap()).unwrap()
}

/// Elements with `w² = e`, by direct multiplication in the table.
fn brute_involutions(w: &CoxeterSystem) -> Vec<usize> {
    (0..w.len()).filter(|&x| w.multiply(x, x) == 0).collect()
}

#[test]
fn lengths_are_cayley_distances() {
    for spec in ["A3", "B3", "D4", "I2:7"] {
        let w = sys(spec);
        let mut dist = vec![usize::MAX; w.len()];
        dist[0] = 0;
        let mut frontier = vec![0];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in frontier {
                for s in 0..w.rank() {
                    let y = w.right_mul(x, s);
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        for x in 0..w.len() {
            assert_eq!(w.length(x), dist[x], "{spec}");
            assert_eq!(w.element(x).word.len(), w.length(x));
            assert_eq!(w.evaluate(w.element(x).word.iter().copied()), x);
        }
    }
}

#[test]
fn reflections_count() {
    // |T| is the length of the longest element.
    for spec in ["A3", "B3", "D4", "I2:5"] {
        let w = sys(spec);
        assert_eq!(w.reflections().len(), w.length(w.longest_element()), "{spec}");
    }
}

#[test]
fn bruhat_is_graded_by_length() {
    for spec in ["A1", "A3", "B3", "D4", "I2:8"] {
        let w = sys(spec);
        let p = w.bruhat_poset();
        let rank = p.rank_function().expect("graded");
        for x in 0..w.len() {
            assert_eq!(rank[x] as usize, w.length(x), "{spec}");
        }
    }
}

#[test]
fn descent_matchings_of_b2_w0() {
    let w = sys("B2");
    let top = w.longest_element();
    let mut count = 0;
    for side in [Side::Left, Side::Right] {
        for s in w.descents(top, side) {
            let (ideal, m) = w.descent_matching(top, s, side).unwrap();
            assert!(is_special(&ideal, &m));
            count += 1;
        }
    }
    assert_eq!(count, 4);
    let a1 = sys("A1");
    let (ideal, m) = a1.descent_matching(1, 0, Side::Right).unwrap();
    assert_eq!(m.to_json(&ideal).pairs, vec![["e".to_string(), "s1".to_string()]]);
}

#[test]
fn twisted_maps_are_involutive_automorphisms() {
    for (spec, theta) in [("A2", "id"), ("A3", "id"), ("A3", "flip"), ("B2", "flip"), ("D4", "flip"), ("I2:6", "flip")] {
        let w = sys(spec);
        let t = w.parse_theta(theta).unwrap();
        let map = w.twisted_map(&t).unwrap();
        assert!(map.compose(&map).is_identity());
        assert!(is_automorphism(w.bruhat_poset(), &map));
        assert_eq!(map.fixed_points(), w.twisted_involutions(&t), "{spec} {theta}");
    }
}

#[test]
fn involution_anchors() {
    let a2 = sys("A2");
    let id = a2.parse_theta("id").unwrap();
    assert_eq!(a2.twisted_involutions(&id), brute_involutions(&a2));
    assert_eq!(a2.twisted_involutions(&id).len(), 4);
    let a3 = sys("A3");
    let id3 = a3.parse_theta("id").unwrap();
    assert_eq!(a3.twisted_involutions(&id3), brute_involutions(&a3));
    assert_eq!(brute_involutions(&a3).len(), 10);
    for spec in ["B3", "D4", "I2:5"] {
        let w = sys(spec);
        let inv = w.twisted_involutions(&w.parse_theta("id").unwrap());
        assert!(inv.contains(&0));
        assert!((0..w.rank()).all(|s| inv.contains(&w.generator(s))));
    }
}

#[test]
fn involutions_of_a2_form_a_diamond() {
    let a2 = sys("A2");
    let br = a2.twisted_involution_poset(&a2.parse_theta("id").unwrap());
    let diamond = Poset::from_indices(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers).unwrap();
    assert!(are_isomorphic(&br, &diamond).is_some());
}

#[test]
fn a3_flip_fixed_subgroup_is_b2() {
    let a3 = sys("A3");
    let flip = a3.flip().unwrap();
    let fix = a3.fix_subgroup_poset(&flip);
    let b2 = sys("B2");
    assert_eq!(fix.len(), 8);
    assert!(are_isomorphic(&fix, b2.bruhat_poset()).is_some());
    // Same set through the generic fixed-point machinery.
    let via_map = fixed_point_subposet(a3.bruhat_poset(), &flip.as_poset_map()).unwrap();
    assert_eq!(via_map, fix);
    assert!(is_zircon(&fix));
}

#[test]
fn invalid_inputs() {
    assert!(matches!("Z3".parse::<CoxeterType>(), Err(CoxeterError::InvalidType(_))));
    assert!(matches!(CoxeterSystem::with_cap(CoxeterType::B(6), 1000), Err(CoxeterError::OrderCap(..))));
    let b3 = sys("B3");
    assert!(b3.parse_theta("3,2,1").is_err());
    assert!(b3.parse_theta("2,1").is_err());
    assert!(b3.parse_theta("garbage").is_err());
}

#[test]
fn class_counts_up_to_six() {
    for n in 0..=6 {
        assert_eq!(enumerate_posets(n, true).unwrap().len(), UNLABELED_POSET_COUNTS[n], "n = {n}");
    }
}

#[test]
fn random_poset_golden() {
    let p = random_poset(8, 42, 0.3).unwrap();
    let expect = [(0, 5), (1, 4), (2, 5), (2, 7), (3, 5), (4, 6), (4, 7), (5, 6)];
    assert_eq!(p.covers(), &expect);
    assert_eq!(random_poset(8, 42, 0.3).unwrap(), p);
    assert_ne!(random_poset(8, 43, 0.3).unwrap(), p);
    let b = bounded_random_poset(10, 42, 0.3).unwrap();
    assert_eq!(b.len(), 10);
    assert_eq!(b.bounds(), Some((0, 9)));
}

#[test]
fn manifest_corpus_sizes() {
    let m = Manifest::Exhaustive { max_n: 4 };
    assert_eq!(m.corpus().unwrap().len(), 1 + 2 + 5 + 16);
    assert!(Manifest::Exhaustive { max_n: 9 }.corpus().is_err());
}
