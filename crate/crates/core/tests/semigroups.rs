mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use normcore::catalog::catalog;
use normcore::semigroups::{ClosureStatus, Membership, RClassCertificate};
use normcore::{PermutationGroup, TransSemigroup, Transformation};

fn t(v: &[usize]) -> Transformation {
    Transformation::new(v).unwrap()
}

fn closure_set(s: &TransSemigroup) -> HashSet<Vec<usize>> {
    s.elements().iter().map(common::images).collect()
}

fn conjugates(g: &PermutationGroup, a: &Transformation) -> Vec<Transformation> {
    let set: HashSet<Transformation> = g.elements().iter().map(|h| a.conjugate_by(h)).collect();
    let mut v: Vec<Transformation> = set.into_iter().collect();
    v.sort_by_key(|x| x.encode());
    v
}

fn gens_strategy() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (2usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..n, n), 1..4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_matches_naive(gens in gens_strategy()) {
        let n = gens[0].len();
        let mut s = TransSemigroup::new(n, gens.iter().map(|g| t(g)).collect()).unwrap();
        prop_assert_eq!(s.closure(), ClosureStatus::Complete);
        prop_assert_eq!(closure_set(&s), common::semigroup(&gens));
    }

    #[test]
    fn closure_ignores_generator_order(gens in gens_strategy(), seed in any::<u64>()) {
        let n = gens[0].len();
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        let mut a = TransSemigroup::new(n, gens.iter().map(|g| t(g)).collect()).unwrap();
        let mut b = TransSemigroup::new(n, shuffled.iter().map(|g| t(g)).collect()).unwrap();
        a.closure();
        b.closure();
        prop_assert_eq!(closure_set(&a), closure_set(&b));
    }

    #[test]
    fn factorizations_replay(gens in gens_strategy()) {
        let n = gens[0].len();
        let mut s = TransSemigroup::new(n, gens.iter().map(|g| t(g)).collect()).unwrap();
        s.closure();
        for k in 0..s.len() {
            let word = s.factorization(k);
            prop_assert!(!word.is_empty());
            let mut x = s.generators()[word[0]];
            for &i in &word[1..] {
                x = x.then(&s.generators()[i]);
            }
            prop_assert_eq!(x, s.elements()[k]);
        }
    }

    #[test]
    fn membership_agrees_with_closure(gens in gens_strategy(), probe in prop::collection::vec(0usize..5, 5)) {
        let n = gens[0].len();
        let x: Vec<usize> = probe.iter().take(n).map(|&p| p % n).collect();
        let mut s = TransSemigroup::new(n, gens.iter().map(|g| t(g)).collect()).unwrap();
        let expected = if common::semigroup(&gens).contains(&x) { Membership::Member } else { Membership::NotMember };
        prop_assert_eq!(s.contains(&t(&x)).unwrap(), expected);
    }

    #[test]
    fn regularity_and_idempotents_match_brute_force(gens in gens_strategy()) {
        let n = gens[0].len();
        let naive = common::semigroup(&gens);
        let mut s = TransSemigroup::new(n, gens.iter().map(|g| t(g)).collect()).unwrap();
        let idempotents: HashSet<Vec<usize>> = s.idempotents().unwrap().iter().map(common::images).collect();
        let expected: HashSet<Vec<usize>> = naive.iter().filter(|e| common::then(e, e) == **e).cloned().collect();
        prop_assert_eq!(&idempotents, &expected);
        let regular = naive.iter().all(|x| naive.iter().any(|y| common::then(&common::then(x, y), x) == *x));
        prop_assert_eq!(s.is_regular().unwrap(), regular);
        let generated = common::semigroup(&expected.iter().cloned().collect::<Vec<_>>());
        prop_assert_eq!(s.is_idempotent_generated().unwrap(), !expected.is_empty() && generated == naive);
    }
}

#[test]
fn rank_pruned_layer_keeps_high_rank_elements() {
    let g = catalog("S4", 4).unwrap();
    let a = t(&[0, 0, 1, 2]);
    let gens = conjugates(&g, &a);
    let naive: Vec<Vec<usize>> = gens.iter().map(common::images).collect();
    let full = common::semigroup(&naive);
    let mut layer = TransSemigroup::new(4, gens).unwrap().with_min_rank(3);
    layer.closure();
    let expected: HashSet<Vec<usize>> = full.into_iter().filter(|x| common::rank(x) >= 3).collect();
    assert_eq!(closure_set(&layer), expected);
}

#[test]
fn cap_makes_membership_inconclusive() {
    let g = catalog("S5", 5).unwrap();
    let a = t(&[0, 0, 1, 2, 3]);
    let mut s = TransSemigroup::new(5, conjugates(&g, &a))
        .unwrap()
        .with_cap(20);
    assert_eq!(
        s.contains(&t(&[0, 0, 0, 0, 0])).unwrap(),
        Membership::Inconclusive
    );
    assert_eq!(s.closure(), ClosureStatus::CapExceeded);
}

#[test]
fn conjugate_closure_is_invariant_under_the_group() {
    for (label, n, a) in [
        ("PSL(2,5)", 6, vec![0, 0, 1, 2, 2, 3]),
        ("AGL(1,5)", 5, vec![0, 0, 2, 3, 0]),
        ("D10", 5, vec![0, 0, 0, 2, 1]),
    ] {
        let g = catalog(label, n).unwrap();
        let mut s = TransSemigroup::new(n, conjugates(&g, &t(&a))).unwrap();
        s.closure();
        let elements = closure_set(&s);
        for h in g.elements() {
            for x in s.elements() {
                assert!(
                    elements.contains(&common::images(&x.conjugate_by(h))),
                    "{label}"
                );
            }
        }
    }
}

/// Brute-force R-class of `a` in the semigroup: `x S^1 = a S^1`, which for
/// `x` in `a S^1` reduces to `a` in `x S^1`.
fn naive_r_class(a: &[usize], s: &HashSet<Vec<usize>>) -> HashSet<Vec<usize>> {
    let mut ideal: HashSet<Vec<usize>> = s.iter().map(|y| common::then(a, y)).collect();
    ideal.insert(a.to_vec());
    ideal
        .into_iter()
        .filter(|x| x == a || s.iter().any(|y| common::then(x, y) == a))
        .collect()
}

#[test]
fn r_class_certificate_matches_brute_force() {
    let cases: Vec<(&str, usize, Vec<usize>)> = vec![
        ("PSL(2,5)", 6, vec![0, 0, 0, 1, 1, 1]),
        ("PSL(2,5)", 6, vec![0, 1, 0, 1, 0, 1]),
        ("PSL(2,5)", 6, vec![0, 0, 0, 0, 0, 1]),
        ("PGL(2,5)", 6, vec![0, 0, 1, 2, 2, 3]),
        ("C5", 5, vec![0, 0, 2, 3, 0]),
        ("D10", 5, vec![0, 0, 0, 2, 1]),
        ("A4", 4, vec![0, 0, 1, 2]),
    ];
    for (label, n, a) in cases {
        let g = catalog(label, n).unwrap();
        let a = t(&a);
        let gens = conjugates(&g, &a);
        let naive_gens: Vec<Vec<usize>> = gens.iter().map(common::images).collect();
        let s = common::semigroup(&naive_gens);
        let expected = naive_r_class(&common::images(&a), &s);
        let cert = RClassCertificate::new(&gens, &a).unwrap();
        assert_eq!(cert.r_class_size(), expected.len(), "{label} {a}");
        for x in common::all_maps(n) {
            let tx = t(&x);
            assert_eq!(
                cert.in_r_class(&tx),
                expected.contains(&x),
                "{label} a={a} x={tx}"
            );
        }
        let orbit: HashSet<u32> = cert.strong_orbit().iter().map(|p| p.mask()).collect();
        let images: HashSet<u32> = expected.iter().map(|x| t(x).image_mask()).collect();
        assert_eq!(orbit, images, "{label}");
    }
}

#[test]
fn r_class_members_are_in_the_semigroup() {
    let g = catalog("PGL(2,5)", 6).unwrap();
    for a in [
        t(&[0, 0, 1, 1, 2, 2]),
        t(&[0, 1, 2, 3, 4, 4]),
        t(&[0, 0, 0, 1, 2, 3]),
    ] {
        let gens = conjugates(&g, &a);
        let cert = RClassCertificate::new(&gens, &a).unwrap();
        let mut s = TransSemigroup::new(6, gens).unwrap();
        for x in common::all_maps(6)
            .iter()
            .map(|x| t(x))
            .filter(|x| x.rank() == a.rank())
        {
            if cert.in_r_class(&x) {
                assert_eq!(s.contains(&x).unwrap(), Membership::Member, "{x}");
            }
        }
    }
}
