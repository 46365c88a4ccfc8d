use proptest::prelude::*;

use vtree::alternative::{free_group_smoke, proximal_contraction, verify_pingpong, PingPongWitness};
use vtree::format::parse_element;
use vtree::random::random_element;
use vtree::revealing::{dynamics, hyp_power_bound, is_elliptic, is_revealing, order, reveal_bfs, reveal_rolling};
use vtree::subgroup::{Letter, Word};
use vtree::treespace::visual_distance;
use vtree::{Address, BoundaryPoint, ClopenSet, Element, GeneratingSet, Order, Radius, Tree, TypeGraph, VisualDistance};

fn tree_for(which: bool) -> Tree {
    if which {
        TypeGraph::binary()
    } else {
        TypeGraph::regular(2, 3)
    }
}

/// A point of the tree from arbitrary digit material, folded into range.
fn point_in(tree: &Tree, below: &Address, prefix: &[u8], cycle: &[u8]) -> BoundaryPoint {
    // binary below the root type of either tree, so digits 0/1 always exist
    let fold = |v: &[u8]| v.iter().map(|d| d % 2).collect::<Vec<u8>>();
    let mut p = below.digits().to_vec();
    p.extend(fold(prefix));
    let x = BoundaryPoint::new(p, fold(cycle));
    x.validate(tree).expect("binary digits stay inside the tree");
    x
}

fn balls(tree: &Tree, raw: &[Vec<u8>]) -> ClopenSet {
    let addrs: Vec<Address> =
        raw.iter().map(|v| Address::from_digits(v.iter().map(|d| d % 2).collect())).filter(|a| tree.contains(a)).collect();
    ClopenSet::from_balls(tree, addrs).unwrap()
}

fn digits() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 0..5)
}

fn cycle() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn group_axioms(binary in any::<bool>(), s in 0u64..10_000) {
        let t = tree_for(binary);
        let a = random_element(&t, s, 5).unwrap();
        let b = random_element(&t, s + 1, 5).unwrap();
        let c = random_element(&t, s + 2, 5).unwrap();
        let id = Element::identity(&t);
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert_eq!(a.compose(&id).unwrap(), a.clone());
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.compose(&b).unwrap().inverse(), b.inverse().compose(&a.inverse()).unwrap());
    }

    #[test]
    fn action_is_a_homomorphism(s in 0u64..10_000, pre in digits(), cyc in cycle()) {
        let t = TypeGraph::binary();
        let a = random_element(&t, s, 4).unwrap();
        let b = random_element(&t, s + 7, 4).unwrap();
        let x = point_in(&t, &Address::root(), &pre, &cyc);
        prop_assert_eq!(a.compose(&b).unwrap().apply_point(&x), a.apply_point(&b.apply_point(&x)));
        prop_assert_eq!(a.inverse().apply_point(&a.apply_point(&x)), x);
    }

    #[test]
    fn homothety_on_domain_balls(binary in any::<bool>(), s in 0u64..10_000, leaf in 0usize..64,
                                 p1 in digits(), c1 in cycle(), p2 in digits(), c2 in cycle()) {
        let t = tree_for(binary);
        let g = random_element(&t, s, 6).unwrap();
        let leaves = g.pair().domain_leaves();
        let u = &leaves[leaf % leaves.len()];
        let (x, y) = (point_in(&t, u, &p1, &c1), point_in(&t, u, &p2, &c2));
        let lambda = g.ratio_exponent(u).unwrap();
        prop_assert_eq!(visual_distance(&g.apply_point(&x), &g.apply_point(&y)), visual_distance(&x, &y).scale(lambda));
    }

    #[test]
    fn ultrametric(p in prop::array::uniform3(digits()), c in prop::array::uniform3(cycle())) {
        let t = TypeGraph::binary();
        let r = Address::root();
        let [x, y, z] = [0, 1, 2].map(|i| point_in(&t, &r, &p[i], &c[i]));
        let d = visual_distance;
        prop_assert!(d(&x, &z) <= d(&x, &y).max(d(&y, &z)));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &x), VisualDistance::Zero);
    }

    #[test]
    fn canonical_points(pre in digits(), cyc in cycle(), extra in 1usize..4) {
        let x = BoundaryPoint::new(pre.clone(), cyc.clone());
        let mut unrolled = pre.clone();
        unrolled.extend(&cyc);
        let mut doubled = cyc.clone();
        doubled.extend(&cyc);
        prop_assert_eq!(&BoundaryPoint::new(unrolled, cyc.repeat(extra)), &x);
        prop_assert_eq!(&BoundaryPoint::new(pre.clone(), doubled), &x);
        prop_assert_eq!(x.to_string().parse::<BoundaryPoint>().unwrap(), x);
    }

    #[test]
    fn clopen_boolean_algebra(a in prop::collection::vec(digits(), 0..5), b in prop::collection::vec(digits(), 0..5),
                              pre in digits(), cyc in cycle()) {
        let t = TypeGraph::binary();
        let (a, b) = (balls(&t, &a), balls(&t, &b));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&b).unwrap().complement(), a.complement().intersect(&b.complement()).unwrap());
        prop_assert!(a.intersect(&b).unwrap().is_subset(&a).unwrap());
        prop_assert!(a.is_disjoint(&a.complement()).unwrap());
        prop_assert!(a.union(&a.complement()).unwrap().is_all());
        let x = point_in(&t, &Address::root(), &pre, &cyc);
        prop_assert_eq!(a.union(&b).unwrap().contains_point(&x), a.contains_point(&x) || b.contains_point(&x));
    }

    #[test]
    fn images_of_clopen_sets(s in 0u64..10_000, a in prop::collection::vec(digits(), 0..5), pre in digits(), cyc in cycle()) {
        let t = TypeGraph::binary();
        let g = random_element(&t, s, 5).unwrap();
        let c = balls(&t, &a);
        let img = g.apply_clopen(&c).unwrap();
        let x = point_in(&t, &Address::root(), &pre, &cyc);
        prop_assert_eq!(img.contains_point(&g.apply_point(&x)), c.contains_point(&x));
        prop_assert_eq!(g.inverse().apply_clopen(&img).unwrap(), c);
    }

    #[test]
    fn print_parse_round_trip(binary in any::<bool>(), s in 0u64..10_000) {
        let t = tree_for(binary);
        let g = random_element(&t, s, 6).unwrap();
        prop_assert_eq!(parse_element(&t, &g.to_string()).unwrap(), g);
    }

    #[test]
    fn both_strategies_reveal_the_same_element(s in 0u64..10_000) {
        let t = TypeGraph::binary();
        let g = random_element(&t, s, 4).unwrap();
        let a = reveal_rolling(&g, 256).unwrap();
        let b = reveal_bfs(&g, 1 << 20).unwrap();
        prop_assert!(is_revealing(&a.pair) && is_revealing(&b.pair));
        prop_assert_eq!(a.element(), g.clone());
        prop_assert_eq!(b.element(), g);
    }

    #[test]
    fn stable_and_hyperbolic_parts(binary in any::<bool>(), s in 0u64..10_000) {
        let t = tree_for(binary);
        let g = random_element(&t, s, 5).unwrap();
        let d = dynamics(&g);
        prop_assert_eq!(g.apply_clopen(&d.u).unwrap(), d.u.clone());
        prop_assert_eq!(g.pow(d.iso_power as i64).apply_clopen(&d.u).unwrap(), d.u.clone());
        for x in d.per_hyp() {
            prop_assert!(d.v.contains_point(&x));
        }
        prop_assert_eq!(d.v.is_empty(), is_elliptic(&g));
        if !d.v.is_empty() {
            let cert = hyp_power_bound(&g, &d, Radius(3)).unwrap();
            prop_assert!(cert.check(&g));
            for k in cert.n..cert.n + 3 {
                prop_assert!(cert.verify_at(&g, k));
            }
        }
    }

    #[test]
    fn order_matches_powers(binary in any::<bool>(), s in 0u64..10_000) {
        let t = tree_for(binary);
        let g = random_element(&t, s, 4).unwrap();
        match order(&g) {
            Order::Finite(n) => {
                prop_assert!(g.pow(n as i64).is_identity());
                prop_assert!((1..n).all(|k| !g.pow(k as i64).is_identity()));
            }
            Order::Infinite => prop_assert!(!is_elliptic(&g)),
        }
    }

    #[test]
    fn contraction_from_a_single_hyperbolic_element(s in 0u64..10_000, m in 0u32..4) {
        let t = TypeGraph::binary();
        let g = random_element(&t, s, 4).unwrap();
        prop_assume!(dynamics(&g).u.is_empty());
        let c = proximal_contraction(&[g], Radius(m)).unwrap();
        prop_assert!(c.verify());
    }

    #[test]
    fn words_evaluate_homomorphically(w1 in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
                                      w2 in prop::collection::vec((0usize..4, any::<bool>()), 0..6)) {
        let t = TypeGraph::binary();
        let set = vtree::format::parse_generating_set(&t, "builtin").unwrap();
        let word = |v: &[(usize, bool)]| Word(v.iter().map(|&(generator, inverse)| Letter { generator, inverse }).collect());
        let (a, b) = (word(&w1), word(&w2));
        prop_assert_eq!(a.then(&b).evaluate(&set), a.evaluate(&set).compose(&b.evaluate(&set)).unwrap());
        prop_assert!(a.then(&a.inverse()).evaluate(&set).is_identity());
        prop_assert_eq!(Word::parse(&a.render(set.names()), set.names()).unwrap().evaluate(&set), a.evaluate(&set));
    }
}

#[test]
fn tampered_pingpong_witnesses_are_rejected() {
    let t = TypeGraph::binary();
    let set: GeneratingSet = vtree::format::parse_generating_set(&t, "builtin").unwrap();
    let w: PingPongWitness = vtree::alternative::build_pingpong(&set, &Default::default()).unwrap();
    assert!(verify_pingpong(&w).is_ok());
    assert!(free_group_smoke(&w.g, &w.h, 6));
    let mut swapped = w.clone();
    std::mem::swap(&mut swapped.u1, &mut swapped.v1);
    assert!(verify_pingpong(&swapped).is_err());
    let mut shrunk = w.clone();
    shrunk.v2 = ClopenSet::empty(&t);
    assert!(verify_pingpong(&shrunk).is_err());
}
