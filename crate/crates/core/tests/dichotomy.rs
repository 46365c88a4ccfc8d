use vtree::alternative::{dichotomy, free_group_smoke, Verdict};
use vtree::format::parse_generating_set;
use vtree::random::random_element;
use vtree::{Budgets, GeneratingSet, TypeGraph};

fn assert_verified(set: &GeneratingSet, label: &str) -> &'static str {
    let r = dichotomy(set, &Budgets::default());
    match &r.verdict {
        Verdict::Undecided(reason) => panic!("{label}: undecided: {reason}"),
        Verdict::PingPong(w) => assert!(free_group_smoke(&w.g, &w.h, 4), "{label}"),
        Verdict::FiniteOrbit(o) => assert!(!o.points.is_empty(), "{label}"),
    }
    assert!(r.verify(set), "{label}: witness does not re-verify");
    r.verdict_name()
}

#[test]
fn builtin_families_on_other_trees() {
    for (d, k) in [(2, 3), (3, 3), (3, 2), (2, 1)] {
        let t = TypeGraph::regular(d, k);
        let set = parse_generating_set(&t, "builtin").unwrap();
        let name = assert_verified(&set, &format!("T_{d},{k}"));
        // on T_3 every built-in generator fixes the rightmost end
        if d != k {
            assert_eq!(name, "PingPong", "T_{d},{k}");
        }
    }
}

#[test]
fn random_two_generator_subgroups() {
    let t = TypeGraph::binary();
    for s in 0..12 {
        let a = random_element(&t, 2 * s, 3).unwrap();
        let b = random_element(&t, 2 * s + 1, 3).unwrap();
        let set = GeneratingSet::from_elements(vec![a, b]).unwrap();
        assert_verified(&set, &format!("seed {s}"));
    }
}

#[test]
fn reports_are_deterministic() {
    let t = TypeGraph::binary();
    let set = parse_generating_set(&t, "builtin").unwrap();
    let a = dichotomy(&set, &Budgets::default()).to_json(&set).to_string();
    let b = dichotomy(&set, &Budgets::default()).to_json(&set).to_string();
    assert_eq!(a, b);
}

#[test]
fn tiny_budgets_leave_the_question_open() {
    let t = TypeGraph::binary();
    let set = parse_generating_set(&t, "builtin").unwrap();
    let b = Budgets { word_length: 0, orbit_size: 1, expansion_depth: 0, dovetail_steps: 1 };
    let r = dichotomy(&set, &b);
    assert_eq!(r.verdict_name(), "Undecided");
    assert!(!r.verify(&set));
}
