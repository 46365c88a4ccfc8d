//! The `check` subcommand: invariants of every module on seeded random elements.

use serde_json::json;

use vtree::format::parse_element;
use vtree::random::random_element;
use vtree::revealing::{dynamics, hyp_power_bound, is_elliptic, order, is_revealing, reveal};
use vtree::treespace::eventually_periodic_witness;
use vtree::{Element, Order, Radius, Tree, TypeGraph};

use crate::Outcome;

struct Tally {
    name: &'static str,
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }
}

/// A few points spread over the boundary: one witness per domain leaf.
fn probe_points(g: &Element) -> Vec<vtree::BoundaryPoint> {
    g.pair().domain_leaves().iter().map(|u| eventually_periodic_witness(g.tree(), u)).collect()
}

pub fn run_suite(seed: u64, samples: u64) -> Outcome {
    let trees: [(&str, Tree); 2] = [("T2", TypeGraph::binary()), ("T2,3", TypeGraph::regular(2, 3))];
    let mut group = Tally::new("group law");
    let mut confluence = Tally::new("reduction confluence");
    let mut round_trip = Tally::new("print/parse round trip");
    let mut revealing = Tally::new("revealing pairs");
    let mut dyn_split = Tally::new("stable/hyperbolic split");
    let mut elliptic = Tally::new("ellipticity and order");
    let mut clopen = Tally::new("clopen algebra");
    for (label, tree) in &trees {
        for i in 0..samples {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i * 3);
            let draw = |k: u64| random_element(tree, s + k, 4).expect("binary-type trees always admit pairs");
            let (a, b, c) = (draw(0), draw(1), draw(2));
            let ab = a.compose(&b).unwrap();
            group.record(ab.compose(&c).unwrap() == a.compose(&b.compose(&c).unwrap()).unwrap(), || {
                format!("{label} seed {s}: associativity")
            });
            group.record(a.compose(&a.inverse()).unwrap().is_identity(), || format!("{label} seed {s}: inverse"));
            for x in probe_points(&b) {
                group.record(ab.apply_point(&x) == a.apply_point(&b.apply_point(&x)), || {
                    format!("{label} seed {s}: action at {x}")
                });
            }
            for u in a.pair().domain_leaves() {
                let expanded = a.expand(&u).unwrap();
                confluence.record(Element::new(expanded) == a, || format!("{label} seed {s}: expand at {u}"));
            }
            round_trip.record(parse_element(tree, &a.to_string()).as_ref() == Ok(&a), || {
                format!("{label} seed {s}: {a}")
            });
            let rp = reveal(&a);
            revealing.record(is_revealing(&rp.pair) && rp.element() == a, || format!("{label} seed {s}: {a}"));
            let d = dynamics(&a);
            let image = a.apply_clopen(&d.u).unwrap();
            dyn_split.record(image == d.u && d.u.complement() == d.v, || format!("{label} seed {s}: U not invariant"));
            dyn_split.record(a.pow(d.iso_power as i64).apply_clopen(&d.u).unwrap() == d.u, || {
                format!("{label} seed {s}: iso power")
            });
            if !d.v.is_empty() {
                let ok = hyp_power_bound(&a, &d, Radius(2)).is_ok_and(|cert| cert.check(&a) && cert.verify_at(&a, cert.n));
                dyn_split.record(ok, || format!("{label} seed {s}: power bound"));
            }
            let ord = order(&a);
            let ell = is_elliptic(&a);
            elliptic.record(
                match ord {
                    Order::Finite(n) => ell && a.pow(n as i64).is_identity(),
                    Order::Infinite => !ell,
                },
                || format!("{label} seed {s}: {a}"),
            );
            let (u, v) = (d.u.clone(), a.apply_clopen(&d.v).unwrap());
            let lhs = u.union(&v).unwrap().complement();
            let rhs = u.complement().intersect(&v.complement()).unwrap();
            clopen.record(lhs == rhs && u.complement().complement() == u, || format!("{label} seed {s}: de Morgan"));
        }
    }
    let tallies = [group, confluence, round_trip, revealing, dyn_split, elliptic, clopen];
    let passed = tallies.iter().all(|t| t.failures.is_empty());
    let text = tallies
        .iter()
        .map(|t| format!("{} {} ({} cases)", if t.failures.is_empty() { "PASS" } else { "FAIL" }, t.name, t.cases))
        .collect::<Vec<_>>()
        .join("\n");
    let report = json!({
        "passed": passed,
        "seed": seed,
        "samples": samples,
        "checks": tallies.iter().map(|t| json!({
            "name": t.name,
            "cases": t.cases,
            "passed": t.failures.is_empty(),
            "failures": t.failures,
        })).collect::<Vec<_>>(),
    });
    let mut out = Outcome::ok(report, text);
    out.summary = format!("check: {}", if passed { "all invariants hold" } else { "violations found" });
    if passed {
        out
    } else {
        out.with_code(1)
    }
}
