use curvebound::engine::{audit, best_upper_bound, is_consistent, BoundQuery, BoundResult, RuleSet};
use num_bigint::BigInt;

const QUERIES: [(u64, usize); 12] = [
    (2, 1),
    (2, 3),
    (3, 2),
    (4, 3),
    (5, 4),
    (8, 3),
    (8, 4),
    (9, 3),
    (13, 2),
    (16, 4),
    (27, 3),
    (32, 3),
];

fn run(q: u64, g: usize, rules: RuleSet) -> BoundResult {
    let mut query = BoundQuery::new(q, g);
    query.options.rules = rules;
    best_upper_bound(&query).unwrap()
}

#[test]
fn every_elimination_reverifies() {
    for (q, g) in QUERIES {
        let r = run(q, g, RuleSet::default());
        assert!(r.resolved, "q={q} g={g}");
        assert!(is_consistent(&r), "q={q} g={g}");
        assert!(audit(&r), "q={q} g={g}");
        // every step above the bound is exhausted
        for step in &r.ladder[..r.ladder.len() - 1] {
            assert!(step.n > r.upper_bound && step.survivors().next().is_none());
        }
    }
}

#[test]
fn json_trace_independent_of_thread_count() {
    let trace = |threads: usize, q: u64, g: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&run(q, g, RuleSet::default())).unwrap())
    };
    for (q, g) in [(8, 4), (16, 4), (27, 3)] {
        let one = trace(1, q, g);
        assert_eq!(one, trace(4, q, g));
        assert_eq!(one, trace(1, q, g));
    }
}

#[test]
fn json_trace_schema() {
    let v: serde_json::Value = serde_json::to_value(run(8, 4, RuleSet::default())).unwrap();
    for key in ["query", "start", "ladder", "upper_bound", "resolved"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["start"]["source"], "SW");
    let step = &v["ladder"][0];
    assert_eq!(step["N"], 29);
    assert_eq!(step["k"], 0);
    let cand = &step["candidates"][0];
    for key in ["P_coeffs", "verdict", "rule", "witness"] {
        assert!(cand.get(key).is_some(), "{key}");
    }
    assert_eq!(cand["verdict"], "eliminated");
    assert_eq!(cand["rule"], "descent");
    assert_eq!(v["upper_bound"], 27);
}

#[test]
fn disabling_rules_never_lowers_the_bound() {
    let full = RuleSet::default();
    let ablations = [
        RuleSet { descent: false, ..full },
        RuleSet { honda_tate: false, ..full },
        RuleSet { fuhrmann_torres: false, ..full },
        RuleSet { explicit_formulae: false, ..full },
        RuleSet { descent: false, honda_tate: false, fuhrmann_torres: false, explicit_formulae: false },
    ];
    for (q, g) in QUERIES.iter().copied().chain([(9, 5), (16, 5)]) {
        let base = run(q, g, full).upper_bound;
        for rules in ablations {
            let r = run(q, g, rules);
            assert!(r.upper_bound >= base, "q={q} g={g} {rules:?}");
        }
    }
}

#[test]
fn known_curves_are_never_excluded() {
    // Klein quartic over F_8; supersingular elliptic curves meeting the Weil bound
    assert!(run(8, 3, RuleSet::default()).upper_bound >= BigInt::from(24));
    assert_eq!(run(2, 1, RuleSet::default()).upper_bound, BigInt::from(5));
    assert_eq!(run(4, 1, RuleSet::default()).upper_bound, BigInt::from(9));
    // the Hermitian curve over F_9 has 28 points and genus 3
    assert_eq!(run(9, 3, RuleSet::default()).upper_bound, BigInt::from(28));
}
