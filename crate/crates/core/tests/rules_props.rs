use curvebound::elimination::{
    genus_cap_defect0, rule_decomposable, rule_places_nonneg, rule_weil_interval, Witness,
};
use curvebound::engine::{best_upper_bound, BoundQuery};
use curvebound::hondatate::{admissible_elliptic_traces, rule_elliptic_product};
use curvebound::zetatypes::is_prime_u64;
use curvebound::{FieldContext, IntPolynomial, ZetaType};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn prime_powers(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&q| {
            let p = (2..=q).find(|d| q % d == 0).unwrap();
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            r == 1 && is_prime_u64(p)
        })
        .collect()
}

/// Fixed irreducible excess factors with their roots in closed form.
fn patterns() -> Vec<(Vec<i64>, Vec<f64>)> {
    let s5 = 5f64.sqrt();
    let c7: Vec<f64> = (1..=3)
        .map(|j| 4.0 * (j as f64 * std::f64::consts::PI / 7.0).cos().powi(2))
        .collect();
    vec![
        (vec![1, -3, 1], vec![(3.0 + s5) / 2.0, (3.0 - s5) / 2.0]),
        (vec![1, -4, 1], vec![2.0 + 3f64.sqrt(), 2.0 - 3f64.sqrt()]),
        (vec![2, -4, 1], vec![2.0 + 2f64.sqrt(), 2.0 - 2f64.sqrt()]),
        (vec![-1, 6, -5, 1], c7),
    ]
}

/// A random type with `r`-roots listed, allowing entries outside the Weil interval.
fn typed_roots() -> impl Strategy<Value = (u64, ZetaType, Vec<f64>)> {
    (
        prop::sample::select(prime_powers(200)),
        prop::collection::vec(0u64..1000, 0..=5),
        prop::collection::vec(0usize..4, 0..=2),
    )
        .prop_filter("nonempty", |(_, a, b)| !a.is_empty() || !b.is_empty())
        .prop_map(|(q, picks, pats)| {
            let ctx = FieldContext::new(q).unwrap();
            let span = 2 * ctx.m_i64() as u64 + 6;
            let table = patterns();
            let mut poly = IntPolynomial::one();
            let mut roots = Vec::new();
            for i in picks {
                let r = 1 + i % span;
                poly = &poly * &IntPolynomial::linear(&BigInt::from(r));
                roots.push(r as f64);
            }
            for k in pats {
                poly = &poly * &IntPolynomial::from_i64s(&table[k].0);
                roots.extend(&table[k].1);
            }
            (q, ZetaType::new(&poly).unwrap(), roots)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weil_interval_matches_floats((q, ty, roots) in typed_roots()) {
        let ctx = FieldContext::new(q).unwrap();
        let m = ctx.m_i64() as f64;
        let limit = 2.0 * (q as f64).sqrt();
        let margins: Vec<f64> = roots.iter().map(|r| (m + 1.0 - r).abs() - limit).collect();
        prop_assume!(margins.iter().all(|d| d.abs() > 1e-9));
        let outside = margins.iter().any(|&d| d > 0.0);
        prop_assert_eq!(rule_weil_interval(&ty, &ctx).is_eliminated(), outside);
    }

    #[test]
    fn partition_witnesses_verify_both_ways((_q, ty, _roots) in typed_roots()) {
        let v = rule_decomposable(&ty);
        if let Some(Witness::Partition(part)) = &v.witness {
            prop_assert!(part.verify());
            prop_assert!(part.swapped().verify());
            let product = part.i.iter().chain(&part.j).fold(IntPolynomial::one(), |acc, (f, k)| &acc * &f.pow(*k as usize));
            prop_assert_eq!(&product, ty.poly());
        } else {
            prop_assert!(!v.is_eliminated());
        }
    }

    #[test]
    fn single_orbit_types_are_not_decomposable(r in 1i64..12, k in 1usize..6, golden in any::<bool>()) {
        let base = if golden { IntPolynomial::from_i64s(&[1, -3, 1]) } else { IntPolynomial::linear(&BigInt::from(r)) };
        let ty = ZetaType::new(&base.pow(k)).unwrap();
        prop_assert!(!rule_decomposable(&ty).is_eliminated());
    }

    #[test]
    fn coprime_traces_never_hit_honda_tate((q, ty, _roots) in typed_roots()) {
        let ctx = FieldContext::new(q).unwrap();
        let p = BigInt::from(ctx.p());
        let c = ctx.m() + 1u32;
        let all_coprime = ty
            .orbits()
            .iter()
            .filter(|(o, _)| o.degree() == Some(1))
            .all(|(o, _)| !(-(&c + o.coeff(0))).is_multiple_of(&p));
        if all_coprime {
            prop_assert!(!rule_elliptic_product(&ty, &ctx).is_eliminated());
        }
    }
}

#[test]
fn defect0_cap_equals_second_place_count() {
    for q in prime_powers(1024) {
        let ctx = FieldContext::new(q).unwrap();
        let cap = genus_cap_defect0(&ctx);
        for g in 1..=50usize {
            let ty = ZetaType::defect_zero(g);
            let by_places = rule_places_nonneg(&ty, &ctx, 2).is_eliminated();
            assert_eq!(by_places, BigInt::from(g) > cap, "q={q} g={g}");
        }
    }
}

#[test]
fn admissible_traces_symmetric_and_contain_ordinary() {
    for q in prime_powers(1024) {
        let ctx = FieldContext::new(q).unwrap();
        let rule = admissible_elliptic_traces(&ctx);
        let all = rule.all();
        for t in &all {
            assert!(all.contains(&-t), "q={q} t={t}");
        }
        let bound = (4.0 * q as f64).sqrt().floor() as i64;
        for t in -bound..=bound {
            if t.rem_euclid(ctx.p() as i64) != 0 && t * t <= 4 * q as i64 {
                assert!(rule.is_admissible(&BigInt::from(t)), "q={q} t={t}");
            }
        }
    }
}

#[test]
fn near_weil_trace_inadmissible_over_powers_of_four() {
    for s in 2..=12u32 {
        let q = 1u64 << (2 * s);
        let ctx = FieldContext::new(q).unwrap();
        let t = BigInt::from(2u64 << s) - 2;
        assert!(!admissible_elliptic_traces(&ctx).is_admissible(&t), "q={q}");
        assert!(!admissible_elliptic_traces(&ctx).is_admissible(&-t), "q={q}");
    }
}

#[test]
fn fuhrmann_torres_toggle_is_inert_off_squares() {
    for q in [2u64, 3, 5, 8, 27, 32, 128] {
        for g in 1..=5usize {
            let on = best_upper_bound(&BoundQuery::new(q, g)).unwrap();
            let mut query = BoundQuery::new(q, g);
            query.options.rules.fuhrmann_torres = false;
            let off = best_upper_bound(&query).unwrap();
            assert_eq!(on.ladder, off.ladder, "q={q} g={g}");
        }
    }
}
