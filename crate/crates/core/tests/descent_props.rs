use std::collections::BTreeSet;

use curvebound::descent::{dioph_scan, find_descent, QuadInt};
use curvebound::zetatypes::is_prime_u64;
use curvebound::FieldContext;
use num_bigint::BigInt;
use num_traits::{Pow, Signed};

fn fields(p_max: u64, e_max: u32) -> Vec<(u64, u32)> {
    (2..=p_max)
        .filter(|&p| is_prime_u64(p))
        .flat_map(|p| (3..=e_max).step_by(2).map(move |e| (p, e)))
        .collect()
}

#[test]
fn certificate_identities() {
    let mut found = 0;
    for (p, e) in fields(50, 13) {
        let ctx = FieldContext::from_prime_power(p, e).unwrap();
        let Some(cert) = find_descent(&ctx).certificate().cloned() else {
            continue;
        };
        found += 1;
        let s = &cert.sigma;
        assert_eq!(s * &s.conj(), QuadInt::from_integer(BigInt::from(p), s.d.clone()));
        let se = s.pow(e);
        assert!(se == cert.pi || se == -&cert.pi);
        assert_eq!(cert.pi.trace(), -ctx.m().clone());
        let (a, b) = &cert.sigma_in_pi_basis;
        assert_eq!(&cert.pi.affine(a, b), s);

        // direct powers against the recurrence
        let seq = cert.trace_sequence();
        let mut power = QuadInt::one(s.d.clone());
        for t in &seq {
            assert_eq!(&power.trace(), t);
            power = &power * s;
        }
        for g in [1usize, 2, 5, 17, 60] {
            assert_eq!(cert.count(e, g), ctx.serre_weil_bound(g), "q={} g={g}", ctx.q());
            for j in 1..=e {
                let direct = Pow::pow(BigInt::from(p), j) + 1u32 - seq[j as usize].clone() * BigInt::from(g);
                assert_eq!(cert.count(j, g), direct);
            }
        }
    }
    assert!(found >= 7);
}

#[test]
fn scanner_agrees_with_descent_search() {
    let rows = dioph_scan(50, 13);
    for r in &rows {
        let two_m = &r.y * 2u32;
        assert!(r.d > 0 && BigInt::from(r.d) <= two_m, "p={} e={}", r.p, r.e);
        assert_eq!(BigInt::from(r.x * r.x + r.d), BigInt::from(4 * r.p));
        assert_eq!(&r.y * &r.y + BigInt::from(r.d), &r.q * 4u32);
    }
    let verified: BTreeSet<(u64, u32)> = rows.iter().filter(|r| r.verified).map(|r| (r.p, r.e)).collect();
    let certified: BTreeSet<(u64, u32)> = fields(50, 13)
        .into_iter()
        .filter(|&(p, e)| {
            let ctx = FieldContext::from_prime_power(p, e).unwrap();
            find_descent(&ctx).certificate().is_some()
        })
        .collect();
    assert_eq!(verified, certified);
    assert!(rows.iter().all(|r| !r.y.is_negative()));
}
