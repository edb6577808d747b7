//! Galois descent for curves meeting the Serre-Weil bound over `F_q`, `q = p^e`, `e` odd.
//!
//! A curve with all Frobenius eigenvalues equal to `pi = (-m + sqrt(-d))/2`, `d = 4q - m^2`,
//! descends to `F_p` when `pi = sigma^e` for some `sigma` in `Z[pi]`. The descended curve
//! then has `p^j + 1 - g Tr(sigma^j)` points over `F_{p^j}`, and those counts must be
//! sensible.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elimination::{Rule, Verdict, Witness};
use crate::zetatypes::{is_prime_u64, FieldContext};

/// `(u + v sqrt(-d)) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    #[serde(with = "crate::serde_big")]
    pub u: BigInt,
    #[serde(with = "crate::serde_big")]
    pub v: BigInt,
    #[serde(with = "crate::serde_big")]
    pub d: BigInt,
}

impl QuadInt {
    /// Panics unless `u^2 + d v^2` is divisible by 4, which is what makes the value an
    /// algebraic integer for every `d` (squarefree or not).
    pub fn new(u: BigInt, v: BigInt, d: BigInt) -> Self {
        assert!(d.is_positive(), "d must be positive");
        let n = &u * &u + &d * &v * &v;
        assert!(n.is_multiple_of(&BigInt::from(4)), "({u} + {v} sqrt(-{d}))/2 is not integral");
        QuadInt { u, v, d }
    }

    pub fn from_integer(a: BigInt, d: BigInt) -> Self {
        QuadInt::new(a * 2u32, BigInt::zero(), d)
    }

    pub fn one(d: BigInt) -> Self {
        Self::from_integer(BigInt::one(), d)
    }

    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    pub fn norm(&self) -> BigInt {
        (&self.u * &self.u + &self.d * &self.v * &self.v) / 4u32
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.d.clone());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// `a + b * self` for integers `a`, `b`.
    pub fn affine(&self, a: &BigInt, b: &BigInt) -> Self {
        QuadInt::new(a * 2u32 + b * &self.u, b * &self.v, self.d.clone())
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;

    fn mul(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "mixed quadratic fields");
        let u = &self.u * &rhs.u - &self.d * &self.v * &rhs.v;
        let v = &self.u * &rhs.v + &rhs.u * &self.v;
        debug_assert!(u.is_even() && v.is_even());
        QuadInt {
            u: u / 2u32,
            v: v / 2u32,
            d: self.d.clone(),
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        QuadInt {
            u: -&self.u,
            v: -&self.v,
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.v.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt(-{}))/2", self.u, sign, self.v.abs(), self.d)
    }
}

/// `N(F_{p^j}) = constant - g * trace` for the descended curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldCount {
    pub j: u32,
    /// `p^j + 1`
    #[serde(with = "crate::serde_big")]
    pub constant: BigInt,
    /// `Tr(sigma^j)`
    #[serde(with = "crate::serde_big")]
    pub trace: BigInt,
}

impl SubfieldCount {
    pub fn at(&self, g: usize) -> BigInt {
        &self.constant - &self.trace * BigInt::from(g)
    }
}

impl fmt::Display for SubfieldCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.trace;
        let sign = if t.is_negative() { '+' } else { '-' };
        write!(f, "#X(F_p^{}) = {} {} {}g", self.j, self.constant, sign, t.abs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCertificate {
    pub ctx: FieldContext,
    #[serde(with = "crate::serde_big")]
    pub d: BigInt,
    pub pi: QuadInt,
    /// Normalized so that `sigma^e = pi`.
    pub sigma: QuadInt,
    /// `(A, B)` with `sigma = A + B pi`.
    #[serde(serialize_with = "crate::serde_big::serialize_pair", deserialize_with = "crate::serde_big::deserialize_pair")]
    pub sigma_in_pi_basis: (BigInt, BigInt),
    /// Sign `s` with `sigma_found^e = s pi` for the root of norm `p` first encountered.
    pub realized_sign: i8,
    pub subfield_counts: Vec<SubfieldCount>,
}

impl DescentCertificate {
    /// `Tr(sigma^j)` for `j = 0..=e` from `t_j = Tr(sigma) t_(j-1) - p t_(j-2)`.
    pub fn trace_sequence(&self) -> Vec<BigInt> {
        trace_recurrence(&self.sigma.trace(), self.ctx.p(), self.ctx.e())
    }

    pub fn count(&self, j: u32, g: usize) -> BigInt {
        self.subfield_counts[(j - 1) as usize].at(g)
    }
}

fn trace_recurrence(t1: &BigInt, p: u64, e: u32) -> Vec<BigInt> {
    let p = BigInt::from(p);
    let mut t = vec![BigInt::from(2), t1.clone()];
    for j in 2..=e as usize {
        let next = t1 * &t[j - 1] - &p * &t[j - 2];
        t.push(next);
    }
    t.truncate(e as usize + 1);
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DescentSearch {
    /// `e` is even or `e = 1`; descent to `F_p` says nothing new.
    NotApplicable { reason: String },
    /// Searched, and no `sigma` in `Z[pi]` has `sigma^e = +-pi`.
    Absent,
    Found(Box<DescentCertificate>),
}

impl DescentSearch {
    pub fn certificate(&self) -> Option<&DescentCertificate> {
        match self {
            DescentSearch::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// `pi = (-m + sqrt(-d))/2`.
pub fn frobenius_root(ctx: &FieldContext) -> QuadInt {
    let m = ctx.m();
    let d = ctx.q() * 4u32 - m * m;
    QuadInt::new(-m.clone(), BigInt::one(), d)
}

pub fn find_descent(ctx: &FieldContext) -> DescentSearch {
    let e = ctx.e();
    if e % 2 == 0 {
        return DescentSearch::NotApplicable {
            reason: format!("q = {} is an even power of {}", ctx.q(), ctx.p()),
        };
    }
    if e == 1 {
        return DescentSearch::NotApplicable {
            reason: format!("q = {} is prime", ctx.q()),
        };
    }
    let pi = frobenius_root(ctx);
    let d = pi.d.clone();
    let m = ctx.m();
    let four_p = BigInt::from(ctx.p()) * 4u32;
    // u^2 + d v^2 = 4p
    let v_max = (&four_p / &d).sqrt();
    let mut v = -v_max.clone();
    while v <= v_max {
        let rest = &four_p - &d * &v * &v;
        let u0 = rest.sqrt();
        if &u0 * &u0 == rest {
            let mut us = vec![u0.clone()];
            if !u0.is_zero() {
                us.push(-u0.clone());
            }
            for u in us {
                // sigma = A + B pi forces B = v and A = (u + v m)/2
                let twice_a = &u + &v * m;
                if twice_a.is_odd() {
                    continue;
                }
                let sigma = QuadInt::new(u, v.clone(), d.clone());
                let power = sigma.pow(e);
                let sign: i8 = if power == pi {
                    1
                } else if power == -&pi {
                    -1
                } else {
                    continue;
                };
                let (sigma, a, b) = if sign == 1 {
                    (sigma, twice_a / 2u32, v.clone())
                } else {
                    (-&sigma, -(twice_a / 2u32), -v.clone())
                };
                let traces = trace_recurrence(&sigma.trace(), ctx.p(), e);
                let p = BigInt::from(ctx.p());
                let subfield_counts = (1..=e)
                    .map(|j| SubfieldCount {
                        j,
                        constant: Pow::pow(&p, j) + 1u32,
                        trace: traces[j as usize].clone(),
                    })
                    .collect();
                return DescentSearch::Found(Box::new(DescentCertificate {
                    ctx: ctx.clone(),
                    d,
                    pi,
                    sigma,
                    sigma_in_pi_basis: (a, b),
                    realized_sign: sign,
                    subfield_counts,
                }));
            }
        }
        v += 1;
    }
    DescentSearch::Absent
}

/// Whether a curve of genus `g` meeting the Serre-Weil bound is ruled out by the point
/// counts of its descent to `F_p`.
///
/// The descent argument needs `g >= 2`; genus 1 always survives.
pub fn defect0_excluded(cert: &DescentCertificate, g: usize) -> Verdict {
    excluded_by(cert, g, true)
}

fn excluded_by(cert: &DescentCertificate, g: usize, monotone: bool) -> Verdict {
    if g < 2 {
        return Verdict::survived();
    }
    let e = cert.ctx.e();
    let counts: Vec<BigInt> = (1..=e).map(|j| cert.count(j, g)).collect();
    for (idx, c) in counts.iter().enumerate() {
        if c.is_negative() {
            return Verdict::eliminated(
                Rule::Descent,
                Witness::Descent {
                    j: idx as u32 + 1,
                    count: c.clone(),
                    reason: "negative point count".into(),
                },
            );
        }
    }
    for j in 2..=e {
        if !monotone {
            break;
        }
        for i in 1..j {
            if j % i == 0 && counts[(i - 1) as usize] > counts[(j - 1) as usize] {
                return Verdict::eliminated(
                    Rule::Descent,
                    Witness::Descent {
                        j,
                        count: counts[(j - 1) as usize].clone(),
                        reason: format!("fewer points than over F_p^{i}"),
                    },
                );
            }
        }
    }
    Verdict::survived()
}

/// Largest genus scanned by [`min_excluded_genus`].
pub const GENUS_SCAN_LIMIT: usize = 100;

/// Smallest `g0 >= 2` such that every genus in `g0..=GENUS_SCAN_LIMIT` is excluded.
pub fn min_excluded_genus(cert: &DescentCertificate) -> Option<usize> {
    min_excluded_by(cert, true)
}

/// As [`min_excluded_genus`], using only negativity of the counts.
pub fn min_excluded_genus_by_sign(cert: &DescentCertificate) -> Option<usize> {
    min_excluded_by(cert, false)
}

fn min_excluded_by(cert: &DescentCertificate, monotone: bool) -> Option<usize> {
    let mut g0 = None;
    for g in (2..=GENUS_SCAN_LIMIT).rev() {
        if excluded_by(cert, g, monotone).is_eliminated() {
            g0 = Some(g);
        } else {
            break;
        }
    }
    g0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Row {
    pub p: u64,
    pub e: u32,
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
    pub certificate: DescentCertificate,
    /// Minimal excluded genus found by the counts.
    pub min_genus: Option<usize>,
    /// Minimal excluded genus using only negative counts.
    pub min_genus_by_sign: Option<usize>,
    /// Genus threshold as usually quoted for this field.
    pub quoted_min_genus: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

const THEOREM1_FIELDS: [(u64, u32, usize); 7] = [
    (2, 3, 4),
    (2, 5, 3),
    (2, 13, 4),
    (3, 3, 3),
    (3, 5, 4),
    (5, 3, 4),
    (5, 7, 7),
];

/// Descent certificates and excluded genera for the seven fields
/// `q = 2^3, 2^5, 2^13, 3^3, 3^5, 5^3, 5^7`.
pub fn theorem1_table() -> Vec<Theorem1Row> {
    THEOREM1_FIELDS
        .iter()
        .map(|&(p, e, quoted)| {
            let ctx = FieldContext::from_prime_power(p, e).expect("valid field");
            let cert = find_descent(&ctx)
                .certificate()
                .cloned()
                .expect("descent exists for the listed fields");
            let min_genus = min_excluded_genus(&cert);
            let min_genus_by_sign = min_excluded_genus_by_sign(&cert);
            let note = match (min_genus_by_sign, min_genus) {
                (Some(s), _) if s < quoted => Some(format!(
                    "quoted threshold is g >= {quoted}, but a negative count already excludes g >= {s}"
                )),
                (Some(s), Some(g)) if g < s => Some(format!(
                    "subfield monotonicity also excludes g = {g}..{s}",
                    s = s - 1
                )),
                (Some(s), _) if s > quoted => Some(format!(
                    "quoted threshold is g >= {quoted}, counts only exclude g >= {s}"
                )),
                _ => None,
            };
            Theorem1Row {
                p,
                e,
                q: ctx.q().clone(),
                certificate: cert,
                min_genus,
                min_genus_by_sign,
                quoted_min_genus: quoted,
                note,
            }
        })
        .collect()
}

/// Solution of `x^2 + d = 4p`, `y^2 + d = 4q` with `y = m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DioSolution {
    pub p: u64,
    pub e: u32,
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
    pub x: u64,
    #[serde(with = "crate::serde_big")]
    pub y: BigInt,
    pub d: u64,
    pub verified: bool,
    /// `d > 3`
    pub d_above_3: bool,
    pub d_squarefree: bool,
}

fn is_squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn scan_field(p: u64, e: u32) -> Option<DioSolution> {
    let ctx = FieldContext::from_prime_power(p, e).ok()?;
    let m = ctx.m();
    let d = ctx.q() * 4u32 - m * m;
    if !d.is_positive() || d >= m * 2u32 + 1u32 {
        return None;
    }
    let x_sq = BigInt::from(p) * 4u32 - &d;
    if !x_sq.is_positive() {
        return None;
    }
    let x = x_sq.sqrt();
    if &x * &x != x_sq {
        return None;
    }
    let d = d.to_u64()?;
    Some(DioSolution {
        p,
        e,
        q: ctx.q().clone(),
        x: x.to_u64()?,
        y: m.clone(),
        d,
        verified: find_descent(&ctx).certificate().is_some(),
        d_above_3: d > 3,
        d_squarefree: is_squarefree(d),
    })
}

/// All rows with `p <= p_max` prime and odd `3 <= e <= e_max`, ordered by `(p, e)`.
pub fn dioph_scan(p_max: u64, e_max: u32) -> Vec<DioSolution> {
    let primes: Vec<u64> = (2..=p_max).filter(|&p| is_prime_u64(p)).collect();
    primes
        .par_iter()
        .flat_map_iter(|&p| (3..=e_max).step_by(2).filter_map(move |e| scan_field(p, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cert(q: u64) -> DescentCertificate {
        let ctx = FieldContext::new(q).unwrap();
        find_descent(&ctx).certificate().cloned().expect("certificate")
    }

    #[test]
    fn quadint_arithmetic() {
        let s = QuadInt::new(big(1), big(1), big(7));
        assert_eq!(s.norm(), big(2));
        let s3 = s.pow(3);
        assert_eq!((s3.u.clone(), s3.v.clone()), (big(-5), big(-1)));
        assert_eq!(&s * &s.conj(), QuadInt::from_integer(big(2), big(7)));
        // d = 8 is not squarefree; (2 + 2 sqrt(-8))/2 = 1 + 2 sqrt(-2)
        let t = QuadInt::new(big(2), big(1), big(8));
        assert_eq!(t.norm(), big(3));
    }

    #[test]
    #[should_panic]
    fn quadint_rejects_non_integers() {
        QuadInt::new(big(1), big(0), big(8));
    }

    #[test]
    fn certificates_in_pi_basis() {
        let expect = [
            (8u64, (-2, -1)),
            (32, (-6, -1)),
            (8192, (-90, -1)),
            (27, (6, 1)),
            (243, (15, 1)),
            (125, (-10, -1)),
            (78125, (280, 1)),
            (4913, (-68, -1)),
        ];
        for (q, (a, b)) in expect {
            let c = cert(q);
            assert_eq!(c.sigma_in_pi_basis, (big(a), big(b)), "q = {q}");
            assert_eq!(c.sigma.norm(), BigInt::from(c.ctx.p()));
            assert_eq!(c.sigma.pow(c.ctx.e()), c.pi);
            assert_eq!(c.pi.affine(&big(a), &big(b)), c.sigma);
        }
        assert_eq!(cert(4913).d, big(52));
    }

    #[test]
    fn absent_and_not_applicable() {
        let ctx = FieldContext::new(343).unwrap();
        assert_eq!(find_descent(&ctx), DescentSearch::Absent);
        for q in [16, 9, 7] {
            let ctx = FieldContext::new(q).unwrap();
            assert!(matches!(find_descent(&ctx), DescentSearch::NotApplicable { .. }));
        }
    }

    #[test]
    fn exclusion_examples() {
        let c8 = cert(8);
        let v = defect0_excluded(&c8, 4);
        assert_eq!(
            v.witness,
            Some(Witness::Descent {
                j: 1,
                count: big(-1),
                reason: "negative point count".into()
            })
        );
        assert!(!defect0_excluded(&c8, 3).is_eliminated());
        let counts: Vec<BigInt> = (1..=3).map(|j| c8.count(j, 3)).collect();
        assert_eq!(counts, vec![big(0), big(14), big(24)]);

        let v = defect0_excluded(&cert(32), 3);
        assert!(matches!(v.witness, Some(Witness::Descent { j: 3, ref count, .. }) if *count == big(-6)));
    }

    #[test]
    fn traces_match_powers() {
        for q in [8u64, 32, 27, 243, 125, 78125] {
            let c = cert(q);
            let t = c.trace_sequence();
            for j in 0..=c.ctx.e() {
                assert_eq!(t[j as usize], c.sigma.pow(j).trace());
            }
            assert_eq!(t[c.ctx.e() as usize], -c.ctx.m().clone());
        }
    }

    #[test]
    fn theorem1_minimal_genera() {
        let table = theorem1_table();
        let got: Vec<(BigInt, Option<usize>)> =
            table.iter().map(|r| (r.q.clone(), r.min_genus_by_sign)).collect();
        let want = [(8, 4), (32, 2), (8192, 4), (27, 3), (243, 4), (125, 4), (78125, 7)];
        for ((q, g), (wq, wg)) in got.iter().zip(want) {
            assert_eq!((q.clone(), *g), (big(wq), Some(wg)));
        }
        // over F_27 the count 28 - 8g drops below #X(F_3) = 4 + g already at g = 3
        let r243 = table.iter().find(|r| r.q == big(243)).unwrap();
        assert_eq!(r243.min_genus, Some(3));
        let others = table.iter().filter(|r| r.q != big(243));
        assert!(others.clone().all(|r| r.min_genus == r.min_genus_by_sign));
        assert!(table.iter().find(|r| r.q == big(32)).unwrap().note.is_some());
    }

    #[test]
    fn scan_examples() {
        let rows = dioph_scan(20, 13);
        let has = |p: u64, e: u32, d: u64| rows.iter().any(|r| r.p == p && r.e == e && r.d == d);
        assert!(has(2, 3, 7) && has(2, 5, 7) && has(2, 13, 7));
        assert!(has(5, 3, 16) && has(17, 3, 52));
        let r = rows.iter().find(|r| r.p == 7 && r.e == 3).unwrap();
        assert_eq!((r.x, r.y.clone(), r.d, r.verified), (5, big(37), 3, false));
        for r in &rows {
            assert_eq!(BigInt::from(r.x * r.x + r.d), BigInt::from(4 * r.p));
            assert_eq!(&r.y * &r.y + BigInt::from(r.d), &r.q * 4u32);
        }
    }
}
