//! Frobenius traces of elliptic curves over `F_q`, and the obstructions built on them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::elimination::{Rule, Verdict, Witness};
use crate::zetatypes::{FieldContext, ZetaType};

/// Traces `t` of elliptic curves over `F_q` (Waterhouse's classification).
///
/// Every `t` prime to `p` with `t^2 <= 4q` occurs; only the supersingular traces
/// divisible by `p` are listed explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRule {
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
    pub p: u64,
    /// Admissible traces divisible by `p`, ascending.
    #[serde(serialize_with = "crate::serde_big::serialize_vec", deserialize_with = "crate::serde_big::deserialize_vec")]
    pub p_divisible: Vec<BigInt>,
}

impl TraceRule {
    pub fn is_admissible(&self, t: &BigInt) -> bool {
        if t * t > &self.q * 4u32 {
            return false;
        }
        if !t.is_multiple_of(&BigInt::from(self.p)) {
            return true;
        }
        self.p_divisible.binary_search(t).is_ok()
    }

    /// The full admissible set; only sensible for small `q`.
    pub fn all(&self) -> Vec<BigInt> {
        let bound = (&self.q * 4u32).sqrt();
        let mut t = -bound.clone();
        let mut out = Vec::new();
        while t <= bound {
            if self.is_admissible(&t) {
                out.push(t.clone());
            }
            t += 1;
        }
        out
    }
}

pub fn admissible_elliptic_traces(ctx: &FieldContext) -> TraceRule {
    let p = ctx.p();
    let e = ctx.e();
    let mut set = BTreeSet::new();
    let mut both = |v: BigInt| {
        set.insert(-v.clone());
        set.insert(v);
    };
    if e % 2 == 0 {
        let s = Pow::pow(BigInt::from(p), e / 2);
        both(&s * 2u32);
        if p % 3 != 1 {
            both(s.clone());
        }
        if p % 4 != 1 {
            both(BigInt::zero());
        }
    } else {
        both(BigInt::zero());
        if p == 2 || p == 3 {
            both(Pow::pow(BigInt::from(p), (e + 1) / 2));
        }
    }
    TraceRule {
        q: ctx.q().clone(),
        p,
        p_divisible: set.into_iter().collect(),
    }
}

/// Eliminates a type with a simple integer orbit whose trace no elliptic curve has.
///
/// A multiplicity-1 rational entry `x` splits off an elliptic isogeny factor with trace
/// `-x`; nothing is concluded from repeated or irrational entries.
pub fn rule_elliptic_product(ty: &ZetaType, ctx: &FieldContext) -> Verdict {
    let rule = admissible_elliptic_traces(ctx);
    let four_q = ctx.q() * 4u32;
    let c = ctx.m() + 1u32;
    for (orbit, mult) in ty.orbits() {
        if orbit.deg() != 1 || *mult != 1 {
            continue;
        }
        // x = m + 1 - r, t = -x
        let t = -(&c + orbit.coeff(0));
        if &t * &t < four_q
            && t.is_multiple_of(&BigInt::from(ctx.p()))
            && !rule.is_admissible(&t)
        {
            return Verdict::eliminated(Rule::HondaTate, Witness::EllipticTrace { trace: t });
        }
    }
    Verdict::survived()
}

/// Whether `(sqrt q - 1)^2 / 4 < g < (q - sqrt q) / 2`, the range in which no curve over a
/// square field meets the Weil bound.
pub fn fuhrmann_torres_interval(ctx: &FieldContext, g: usize) -> bool {
    let Some(s) = ctx.sqrt_q() else {
        return false;
    };
    let g = BigInt::from(g);
    let low = (&s - 1u32) * (&s - 1u32);
    let high = ctx.q() - &s;
    low < &g * 4u32 && &g * 2u32 < high
}

/// Defect-0 exclusion for square `q` inside the Fuhrmann-Torres interval.
pub fn rule_fuhrmann_torres(ctx: &FieldContext, g: usize) -> Verdict {
    if fuhrmann_torres_interval(ctx, g) {
        Verdict::eliminated(
            Rule::FuhrmannTorres,
            Witness::FuhrmannTorres {
                q: ctx.q().clone(),
                g,
            },
        )
    } else {
        Verdict::survived()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::IntPolynomial;
    use crate::zetatypes::make_type;

    fn ctx(q: u64) -> FieldContext {
        FieldContext::new(q).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Type with `g - 1` entries `m` and one entry `m - offset`.
    fn one_off(g: usize, offset: i64) -> ZetaType {
        let pad = IntPolynomial::from_i64s(&[-1, 1]).pow(g - 1);
        make_type(&(&pad * &IntPolynomial::from_i64s(&[-(offset + 1), 1]))).unwrap()
    }

    #[test]
    fn trace_lists() {
        assert_eq!(admissible_elliptic_traces(&ctx(16)).p_divisible, ints(&[-8, -4, 0, 4, 8]));
        assert!(!admissible_elliptic_traces(&ctx(16)).is_admissible(&BigInt::from(6)));
        assert_eq!(admissible_elliptic_traces(&ctx(4)).all(), ints(&[-4, -3, -2, -1, 0, 1, 2, 3, 4]));
        assert_eq!(admissible_elliptic_traces(&ctx(2)).all(), ints(&[-2, -1, 0, 1, 2]));
        // p = 7 = 1 mod 3 drops +-sqrt q; 7 = 3 mod 4 keeps 0
        assert_eq!(admissible_elliptic_traces(&ctx(49)).p_divisible, ints(&[-14, 0, 14]));
        assert_eq!(admissible_elliptic_traces(&ctx(125)).p_divisible, ints(&[0]));
    }

    #[test]
    fn elliptic_product_examples() {
        let v = rule_elliptic_product(&one_off(4, 2), &ctx(16));
        assert_eq!(v.witness, Some(Witness::EllipticTrace { trace: BigInt::from(-6) }));
        assert!(!rule_elliptic_product(&one_off(5, 3), &ctx(16)).is_eliminated());
        assert!(!rule_elliptic_product(&one_off(3, 2), &ctx(4)).is_eliminated());
        assert!(rule_elliptic_product(&one_off(13, 2), &ctx(64)).is_eliminated());
    }

    #[test]
    fn fuhrmann_torres_examples() {
        assert!(rule_fuhrmann_torres(&ctx(16), 5).is_eliminated());
        assert!(!rule_fuhrmann_torres(&ctx(16), 6).is_eliminated());
        assert!(rule_fuhrmann_torres(&ctx(64), 13).is_eliminated());
        assert!(rule_fuhrmann_torres(&ctx(64), 27).is_eliminated());
        assert!(!rule_fuhrmann_torres(&ctx(64), 28).is_eliminated());
        assert!(!rule_fuhrmann_torres(&ctx(32), 10).is_eliminated());
    }
}
