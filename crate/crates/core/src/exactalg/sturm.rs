//! Exact real-root counting with Sturm chains.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// An endpoint of a real interval: a rational or one of the infinities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtRational {
    pub fn int(v: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn big(v: BigInt) -> Self {
        ExtRational::Finite(BigRational::from_integer(v))
    }

    fn less_than(&self, other: &Self) -> bool {
        use ExtRational::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, _) | (_, NegInf) => false,
            (NegInf, _) | (_, PosInf) => true,
            (Finite(a), Finite(b)) => a < b,
        }
    }
}

/// Sturm chain of the squarefree part of `f`.
///
/// Each remainder is made primitive by a positive content, so signs are those of the
/// classical chain while coefficients stay small.
pub fn sturm_chain(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let p0 = f.squarefree_part();
    let mut chain = vec![p0.clone()];
    if p0.deg() == 0 {
        return chain;
    }
    let p1 = p0.derivative().primitive_part();
    chain.push(p1);
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.deg() == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // prem multiplies by lc(b)^(delta+1); undo a negative multiplier's sign
        let delta = a.deg() - b.deg();
        if b.leading().is_some_and(|l| l.is_negative()) && delta % 2 == 0 {
            r = -r;
        }
        if r.is_zero() {
            break;
        }
        chain.push(-r.primitive_part());
    }
    chain
}

fn sign_at(p: &IntPolynomial, x: &ExtRational) -> Sign {
    match x {
        ExtRational::Finite(v) => p.sign_at(v),
        ExtRational::PosInf => p.leading().map_or(Sign::NoSign, |l| l.sign()),
        ExtRational::NegInf => {
            let s = p.leading().map_or(Sign::NoSign, |l| l.sign());
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations(chain: &[IntPolynomial], x: &ExtRational) -> usize {
    let mut count = 0;
    let mut last = Sign::NoSign;
    for p in chain {
        let s = sign_at(p, x);
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `f` in the half-open interval `(lo, hi]`.
pub fn count_real_roots(f: &IntPolynomial, lo: &ExtRational, hi: &ExtRational) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::Domain("real roots of the zero polynomial".into()));
    }
    if !lo.less_than(hi) {
        return Err(Error::Domain("empty interval for root counting".into()));
    }
    let chain = sturm_chain(f);
    Ok(count_with_chain(&chain, lo, hi))
}

pub(crate) fn count_with_chain(chain: &[IntPolynomial], lo: &ExtRational, hi: &ExtRational) -> usize {
    variations(chain, lo).saturating_sub(variations(chain, hi))
}

/// Number of distinct real roots of `f` in the open interval `(lo, hi)`.
pub fn count_real_roots_open(
    f: &IntPolynomial,
    lo: &ExtRational,
    hi: &ExtRational,
) -> Result<usize> {
    let n = count_real_roots(f, lo, hi)?;
    let at_hi = matches!(hi, ExtRational::Finite(v) if f.sign_at(v) == Sign::NoSign);
    Ok(n - usize::from(at_hi))
}

/// True iff every complex root of `f` is real and strictly positive.
///
/// Works for any nonzero polynomial; a nonzero constant has no roots and counts as
/// totally positive.
pub fn is_totally_positive(f: &IntPolynomial) -> bool {
    if f.is_zero() {
        return false;
    }
    let sqf = f.squarefree_part();
    let d = sqf.deg();
    if d == 0 {
        return true;
    }
    if sqf.coeff(0).is_zero() {
        return false;
    }
    // cheap necessary condition: coefficients alternate in sign with no gaps
    let lead_sign = sqf.leading().map(|l| l.sign()).unwrap_or(Sign::NoSign);
    for (i, c) in sqf.coeffs().iter().enumerate() {
        let expected = if (d - i) % 2 == 0 { lead_sign } else { -lead_sign };
        if c.sign() != expected {
            return false;
        }
    }
    let chain = sturm_chain(&sqf);
    count_with_chain(&chain, &ExtRational::int(0), &ExtRational::PosInf) == d
}

/// True iff every complex root of `f` is real.
pub fn is_real_rooted(f: &IntPolynomial) -> bool {
    if f.is_zero() {
        return false;
    }
    let sqf = f.squarefree_part();
    let chain = sturm_chain(&sqf);
    count_with_chain(&chain, &ExtRational::NegInf, &ExtRational::PosInf) == sqf.deg()
}

/// Whether `f` has any real root strictly less than `bound`.
pub fn has_root_below(f: &IntPolynomial, bound: &BigInt) -> bool {
    let hi = ExtRational::big(bound.clone());
    count_real_roots_open(f, &ExtRational::NegInf, &hi).map_or(false, |n| n > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn count_examples() {
        let f = p(&[1, -3, 1]);
        assert_eq!(count_real_roots(&f, &ExtRational::int(0), &ExtRational::PosInf).unwrap(), 2);
        let g = p(&[1, 0, 1]);
        assert_eq!(count_real_roots(&g, &ExtRational::NegInf, &ExtRational::PosInf).unwrap(), 0);
        let h = p(&[-1, 6, -5, 1]);
        assert_eq!(count_real_roots(&h, &ExtRational::int(0), &ExtRational::int(4)).unwrap(), 3);
    }

    #[test]
    fn half_open_interval_endpoints() {
        // roots 1 and 2
        let f = p(&[2, -3, 1]);
        let c = |lo, hi| count_real_roots(&f, &ExtRational::int(lo), &ExtRational::int(hi)).unwrap();
        assert_eq!(c(1, 2), 1);
        assert_eq!(c(0, 1), 1);
        assert_eq!(c(0, 2), 2);
        assert_eq!(count_real_roots_open(&f, &ExtRational::int(0), &ExtRational::int(2)).unwrap(), 1);
    }

    #[test]
    fn zero_polynomial_is_a_domain_error() {
        assert!(count_real_roots(&IntPolynomial::zero(), &ExtRational::NegInf, &ExtRational::PosInf).is_err());
        assert!(count_real_roots(&p(&[1, 1]), &ExtRational::int(2), &ExtRational::int(1)).is_err());
    }

    #[test]
    fn total_positivity() {
        assert!(is_totally_positive(&p(&[1, -3, 1])));
        assert!(!is_totally_positive(&p(&[-1, -1, 1])));
        assert!(is_totally_positive(&p(&[-1, 1]).pow(2)));
        assert!(!is_totally_positive(&p(&[0, 1])));
        assert!(!is_totally_positive(&p(&[2, -2, 1])));
        assert!(is_totally_positive(&p(&[-1, 6, -5, 1])));
    }

    #[test]
    fn non_monic_chain() {
        // -2t^2 + 3t - 1 = -(2t - 1)(t - 1)
        let f = p(&[-1, 3, -2]);
        assert_eq!(count_real_roots(&f, &ExtRational::NegInf, &ExtRational::PosInf).unwrap(), 2);
        assert!(is_totally_positive(&f));
    }
}
