//! Desk-scale factorization of monic integer polynomials over the rationals.
//!
//! Integer roots are peeled off first (candidates are the divisors of the constant term);
//! the remaining squarefree part is split by an exhaustive Kronecker search over monic
//! divisors: a degree-`d` divisor is pinned by its values at `d` integer points, each of
//! which must divide the polynomial's value there, and every interpolant is screened
//! against the root-bound x binomial coefficient bound before trial division.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{binomial, IntPolynomial};
use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_DEGREE_CAP: usize = 16;

/// A monic polynomial as a product of irreducible monic factors with multiplicities,
/// ordered by degree and then by coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredPoly {
    factors: Vec<(IntPolynomial, u32)>,
}

impl FactoredPoly {
    /// Builds a factorization from parts known to be irreducible, merging repeats and
    /// sorting canonically.
    pub(crate) fn from_irreducibles(parts: Vec<(IntPolynomial, u32)>) -> Self {
        let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();
        for (f, m) in parts {
            if m == 0 {
                continue;
            }
            if let Some(slot) = factors.iter_mut().find(|(g, _)| *g == f) {
                slot.1 += m;
            } else {
                factors.push((f, m));
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        FactoredPoly { factors }
    }

    pub fn factors(&self) -> &[(IntPolynomial, u32)] {
        &self.factors
    }

    pub fn expand(&self) -> IntPolynomial {
        self.factors
            .iter()
            .fold(IntPolynomial::one(), |acc, (f, m)| &acc * &f.pow(*m as usize))
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| f.deg() * *m as usize)
            .sum()
    }

    pub fn multiplicity_of(&self, f: &IntPolynomial) -> u32 {
        self.factors
            .iter()
            .find(|(g, _)| g == f)
            .map_or(0, |(_, m)| *m)
    }

    /// Product of this factorization with another.
    pub fn combine(&self, other: &FactoredPoly) -> FactoredPoly {
        let mut parts = self.factors.clone();
        parts.extend(other.factors.iter().cloned());
        FactoredPoly::from_irreducibles(parts)
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.expand().canonical_cmp(&other.expand())
    }
}

/// Complete factorization with the default degree cap.
pub fn factor(f: &IntPolynomial) -> Result<FactoredPoly> {
    factor_with_cap(f, DEFAULT_FACTOR_DEGREE_CAP)
}

/// Complete factorization over the rationals of a monic polynomial.
///
/// The cap applies to what is left after integer roots are removed, so long runs of
/// linear factors are always accepted.
pub fn factor_with_cap(f: &IntPolynomial, cap: usize) -> Result<FactoredPoly> {
    if f.is_zero() {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    }
    if !f.is_monic() {
        return Err(Error::Domain(format!("factor expects a monic polynomial, got {f}")));
    }
    let mut rest = f.clone();
    let mut parts: Vec<(IntPolynomial, u32)> = Vec::new();
    for root in integer_root_candidates(&rest)? {
        let lin = IntPolynomial::linear(&root);
        let mut mult = 0u32;
        while rest.deg() >= 1 && rest.eval(&root).is_zero() {
            rest = rest.div_rem_monic(&lin).0;
            mult += 1;
        }
        if mult > 0 {
            parts.push((lin, mult));
        }
    }
    if rest.deg() > cap {
        return Err(Error::UnsupportedDegree {
            degree: rest.deg(),
            cap,
        });
    }
    if rest.deg() >= 1 {
        let sqf = rest.squarefree_part();
        for irr in split_squarefree(&sqf) {
            let mut mult = 0u32;
            loop {
                let (q, r) = rest.div_rem_monic(&irr);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            parts.push((irr, mult));
        }
    }
    debug_assert!(rest.deg() == 0);
    Ok(FactoredPoly::from_irreducibles(parts))
}

/// Candidate integer roots: the signed divisors of the constant term, or 0.
fn integer_root_candidates(f: &IntPolynomial) -> Result<Vec<BigInt>> {
    let c0 = f.coeff(0);
    let mut out = Vec::new();
    if c0.is_zero() {
        out.push(BigInt::zero());
        // roots of f / t^k are divisors of its lowest nonzero coefficient
        let low = f.coeffs().iter().find(|c| !c.is_zero()).cloned().unwrap();
        out.extend(signed_divisors(&low)?);
    } else {
        out.extend(signed_divisors(&c0)?);
    }
    Ok(out)
}

fn signed_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mag = n
        .abs()
        .to_u128()
        .ok_or_else(|| Error::Unsupported(format!("constant term {n} too large to factor")))?;
    Ok(divisors_u128(mag)
        .into_iter()
        .flat_map(|d| [BigInt::from(d), -BigInt::from(d)])
        .collect())
}

fn divisors_u128(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Splits a squarefree monic polynomial without integer roots into irreducibles.
fn split_squarefree(s: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = s.deg();
    // degrees 2 and 3 without rational roots are irreducible
    if n <= 3 {
        return vec![s.clone()];
    }
    for d in 2..=n / 2 {
        if let Some(h) = find_monic_divisor(s, d) {
            let q = s.div_rem_monic(&h).0;
            let mut out = split_squarefree(&h);
            out.extend(split_squarefree(&q));
            return out;
        }
    }
    vec![s.clone()]
}

/// Exhaustive search for a monic divisor of degree `d` with 1 < d < deg s.
fn find_monic_divisor(s: &IntPolynomial, d: usize) -> Option<IntPolynomial> {
    let n = s.deg();
    let radius = (2 * n + 4) as i64;
    let mut samples: Vec<(BigInt, i64)> = (-radius..=radius)
        .map(|a| (s.eval_i64(a).abs(), a))
        .filter(|(v, _)| !v.is_zero())
        .collect();
    samples.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.abs().cmp(&y.1.abs())).then(x.1.cmp(&y.1)));
    let nodes: Vec<i64> = samples.iter().take(d).map(|(_, a)| *a).collect();
    let check_node = samples.get(d).map(|(_, a)| *a);
    let value_divisors: Vec<Vec<BigInt>> = nodes
        .iter()
        .map(|&a| signed_divisors(&s.eval_i64(a)).ok())
        .collect::<Option<_>>()?;

    // root bound (Cauchy) for the coefficient screen
    let bound = s
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();
    let coeff_bounds: Vec<BigInt> = (0..d)
        .map(|j| binomial(d as u64, j as u64) * num_traits::pow(bound.clone(), d - j))
        .collect();

    // Lagrange data: h = prod (t - a_i) + sum v_i N_i(t) / w_i
    let node_poly = nodes.iter().fold(IntPolynomial::one(), |acc, &a| {
        &acc * &IntPolynomial::linear(&BigInt::from(a))
    });
    let basis: Vec<IntPolynomial> = (0..d)
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(IntPolynomial::one(), |acc, (_, &a)| {
                    &acc * &IntPolynomial::linear(&BigInt::from(a))
                })
        })
        .collect();
    let weights: Vec<BigInt> = (0..d)
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(BigInt::one(), |acc, (_, &a)| acc * BigInt::from(nodes[i] - a))
        })
        .collect();
    let common = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w));
    let scaled_basis: Vec<IntPolynomial> = basis
        .iter()
        .zip(&weights)
        .map(|(b, w)| b.scale(&(&common / w)))
        .collect();
    let check = check_node.map(|a| (BigInt::from(a), s.eval_i64(a)));

    let mut idx = vec![0usize; d];
    loop {
        let mut acc = vec![BigInt::zero(); d];
        for i in 0..d {
            let v = &value_divisors[i][idx[i]];
            for (k, c) in scaled_basis[i].coeffs().iter().enumerate() {
                acc[k] += v * c;
            }
        }
        let mut ok = true;
        let mut low = Vec::with_capacity(d);
        for (k, c) in acc.iter().enumerate() {
            let (q, r) = c.div_rem(&common);
            if !r.is_zero() {
                ok = false;
                break;
            }
            let coeff = &q + node_poly.coeff(k);
            if coeff.abs() > coeff_bounds[k] {
                ok = false;
                break;
            }
            low.push(coeff);
        }
        if ok {
            low.push(BigInt::one());
            let h = IntPolynomial::new(low);
            let passes_check = match &check {
                Some((a, sa)) => {
                    let ha = h.eval(a);
                    !ha.is_zero() && (sa % &ha).is_zero()
                }
                None => true,
            };
            if passes_check && s.div_rem_monic(&h).1.is_zero() {
                return Some(h);
            }
        }
        // next tuple
        let mut pos = 0;
        loop {
            if pos == d {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < value_divisors[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn listed(f: &FactoredPoly) -> Vec<(IntPolynomial, u32)> {
        f.factors().to_vec()
    }

    #[test]
    fn examples() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[-2, 1]);
        assert_eq!(listed(&factor(&f).unwrap()), vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 3)]);
        assert_eq!(listed(&factor(&p(&[1, -3, 1])).unwrap()), vec![(p(&[1, -3, 1]), 1)]);
        assert_eq!(
            listed(&factor(&p(&[1, -6, 11, -6, 1])).unwrap()),
            vec![(p(&[1, -3, 1]), 2)]
        );
    }

    #[test]
    fn splits_products_of_quadratics_and_cubics() {
        let a = p(&[1, -3, 1]);
        let b = p(&[2, -4, 1]);
        let c = p(&[-1, 6, -5, 1]);
        let f = &(&a * &b) * &c;
        let got = factor(&f).unwrap();
        assert_eq!(got.expand(), f);
        assert_eq!(got.factors().len(), 3);
        // x^4 + 1 is irreducible
        assert_eq!(factor(&p(&[1, 0, 0, 0, 1])).unwrap().factors().len(), 1);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert_eq!(factor(&p(&[4, 0, 0, 0, 1])).unwrap().factors().len(), 2);
    }

    #[test]
    fn root_at_zero() {
        let f = &p(&[0, 1]).pow(2) * &p(&[-3, 1]);
        assert_eq!(listed(&factor(&f).unwrap()), vec![(p(&[-3, 1]), 1), (p(&[0, 1]), 2)]);
    }

    #[test]
    fn cap_and_domain_errors() {
        assert!(factor(&p(&[2, 1])).is_ok());
        assert!(factor(&p(&[1, 2])).is_err());
        assert!(factor(&p(&[1, 2, 2])).is_err());
        assert!(factor(&IntPolynomial::zero()).is_err());
        let big = p(&[1, 0, 1]).pow(9);
        assert!(matches!(factor(&big), Err(Error::UnsupportedDegree { .. })));
    }
}
