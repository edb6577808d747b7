//! Resultants by the subresultant remainder sequence, and the difference polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::poly::IntPolynomial;

/// Resultant of `f` and `g`.
///
/// Sign convention: `Res(f, g) = lc(f)^deg(g) * prod g(alpha_i)` over the roots `alpha_i`
/// of `f`, which for monic inputs is `prod (alpha_i - beta_j)`. Swapping the arguments
/// multiplies by `(-1)^(deg f * deg g)`.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let ca = a.content();
    let cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    let t = Pow::pow(&ca, b.deg()) * Pow::pow(&cb, a.deg());
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    if b.deg() == 0 {
        // Res(a, c) = c^deg(a) for a constant c
        let c = b.coeff(0);
        return s * t * Pow::pow(&c, a.deg());
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &gg * Pow::pow(&h, delta);
        b = IntPolynomial::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        gg = a.leading().cloned().unwrap();
        // h <- h^(1 - delta) * g^delta
        h = if delta == 0 {
            h
        } else {
            Pow::pow(&gg, delta) / Pow::pow(&h, delta - 1)
        };
        if b.is_zero() {
            return BigInt::zero();
        }
        if b.deg() == 0 {
            break;
        }
    }
    let da = a.deg();
    let lb = b.leading().cloned().unwrap();
    let hf = if da == 0 {
        h
    } else {
        Pow::pow(&lb, da) / Pow::pow(&h, da - 1)
    };
    s * t * hf
}

/// Monic polynomial whose roots are the differences `alpha - beta` over all roots `alpha` of
/// `f` and `beta` of `g`, with multiplicity.
///
/// Computed as `(-1)^(deg f deg g) Res_T(f(T), g(T - S))` by evaluating at
/// `S = 0..=deg f * deg g` and interpolating.
pub fn difference_poly(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    assert!(f.is_monic() && g.is_monic(), "difference_poly needs monic inputs");
    let n = f.deg() * g.deg();
    let sign_flip = n % 2 == 1;
    let values: Vec<BigInt> = (0..=n)
        .map(|s| {
            let shifted = g.taylor_shift(&BigInt::from(-(s as i64)));
            let r = resultant(f, &shifted);
            if sign_flip {
                -r
            } else {
                r
            }
        })
        .collect();
    interpolate_integer_points(&values)
}

/// The polynomial of degree < len taking `values[i]` at `i`, which must have integer
/// coefficients.
pub(crate) fn interpolate_integer_points(values: &[BigInt]) -> IntPolynomial {
    // Newton divided differences on nodes 0, 1, 2, ...
    let n = values.len();
    let mut dd: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    // expand sum dd[i] * t(t-1)...(t-i+1)
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    for (i, c) in dd.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            acc[j] += c * b;
        }
        // basis *= (t - i)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        let shift = BigRational::from_integer(BigInt::from(i));
        for (j, b) in basis.iter().enumerate() {
            next[j + 1] += b;
            next[j] -= b * &shift;
        }
        basis = next;
    }
    IntPolynomial::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.denom().is_one(), "interpolant is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Whether `|Res(f, g)| = 1`, i.e. every difference of a root of `f` and a root of `g` is
/// a unit of the ring of algebraic integers.
pub fn differences_are_units(f: &IntPolynomial, g: &IntPolynomial) -> bool {
    resultant(f, g).magnitude().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    /// Sylvester determinant by fraction-free elimination, as an independent route.
    fn sylvester(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
        let (m, n) = (f.deg(), g.deg());
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for r in 0..n {
            for (i, c) in f.coeffs().iter().rev().enumerate() {
                mat[r][r + i] = BigRational::from_integer(c.clone());
            }
        }
        for r in 0..m {
            for (i, c) in g.coeffs().iter().rev().enumerate() {
                mat[n + r][r + i] = BigRational::from_integer(c.clone());
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let pv = mat[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let factor = &mat[r][col] / &pv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let t = &factor * &mat[col][c];
                    mat[r][c] -= t;
                }
            }
        }
        det.to_integer()
    }

    #[test]
    fn examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-1, 1])), BigInt::from(1));
        assert_eq!(resultant(&p(&[1, -3, 1]), &p(&[-1, 1])), BigInt::from(-1));
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), BigInt::from(1));
    }

    #[test]
    fn agrees_with_sylvester_determinant() {
        let polys = [
            p(&[1, -3, 1]),
            p(&[-1, 6, -5, 1]),
            p(&[2, 0, -4, 1]),
            p(&[-7, 3, 0, 2, 1]),
            p(&[5, 1]),
            p(&[1, 2, 3, 4, 5, 1]),
            p(&[4, -4, 1]),
            p(&[3, 0, 0, 0, 0, 0, 2]),
        ];
        for f in &polys {
            for g in &polys {
                assert_eq!(resultant(f, g), sylvester(f, g), "Res({f}, {g})");
            }
        }
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference_poly(&p(&[-1, 1]), &p(&[-2, 1])), p(&[1, 1]));
        assert_eq!(difference_poly(&p(&[-1, 1]), &p(&[1, -3, 1])), p(&[-1, 1, 1]));
        assert_eq!(difference_poly(&p(&[-1, 1]), &p(&[-3, 1])), p(&[2, 1]));
    }

    #[test]
    fn difference_constant_term_is_resultant() {
        let f = p(&[-1, 6, -5, 1]);
        let g = p(&[2, -4, 1]);
        let d = difference_poly(&f, &g);
        assert_eq!(d.deg(), 6);
        assert!(d.is_monic());
        assert_eq!(d.coeff(0), resultant(&f, &g));
    }
}
