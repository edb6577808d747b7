//! Zeta-function types of a given genus and defect.
//!
//! A type is stored independently of the field as its excess polynomial
//! `P(t) = prod (t - (m + 1 - x_i))`, whose roots are totally positive algebraic integers.
//! The field only enters through [`FieldContext`] when point counts or L-polynomials are
//! requested: the entry `x_i = m` becomes the root `1`, `x_i = m - 1` the root `2`, and so on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{
    binomial, factor, is_totally_positive, power_sums, FactoredPoly, IntPolynomial,
};

/// The finite field `F_q`, `q = p^e`, with `m = floor(2 sqrt q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldContext {
    #[serde(with = "crate::serde_big")]
    q: BigInt,
    p: u64,
    e: u32,
    #[serde(with = "crate::serde_big")]
    m: BigInt,
}

impl FieldContext {
    /// Context for `q`, which must be a prime power.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain(format!("{q} is not a prime power")));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Domain(format!("{q} is not a prime power")));
        }
        Self::from_prime_power(p, e)
    }

    pub fn from_prime_power(p: u64, e: u32) -> Result<Self> {
        if p < 2 || smallest_prime_factor(p) != p {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Domain("exponent must be at least 1".into()));
        }
        let q = Pow::pow(BigInt::from(p), e);
        let m = (&q * 4u32).sqrt();
        Ok(FieldContext { q, p, e, m })
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn m_i64(&self) -> i64 {
        self.m.to_i64().expect("m fits in i64")
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// `sqrt q` when `q` is a perfect square.
    pub fn sqrt_q(&self) -> Option<BigInt> {
        if self.e % 2 == 0 {
            Some(Pow::pow(BigInt::from(self.p), self.e / 2))
        } else {
            None
        }
    }

    /// The Serre-Weil bound `q + 1 + g m`.
    pub fn serre_weil_bound(&self, g: usize) -> BigInt {
        &self.q + 1u32 + &self.m * BigInt::from(g)
    }

    /// `floor(q + 1 + 2 g sqrt q)`.
    pub fn weil_bound_floor(&self, g: usize) -> BigInt {
        let g = BigInt::from(g);
        &self.q + 1u32 + (&g * &g * &self.q * 4u32).sqrt()
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, e={}, m={})", self.q, self.p, self.e, self.m)
    }
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// A zeta-function type: the excess polynomial together with its factorization.
///
/// Each irreducible factor is one Galois orbit of the values `m + 1 - x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZetaType {
    poly: IntPolynomial,
    factors: FactoredPoly,
    genus: usize,
    defect: usize,
}

/// Validates a monic excess polynomial and turns it into a type.
pub fn make_type(p: &IntPolynomial) -> Result<ZetaType> {
    ZetaType::new(p)
}

impl ZetaType {
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::Domain(format!("excess polynomial {p} is not monic")));
        }
        let factors = factor(p)?;
        for (f, _) in factors.factors() {
            if !is_totally_positive(f) {
                return Err(Error::InvalidType(format!("factor {f} is not totally positive")));
            }
        }
        Self::from_factored(factors)
    }

    /// Builds a type from a factorization whose factors are already known to be
    /// irreducible and totally positive.
    pub(crate) fn from_factored(factors: FactoredPoly) -> Result<Self> {
        let poly = factors.expand();
        let genus = poly.deg();
        let trace = if genus == 0 {
            BigInt::zero()
        } else {
            -poly.coeff(genus - 1)
        };
        let defect = &trace - BigInt::from(genus);
        if defect.is_negative() {
            return Err(Error::InvalidType(format!("trace of {poly} is below its degree")));
        }
        Ok(ZetaType {
            poly,
            factors,
            genus,
            defect: defect.to_usize().expect("defect fits"),
        })
    }

    /// The type `(m, ..., m)` of genus `g`.
    pub fn defect_zero(g: usize) -> Self {
        Self::padded(&Self::empty_pattern(), g)
    }

    fn empty_pattern() -> Self {
        ZetaType {
            poly: IntPolynomial::one(),
            factors: FactoredPoly::from_irreducibles(Vec::new()),
            genus: 0,
            defect: 0,
        }
    }

    /// Pads a pattern with `x = m` entries up to genus `g`.
    pub fn padded(pattern: &ZetaType, g: usize) -> Self {
        assert!(pattern.genus <= g, "pattern degree exceeds genus");
        let one = IntPolynomial::linear(&BigInt::one());
        let pad = FactoredPoly::from_irreducibles(vec![(one, (g - pattern.genus) as u32)]);
        let factors = pattern.factors.combine(&pad);
        ZetaType {
            poly: factors.expand(),
            factors,
            genus: g,
            defect: pattern.defect,
        }
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn factors(&self) -> &FactoredPoly {
        &self.factors
    }

    /// Distinct orbits with multiplicities.
    pub fn orbits(&self) -> &[(IntPolynomial, u32)] {
        self.factors.factors()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn defect(&self) -> usize {
        self.defect
    }

    /// Multiplicity of the `x = m` entry.
    pub fn defect_zero_multiplicity(&self) -> u32 {
        self.factors
            .multiplicity_of(&IntPolynomial::linear(&BigInt::one()))
    }

    /// The part of the type without `x = m` entries.
    pub fn tail(&self) -> ZetaType {
        let one = IntPolynomial::linear(&BigInt::one());
        let parts = self
            .orbits()
            .iter()
            .filter(|(f, _)| *f != one)
            .cloned()
            .collect();
        let factors = FactoredPoly::from_irreducibles(parts);
        Self::from_factored(factors).expect("tail of a valid type is valid")
    }

    /// Monic minimal polynomial, in the variable `X`, of the `x` values of one orbit.
    pub fn orbit_x_poly(orbit: &IntPolynomial, ctx: &FieldContext) -> IntPolynomial {
        x_space(orbit, ctx)
    }

    /// `prod (X - x_i)` over all entries.
    pub fn x_poly(&self, ctx: &FieldContext) -> IntPolynomial {
        x_space(&self.poly, ctx)
    }

    /// Readable form in the style `(m, m, m-1, [t^2 - 3t + 1])`, where bracketed entries
    /// list the excess polynomial of a non-rational orbit.
    pub fn label(&self) -> String {
        let mut entries: Vec<String> = Vec::new();
        for (f, mult) in self.orbits() {
            let text = if f.deg() == 1 {
                let r = -f.coeff(0);
                let shift = BigInt::one() - r;
                if shift.is_zero() {
                    "m".to_string()
                } else if shift.is_negative() {
                    format!("m-{}", -shift)
                } else {
                    format!("m+{shift}")
                }
            } else {
                format!("[{f}]")
            };
            for _ in 0..*mult {
                entries.push(text.clone());
            }
        }
        format!("({})", entries.join(","))
    }
}

impl fmt::Display for ZetaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(-1)^d f(m + 1 - X)`: the monic polynomial whose roots are `x = m + 1 - r`.
fn x_space(f: &IntPolynomial, ctx: &FieldContext) -> IntPolynomial {
    let c = ctx.m() + 1u32;
    let shifted = f.negate_variable().taylor_shift(&-c);
    // f(-(X - c)) = f(c - X)
    if f.deg() % 2 == 1 {
        -shifted
    } else {
        shifted
    }
}

/// Point counts `N_1..N_B` over `F_{q^n}` and place counts `a_1..a_B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCountProfile {
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
    #[serde(serialize_with = "crate::serde_big::serialize_vec", deserialize_with = "crate::serde_big::deserialize_vec")]
    pub n: Vec<BigInt>,
    #[serde(serialize_with = "crate::serde_big::serialize_vec", deserialize_with = "crate::serde_big::deserialize_vec")]
    pub a: Vec<BigInt>,
}

impl PointCountProfile {
    /// `N_n`, 1-based.
    pub fn points(&self, n: usize) -> &BigInt {
        &self.n[n - 1]
    }

    /// `a_n`, 1-based.
    pub fn places(&self, n: usize) -> &BigInt {
        &self.a[n - 1]
    }

    pub fn horizon(&self) -> usize {
        self.n.len()
    }
}

/// Power sums `sum x_i^j` for `j = 0..=n` of the entries of a type.
pub fn x_power_sums(ty: &ZetaType, ctx: &FieldContext, n: usize) -> Vec<BigInt> {
    x_power_sums_of_poly(ty.poly(), ctx, n)
}

fn x_power_sums_of_poly(p: &IntPolynomial, ctx: &FieldContext, n: usize) -> Vec<BigInt> {
    let genus = p.deg();
    let mut r_sums = vec![BigInt::from(genus)];
    if genus > 0 {
        r_sums.extend(power_sums(p, n));
    } else {
        r_sums.extend(std::iter::repeat(BigInt::zero()).take(n));
    }
    let c = ctx.m() + 1u32;
    let mut c_pows = vec![BigInt::one()];
    for _ in 0..n {
        let next = c_pows.last().unwrap() * &c;
        c_pows.push(next);
    }
    (0..=n)
        .map(|j| {
            (0..=j).fold(BigInt::zero(), |acc, l| {
                let term = binomial(j as u64, l as u64) * &c_pows[j - l] * &r_sums[l];
                if l % 2 == 1 {
                    acc - term
                } else {
                    acc + term
                }
            })
        })
        .collect()
}

/// Frobenius trace sums `T_n = sum_i (alpha_i^n + conj(alpha_i)^n)` for `n = 1..=horizon`.
///
/// Per entry, `tau_n(x) = alpha^n + conj(alpha)^n` satisfies `tau_0 = 2`, `tau_1 = -x`,
/// `tau_n = -x tau_(n-1) - q tau_(n-2)`; summing over entries only needs the power sums
/// of the `x_i`.
pub fn frobenius_trace_sums(ty: &ZetaType, ctx: &FieldContext, horizon: usize) -> Vec<BigInt> {
    trace_sums_of_poly(ty.poly(), ctx, horizon)
}

fn trace_sums_of_poly(p: &IntPolynomial, ctx: &FieldContext, horizon: usize) -> Vec<BigInt> {
    let px = x_power_sums_of_poly(p, ctx, horizon);
    let q = ctx.q();
    // tau_n as a polynomial in x, lowest degree first
    let mut prev: Vec<BigInt> = vec![BigInt::from(2)];
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), -BigInt::one()];
    let mut out = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        if n > 1 {
            let mut next = vec![BigInt::zero(); cur.len() + 1];
            for (j, c) in cur.iter().enumerate() {
                next[j + 1] -= c;
            }
            for (j, c) in prev.iter().enumerate() {
                next[j] -= c * q;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        let t = cur
            .iter()
            .zip(&px)
            .fold(BigInt::zero(), |acc, (c, s)| acc + c * s);
        out.push(t);
    }
    out
}

/// Exact point and place counts of a type over `F_{q^n}`, `n = 1..=horizon`.
pub fn point_counts(ty: &ZetaType, ctx: &FieldContext, horizon: usize) -> PointCountProfile {
    point_counts_of_poly(ty.poly(), ctx, horizon)
}

/// [`point_counts`] for an excess polynomial that has not been factored.
pub fn point_counts_of_poly(p: &IntPolynomial, ctx: &FieldContext, horizon: usize) -> PointCountProfile {
    assert!(horizon >= 1, "horizon must be at least 1");
    let traces = trace_sums_of_poly(p, ctx, horizon);
    let mut qn = BigInt::one();
    let n: Vec<BigInt> = traces
        .iter()
        .map(|t| {
            qn *= ctx.q();
            &qn + 1u32 - t
        })
        .collect();
    let a = places_from_points(&n);
    PointCountProfile {
        q: ctx.q().clone(),
        n,
        a,
    }
}

/// Moebius inversion `a_n = (1/n) sum_{d | n} mu(n/d) N_d`.
pub fn places_from_points(n_counts: &[BigInt]) -> Vec<BigInt> {
    (1..=n_counts.len())
        .map(|n| {
            let mut acc = BigInt::zero();
            for d in 1..=n {
                if n % d != 0 {
                    continue;
                }
                match moebius(n / d) {
                    1 => acc += &n_counts[d - 1],
                    -1 => acc -= &n_counts[d - 1],
                    _ => {}
                }
            }
            let (quot, rem) = acc.div_rem(&BigInt::from(n));
            debug_assert!(rem.is_zero(), "place count not integral at n={n}");
            quot
        })
        .collect()
}

pub(crate) fn moebius(n: usize) -> i8 {
    let mut n = n;
    let mut result = 1i8;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The L-polynomial `prod (1 + x_i t + q t^2)`.
pub fn l_polynomial(ty: &ZetaType, ctx: &FieldContext) -> IntPolynomial {
    // with h(X) = prod (X - x_i): prod (x_i t + 1 + q t^2) = (-t)^g h(-(1 + q t^2)/t)
    let h = ty.x_poly(ctx);
    let g = ty.genus();
    let base = IntPolynomial::new(vec![BigInt::one(), BigInt::zero(), ctx.q().clone()]);
    let mut acc = IntPolynomial::zero();
    let mut base_pow = IntPolynomial::one();
    for j in 0..=g {
        let c = h.coeff(j);
        if !c.is_zero() {
            let signed = if (g + j) % 2 == 1 { -c } else { c };
            acc = &acc + &base_pow.shift_up(g - j).scale(&signed);
        }
        base_pow = &base_pow * &base;
    }
    acc
}

/// Limits on the coefficient searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub max_genus: usize,
    pub max_defect: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_genus: 8,
            max_defect: 8,
        }
    }
}

/// All types of genus `g` and defect `k`, with the default caps.
pub fn enumerate_defect_types(g: usize, k: usize) -> Result<Vec<ZetaType>> {
    enumerate_defect_types_capped(g, k, SearchCaps::default())
}

pub fn enumerate_defect_types_capped(g: usize, k: usize, caps: SearchCaps) -> Result<Vec<ZetaType>> {
    if g == 0 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    if g > caps.max_genus || k > caps.max_defect {
        return Err(Error::UnsupportedSize(format!(
            "genus {g}, defect {k} (caps: genus {}, defect {})",
            caps.max_genus, caps.max_defect
        )));
    }
    to_types(enumerate_totally_positive(g, g + k))
}

fn to_types(polys: Vec<IntPolynomial>) -> Result<Vec<ZetaType>> {
    polys.par_iter().map(ZetaType::new).collect()
}

/// Default degree cap for [`pattern_table`].
pub fn default_pattern_degree_cap(k: usize) -> usize {
    2 * k + 1
}

/// Types of defect `k` with no `x = m` entry and degree at most `degree_cap`.
///
/// Padding one of these with `x = m` entries gives every type of defect `k`. For a
/// totally positive algebraic integer other than `1` and `(3 +- sqrt 5)/2` the trace
/// exceeds 3/2 of the degree (Siegel), so an irreducible factor of defect `j >= 1` has
/// degree at most `2j` and a pattern of defect `k` has degree at most `2k`: any cap of at
/// least `2k` gives the complete list.
pub fn pattern_table(k: usize, degree_cap: usize) -> Result<Vec<ZetaType>> {
    if k == 0 {
        return Ok(vec![ZetaType::empty_pattern()]);
    }
    let mut out = Vec::new();
    for d in 1..=degree_cap {
        let polys: Vec<IntPolynomial> = enumerate_totally_positive(d, d + k)
            .into_iter()
            .filter(|p| !p.value_at_one().is_zero())
            .collect();
        out.extend(to_types(polys)?);
    }
    Ok(out)
}

/// All types of genus `g` and defect `k`, built from patterns when `g > 2k` so that large
/// genera only need searches of degree at most `2k`.
///
/// `max_search_degree` bounds the degree of the coefficient search that may be run.
pub fn candidate_types(g: usize, k: usize, max_search_degree: usize) -> Result<Vec<ZetaType>> {
    to_types(candidate_polys(g, k, max_search_degree)?)
}

/// Excess polynomials of [`candidate_types`], unfactored and in canonical order.
pub fn candidate_polys(g: usize, k: usize, max_search_degree: usize) -> Result<Vec<IntPolynomial>> {
    if g == 0 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let needed = g.min(2 * k);
    if needed > max_search_degree {
        return Err(Error::UnsupportedSize(format!(
            "genus {g}, defect {k} needs a degree-{needed} search (limit {max_search_degree})"
        )));
    }
    if g <= 2 * k {
        return Ok(enumerate_totally_positive(g, g + k));
    }
    let one = IntPolynomial::linear(&BigInt::one());
    let mut out: Vec<IntPolynomial> = Vec::new();
    for d in 0..=2 * k {
        let pad = one.pow(g - d);
        for pat in enumerate_totally_positive(d, d + k) {
            if d > 0 && pat.value_at_one().is_zero() {
                continue;
            }
            out.push(&pad * &pat);
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// Every monic integer polynomial of the given degree whose roots are all real and
/// positive and sum to `trace`, in canonical order.
///
/// Coefficients `e_j` (elementary symmetric functions of the roots) are chosen in order.
/// After `e_0..e_j` are fixed, the `(d - j)`-th derivative of `P`, rescaled to
/// `Q_j(t) = sum_i (-1)^i e_i C(d - i, j - i) t^(j - i)`, is determined; it must itself
/// have only positive real roots. Since `Q_j' = (d - j + 1) Q_(j-1)`, the admissible
/// `e_j` form an interval read off from the values of `Q_j` at the roots of `Q_(j-1)`.
/// The interval is computed in floating point with padding, intersected with the
/// Maclaurin and Newton bounds, and every surviving prefix is confirmed exactly.
pub fn enumerate_totally_positive(degree: usize, trace: usize) -> Vec<IntPolynomial> {
    if degree == 0 {
        return if trace == 0 {
            vec![IntPolynomial::one()]
        } else {
            Vec::new()
        };
    }
    if trace < degree {
        // AM-GM with a positive integer norm forces trace >= degree
        return Vec::new();
    }
    let s = trace as i64;
    if degree == 1 {
        return vec![IntPolynomial::from_i64s(&[-s, 1])];
    }
    let search = Search::new(degree, trace);
    let root1 = trace as f64 / degree as f64;
    let prefix = vec![BigInt::one(), BigInt::from(trace)];
    let (lo, hi) = search.range(&prefix, &[root1]);
    let mut out: Vec<IntPolynomial> = (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|e2| {
            let mut found = Vec::new();
            let mut prefix = prefix.clone();
            prefix.push(BigInt::from(e2));
            search.descend(&mut prefix, &[root1], &mut found);
            found
        })
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

struct Search {
    degree: usize,
    trace: f64,
    // binom[i][j] = C(i, j)
    binom: Vec<Vec<f64>>,
}

impl Search {
    fn new(degree: usize, trace: usize) -> Self {
        let binom = (0..=degree)
            .map(|i| (0..=degree).map(|j| binomial(i as u64, j as u64).to_f64().unwrap()).collect())
            .collect();
        Search {
            degree,
            trace: trace as f64,
            binom,
        }
    }

    /// `Q_j` for the prefix `e_0..e_j`.
    fn q_poly(&self, prefix: &[BigInt]) -> IntPolynomial {
        let j = prefix.len() - 1;
        let mut coeffs = vec![BigInt::zero(); j + 1];
        for (i, e) in prefix.iter().enumerate() {
            let c = e * binomial((self.degree - i) as u64, (j - i) as u64);
            coeffs[j - i] = if i % 2 == 1 { -c } else { c };
        }
        IntPolynomial::new(coeffs)
    }

    /// Candidate range for `e_j`, `j = prefix.len()`, given the roots of `Q_(j-1)`.
    fn range(&self, prefix: &[BigInt], crit: &[f64]) -> (i64, i64) {
        let j = prefix.len();
        let d = self.degree;
        // A_j(t): Q_j without its constant term
        let a_coeffs: Vec<f64> = (0..j)
            .map(|i| {
                let c = prefix[i].to_f64().unwrap() * self.binom[d - i][j - i];
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        let eval_a = |t: f64| -> f64 {
            // sum_i a_coeffs[i] * t^(j - i)
            let mut acc = 0.0;
            for c in &a_coeffs {
                acc = acc * t + c;
            }
            acc * t
        };
        let mut lo = 1.0f64;
        let mut hi = f64::INFINITY;
        for (idx, &s) in crit.iter().enumerate() {
            let i = idx + 1;
            let av = eval_a(s);
            let slack = 1e-7 * (1.0 + av.abs()) + 1e-7;
            // (-1)^(j-i) A(s_i) + (-1)^i e_j >= 0
            let signed = if (j - i) % 2 == 0 { av } else { -av };
            if i % 2 == 0 {
                lo = lo.max(-signed - slack);
            } else {
                hi = hi.min(signed + slack);
            }
        }
        // Maclaurin: e_j <= C(d, j) (S/d)^j
        let mac = self.binom[d][j] * (self.trace / d as f64).powi(j as i32);
        hi = hi.min(mac * (1.0 + 1e-9) + 1e-9);
        // Newton: p_j <= p_(j-1)^2 / p_(j-2) with p_i = e_i / C(d, i)
        let pj1 = prefix[j - 1].to_f64().unwrap() / self.binom[d][j - 1];
        let pj2 = prefix[j - 2].to_f64().unwrap() / self.binom[d][j - 2];
        let newton = self.binom[d][j] * pj1 * pj1 / pj2;
        hi = hi.min(newton * (1.0 + 1e-9) + 1e-9);
        (lo.ceil() as i64, hi.floor() as i64)
    }

    fn descend(&self, prefix: &mut Vec<BigInt>, crit: &[f64], found: &mut Vec<IntPolynomial>) {
        let q = self.q_poly(prefix);
        if !is_totally_positive(&q) {
            return;
        }
        let j = prefix.len() - 1;
        if j == self.degree {
            found.push(q);
            return;
        }
        let roots = self.roots_between(&q, crit);
        let (lo, hi) = self.range(prefix, &roots);
        for e in lo..=hi {
            prefix.push(BigInt::from(e));
            self.descend(prefix, &roots, found);
            prefix.pop();
        }
    }

    /// Roots of a real-rooted `Q_j` given the roots of its derivative, by bisection on the
    /// interlacing brackets.
    fn roots_between(&self, q: &IntPolynomial, crit: &[f64]) -> Vec<f64> {
        let coeffs: Vec<f64> = q.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
        let eval = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let mut edges = Vec::with_capacity(crit.len() + 2);
        edges.push(0.0);
        edges.extend_from_slice(crit);
        edges.push(self.trace);
        edges
            .windows(2)
            .map(|w| bisect(&eval, w[0], w[1]))
            .collect()
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.signum() == fb.signum() {
        // touching root at a bracket end
        return if fa.abs() <= fb.abs() { a } else { b };
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
