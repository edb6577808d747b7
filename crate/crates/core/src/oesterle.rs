//! Explicit-formulae bounds.
//!
//! For weights `c_n >= 0` with `f(theta) = 1 + 2 sum c_n cos(n theta) >= 0`, every curve of
//! genus `g` over `F_q` has
//! `N <= (g + sum c_n (q^(n/2) + q^(-n/2))) / sum c_n q^(-n/2)`.
//! Weights are proposed by a linear program on a grid and then certified exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{count_real_roots_open, ExtRational, IntPolynomial};
use crate::zetatypes::FieldContext;

/// Nonnegative rational weights `c_1..c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigWeights {
    #[serde(with = "rational_vec")]
    c: Vec<BigRational>,
}

mod rational_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl TrigWeights {
    pub fn new(c: Vec<BigRational>) -> Result<Self> {
        if c.iter().any(|x| x.is_negative()) {
            return Err(Error::Domain("weights must be nonnegative".into()));
        }
        let mut c = c;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Ok(TrigWeights { c })
    }

    /// Weights `num_i / den`.
    pub fn from_ratios(num: &[i64], den: i64) -> Result<Self> {
        Self::new(
            num.iter()
                .map(|&n| BigRational::new(BigInt::from(n), BigInt::from(den)))
                .collect(),
        )
    }

    /// `c_1 = 1/2`, which reproduces the Weil bound.
    pub fn weil() -> Self {
        Self::from_ratios(&[1], 2).expect("valid weights")
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn scaled(&self, s: &BigRational) -> Self {
        TrigWeights {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    /// `f(theta)` in floating point.
    pub fn eval_f64(&self, theta: f64) -> f64 {
        1.0 + 2.0
            * self
                .c
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_f64().unwrap_or(0.0) * ((i + 1) as f64 * theta).cos())
                .sum::<f64>()
    }

    /// Integer multiple of `F(u)` where `F(cos theta) = f(theta)`.
    pub fn chebyshev_poly(&self) -> IntPolynomial {
        let den = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let den_r = BigRational::from_integer(den);
        let mut acc: Vec<BigRational> = vec![BigRational::one()];
        let mut prev = vec![BigRational::one()];
        let mut cur = vec![BigRational::zero(), BigRational::one()];
        let two = BigRational::from_integer(BigInt::from(2));
        for c in &self.c {
            if acc.len() < cur.len() {
                acc.resize(cur.len(), BigRational::zero());
            }
            for (a, t) in acc.iter_mut().zip(&cur) {
                *a += &two * c * t;
            }
            // T_(n+1) = 2u T_n - T_(n-1)
            let mut next = vec![BigRational::zero(); cur.len() + 1];
            for (j, t) in cur.iter().enumerate() {
                next[j + 1] += &two * t;
            }
            for (j, t) in prev.iter().enumerate() {
                next[j] -= t;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        IntPolynomial::new(acc.into_iter().map(|a| (a * &den_r).to_integer()).collect())
    }
}

impl fmt::Display for TrigWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// With the squarefree decomposition `F = prod f_i^i`, the product of the `f_i` with odd `i`.
fn odd_multiplicity_part(f: &IntPolynomial) -> IntPolynomial {
    // P_i = squarefree part of the (i-1)-th iterated gcd with the derivative
    let mut sqf_parts = Vec::new();
    let mut g = f.primitive_part();
    while g.deg() >= 1 {
        sqf_parts.push(g.squarefree_part().normalized());
        g = g.gcd(&g.derivative()).primitive_part();
    }
    sqf_parts.push(IntPolynomial::one());
    let mut odd = IntPolynomial::one();
    for i in (0..sqf_parts.len() - 1).step_by(2) {
        let f_i = sqf_parts[i]
            .exact_div(&sqf_parts[i + 1])
            .expect("nested squarefree parts divide");
        odd = &odd * &f_i;
    }
    odd
}

/// Exact check that `1 + 2 sum c_n cos(n theta) >= 0` for all real `theta`.
pub fn certify_nonneg(w: &TrigWeights) -> bool {
    let f = w.chebyshev_poly();
    let lo = BigRational::from_integer(BigInt::from(-1));
    let hi = BigRational::one();
    if f.sign_at(&lo) == Sign::Minus || f.sign_at(&hi) == Sign::Minus {
        return false;
    }
    if f.deg() == 0 {
        return f.coeff(0).is_positive();
    }
    let odd = odd_multiplicity_part(&f);
    if odd.deg() >= 1 {
        let n = count_real_roots_open(&odd, &ExtRational::Finite(lo), &ExtRational::Finite(hi))
            .expect("nonzero polynomial");
        if n > 0 {
            return false;
        }
    }
    // no sign change inside (-1, 1): one nonzero sample decides
    (1..)
        .map(|k| BigRational::new(BigInt::one(), BigInt::from(k + 1)))
        .map(|x| f.sign_at(&x))
        .find(|s| *s != Sign::NoSign)
        .is_some_and(|s| s == Sign::Plus)
}

fn rat_sign(r: &BigRational) -> Sign {
    r.numer().sign() * r.denom().sign()
}

/// `a + b sqrt(q)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurdValue {
    #[serde(with = "rational")]
    pub a: BigRational,
    #[serde(with = "rational")]
    pub b: BigRational,
    #[serde(with = "crate::serde_big")]
    pub q: BigInt,
}

mod rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl SurdValue {
    /// Canonical form: when `q` is a perfect square the surd part is folded into `a`.
    pub fn new(a: BigRational, b: BigRational, q: BigInt) -> Self {
        let s = q.sqrt();
        if &s * &s == q {
            let a = a + b * BigRational::from_integer(s);
            return SurdValue {
                a,
                b: BigRational::zero(),
                q,
            };
        }
        SurdValue { a, b, q }
    }

    pub fn rational(a: BigRational, q: BigInt) -> Self {
        Self::new(a, BigRational::zero(), q)
    }

    /// `sqrt(q)^n`.
    pub fn sqrt_q_pow(q: &BigInt, n: i64) -> Self {
        let half = n.div_euclid(2);
        let odd = n.rem_euclid(2) == 1;
        let qr = BigRational::from_integer(q.clone());
        let base = if half >= 0 {
            Pow::pow(&qr, half as u64)
        } else {
            Pow::pow(&qr, (-half) as u64).recip()
        };
        if odd {
            Self::new(BigRational::zero(), base, q.clone())
        } else {
            Self::new(base, BigRational::zero(), q.clone())
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * self.q.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn signum(&self) -> Sign {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == Sign::NoSign || sa == sb {
            return if sa == Sign::NoSign { sb } else { sa };
        }
        if sa == Sign::NoSign {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 q
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(self.q.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::NoSign,
        }
    }

    pub fn cmp_integer(&self, n: &BigInt) -> Ordering {
        let diff = SurdValue {
            a: &self.a - BigRational::from_integer(n.clone()),
            b: self.b.clone(),
            q: self.q.clone(),
        };
        match diff.signum() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn floor(&self) -> BigInt {
        let guess = self.to_f64().floor();
        let mut n = BigInt::from_f64(guess).unwrap_or_else(|| self.a.floor().to_integer());
        while self.cmp_integer(&n) == Ordering::Less {
            n -= 1;
        }
        while self.cmp_integer(&(&n + 1u32)) != Ordering::Less {
            n += 1;
        }
        n
    }

    fn conj(&self) -> Self {
        SurdValue {
            a: self.a.clone(),
            b: -&self.b,
            q: self.q.clone(),
        }
    }
}

impl Add for &SurdValue {
    type Output = SurdValue;

    fn add(self, rhs: &SurdValue) -> SurdValue {
        SurdValue::new(&self.a + &rhs.a, &self.b + &rhs.b, self.q.clone())
    }
}

impl Mul for &SurdValue {
    type Output = SurdValue;

    fn mul(self, rhs: &SurdValue) -> SurdValue {
        let q = BigRational::from_integer(self.q.clone());
        SurdValue::new(
            &self.a * &rhs.a + &self.b * &rhs.b * q,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.q.clone(),
        )
    }
}

impl Div for &SurdValue {
    type Output = SurdValue;

    fn div(self, rhs: &SurdValue) -> SurdValue {
        let num = self * &rhs.conj();
        let den = (rhs * &rhs.conj()).a;
        assert!(!den.is_zero(), "division by zero surd");
        SurdValue::new(num.a / &den, num.b / &den, self.q.clone())
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.q)
        }
    }
}

/// The explicit-formulae value for certified weights.
pub fn bound_from_weights(ctx: &FieldContext, g: usize, w: &TrigWeights) -> Result<SurdValue> {
    if w.is_zero() {
        return Err(Error::Domain("all weights are zero".into()));
    }
    if !certify_nonneg(w) {
        return Err(Error::Domain(format!("weights {w} are not certified nonnegative")));
    }
    let q = ctx.q();
    let mut num = SurdValue::rational(BigRational::from_integer(BigInt::from(g)), q.clone());
    let mut den = SurdValue::rational(BigRational::zero(), q.clone());
    for (i, c) in w.c.iter().enumerate() {
        let n = i as i64 + 1;
        let c = SurdValue::rational(c.clone(), q.clone());
        let up = SurdValue::sqrt_q_pow(q, n);
        let down = SurdValue::sqrt_q_pow(q, -n);
        num = &num + &(&c * &(&up + &down));
        den = &den + &(&c * &down);
    }
    Ok(&num / &den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitBound {
    #[serde(with = "crate::serde_big")]
    pub bound: BigInt,
    pub value: SurdValue,
    pub weights: TrigWeights,
}

/// Settings for [`optimize_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerSettings {
    pub n_max: usize,
    pub grid_points: usize,
    pub denominator: i64,
    pub dinkelbach_rounds: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            n_max: 10,
            grid_points: 2000,
            denominator: 10_000,
            dinkelbach_rounds: 40,
        }
    }
}

/// Best certified explicit-formulae bound with at most `n_max` weights.
pub fn optimize(ctx: &FieldContext, g: usize, n_max: usize) -> ExplicitBound {
    optimize_with(
        ctx,
        g,
        OptimizerSettings {
            n_max,
            ..OptimizerSettings::default()
        },
    )
}

pub fn optimize_with(ctx: &FieldContext, g: usize, settings: OptimizerSettings) -> ExplicitBound {
    let weil = TrigWeights::weil();
    let weil_value = bound_from_weights(ctx, g, &weil).expect("Weil weights certify");
    let mut best = ExplicitBound {
        bound: weil_value.floor(),
        value: weil_value,
        weights: weil,
    };
    if settings.n_max < 2 {
        return best;
    }
    let Some(raw) = lp_weights(ctx, g, &settings) else {
        return best;
    };
    if let Some(w) = certified_snap(&raw, settings.denominator) {
        if let Ok(value) = bound_from_weights(ctx, g, &w) {
            let bound = value.floor();
            if bound < best.bound || (bound == best.bound && value_less(&value, &best.value)) {
                best = ExplicitBound {
                    bound,
                    value,
                    weights: w,
                };
            }
        }
    }
    best
}

fn value_less(a: &SurdValue, b: &SurdValue) -> bool {
    let diff = SurdValue::new(&a.a - &b.a, &a.b - &b.b, a.q.clone());
    diff.signum() == Sign::Minus
}

fn float_value(a: &[f64], b: &[f64], g: f64, c: &[f64]) -> f64 {
    let num: f64 = g + c.iter().zip(a).map(|(c, a)| c * a).sum::<f64>();
    let den: f64 = c.iter().zip(b).map(|(c, b)| c * b).sum();
    num / den
}

/// Dinkelbach iterations: for fixed `lambda`, minimize `sum c_n (A_n - lambda B_n)` over the
/// grid-feasible weights; the ratio drops until the minimum reaches `-g`.
fn lp_weights(ctx: &FieldContext, g: usize, s: &OptimizerSettings) -> Option<Vec<f64>> {
    let q = ctx.q().to_f64()?;
    let n = s.n_max;
    let a: Vec<f64> = (1..=n)
        .map(|k| q.powf(k as f64 / 2.0) + q.powf(-(k as f64) / 2.0))
        .collect();
    let b: Vec<f64> = (1..=n).map(|k| q.powf(-(k as f64) / 2.0)).collect();
    let g = g as f64;
    let thetas: Vec<f64> = (0..s.grid_points)
        .map(|i| std::f64::consts::PI * i as f64 / (s.grid_points - 1) as f64)
        .collect();
    let mut c = vec![0.0; n];
    c[0] = 0.5;
    let mut lambda = float_value(&a, &b, g, &c);
    for _ in 0..s.dinkelbach_rounds {
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = (0..n)
            .map(|k| lp.add_var(a[k] - lambda * b[k], (0.0, 1.0)))
            .collect();
        for &t in &thetas {
            let row: Vec<_> = vars
                .iter()
                .enumerate()
                .map(|(k, &v)| (v, 2.0 * ((k + 1) as f64 * t).cos()))
                .collect();
            lp.add_constraint(row.as_slice(), ComparisonOp::Ge, -1.0);
        }
        let sol = lp.solve().ok()?.into_solution().ok()?;
        let next: Vec<f64> = vars.iter().map(|&v| sol.var_value(v).max(0.0)).collect();
        if next.iter().zip(&b).map(|(c, b)| c * b).sum::<f64>() <= 0.0 {
            break;
        }
        let value = float_value(&a, &b, g, &next);
        if value >= lambda * (1.0 - 1e-13) {
            break;
        }
        lambda = value;
        c = next;
    }
    Some(c)
}

/// Rounds to the given denominator, then shrinks toward zero until the exact
/// nonnegativity certificate holds.
fn certified_snap(c: &[f64], denominator: i64) -> Option<TrigWeights> {
    let den = BigInt::from(denominator);
    let snapped: Vec<BigRational> = c
        .iter()
        .map(|&x| BigRational::new(BigInt::from_f64((x * denominator as f64).round()).unwrap(), den.clone()))
        .collect();
    let w = TrigWeights::new(snapped).ok()?;
    if w.is_zero() {
        return None;
    }
    if certify_nonneg(&w) {
        return Some(w);
    }
    // f_s = (1 - s) + s f for the scaled weights
    let mut eps = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    for _ in 0..40 {
        let s = (BigRational::one() + &eps).recip();
        let scaled = w.scaled(&s);
        if certify_nonneg(&scaled) {
            return Some(scaled);
        }
        eps = eps * BigRational::from_integer(BigInt::from(2));
    }
    None
}
