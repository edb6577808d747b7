//! Obstructions that rule out a zeta-function type, and the genus caps derived from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{difference_poly, differences_are_units, has_root_below, IntPolynomial};
use crate::zetatypes::{point_counts_of_poly, FieldContext, ZetaType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    WeilInterval,
    PlacesNonneg,
    Decomposable,
    Descent,
    HondaTate,
    FuhrmannTorres,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::WeilInterval => "weil-interval",
            Rule::PlacesNonneg => "places-nonneg",
            Rule::Decomposable => "decomposable",
            Rule::Descent => "descent",
            Rule::HondaTate => "honda-tate",
            Rule::FuhrmannTorres => "fuhrmann-torres",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Two groups of whole orbits whose cross differences are all units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub i: Vec<(IntPolynomial, u32)>,
    pub j: Vec<(IntPolynomial, u32)>,
}

impl Partition {
    /// Re-checks the witness from scratch: both sides nonempty and disjoint, and every
    /// cross difference polynomial is monic with constant term `+-1`.
    pub fn verify(&self) -> bool {
        if self.i.is_empty() || self.j.is_empty() {
            return false;
        }
        for (f, _) in &self.i {
            for (g, _) in &self.j {
                if f == g {
                    return false;
                }
                let d = difference_poly(f, g);
                // the constant term is the product of the constant terms of the monic
                // irreducible factors, so it is +-1 iff each of them is
                if !d.is_monic() || !d.coeff(0).magnitude().is_one() {
                    return false;
                }
            }
        }
        true
    }

    pub fn swapped(&self) -> Partition {
        Partition {
            i: self.j.clone(),
            j: self.i.clone(),
        }
    }
}

/// Evidence attached to an elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// An orbit with some `|x| > 2 sqrt q`; `orbit` is its excess factor.
    Orbit {
        orbit: IntPolynomial,
        x_poly: IntPolynomial,
    },
    /// The first negative place count.
    NegativePlaces {
        n: usize,
        #[serde(with = "crate::serde_big")]
        a_n: BigInt,
    },
    Partition(Partition),
    /// A subfield point count that is negative or drops below a smaller subfield's.
    Descent {
        j: u32,
        #[serde(with = "crate::serde_big")]
        count: BigInt,
        reason: String,
    },
    /// An elliptic factor with a trace outside the admissible list.
    EllipticTrace {
        #[serde(with = "crate::serde_big")]
        trace: BigInt,
    },
    /// The genus lies in the interval where the Weil bound cannot be met.
    FuhrmannTorres {
        #[serde(with = "crate::serde_big")]
        q: BigInt,
        g: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Survived,
    Eliminated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<Rule>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn survived() -> Self {
        Verdict {
            status: Status::Survived,
            rule: None,
            witness: None,
        }
    }

    pub fn eliminated(rule: Rule, witness: Witness) -> Self {
        Verdict {
            status: Status::Eliminated,
            rule: Some(rule),
            witness: Some(witness),
        }
    }

    pub fn is_eliminated(&self) -> bool {
        self.status == Status::Eliminated
    }
}

/// Polynomial whose roots are `4q - x^2` over the roots `x` of `h`.
fn weil_margin_poly(h: &IntPolynomial, q: &BigInt) -> IntPolynomial {
    let d = h.deg();
    // h(X) h(-X) = (-1)^d prod (X^2 - x_i^2)
    let prod = h * &h.negate_variable();
    let mut even: IntPolynomial =
        IntPolynomial::new(prod.coeffs().iter().step_by(2).cloned().collect());
    if d % 2 == 1 {
        even = -even;
    }
    // even(Z) = prod (Z - x_i^2); prod (Y - (4q - x_i^2)) = (-1)^d even(4q - Y)
    let w = even.negate_variable().taylor_shift(&-(q * 4u32));
    if d % 2 == 1 {
        -w
    } else {
        w
    }
}

/// Whether every `x` with excess polynomial `orbit` (any monic factor of a type) satisfies
/// `x^2 <= 4q`.
pub fn orbit_within_weil_interval(orbit: &IntPolynomial, ctx: &FieldContext) -> bool {
    let h = ZetaType::orbit_x_poly(orbit, ctx);
    if h.deg() == 1 {
        let x = -h.coeff(0);
        return &x * &x <= ctx.q() * 4u32;
    }
    !has_root_below(&weil_margin_poly(&h, ctx.q()), &BigInt::zero())
}

pub fn rule_weil_interval(ty: &ZetaType, ctx: &FieldContext) -> Verdict {
    for (orbit, _) in ty.orbits() {
        if !orbit_within_weil_interval(orbit, ctx) {
            return Verdict::eliminated(
                Rule::WeilInterval,
                Witness::Orbit {
                    orbit: orbit.clone(),
                    x_poly: ZetaType::orbit_x_poly(orbit, ctx),
                },
            );
        }
    }
    Verdict::survived()
}

/// Eliminates when some place count `a_n`, `n <= horizon`, is negative.
pub fn rule_places_nonneg(ty: &ZetaType, ctx: &FieldContext, horizon: usize) -> Verdict {
    places_nonneg_poly(ty.poly(), ctx, horizon)
}

/// [`rule_places_nonneg`] on an unfactored excess polynomial.
pub fn places_nonneg_poly(p: &IntPolynomial, ctx: &FieldContext, horizon: usize) -> Verdict {
    assert!(horizon >= 2, "place-count horizon must be at least 2");
    let prof = point_counts_of_poly(p, ctx, horizon);
    match prof.a.iter().position(|a| a.is_negative()) {
        Some(i) => Verdict::eliminated(
            Rule::PlacesNonneg,
            Witness::NegativePlaces {
                n: i + 1,
                a_n: prof.a[i].clone(),
            },
        ),
        None => Verdict::survived(),
    }
}

/// Splits the orbits into two groups with unit cross differences, if possible.
///
/// Such a split exists iff the graph joining orbits whose difference is not a unit is
/// disconnected; one side is then the component of the first orbit.
pub fn find_unit_partition(ty: &ZetaType) -> Option<Partition> {
    let orbits = ty.orbits();
    let n = orbits.len();
    if n < 2 {
        return None;
    }
    let mut linked = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let nonunit = !differences_are_units(&orbits[a].0, &orbits[b].0);
            linked[a][b] = nonunit;
            linked[b][a] = nonunit;
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..n {
            if linked[a][b] && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        return None;
    }
    let (i, j): (Vec<_>, Vec<_>) = orbits
        .iter()
        .zip(&seen)
        .partition(|(_, &inside)| inside);
    Some(Partition {
        i: i.into_iter().map(|(o, _)| o.clone()).collect(),
        j: j.into_iter().map(|(o, _)| o.clone()).collect(),
    })
}

pub fn rule_decomposable(ty: &ZetaType) -> Verdict {
    match find_unit_partition(ty) {
        Some(p) => Verdict::eliminated(Rule::Decomposable, Witness::Partition(p)),
        None => Verdict::survived(),
    }
}

fn cap_denominator(ctx: &FieldContext) -> BigInt {
    let m = ctx.m();
    m + m * m - ctx.q() * 2u32
}

/// Largest genus for which the Serre-Weil bound is not excluded by `a_2 >= 0`.
pub fn genus_cap_defect0(ctx: &FieldContext) -> BigInt {
    let q = ctx.q();
    (q * q - q).div_floor(&cap_denominator(ctx))
}

/// `floor((q^2 - q - 2 + 4m) / (m + m^2 - 2q))`, without checking applicability.
pub fn genus_cap_defect2_formula(ctx: &FieldContext) -> BigInt {
    let q = ctx.q();
    (q * q - q - 2u32 + ctx.m() * 4u32).div_floor(&cap_denominator(ctx))
}

/// The `sqrt 3` pair `(m + sqrt3 - 1, m - sqrt3 - 1)` as an excess factor.
pub fn sqrt3_pattern() -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, -4, 1])
}

/// The golden pair `(m + (-1 + sqrt5)/2, m + (-1 - sqrt5)/2)` as an excess factor.
pub fn golden_pattern() -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, -3, 1])
}

/// Genus cap for defect 2, present when the `sqrt 3` pair lies outside the Weil interval
/// (which holds iff `{2 sqrt q} < sqrt3 - 1`).
///
/// For genus 4 the cap further needs the golden pair excluded; see
/// [`defect2_cap_applies`].
pub fn genus_cap_defect2(ctx: &FieldContext) -> Option<BigInt> {
    if orbit_within_weil_interval(&sqrt3_pattern(), ctx) {
        None
    } else {
        Some(genus_cap_defect2_formula(ctx))
    }
}

/// Whether the defect-2 genus cap is valid at genus `g`.
pub fn defect2_cap_applies(ctx: &FieldContext, g: usize) -> bool {
    if g < 3 || orbit_within_weil_interval(&sqrt3_pattern(), ctx) {
        return false;
    }
    g != 4 || !orbit_within_weil_interval(&golden_pattern(), ctx)
}

pub fn defect1_possible(ctx: &FieldContext, g: usize) -> bool {
    match g {
        0 | 1 => true,
        2 => orbit_within_weil_interval(&golden_pattern(), ctx),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zetatypes::make_type;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn ctx(q: u64) -> FieldContext {
        FieldContext::new(q).unwrap()
    }

    fn padded(tail: &IntPolynomial, g: usize) -> ZetaType {
        let pad = p(&[-1, 1]).pow(g - tail.deg());
        make_type(&(&pad * tail)).unwrap()
    }

    #[test]
    fn weil_interval_examples() {
        let v = rule_weil_interval(&padded(&sqrt3_pattern(), 4), &ctx(8));
        assert_eq!(v.rule, Some(Rule::WeilInterval));
        assert!(!rule_weil_interval(&ZetaType::defect_zero(7), &ctx(8)).is_eliminated());
        assert!(rule_weil_interval(&padded(&golden_pattern(), 2), &ctx(13)).is_eliminated());
        assert!(!rule_weil_interval(&padded(&golden_pattern(), 2), &ctx(2)).is_eliminated());
        // m - 2 entry is fine but m + 1 is not
        assert!(!rule_weil_interval(&padded(&p(&[-3, 1]), 2), &ctx(9)).is_eliminated());
    }

    #[test]
    fn margin_poly_roots() {
        // x in {1, 3}, q = 2: 4q - x^2 in {7, -1}
        let h = p(&[3, -4, 1]);
        let w = weil_margin_poly(&h, &BigInt::from(2));
        assert_eq!(w, &p(&[-7, 1]) * &p(&[1, 1]));
    }

    #[test]
    fn places_examples() {
        let t = padded(&p(&[-5, 1]), 5);
        let v = rule_places_nonneg(&t, &ctx(9), 10);
        assert_eq!(
            v.witness,
            Some(Witness::NegativePlaces {
                n: 2,
                a_n: BigInt::from(-6)
            })
        );
        let t = padded(&p(&[-3, 1]), 4);
        assert!(!rule_places_nonneg(&t, &ctx(8), 8).is_eliminated());
        let v = rule_places_nonneg(&ZetaType::defect_zero(2), &ctx(4), 4);
        assert_eq!(v.rule, Some(Rule::PlacesNonneg));
    }

    #[test]
    fn decomposable_examples() {
        let v = rule_decomposable(&padded(&p(&[-2, 1]), 4));
        let Some(Witness::Partition(part)) = &v.witness else {
            panic!("expected a partition")
        };
        assert!(part.verify());
        assert!(part.swapped().verify());
        assert!(!rule_decomposable(&padded(&p(&[-3, 1]), 4)).is_eliminated());
        assert!(rule_decomposable(&padded(&golden_pattern(), 3)).is_eliminated());
        assert!(!rule_decomposable(&ZetaType::defect_zero(3)).is_eliminated());
        assert!(!rule_decomposable(&make_type(&p(&[-1, 6, -5, 1])).unwrap()).is_eliminated());
    }

    #[test]
    fn genus_caps() {
        assert_eq!(genus_cap_defect0(&ctx(8)), BigInt::from(4));
        assert_eq!(genus_cap_defect0(&ctx(4)), BigInt::from(1));
        assert_eq!(genus_cap_defect0(&ctx(16)), BigInt::from(6));
        assert_eq!(genus_cap_defect2(&ctx(8)), Some(BigInt::from(5)));
        assert_eq!(genus_cap_defect2(&ctx(13)), Some(BigInt::from(6)));
        assert_eq!(genus_cap_defect2_formula(&ctx(2)), BigInt::from(4));
        assert_eq!(genus_cap_defect2(&ctx(2)), None);
        assert!(defect2_cap_applies(&ctx(8), 6));
        assert!(!defect2_cap_applies(&ctx(8), 2));
    }

    #[test]
    fn defect1() {
        assert!(!defect1_possible(&ctx(7), 5));
        assert!(!defect1_possible(&ctx(13), 2));
        assert!(defect1_possible(&ctx(2), 2));
        assert!(defect1_possible(&ctx(13), 1));
    }
}
