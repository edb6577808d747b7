//! The defect ladder: start from the best closed-form bound and walk `N` downward until some
//! zeta type survives every obstruction.
//!
//! A survivor is only an unobstructed candidate; the returned value is an upper bound.

mod table;
mod verify;

pub use table::{emit_table, TableFormat, TableRow};
pub use verify::{verify_paper, VerifyItem, VerifyReport};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{defect0_excluded, find_descent, DescentCertificate};
use crate::elimination::{
    orbit_within_weil_interval, places_nonneg_poly, rule_decomposable, rule_weil_interval, Rule,
    Status, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::exactalg::IntPolynomial;
use crate::hondatate::{admissible_elliptic_traces, fuhrmann_torres_interval, rule_elliptic_product, rule_fuhrmann_torres};
use crate::oesterle::{optimize, TrigWeights};
use crate::zetatypes::{candidate_polys, point_counts_of_poly, FieldContext, ZetaType};

/// Coefficient searches up to this degree run by default.
pub const DEFAULT_SEARCH_DEGREE: usize = 6;
/// Search degree allowed by the deep setting (the genus-7 defect-8 search over `F_3`).
pub const DEEP_SEARCH_DEGREE: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub descent: bool,
    pub honda_tate: bool,
    pub fuhrmann_torres: bool,
    pub explicit_formulae: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            descent: true,
            honda_tate: true,
            fuhrmann_torres: true,
            explicit_formulae: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub max_defect: usize,
    /// Place-count horizon; `None` means `2g`.
    pub horizon: Option<usize>,
    pub n_max: usize,
    pub rules: RuleSet,
    pub max_search_degree: usize,
    /// Also compare descended point counts with the bound over the smaller field.
    pub subfield_recursion: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            max_defect: 8,
            horizon: None,
            n_max: 10,
            rules: RuleSet::default(),
            max_search_degree: DEFAULT_SEARCH_DEGREE,
            subfield_recursion: false,
        }
    }
}

impl BoundOptions {
    pub fn deep(mut self) -> Self {
        self.max_search_degree = self.max_search_degree.max(DEEP_SEARCH_DEGREE);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub q: u64,
    pub g: usize,
    pub options: BoundOptions,
}

impl BoundQuery {
    pub fn new(q: u64, g: usize) -> Self {
        BoundQuery {
            q,
            g,
            options: BoundOptions::default(),
        }
    }

    pub fn with_options(mut self, options: BoundOptions) -> Self {
        self.options = options;
        self
    }

    pub fn horizon(&self) -> usize {
        self.options.horizon.unwrap_or(2 * self.g).max(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartSource {
    #[serde(rename = "SW")]
    SerreWeil,
    #[serde(rename = "W")]
    Weil,
    #[serde(rename = "explicit-formulae")]
    ExplicitFormulae,
}

impl StartSource {
    pub fn name(self) -> &'static str {
        match self {
            StartSource::SerreWeil => "SW",
            StartSource::Weil => "W",
            StartSource::ExplicitFormulae => "explicit-formulae",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Start {
    #[serde(with = "crate::serde_big")]
    pub value: BigInt,
    pub source: StartSource,
    #[serde(with = "crate::serde_big")]
    pub serre_weil: BigInt,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explicit_formulae: Option<ExplicitStart>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitStart {
    #[serde(with = "crate::serde_big")]
    pub bound: BigInt,
    pub weights: TrigWeights,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    #[serde(
        rename = "P_coeffs",
        serialize_with = "crate::serde_big::serialize_vec",
        deserialize_with = "crate::serde_big::deserialize_vec"
    )]
    pub p_coeffs: Vec<BigInt>,
    /// Entry list, present when the polynomial was factored.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    pub verdict: Status,
    pub rule: Option<Rule>,
    pub witness: Option<Witness>,
}

impl CandidateRecord {
    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.p_coeffs.clone())
    }

    pub fn survived(&self) -> bool {
        self.verdict == Status::Survived
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderStep {
    #[serde(rename = "N", with = "crate::serde_big")]
    pub n: BigInt,
    pub k: usize,
    pub candidates: Vec<CandidateRecord>,
}

impl LadderStep {
    pub fn survivors(&self) -> impl Iterator<Item = &CandidateRecord> {
        self.candidates.iter().filter(|c| c.survived())
    }

    /// Candidates not removed by the Weil interval or place counts.
    pub fn past_interval_and_places(&self) -> impl Iterator<Item = &CandidateRecord> {
        self.candidates
            .iter()
            .filter(|c| !matches!(c.rule, Some(Rule::WeilInterval | Rule::PlacesNonneg)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub query: BoundQuery,
    pub start: Start,
    pub ladder: Vec<LadderStep>,
    #[serde(with = "crate::serde_big")]
    pub upper_bound: BigInt,
    pub resolved: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unresolved_reason: Option<String>,
}

impl BoundResult {
    pub fn step(&self, k: usize) -> Option<&LadderStep> {
        self.ladder.iter().find(|s| s.k == k)
    }

    /// Distinct rules that eliminated at least one candidate.
    pub fn rules_used(&self) -> Vec<Rule> {
        let mut rules: Vec<Rule> = self
            .ladder
            .iter()
            .flat_map(|s| s.candidates.iter().filter_map(|c| c.rule))
            .collect();
        rules.sort();
        rules.dedup();
        rules
    }
}

struct Env<'a> {
    ctx: &'a FieldContext,
    query: &'a BoundQuery,
    horizon: usize,
    descent: Option<DescentCertificate>,
}

pub fn best_upper_bound(query: &BoundQuery) -> Result<BoundResult> {
    let g = query.g;
    if g == 0 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let ctx = FieldContext::new(query.q)?;
    let opts = &query.options;
    let sw = ctx.serre_weil_bound(g);
    let ef = opts.rules.explicit_formulae.then(|| {
        let r = optimize(&ctx, g, opts.n_max);
        ExplicitStart {
            bound: r.bound,
            weights: r.weights,
        }
    });
    let (value, source) = match &ef {
        Some(e) if e.bound < sw => (e.bound.clone(), StartSource::ExplicitFormulae),
        _ if ctx.sqrt_q().is_some() => (sw.clone(), StartSource::Weil),
        _ => (sw.clone(), StartSource::SerreWeil),
    };
    let start = Start {
        value: value.clone(),
        source,
        serre_weil: sw.clone(),
        explicit_formulae: ef,
    };
    let env = Env {
        ctx: &ctx,
        query,
        horizon: query.horizon(),
        descent: if opts.rules.descent {
            find_descent(&ctx).certificate().cloned()
        } else {
            None
        },
    };
    let mut ladder = Vec::new();
    let mut n = value;
    loop {
        let k = (&sw - &n).to_usize().expect("defect is a small natural number");
        let unresolved = |reason: String, ladder: Vec<LadderStep>, n: BigInt| BoundResult {
            query: query.clone(),
            start: start.clone(),
            ladder,
            upper_bound: n,
            resolved: false,
            unresolved_reason: Some(reason),
        };
        if n.is_negative() {
            return Err(Error::Internal("every point count was eliminated".into()));
        }
        if k > opts.max_defect {
            return Ok(unresolved(
                format!("defect {k} exceeds the scan limit {}", opts.max_defect),
                ladder,
                n,
            ));
        }
        let polys = match candidate_polys(g, k, opts.max_search_degree) {
            Ok(p) => p,
            Err(Error::UnsupportedSize(msg)) => return Ok(unresolved(msg, ladder, n)),
            Err(e) => return Err(e),
        };
        let candidates = polys
            .par_iter()
            .map(|p| judge(p, k, &env))
            .collect::<Result<Vec<_>>>()?;
        let found = candidates.iter().any(|c| c.survived());
        ladder.push(LadderStep {
            n: n.clone(),
            k,
            candidates,
        });
        if found {
            return Ok(BoundResult {
                query: query.clone(),
                start,
                ladder,
                upper_bound: n,
                resolved: true,
                unresolved_reason: None,
            });
        }
        n -= 1;
    }
}

fn record(p: &IntPolynomial, ty: Option<&ZetaType>, v: Verdict) -> CandidateRecord {
    CandidateRecord {
        p_coeffs: p.coeffs().to_vec(),
        label: ty.map(|t| t.label()),
        verdict: v.status,
        rule: v.rule,
        witness: v.witness,
    }
}

fn judge(p: &IntPolynomial, k: usize, env: &Env) -> Result<CandidateRecord> {
    let ctx = env.ctx;
    let g = env.query.g;
    let rules = env.query.options.rules;
    if !orbit_within_weil_interval(p, ctx) {
        let ty = ZetaType::new(p)?;
        let v = rule_weil_interval(&ty, ctx);
        if !v.is_eliminated() {
            return Err(Error::Internal(format!("no orbit of {p} leaves the Weil interval")));
        }
        return Ok(record(p, Some(&ty), v));
    }
    let v = places_nonneg_poly(p, ctx, env.horizon);
    if v.is_eliminated() {
        return Ok(record(p, None, v));
    }
    let ty = ZetaType::new(p)?;
    let v = rule_decomposable(&ty);
    if v.is_eliminated() {
        return Ok(record(p, Some(&ty), v));
    }
    if k == 0 && rules.descent {
        if let Some(cert) = &env.descent {
            let v = defect0_excluded(cert, g);
            if v.is_eliminated() {
                return Ok(record(p, Some(&ty), v));
            }
            if env.query.options.subfield_recursion {
                if let Some(v) = subfield_bounds(cert, env)? {
                    return Ok(record(p, Some(&ty), v));
                }
            }
        }
    }
    if rules.honda_tate {
        let v = rule_elliptic_product(&ty, ctx);
        if v.is_eliminated() {
            return Ok(record(p, Some(&ty), v));
        }
    }
    if k == 0 && rules.fuhrmann_torres {
        let v = rule_fuhrmann_torres(ctx, g);
        if v.is_eliminated() {
            return Ok(record(p, Some(&ty), v));
        }
    }
    Ok(record(p, Some(&ty), Verdict::survived()))
}

/// Descended counts over `F_{p^j}`, `j < e`, checked against the bound computed there.
fn subfield_bounds(cert: &DescentCertificate, env: &Env) -> Result<Option<Verdict>> {
    let g = env.query.g;
    let e = cert.ctx.e();
    for j in 1..e {
        let count = cert.count(j, g);
        let Some(sub_q) = num_traits::Pow::pow(BigInt::from(cert.ctx.p()), j).to_u64() else {
            continue;
        };
        let mut options = env.query.options;
        options.subfield_recursion = false;
        let sub = best_upper_bound(&BoundQuery {
            q: sub_q,
            g,
            options,
        })?;
        if count > sub.upper_bound {
            return Ok(Some(Verdict::eliminated(
                Rule::Descent,
                Witness::Descent {
                    j,
                    count,
                    reason: format!("exceeds the bound {} over F_{sub_q}", sub.upper_bound),
                },
            )));
        }
    }
    Ok(None)
}

/// Re-derives the evidence of an eliminated candidate from scratch.
///
/// Survivors and records without a witness return false.
pub fn verify_record(rec: &CandidateRecord, q: u64, g: usize, k: usize) -> bool {
    let Ok(ctx) = FieldContext::new(q) else {
        return false;
    };
    let p = rec.poly();
    let Some(w) = &rec.witness else {
        return false;
    };
    match (rec.rule, w) {
        (Some(Rule::WeilInterval), Witness::Orbit { orbit, .. }) => {
            p.exact_div(orbit).is_some() && !orbit_within_weil_interval(orbit, &ctx)
        }
        (Some(Rule::PlacesNonneg), Witness::NegativePlaces { n, a_n }) => {
            let prof = point_counts_of_poly(&p, &ctx, *n);
            a_n.is_negative() && prof.places(*n) == a_n
        }
        (Some(Rule::Decomposable), Witness::Partition(part)) => {
            let product = part
                .i
                .iter()
                .chain(&part.j)
                .fold(IntPolynomial::one(), |acc, (f, mult)| &acc * &f.pow(*mult as usize));
            product == p && part.verify()
        }
        (Some(Rule::Descent), Witness::Descent { j, count, .. }) => {
            let Some(cert) = find_descent(&ctx).certificate().cloned() else {
                return false;
            };
            k == 0 && *j >= 1 && *j <= ctx.e() && cert.count(*j, g) == *count
        }
        (Some(Rule::HondaTate), Witness::EllipticTrace { trace }) => {
            // entry x = -t sits at r = m + 1 + t with multiplicity one
            let r = ctx.m() + 1u32 + trace;
            let lin = IntPolynomial::linear(&r);
            let once = p.exact_div(&lin);
            let twice = once.as_ref().and_then(|o| o.exact_div(&lin));
            once.is_some()
                && twice.is_none()
                && !admissible_elliptic_traces(&ctx).is_admissible(trace)
        }
        (Some(Rule::FuhrmannTorres), Witness::FuhrmannTorres { .. }) => {
            k == 0 && fuhrmann_torres_interval(&ctx, g)
        }
        _ => false,
    }
}

/// Every eliminated candidate's witness re-verifies.
pub fn audit(result: &BoundResult) -> bool {
    result.ladder.iter().all(|step| {
        step.candidates
            .par_iter()
            .filter(|c| !c.survived())
            .all(|c| verify_record(c, result.query.q, result.query.g, step.k))
    })
}

/// Sanity check used by callers that print a result: the bound never exceeds the start.
pub fn is_consistent(result: &BoundResult) -> bool {
    result.upper_bound <= result.start.value
        && (!result.resolved
            || result
                .ladder
                .last()
                .is_some_and(|s| s.n == result.upper_bound && s.survivors().next().is_some()))
        && !result.upper_bound.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(q: u64, g: usize) -> BoundResult {
        best_upper_bound(&BoundQuery::new(q, g)).unwrap()
    }

    #[test]
    fn small_examples() {
        let r = bound(8, 4);
        assert_eq!(r.upper_bound, BigInt::from(27));
        assert!(r.resolved);
        let survivors: Vec<&CandidateRecord> = r.ladder.last().unwrap().survivors().collect();
        assert!(survivors.iter().any(|c| c.label.as_deref() == Some("(m-2,m,m,m)")));
        assert!(audit(&r));
        assert!(is_consistent(&r));

        let r = bound(2, 1);
        assert_eq!(r.upper_bound, BigInt::from(5));
        assert_eq!(r.ladder.len(), 1);

        let r = bound(8, 3);
        assert_eq!(r.upper_bound, BigInt::from(24));
        assert_eq!(r.ladder[0].k, 0);
    }

    #[test]
    fn unresolved_when_search_is_too_large() {
        let mut q = BoundQuery::new(3, 7);
        q.options.max_search_degree = 6;
        let r = best_upper_bound(&q).unwrap();
        assert!(!r.resolved);
        assert_eq!(r.upper_bound, BigInt::from(17));
        assert!(r.unresolved_reason.is_some());
    }

    #[test]
    fn invalid_queries() {
        assert!(best_upper_bound(&BoundQuery::new(12, 3)).is_err());
        assert!(best_upper_bound(&BoundQuery::new(8, 0)).is_err());
    }
}
