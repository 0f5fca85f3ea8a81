//! Shifted L-series `sum_{n>=1} sigma_a(n) tau(m+n) / (m+n)^s` in big floats,
//! checks of the tau identities, the `m = 0` values and recovery of the
//! Petersson norm `<Delta, Delta>`.
//!
//! Sums run in ascending `n` inside one thread; parallelism is only across
//! independent queries, so every result is bit-identical between runs.

use std::sync::Arc;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use serde::Serialize;

use crate::arith::{linalg, working_precision, BigFloat, Int, Rat};
use crate::calculus::{rankin_cohen, serre};
use crate::error::{Error, Result};
use crate::forms::{eisenstein, in_basis, sigma, sigma_sieve, Form, TauTable};
use crate::poincare::{find_identity, reduce_weight12, Reduction, RelationKind, TauIdentity};

/// `<Delta, Delta>` used when nothing else is configured.
pub const PETERSSON_REFERENCE: f64 = 1.03536205680e-6;
/// Environment variable overriding [`PETERSSON_REFERENCE`].
pub const PETERSSON_ENV: &str = "MODCALC_PETERSSON_NORM";

pub fn petersson_reference() -> f64 {
    std::env::var(PETERSSON_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(PETERSSON_REFERENCE)
}

/// The `(a, s)` pairs that occur in the catalog, in the order of the
/// `m = 0` table.
pub const CATALOG_PAIRS: [(u32, u32); 6] = [(1, 11), (3, 11), (3, 10), (1, 10), (1, 9), (1, 8)];

/// Read-only tables shared by every query: `tau` and `sigma_1`, `sigma_3`.
#[derive(Debug)]
pub struct TauContext {
    tau: TauTable,
    sigma1: Vec<u128>,
    sigma3: Vec<u128>,
}

impl TauContext {
    /// Tables for indices `< len`.
    pub fn new(len: usize) -> Arc<TauContext> {
        let (tau, (sigma1, sigma3)) = rayon::join(
            || TauTable::new(len),
            || rayon::join(|| sigma_sieve(1, len), || sigma_sieve(3, len)),
        );
        Arc::new(TauContext { tau, sigma1, sigma3 })
    }

    /// Length needed to evaluate `m` up to `max_m` with cutoff `cutoff`.
    pub fn required_len(max_m: usize, cutoff: usize) -> usize {
        max_m + cutoff + 1
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn tau_table(&self) -> &TauTable {
        &self.tau
    }

    fn sigma(&self, a: u32, n: usize) -> u128 {
        match a {
            1 => self.sigma1[n],
            3 => self.sigma3[n],
            _ => unreachable!("validated by LQuery"),
        }
    }
}

/// Extra polynomial weight on the summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weighting {
    Plain,
    /// Multiplies the `n`-th term by `n`: the hidden moment.
    TimesN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LQuery {
    pub m: usize,
    pub a: u32,
    pub s: u32,
    pub cutoff: usize,
    pub precision: u32,
    pub weighting: Weighting,
}

impl LQuery {
    /// Only catalog pairs are accepted.
    pub fn new(m: usize, a: u32, s: u32, cutoff: usize) -> Result<LQuery> {
        if !CATALOG_PAIRS.contains(&(a, s)) {
            return Err(Error::UnsupportedQuery(format!("(a, s) = ({a}, {s}) is not a catalog pair")));
        }
        if cutoff == 0 {
            return Err(Error::InvalidArgument("cutoff must be positive".into()));
        }
        Ok(LQuery {
            m,
            a,
            s,
            cutoff,
            precision: working_precision(),
            weighting: Weighting::Plain,
        })
    }

    /// `sum n sigma_3(n) tau(m+n)/(m+n)^11`, which vanishes for `m >= 1`.
    pub fn hidden_moment(m: usize, cutoff: usize) -> Result<LQuery> {
        let mut q = LQuery::new(m, 3, 11, cutoff)?;
        q.weighting = Weighting::TimesN;
        Ok(q)
    }

    pub fn with_precision(mut self, bits: u32) -> LQuery {
        self.precision = bits;
        self
    }

    fn poly_degree(&self) -> u32 {
        self.a + u32::from(self.weighting == Weighting::TimesN)
    }
}

#[derive(Clone, Debug)]
pub struct LResult {
    pub partial_sum: BigFloat,
    /// The certified bound when there is one, else the heuristic envelope.
    pub tail_estimate: f64,
    pub rigorous: bool,
    pub terms_used: usize,
    /// Ten times the largest `|term|` over the last decade of `n`.
    pub heuristic_tail: f64,
}

/// Shifted sums for `m >= 1`; `m = 0` goes through [`lvalue_m0`].
pub fn shifted_l(ctx: &TauContext, q: &LQuery) -> Result<LResult> {
    if q.m == 0 {
        return Err(Error::UnsupportedQuery(
            "m = 0 has no tau(m) normalisation; use the m = 0 L-values".into(),
        ));
    }
    raw_sum(ctx, q)
}

fn raw_sum(ctx: &TauContext, q: &LQuery) -> Result<LResult> {
    let needed = q.m + q.cutoff + 1;
    if ctx.len() < needed {
        return Err(Error::TauTableTooShort {
            index: q.m + q.cutoff,
            required: needed,
            available: ctx.len(),
        });
    }
    let p = q.precision;
    let mut acc = BigFloat::new(p);
    let mut envelope = 0f64;
    let decade = q.cutoff - q.cutoff / 10;
    for n in 1..=q.cutoff {
        let j = q.m + n;
        let tau = ctx.tau.tau(j)?;
        if tau.cmp0().is_eq() {
            continue;
        }
        let mut num = Int::from(ctx.sigma(q.a, n)) * tau;
        if q.weighting == Weighting::TimesN {
            num *= n as u64;
        }
        let den = Int::from(j).pow(q.s);
        let term = BigFloat::with_val(p, &num) / &den;
        if n > decade {
            envelope = envelope.max(term.to_f64().abs());
        }
        acc += &term;
    }
    let heuristic = 10.0 * envelope;
    let (tail_estimate, rigorous) = match certified_tail(q.m, q.poly_degree(), q.a, q.s, q.cutoff) {
        Some(bound) => (bound, true),
        None => (heuristic, false),
    };
    Ok(LResult {
        partial_sum: acc,
        tail_estimate,
        rigorous,
        terms_used: q.cutoff,
        heuristic_tail: heuristic,
    })
}

/// Upper bound for `sum_{n>T} n^e sigma_a(n) |tau(m+n)| / (m+n)^s` from
/// Deligne's bound, `d(j) <= j^{1.5379 ln 2 / ln ln j}`, `sigma_1(n) <= n(1 + ln n)`
/// and `sigma_3(n) <= 1.21 n^3`, with integral comparison and a factor 2.
/// `degree` is `a + e`. Only attempted for `s >= 10`; `None` when the bound
/// does not converge.
pub fn certified_tail(m: usize, degree: u32, a: u32, s: u32, cutoff: usize) -> Option<f64> {
    if s < 10 || cutoff < 16 {
        return None;
    }
    let t = cutoff as f64;
    // ln ln j is increasing, so the divisor exponent at j = m + T + 1 covers every later j
    let j0 = (m + cutoff + 1) as f64;
    let div_exp = 1.5379 * std::f64::consts::LN_2 / j0.ln().ln();
    // (m+n)^{-s'} <= n^{-s'} for the negative net exponent
    let p = degree as f64 + 5.5 + div_exp - s as f64;
    if p >= -1.0 {
        return None;
    }
    let q = -p - 1.0;
    let integral = if a == 1 {
        // int_T^inf x^p (1 + ln x) dx
        t.powf(-q) * ((1.0 + t.ln()) / q + 1.0 / (q * q))
    } else {
        1.21 * t.powf(-q) / q
    };
    Some(2.0 * integral)
}

/// Cutoff and tolerance by `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tier {
    pub s: u32,
    pub cutoff: usize,
    pub tol: f64,
}

pub fn tier(s: u32) -> Result<Tier> {
    let (cutoff, tol) = match s {
        11 => (10_000, 1e-10),
        10 => (100_000, 1e-8),
        9 => (100_000, 1e-6),
        8 => (300_000, 1e-4),
        _ => return Err(Error::UnsupportedQuery(format!("no tier for s = {s}"))),
    };
    Ok(Tier { s, cutoff, tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One row of an identity check. Floats are rendered as strings so the CSV
/// and JSON forms carry the same digits.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub identity_id: String,
    pub m: usize,
    pub a: u32,
    pub s: u32,
    pub cutoff: usize,
    pub partial_sum: String,
    pub tail_estimate: String,
    pub rigorous: bool,
    pub lhs: String,
    pub rel_err: String,
    pub verdict: Verdict,
    #[serde(skip)]
    pub rel_err_value: f64,
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

/// Compares `tau(m)` with `pref(m) * sum`. Passes iff the relative error is
/// within `tol`, and, when the tail is certified, the tail scaled the same
/// way is within `tol` too. A certified bound that is too weak to certify
/// `tol` is reported as the heuristic tail with `rigorous = false`.
pub fn verify_identity(ctx: &TauContext, id: &TauIdentity, m: usize, tol: f64, cutoff: usize) -> Result<VerifyReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("identities are stated for m >= 1".into()));
    }
    let res = shifted_l(ctx, &LQuery::new(m, id.sigma, id.s, cutoff)?)?;
    let p = res.partial_sum.prec();
    let pref = id.prefactor(m as u64)?;
    let lhs = ctx.tau.tau(m)?.clone();
    let rhs = BigFloat::with_val(p, &pref) * &res.partial_sum;
    let lhs_f = BigFloat::with_val(p, &lhs);
    let rel = (rhs - &lhs_f).abs() / lhs_f.abs();
    let rel_err = rel.to_f64();
    let scale = pref.to_f64().abs() / lhs.to_f64().abs();
    let (tail, rigorous) = if res.rigorous && res.tail_estimate * scale <= tol {
        (res.tail_estimate, true)
    } else {
        (res.heuristic_tail, false)
    };
    let ok = rel_err <= tol && (!rigorous || tail * scale <= tol);
    Ok(VerifyReport {
        identity_id: id.id.to_string(),
        m,
        a: id.sigma,
        s: id.s,
        cutoff,
        partial_sum: res.partial_sum.to_string_radix(10, Some(25)),
        tail_estimate: sci(tail),
        rigorous,
        lhs: lhs.to_string(),
        rel_err: sci(rel_err),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        rel_err_value: rel_err,
    })
}

/// [`verify_identity`] over `ms` in parallel, rows sorted by `m`.
pub fn verify_range(
    ctx: &TauContext,
    id: &str,
    ms: std::ops::RangeInclusive<usize>,
    tol: Option<f64>,
    cutoff: Option<usize>,
) -> Result<Vec<VerifyReport>> {
    let id = find_identity(id)?;
    let t = tier(id.s)?;
    let tol = tol.unwrap_or(t.tol);
    let cutoff = cutoff.unwrap_or(t.cutoff);
    let mut rows: Vec<VerifyReport> = ms
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| verify_identity(ctx, &id, m, tol, cutoff))
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.m);
    Ok(rows)
}

pub const REPORT_COLUMNS: [&str; 11] = [
    "identity_id",
    "m",
    "a",
    "s",
    "cutoff",
    "partial_sum",
    "tail_estimate",
    "rigorous",
    "lhs",
    "rel_err",
    "verdict",
];

pub fn write_csv<W: std::io::Write>(rows: &[VerifyReport], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `pi^11` at `prec` bits, by repeated multiplication.
pub fn pi_pow11(prec: u32) -> BigFloat {
    let pi = BigFloat::with_val(prec, Constant::Pi);
    let mut acc = pi.clone();
    for _ in 1..11 {
        acc *= &pi;
    }
    acc
}

/// Closed-form constants `c` with `sum tau(n) sigma_a(n)/n^s = c pi^11 <Delta, Delta>`.
pub fn predicted_constant(a: u32, s: u32) -> Result<Rat> {
    let p2 = |e: u32| Int::from(1) << e;
    let c = |num: Int, den: i64| Rat::from((num, Int::from(den)));
    Ok(match (a, s) {
        (1, 11) => c(p2(19) * 11u32, 3 * 125 * 7 * 691),
        (3, 11) => c(p2(17), 9 * 7 * 691),
        (3, 10) => c(p2(16), 27 * 125 * 7),
        (1, 10) => c(p2(17), 243 * 25 * 7),
        (1, 9) => c(p2(13), 81 * 5 * 7),
        (1, 8) => c(p2(14), 27 * 5 * 49),
        _ => return Err(Error::UnsupportedQuery(format!("no m = 0 value for ({a}, {s})"))),
    })
}

/// One exact weight-12 identity `LHS = alpha E12 + beta Delta = P_12(phi)`.
#[derive(Clone, Debug)]
pub struct ExactLhs {
    pub kind: RelationKind,
    pub label: &'static str,
    pub lhs: Form,
    pub alpha: Rat,
    pub beta: Rat,
    /// Seed stream `a_n` written as `sum_j k_j sigma_a(n) n^{11-s}` over [`CATALOG_PAIRS`].
    pub stream: Vec<((u32, u32), Rat)>,
}

/// Left-hand side of the `m = 0` identity attached to a relation kind.
pub fn exact_lhs(kind: RelationKind, prec: usize) -> Result<Form> {
    let e = |k| eisenstein(k, prec);
    let r = |n: i64, d: i64| Rat::from((n, d));
    Ok(match kind {
        RelationKind::SerreP10 => serre(&e(10)?, 1)?,
        RelationKind::ProductP8E4 => e(8)?.mul(&e(4)?),
        RelationKind::BracketE4P6 => rankin_cohen(&e(4)?, &e(6)?, 1)?,
        RelationKind::Serre2P8 => serre(&e(8)?, 2)?,
        RelationKind::Serre3P6 => {
            let e6 = e(6)?;
            serre(&e6, 3)?.add(&e6.pow(2).scale(&r(7, 36)))?
        }
        RelationKind::Serre4P4 => {
            let (e4, e6) = (e(4)?, e(6)?);
            serre(&e4, 4)?
                .sub(&e4.mul(&e(8)?).scale(&r(35, 864)))?
                .sub(&rankin_cohen(&e4, &e4, 2)?.scale(&r(7, 40)))?
                .add(&rankin_cohen(&e6, &e4, 1)?.scale(&r(35, 432)))?
        }
    })
}

/// Computes and decomposes the six exact left-hand sides, checking each
/// against the constant term of its Poincare seed and writing the seed
/// stream in the catalog basis.
pub fn exact_lhs_catalog(prec: usize) -> Result<Vec<ExactLhs>> {
    RelationKind::ALL
        .par_iter()
        .map(|&kind| {
            let lhs = exact_lhs(kind, prec)?;
            let (alpha, beta) = in_basis(&lhs)?.eisenstein_cusp_parts()?;
            let terms = prec - 1;
            let p = kind.poincare(0, terms)?;
            let Reduction::Identity { eisenstein_part, stream } = reduce_weight12(&p, 0, terms)? else {
                unreachable!("m = 0 instances are exact");
            };
            if eisenstein_part != alpha {
                return Err(Error::Inconsistent(format!(
                    "{}: E12 part {alpha} of the form differs from seed constant {eisenstein_part}",
                    kind.label()
                )));
            }
            let stream = decompose_stream(&stream[1..])?;
            Ok(ExactLhs {
                kind,
                label: kind.label(),
                lhs,
                alpha,
                beta,
                stream,
            })
        })
        .collect()
}

fn decompose_stream(a: &[Rat]) -> Result<Vec<((u32, u32), Rat)>> {
    let rows: Vec<Vec<Rat>> = (1..=a.len() as u64)
        .map(|n| {
            CATALOG_PAIRS
                .iter()
                .map(|&(sa, s)| Ok(Rat::from(sigma(sa, n)? * Int::from(n).pow(11 - s))))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let sol = linalg::solve(&rows, a)
        .map_err(|e| Error::Inconsistent(format!("seed stream outside the catalog span: {e:?}")))?;
    Ok(CATALOG_PAIRS.iter().copied().zip(sol.x).collect())
}

/// The `m = 0` constants re-derived from the exact identities:
/// `beta_i = C sum_j K_ij L_j` with `C = 10!/((4 pi)^11 <Delta,Delta>)`
/// gives `L_j = 4^11/10! (K^{-1} beta)_j pi^11 <Delta,Delta>`.
pub fn derived_constants(prec: usize) -> Result<Vec<((u32, u32), Rat)>> {
    let cat = exact_lhs_catalog(prec)?;
    let rows: Vec<Vec<Rat>> = cat.iter().map(|e| e.stream.iter().map(|(_, k)| k.clone()).collect()).collect();
    let betas: Vec<Rat> = cat.iter().map(|e| e.beta.clone()).collect();
    let sol = linalg::solve(&rows, &betas).map_err(|e| Error::Inconsistent(format!("{e:?}")))?;
    if !sol.is_unique() {
        return Err(Error::Inconsistent("exact identities do not determine every L-value".into()));
    }
    let scale = Rat::from((Int::from(1) << 22u32, Int::from(3_628_800)));
    Ok(CATALOG_PAIRS
        .iter()
        .copied()
        .zip(sol.x.into_iter().map(|x| x * &scale))
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LValue {
    pub a: u32,
    pub s: u32,
    pub cutoff: usize,
    #[serde(serialize_with = "ser_float")]
    pub numeric: BigFloat,
    pub tail_estimate: f64,
    pub rigorous: bool,
    #[serde(with = "crate::arith::serde_rat")]
    pub constant: Rat,
    #[serde(serialize_with = "ser_float")]
    pub predicted: BigFloat,
    pub rel_err: f64,
}

fn ser_float<S: serde::Serializer>(x: &BigFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string_radix(10, Some(20)))
}

/// `sum_{n>=1} tau(n) sigma_a(n)/n^s` truncated at `cutoff` (default: the tier),
/// against `constant * pi^11 * <Delta, Delta>_ref`.
pub fn lvalue_m0(ctx: &TauContext, a: u32, s: u32, cutoff: Option<usize>, reference: f64) -> Result<LValue> {
    let constant = predicted_constant(a, s)?;
    let cutoff = cutoff.unwrap_or(tier(s)?.cutoff);
    let res = raw_sum(ctx, &LQuery::new(0, a, s, cutoff)?)?;
    let p = res.partial_sum.prec();
    let predicted = BigFloat::with_val(p, &constant) * pi_pow11(p) * reference;
    let rel_err = (BigFloat::with_val(p, &res.partial_sum - &predicted) / &predicted).to_f64().abs();
    Ok(LValue {
        a,
        s,
        cutoff,
        numeric: res.partial_sum,
        tail_estimate: res.tail_estimate,
        rigorous: res.rigorous,
        constant,
        predicted,
        rel_err,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeterssonEstimate {
    pub a: u32,
    pub s: u32,
    #[serde(serialize_with = "ser_float")]
    pub estimate: BigFloat,
    pub dev_from_reference: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeterssonReport {
    pub reference: f64,
    pub estimates: Vec<PeterssonEstimate>,
    /// Over all six.
    pub max_pairwise_dev: f64,
    /// Over the `s >= 10` entries only.
    pub max_pairwise_dev_s10: f64,
}

/// Inverts every `m = 0` closed form: `<Delta,Delta> ~ L / (c pi^11)`.
pub fn petersson_recover(ctx: &TauContext, reference: f64) -> Result<PeterssonReport> {
    let estimates: Vec<PeterssonEstimate> = CATALOG_PAIRS
        .par_iter()
        .map(|&(a, s)| {
            let v = lvalue_m0(ctx, a, s, None, reference)?;
            let p = v.numeric.prec();
            let est = BigFloat::with_val(p, &v.numeric / (BigFloat::with_val(p, &v.constant) * pi_pow11(p)));
            let dev = ((est.to_f64() - reference) / reference).abs();
            Ok(PeterssonEstimate {
                a,
                s,
                estimate: est,
                dev_from_reference: dev,
            })
        })
        .collect::<Result<_>>()?;
    let spread = |filter: &dyn Fn(&PeterssonEstimate) -> bool| {
        let mut worst = 0f64;
        for x in estimates.iter().filter(|e| filter(e)) {
            for y in estimates.iter().filter(|e| filter(e)) {
                let p = x.estimate.prec();
                let d = BigFloat::with_val(p, &x.estimate - &y.estimate) / &y.estimate;
                worst = worst.max(d.to_f64().abs());
            }
        }
        worst
    };
    let max_pairwise_dev = spread(&|_| true);
    let max_pairwise_dev_s10 = spread(&|e| e.s >= 10);
    Ok(PeterssonReport {
        reference,
        estimates,
        max_pairwise_dev,
        max_pairwise_dev_s10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, eisenstein};

    fn r(n: i64, d: i64) -> Rat {
        Rat::from((n, d))
    }

    #[test]
    fn exact_catalog_values() {
        let cat = exact_lhs_catalog(30).unwrap();
        let want = [
            (r(-5, 6), r(38016, 691)),
            (r(1, 1), r(432000, 691)),
            (r(0, 1), r(-3456, 1)),
            (r(1, 2), r(-49344, 691)),
            (r(0, 1), r(-168, 1)),
            (r(0, 1), r(-600, 1)),
        ];
        for (e, (a, b)) in cat.iter().zip(want) {
            assert_eq!((e.alpha.clone(), e.beta.clone()), (a.clone(), b.clone()), "{}", e.label);
            let rebuilt = eisenstein(12, 30).unwrap().scale(&a).add(&delta(30).unwrap().scale(&b)).unwrap();
            assert_eq!(e.lhs, rebuilt);
        }
    }

    #[test]
    fn derived_constants_match_table() {
        for ((a, s), c) in derived_constants(40).unwrap() {
            assert_eq!(c, predicted_constant(a, s).unwrap(), "({a}, {s})");
        }
    }

    #[test]
    fn stream_decompositions() {
        let cat = exact_lhs_catalog(30).unwrap();
        let get = |i: usize, pair: (u32, u32)| cat[i].stream.iter().find(|(p, _)| *p == pair).unwrap().1.clone();
        assert_eq!(get(0, (1, 11)), 20);
        assert_eq!(get(1, (3, 11)), 240);
        assert_eq!(get(2, (3, 10)), -1440);
        // 1/2 E2^2 = 1/2 (E4 + 12 D E2)
        assert_eq!(get(3, (3, 11)), 120);
        assert_eq!(get(3, (1, 10)), -144);
        assert_eq!(get(5, (1, 8)), -280);
    }

    #[test]
    fn query_validation() {
        assert!(LQuery::new(1, 1, 12, 10).is_err());
        assert!(LQuery::new(1, 3, 9, 10).is_err());
        assert!(LQuery::new(1, 1, 9, 0).is_err());
        let ctx = TauContext::new(50);
        assert!(matches!(shifted_l(&ctx, &LQuery::new(0, 1, 11, 10).unwrap()), Err(Error::UnsupportedQuery(_))));
        let e = shifted_l(&ctx, &LQuery::new(10, 1, 11, 45).unwrap()).unwrap_err();
        assert!(matches!(e, Error::TauTableTooShort { required: 56, .. }));
    }

    #[test]
    fn small_identity_checks() {
        let ctx = TauContext::new(10_100);
        let kumar = find_identity("kumar").unwrap();
        let rep = verify_identity(&ctx, &kumar, 1, 1e-10, 10_000).unwrap();
        assert!(rep.verdict.passed(), "{rep:?}");
        // sigma_3 sums converge slowly; at T = 10^4 the error at m = 5 is about 2.5e-4
        let rows = verify_range(&ctx, "herrero", 1..=5, Some(1e-3), Some(10_000)).unwrap();
        assert_eq!(rows.iter().map(|r| r.m).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert_eq!(rows[4].lhs, "4830");
        assert!(rows.iter().all(|r| r.verdict.passed()), "{rows:?}");
    }

    #[test]
    fn sums_are_deterministic() {
        let ctx = TauContext::new(3000);
        let q = LQuery::new(3, 1, 9, 2000).unwrap();
        let a = shifted_l(&ctx, &q).unwrap().partial_sum;
        let b = shifted_l(&ctx, &q).unwrap().partial_sum;
        assert_eq!(a, b);
    }

    #[test]
    fn certified_tail_availability() {
        assert!(certified_tail(1, 1, 1, 11, 10_000).is_some());
        assert!(certified_tail(1, 3, 3, 10, 100_000).unwrap() > 1.0);
        assert!(certified_tail(1, 1, 1, 9, 100_000).is_none());
        let b = certified_tail(1, 1, 1, 11, 10_000).unwrap();
        assert!(b > 0.0 && b < 1e-11, "{b}");
    }

    #[test]
    fn csv_shape() {
        let ctx = TauContext::new(200);
        let rows = verify_range(&ctx, "kumar", 1..=2, Some(1.0), Some(100)).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), REPORT_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn pi_power() {
        let v = pi_pow11(128).to_f64();
        assert!((v - std::f64::consts::PI.powi(11)).abs() / v < 1e-14);
    }
}
