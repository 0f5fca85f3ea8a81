//! Formal Poincare series `P_k(phi) = a_0 E_k + sum_{n>=1} a_n P_{k,n}`.
//!
//! Nothing here sums over cosets. A [`FormalPoincare`] is a weight plus a
//! seed with a declared coefficient growth; it is evaluated exactly when the
//! seed is modular or the weight has no cusp forms, and otherwise reduced to a
//! linear relation among the `P_{12,n}`, i.e. among `tau(n)/n^11`.

use std::fmt;

use rug::ops::Pow;
use serde::{Deserialize, Serialize};

use crate::arith::linalg;
use crate::arith::{serde_rat, BigFloat, Int, Rat};
use crate::calculus::{rc_seed, rc_seed_formal, serre_seed, serre_seed_formal};
use crate::error::{Error, Result};
use crate::forms::{dim_sk, e2, eisenstein, sigma, Form, TauTable};
use crate::qseries::QSeries;

/// Sign of the infinitesimal attached to a growth exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eps {
    Minus,
    Exact,
    Plus,
}

/// `a_n = O(n^{exponent ± epsilon})`, declared from how a seed was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Growth {
    pub exponent: Rat,
    pub eps: Eps,
}

impl Growth {
    pub fn new(exponent: Rat, eps: Eps) -> Growth {
        Growth { exponent, eps }
    }

    /// Finitely many nonzero or bounded coefficients.
    pub fn bounded() -> Growth {
        Growth::new(Rat::new(), Eps::Exact)
    }

    /// `k - 1 + eps` for modular forms, `(k-1)/2 + eps` for cusp forms (Deligne).
    pub fn modular(weight: u32, cusp: bool) -> Growth {
        if weight == 0 {
            return Growth::bounded();
        }
        let w = Rat::from(weight as i64 - 1);
        if cusp {
            Growth::new(w / 2u32, Eps::Plus)
        } else {
            Growth::new(w, Eps::Plus)
        }
    }

    pub fn of_form(f: &Form) -> Growth {
        if f.is_modular() {
            Growth::modular(f.weight(), f.is_cusp())
        } else {
            Growth::quasimodular(f.weight())
        }
    }

    /// `w - 1 + eps` for a non-cuspidal quasimodular form of weight `w`
    /// (E2^m has `2m - 1 + eps`).
    pub fn quasimodular(weight: u32) -> Growth {
        Growth::modular(weight, false)
    }

    /// Growth after `D^j`.
    pub fn derive(&self, j: u32) -> Growth {
        Growth::new(Rat::from(&self.exponent + j), self.eps)
    }

    pub fn max(&self, other: &Growth) -> Growth {
        match self.exponent.cmp(&other.exponent) {
            std::cmp::Ordering::Greater => self.clone(),
            std::cmp::Ordering::Less => other.clone(),
            std::cmp::Ordering::Equal => Growth::new(self.exponent.clone(), self.eps.max(other.eps)),
        }
    }
}

fn fmt_with_eps(f: &mut fmt::Formatter<'_>, value: &Rat, eps: Eps) -> fmt::Result {
    match eps {
        Eps::Exact => write!(f, "{value}"),
        Eps::Plus => write!(f, "{value}+eps"),
        Eps::Minus => write!(f, "{value}-eps"),
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_with_eps(f, &self.exponent, self.eps)
    }
}

/// Verdict of a growth test: `margin = threshold - exponent`, with the
/// infinitesimal carried across.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub margin: Rat,
    pub margin_eps: Eps,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (margin ", if self.admissible { "admissible" } else { "not admissible" })?;
        fmt_with_eps(f, &self.margin, self.margin_eps)?;
        f.write_str(")")
    }
}

fn margin_test(growth: &Growth, threshold: Rat) -> Admissibility {
    let margin = threshold - &growth.exponent;
    let margin_eps = match growth.eps {
        Eps::Plus => Eps::Minus,
        Eps::Exact => Eps::Exact,
        Eps::Minus => Eps::Plus,
    };
    let admissible = match margin.cmp0() {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => margin_eps == Eps::Plus,
    };
    Admissibility {
        admissible,
        margin,
        margin_eps,
    }
}

/// Whether `a_0 E_k + sum a_n P_{k,n}` converges: growth strictly below
/// `k/2 - 3/2`, which pairs against every cusp form under the Deligne bound.
pub fn admissible(growth: &Growth, k: u32) -> Admissibility {
    margin_test(growth, Rat::from((k as i64 - 3, 2)))
}

/// The stronger criterion `growth < k/2 - 2` for absolute convergence of
/// the coset sum itself.
pub fn absolutely_convergent(growth: &Growth, k: u32) -> Admissibility {
    margin_test(growth, Rat::from((k as i64 - 4, 2)))
}

/// A seed q-series together with its declared coefficient growth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub series: QSeries,
    pub growth: Growth,
}

impl Seed {
    pub fn new(series: QSeries, growth: Growth) -> Seed {
        Seed { series, growth }
    }

    pub fn of_form(f: &Form) -> Seed {
        Seed::new(f.series().clone(), Growth::of_form(f))
    }

    pub fn constant(c: Rat, prec: usize) -> Seed {
        Seed::new(QSeries::constant(c, prec), Growth::bounded())
    }

    pub fn derive(&self, j: u32) -> Seed {
        Seed::new(self.series.derive(j), self.growth.derive(j))
    }

    pub fn shift(&self, n: usize) -> Seed {
        Seed::new(self.series.shift(n), self.growth.clone())
    }

    /// `sum c_i s_i`; growth is the maximum over terms with nonzero scalar.
    pub fn combine(terms: &[(Rat, Seed)]) -> Seed {
        let prec = terms.iter().map(|(_, s)| s.series.prec()).min().unwrap_or(1);
        let mut series = QSeries::zero(prec);
        let mut growth = Growth::bounded();
        for (c, s) in terms {
            if c.cmp0().is_eq() {
                continue;
            }
            series = series + s.series.scale(c);
            growth = growth.max(&s.growth);
        }
        Seed::new(series, growth)
    }
}

/// Provenance of a formal Poincare series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Bracket or Serre derivative of `P_{l,N}` with `S_l = 0` and `N = base >= 1`:
    /// the average is identically zero.
    Vanishing { l: u32, base: usize, label: String },
    /// Average equal to a known form (built from `P_{l,0} = E_l`).
    Exact { label: String },
    Other(String),
}

impl Origin {
    pub fn label(&self) -> &str {
        match self {
            Origin::Vanishing { label, .. } | Origin::Exact { label } | Origin::Other(label) => label,
        }
    }
}

/// `P_k(phi)` for an admissible seed `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPoincare {
    weight: u32,
    seed: Seed,
    origin: Origin,
}

impl FormalPoincare {
    /// Fails unless `k` is even, `k >= 4` and the seed growth is admissible at `k`.
    pub fn new(weight: u32, seed: Seed, origin: Origin) -> Result<FormalPoincare> {
        if weight < 4 || weight % 2 == 1 {
            return Err(Error::InvalidArgument(format!("Poincare weight must be even and >= 4, got {weight}")));
        }
        let verdict = admissible(&seed.growth, weight);
        if !verdict.admissible {
            return Err(Error::Admissibility(format!(
                "{}: seed growth {} at weight {weight} is {verdict}",
                origin.label(),
                seed.growth
            )));
        }
        Ok(FormalPoincare { weight, seed, origin })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// `[f, P_{l,N}]_m = P_{k+l+2m}(phi)` with the bracket seed of `rc_seed`.
    pub fn bracket(f: &Form, l: u32, shift: usize, m: u32) -> Result<FormalPoincare> {
        let series = rc_seed(f, l, shift, m)?;
        let growth = Growth::of_form(f).derive(m);
        let label = if shift == 0 {
            format!("[f, E_{l}]_{m} with f of weight {}", f.weight())
        } else {
            format!("[f, P_{{{l},{shift}}}]_{m} with f of weight {}", f.weight())
        };
        let origin = low_weight_origin(l, shift, label);
        FormalPoincare::new(f.weight() + l + 2 * m, Seed::new(series, growth), origin)
    }

    /// `theta^[m] P_{l,N} = P_{l+2m}(phi)` with the Serre seed; `prec` is the
    /// precision before the `q^N` shift.
    pub fn serre(l: u32, shift: usize, m: u32, prec: usize) -> Result<FormalPoincare> {
        let series = serre_seed(l, shift, m, prec)?;
        let growth = if m == 0 { Growth::bounded() } else { Growth::quasimodular(2 * m) };
        let label = if shift == 0 {
            format!("theta^[{m}] E_{l}")
        } else {
            format!("theta^[{m}] P_{{{l},{shift}}}")
        };
        FormalPoincare::new(l + 2 * m, Seed::new(series, growth), low_weight_origin(l, shift, label))
    }

    /// `P_k(phi)` for a modular seed `phi`, which evaluates to `phi E_{k-w}`.
    pub fn of_modular_seed(phi: &Form, k: u32) -> Result<FormalPoincare> {
        let label = format!("P_{k} of a weight-{} modular seed", phi.weight());
        FormalPoincare::new(k, Seed::of_form(phi), Origin::Exact { label })
    }
}

fn low_weight_origin(l: u32, shift: usize, label: String) -> Origin {
    if shift == 0 {
        Origin::Exact { label }
    } else if dim_sk(l) == 0 {
        Origin::Vanishing { l, base: shift, label }
    } else {
        Origin::Other(label)
    }
}

/// `P_k(phi) = phi E_{k-w}` for a modular seed of weight `w`; requires `k - w >= 4`.
pub fn eval_modular_seed(phi: &Form, k: u32) -> Result<Form> {
    if !phi.is_modular() {
        return Err(Error::Quasimodular("eval_modular_seed"));
    }
    let diff = k as i64 - phi.weight() as i64;
    if diff < 4 || diff % 2 != 0 {
        return Err(Error::EisensteinFactor(diff));
    }
    Ok(phi.mul(&eisenstein(diff as u32, phi.prec())?))
}

/// In weights without cusp forms every `P_{k,n}` (`n >= 1`) vanishes, leaving `a_0 E_k`.
pub fn eval_low_weight(p: &FormalPoincare) -> Result<Form> {
    if dim_sk(p.weight) != 0 {
        return Err(Error::HasCuspForms(p.weight));
    }
    let s = &p.seed.series;
    Ok(eisenstein(p.weight, s.prec())?.scale(s.coeff(0)))
}

/// `0 = sum_{n>=0} c_n P_{k,m+n}`; for weight 12 this is
/// `sum c_n tau(m+n)/(m+n)^11 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauRelation {
    pub base: usize,
    pub weight: u32,
    pub coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct TauRelationRepr {
    m: usize,
    terms: Vec<RelationTerm>,
    cutoff: usize,
}

#[derive(Serialize, Deserialize)]
struct RelationTerm {
    n: usize,
    #[serde(with = "serde_rat")]
    coeff: Rat,
}

impl Serialize for TauRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TauRelationRepr {
            m: self.base,
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.cmp0().is_ne())
                .map(|(n, c)| RelationTerm { n, coeff: c.clone() })
                .collect(),
            cutoff: self.cutoff(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TauRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TauRelationRepr::deserialize(d)?;
        let mut coeffs = vec![Rat::new(); r.cutoff + 1];
        for t in r.terms {
            if t.n > r.cutoff {
                return Err(serde::de::Error::custom(format!("term n = {} beyond cutoff {}", t.n, r.cutoff)));
            }
            coeffs[t.n] = t.coeff;
        }
        Ok(TauRelation { base: r.m, weight: 12, coeffs })
    }
}

impl TauRelation {
    /// Largest `n` carried by the stream.
    pub fn cutoff(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    /// `sum_{n<=T} c_n tau(m+n)/(m+n)^11` in ascending order at `prec` bits;
    /// should tend to 0 as the truncation grows.
    pub fn partial_sum(&self, tau: &TauTable, terms: usize, prec: u32) -> Result<BigFloat> {
        if self.weight != 12 {
            return Err(Error::InvalidArgument("numeric check is wired for weight 12 only".into()));
        }
        let mut acc = BigFloat::new(prec);
        for (n, c) in self.coeffs.iter().enumerate().take(terms + 1) {
            let j = self.base + n;
            if j == 0 || c.cmp0().is_eq() {
                continue;
            }
            let num = Rat::from(c * tau.tau(j)?);
            let den = Int::from(j).pow(11u32);
            acc += BigFloat::with_val(prec, &num) / &den;
        }
        Ok(acc)
    }
}

/// Output of [`reduce_weight12`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// The series vanishes, giving a linear relation among the `P_{12,m+n}`.
    Relation(TauRelation),
    /// `P_12(phi) = a_0 E_12 + C (sum_{n>=1} a_n tau(n)/n^11) Delta` with
    /// `C = 10!/((4 pi)^11 <Delta, Delta>)`; `stream[n]` is `a_n` (`stream[0] = a_0`).
    Identity { eisenstein_part: Rat, stream: Vec<Rat> },
}

/// Reduces a `P_k` with `dim S_k = 1` (weights 12, 16, 18, 20, 22, 26) to
/// coefficient streams, `cutoff` terms past the base index.
pub fn reduce_one_dim(p: &FormalPoincare, base: usize, cutoff: usize) -> Result<Reduction> {
    if dim_sk(p.weight) != 1 {
        return Err(Error::InvalidArgument(format!(
            "reduction needs dim S_k = 1, weight {} has {}",
            p.weight,
            dim_sk(p.weight)
        )));
    }
    let s = &p.seed.series;
    let needed = base + cutoff + 1;
    if s.prec() < needed {
        return Err(Error::Precision {
            what: "reduce_weight12 seed",
            needed,
            have: s.prec(),
        });
    }
    match &p.origin {
        Origin::Vanishing { base: b, .. } => {
            if *b != base {
                return Err(Error::InvalidArgument(format!("seed is based at q^{b}, not q^{base}")));
            }
            if let Some(j) = (0..base).find(|&j| s.coeff(j).cmp0().is_ne()) {
                return Err(Error::InvalidArgument(format!("seed has support at q^{j} below base q^{base}")));
            }
            Ok(Reduction::Relation(TauRelation {
                base,
                weight: p.weight,
                coeffs: s.coeffs()[base..needed].to_vec(),
            }))
        }
        Origin::Exact { .. } => {
            if base != 0 {
                return Err(Error::InvalidArgument("exact identities are based at q^0".into()));
            }
            Ok(Reduction::Identity {
                eisenstein_part: s.coeff(0).clone(),
                stream: s.coeffs()[..needed].to_vec(),
            })
        }
        Origin::Other(label) => Err(Error::InvalidArgument(format!(
            "no known value for `{label}`; only vanishing or exact origins reduce"
        ))),
    }
}

pub fn reduce_weight12(p: &FormalPoincare, base: usize, cutoff: usize) -> Result<Reduction> {
    if p.weight != 12 {
        return Err(Error::InvalidArgument(format!("expected weight 12, got {}", p.weight)));
    }
    reduce_one_dim(p, base, cutoff)
}

/// The vanishing weight-12 constructions behind the tau identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// `theta P_{10,m}`, seed `q^m (m - 5/6 E2)`.
    SerreP10,
    /// `P_{8,m} E4`, seed `q^m E4`.
    ProductP8E4,
    /// `[E4, P_{6,m}]_1`, seed `q^m (4m E4 - 6 D E4)`.
    BracketE4P6,
    /// `theta^[2] P_{8,m}`, seed `q^m (m^2 - 3/2 m E2 + 1/2 E2^2)`.
    Serre2P8,
    /// `theta^[3] P_{6,m} + 7/36 P_{6,m} E6`.
    Serre3P6,
    /// `theta^[4] P_{4,m} - 35/864 P_{4,m} E8 - 7/40 [E4, P_{4,m}]_2 + 35/432 [E6, P_{4,m}]_1`.
    Serre4P4,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::SerreP10,
        RelationKind::ProductP8E4,
        RelationKind::BracketE4P6,
        RelationKind::Serre2P8,
        RelationKind::Serre3P6,
        RelationKind::Serre4P4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RelationKind::SerreP10 => "theta P_{10,m}",
            RelationKind::ProductP8E4 => "P_{8,m} E4",
            RelationKind::BracketE4P6 => "[E4, P_{6,m}]_1",
            RelationKind::Serre2P8 => "theta^[2] P_{8,m}",
            RelationKind::Serre3P6 => "theta^[3] P_{6,m} + 7/36 P_{6,m} E6",
            RelationKind::Serre4P4 => "theta^[4] P_{4,m} - 35/864 P_{4,m} E8 - 7/40 [E4,P_{4,m}]_2 + 35/432 [E6,P_{4,m}]_1",
        }
    }

    /// The weight-12 Poincare series at base index `m`, with the seed known
    /// through `q^{m + terms}`. At `m = 0` it is one of the exact identities.
    pub fn poincare(self, m: usize, terms: usize) -> Result<FormalPoincare> {
        let prec = terms + 1;
        match self {
            RelationKind::SerreP10 => FormalPoincare::serre(10, m, 1, prec),
            RelationKind::ProductP8E4 => FormalPoincare::bracket(&eisenstein(4, prec)?, 8, m, 0),
            RelationKind::BracketE4P6 => FormalPoincare::bracket(&eisenstein(4, prec)?, 6, m, 1),
            RelationKind::Serre2P8 => FormalPoincare::serre(8, m, 2, prec),
            RelationKind::Serre3P6 => {
                let rep = serre3_representation(m, prec)?;
                let formal = serre3_formal(m, prec)?;
                check_representation(self, &rep.series, &formal)?;
                FormalPoincare::new(12, rep, combination_origin(6, m, self.label()))
            }
            RelationKind::Serre4P4 => {
                let rep = serre4_representation(m, prec)?;
                let formal = serre4_formal(m, prec)?;
                check_representation(self, &rep.series, &formal)?;
                FormalPoincare::new(12, rep, combination_origin(4, m, self.label()))
            }
        }
    }

    /// The vanishing relation at base `m >= 1`.
    pub fn relation(self, m: usize, terms: usize) -> Result<TauRelation> {
        if m == 0 {
            return Err(Error::InvalidArgument("relations need base index m >= 1".into()));
        }
        match reduce_weight12(&self.poincare(m, terms)?, m, terms)? {
            Reduction::Relation(r) => Ok(r),
            Reduction::Identity { .. } => unreachable!("vanishing origins reduce to relations"),
        }
    }
}

fn combination_origin(l: u32, m: usize, label: &str) -> Origin {
    if m == 0 {
        Origin::Exact { label: label.into() }
    } else {
        Origin::Vanishing { l, base: m, label: label.into() }
    }
}

fn check_representation(kind: RelationKind, rep: &QSeries, formal: &QSeries) -> Result<()> {
    let p = rep.prec().min(formal.prec());
    if rep.truncate(p) != formal.truncate(p) {
        return Err(Error::Inconsistent(format!(
            "low-growth representation of `{}` disagrees with its formal seed",
            kind.label()
        )));
    }
    Ok(())
}

/// Formal seed of `theta^[3] P_{6,m} + 7/36 P_{6,m} E6`. Neither piece is
/// admissible alone; only the sum is.
pub fn serre3_formal(m: usize, prec: usize) -> Result<QSeries> {
    let serre = serre_seed_formal(6, m, 3, prec);
    let e6 = rc_seed_formal(&eisenstein(6, prec)?, 6, m, 0)?;
    Ok(serre + e6.scale(&Rat::from((7, 36))))
}

/// `q^m (m^3 - 2m^2 E2 + 7/6 m E2^2 - 7/36 (9 D E4 + 72 D^2 E2))`, the same
/// seed written through `E2^3 - E6 = 9 D E4 + 72 D^2 E2`; growth `4 + eps`.
pub fn serre3_representation(m: usize, prec: usize) -> Result<Seed> {
    let e2f = Seed::of_form(&e2(prec));
    let e2sq = Seed::new(e2f.series.pow(2), Growth::quasimodular(4));
    let e4 = Seed::of_form(&eisenstein(4, prec)?);
    let mi = Int::from(m);
    let r = |n: Int, d: i64| Rat::from((n, Int::from(d)));
    let seed = Seed::combine(&[
        (Rat::from(mi.clone().pow(3u32)), Seed::constant(Rat::from(1), prec)),
        (r(Int::from(-2) * mi.clone().pow(2u32), 1), e2f.clone()),
        (r(Int::from(7) * &mi, 6), e2sq),
        (Rat::from((-7, 4)), e4.derive(1)),
        (Rat::from(-14), e2f.derive(2)),
    ]);
    Ok(seed.shift(m))
}

/// Formal seed of the `theta^[4] P_{4,m}` combination.
pub fn serre4_formal(m: usize, prec: usize) -> Result<QSeries> {
    let serre = serre_seed_formal(4, m, 4, prec);
    let e8 = rc_seed_formal(&eisenstein(8, prec)?, 4, m, 0)?;
    let b2 = rc_seed_formal(&eisenstein(4, prec)?, 4, m, 2)?;
    let b1 = rc_seed_formal(&eisenstein(6, prec)?, 4, m, 1)?;
    Ok(serre - e8.scale(&Rat::from((35, 864))) - b2.scale(&Rat::from((7, 40))) + b1.scale(&Rat::from((35, 432))))
}

/// `q^m (m^4 - 7/3 m^3 E2 + 21 m^2 D E2 - 35 m D^2 E2 + 35/3 D^3 E2)`; growth `4 + eps`.
pub fn serre4_representation(m: usize, prec: usize) -> Result<Seed> {
    let e2f = Seed::of_form(&e2(prec));
    let mi = Int::from(m);
    let seed = Seed::combine(&[
        (Rat::from(mi.clone().pow(4u32)), Seed::constant(Rat::from(1), prec)),
        (Rat::from((Int::from(-7) * mi.clone().pow(3u32), Int::from(3))), e2f.clone()),
        (Rat::from(Int::from(21) * mi.clone().pow(2u32)), e2f.derive(1)),
        (Rat::from(Int::from(-35) * &mi), e2f.derive(2)),
        (Rat::from((35, 3)), e2f.derive(3)),
    ]);
    Ok(seed.shift(m))
}

/// `tau(m) = pref(m) sum_{n>=1} sigma_a(n) tau(m+n) / (m+n)^s` with
/// `pref(m) = coefficient m^power / (m - pole)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauIdentity {
    pub id: &'static str,
    pub sigma: u32,
    pub s: u32,
    pub coefficient: i64,
    pub power: u32,
    pub pole: Option<(i64, i64)>,
    pub relations: &'static [RelationKind],
}

impl TauIdentity {
    pub fn prefactor(&self, m: u64) -> Result<Rat> {
        let num = Rat::from(Int::from(self.coefficient) * Int::from(m).pow(self.power));
        match self.pole {
            None => Ok(num),
            Some((p, q)) => {
                let d = Rat::from(m) - Rat::from((p, q));
                if d.cmp0().is_eq() {
                    return Err(Error::InvalidArgument(format!("{} prefactor has a pole at m = {m}", self.id)));
                }
                Ok(num / d)
            }
        }
    }

    /// Human-readable formula.
    pub fn formula(&self) -> String {
        let pre = match self.pole {
            None => format!("{}*m^{}", self.coefficient, self.power),
            Some((p, q)) => format!("{}*m^{}/(m - {})", self.coefficient, self.power, Rat::from((p, q))),
        };
        format!("tau(m) = {pre} * sum sigma_{}(n) tau(m+n)/(m+n)^{}", self.sigma, self.s)
    }

    /// The identity as a stream in `tau(m+n)/(m+n)^11`:
    /// `c_0 = m^11`, `c_n = -pref(m) sigma_a(n) (m+n)^{11-s}`.
    pub fn as_relation(&self, m: usize, terms: usize) -> Result<TauRelation> {
        let pref = self.prefactor(m as u64)?;
        let mut coeffs = Vec::with_capacity(terms + 1);
        coeffs.push(Rat::from(Int::from(m).pow(11u32)));
        for n in 1..=terms {
            let c = Rat::from(-&pref) * sigma(self.sigma, n as u64)? * Int::from(m + n).pow(11 - self.s);
            coeffs.push(c);
        }
        Ok(TauRelation { base: m, weight: 12, coeffs })
    }
}

const R_KUMAR: &[RelationKind] = &[RelationKind::SerreP10];
const R_HERRERO: &[RelationKind] = &[RelationKind::ProductP8E4];
const R_S10SIG3: &[RelationKind] = &[RelationKind::ProductP8E4, RelationKind::BracketE4P6];
const R_S10SIG1: &[RelationKind] = &[RelationKind::SerreP10, RelationKind::ProductP8E4, RelationKind::Serre2P8];
const R_S9SIG1: &[RelationKind] = &[
    RelationKind::SerreP10,
    RelationKind::ProductP8E4,
    RelationKind::BracketE4P6,
    RelationKind::Serre2P8,
    RelationKind::Serre3P6,
];
const R_S8SIG1: &[RelationKind] = &RelationKind::ALL;

/// The six closed-form tau identities, in the order Kumar, Herrero, then the
/// four further ones.
pub fn identity_catalog() -> Vec<TauIdentity> {
    vec![
        TauIdentity { id: "kumar", sigma: 1, s: 11, coefficient: -20, power: 11, pole: Some((5, 6)), relations: R_KUMAR },
        TauIdentity { id: "herrero", sigma: 3, s: 11, coefficient: -240, power: 11, pole: None, relations: R_HERRERO },
        TauIdentity { id: "s10sig1", sigma: 1, s: 10, coefficient: -18, power: 10, pole: Some((3, 4)), relations: R_S10SIG1 },
        TauIdentity { id: "s10sig3", sigma: 3, s: 10, coefficient: -240, power: 10, pole: None, relations: R_S10SIG3 },
        TauIdentity { id: "s9sig1", sigma: 1, s: 9, coefficient: -16, power: 9, pole: Some((2, 3)), relations: R_S9SIG1 },
        TauIdentity { id: "s8sig1", sigma: 1, s: 8, coefficient: -14, power: 8, pole: Some((7, 12)), relations: R_S8SIG1 },
    ]
}

pub fn find_identity(id: &str) -> Result<TauIdentity> {
    identity_catalog()
        .into_iter()
        .find(|t| t.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Exact multipliers `x_i` with `sum x_i R_i = target` coefficientwise for
/// `n <= terms`, where `R_i` are the identity's vanishing relations at base `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub id: &'static str,
    pub m: usize,
    pub terms: usize,
    pub multipliers: Vec<(RelationKind, Rat)>,
}

pub fn derive_identity(identity: &TauIdentity, m: usize, terms: usize) -> Result<Derivation> {
    let rels: Vec<TauRelation> = identity
        .relations
        .iter()
        .map(|k| k.relation(m, terms))
        .collect::<Result<_>>()?;
    let target = identity.as_relation(m, terms)?;
    let rows: Vec<Vec<Rat>> = (0..=terms)
        .map(|n| rels.iter().map(|r| r.coeff(n).clone()).collect())
        .collect();
    let sol = linalg::solve(&rows, &target.coeffs).map_err(|e| {
        Error::Inconsistent(format!("{} at m = {m} is not a combination of its relations: {e:?}", identity.id))
    })?;
    Ok(Derivation {
        id: identity.id,
        m,
        terms,
        multipliers: identity.relations.iter().copied().zip(sol.x).collect(),
    })
}
