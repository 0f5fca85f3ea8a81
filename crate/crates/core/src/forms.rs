//! Classical level-one forms: divisor sums, Eisenstein series, `E2`, `Delta`
//! and the Ramanujan tau table, plus exact decomposition into the monomial
//! basis `E4^a E6^b` of `M_k`.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use serde::{Deserialize, Serialize};

use crate::arith::linalg::{self, SolveError};
use crate::arith::{bernoulli, serde_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::qseries::{delta_coefficients, QSeries};

/// sigma_a(n) = sum of d^a over the divisors d of n.
pub fn sigma(a: u32, n: u64) -> Result<Int> {
    if n == 0 {
        return Err(Error::SigmaOfZero);
    }
    let mut total = Int::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += Int::from(d).pow(a);
            let e = n / d;
            if e != d {
                total += Int::from(e).pow(a);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// sigma_a(0..len) by a divisor sieve; index 0 holds 0. Entries must fit in
/// `u128`, which holds comfortably for `a <= 3` and `len` up to 10^9.
pub fn sigma_sieve(a: u32, len: usize) -> Vec<u128> {
    let mut out = vec![0u128; len];
    for d in 1..len {
        let p = (d as u128).pow(a);
        let mut m = d;
        while m < len {
            out[m] += p;
            m += d;
        }
    }
    out
}

fn sigma_sieve_big(a: u32, len: usize) -> Vec<Int> {
    let mut out = vec![Int::new(); len];
    for d in 1..len {
        let p = Int::from(d).pow(a);
        let mut m = d;
        while m < len {
            out[m] += &p;
            m += d;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Modular,
    /// Quasimodular (involves E2 or derivatives); never decomposes into `M_k`.
    Quasimodular,
}

/// A q-expansion tagged with its weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    weight: u32,
    series: QSeries,
    is_cusp: bool,
    kind: FormKind,
}

impl Form {
    /// A modular form of even weight. The cusp flag is read off the constant term.
    pub fn modular(weight: u32, series: QSeries) -> Result<Form> {
        if weight % 2 == 1 || weight == 2 {
            return Err(Error::InvalidArgument(format!(
                "no nonzero level-one modular forms of weight {weight}"
            )));
        }
        let is_cusp = series.coeff(0).cmp0().is_eq();
        Ok(Form {
            weight,
            series,
            is_cusp,
            kind: FormKind::Modular,
        })
    }

    pub fn quasimodular(weight: u32, series: QSeries) -> Form {
        Form {
            weight,
            series,
            is_cusp: false,
            kind: FormKind::Quasimodular,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn series(&self) -> &QSeries {
        &self.series
    }

    pub fn into_series(self) -> QSeries {
        self.series
    }

    pub fn is_cusp(&self) -> bool {
        self.is_cusp
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn is_modular(&self) -> bool {
        self.kind == FormKind::Modular
    }

    pub fn prec(&self) -> usize {
        self.series.prec()
    }

    pub fn truncate(&self, prec: usize) -> Form {
        Form {
            series: self.series.truncate(prec),
            ..self.clone()
        }
    }

    fn with_series(weight: u32, kind: FormKind, series: QSeries) -> Form {
        let is_cusp = kind == FormKind::Modular && series.coeff(0).cmp0().is_eq();
        Form {
            weight,
            series,
            is_cusp,
            kind,
        }
    }

    fn join(a: FormKind, b: FormKind) -> FormKind {
        if a == FormKind::Modular && b == FormKind::Modular {
            FormKind::Modular
        } else {
            FormKind::Quasimodular
        }
    }

    pub fn mul(&self, other: &Form) -> Form {
        Form::with_series(
            self.weight + other.weight,
            Form::join(self.kind, other.kind),
            &self.series * &other.series,
        )
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        Ok(Form::with_series(
            self.weight,
            Form::join(self.kind, other.kind),
            &self.series + &other.series,
        ))
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.scale(&Rat::from(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Form {
        Form::with_series(self.weight, self.kind, self.series.scale(c))
    }

    pub fn pow(&self, e: u32) -> Form {
        Form::with_series(self.weight * e, self.kind, self.series.pow(e))
    }
}

/// The normalized Eisenstein series `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein(k: u32, prec: usize) -> Result<Form> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::EisensteinWeight(k as i64));
    }
    Form::modular(k, eisenstein_series(k, prec)?)
}

fn eisenstein_series(k: u32, prec: usize) -> Result<QSeries> {
    let factor = -(Rat::from(2 * k) / bernoulli(k)?);
    let sig = sigma_sieve_big(k - 1, prec);
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(Rat::from(1));
    coeffs.extend(sig.iter().skip(1).map(|s| Rat::from(&factor * s)));
    QSeries::from_coeffs(coeffs)
}

/// The quasimodular `E2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn e2(prec: usize) -> Form {
    Form::quasimodular(2, eisenstein_series(2, prec).expect("prec >= 1"))
}

/// `Delta` as a weight-12 cusp form.
pub fn delta(prec: usize) -> Result<Form> {
    Form::modular(12, crate::qseries::delta_series(prec)?)
}

/// Exact Ramanujan tau values `tau(0..len)`, built once and shared read-only.
#[derive(Clone, Debug)]
pub struct TauTable {
    values: Vec<Int>,
}

impl TauTable {
    pub fn new(len: usize) -> TauTable {
        TauTable {
            values: delta_coefficients(len.max(2)),
        }
    }

    /// Number of known entries: `tau(n)` is available for `1 <= n < len`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() <= 1
    }

    pub fn tau(&self, n: usize) -> Result<&Int> {
        if n == 0 {
            return Err(Error::InvalidArgument("tau(n) needs n >= 1".into()));
        }
        self.values.get(n).ok_or(Error::TauTableTooShort {
            index: n,
            required: n + 1,
            available: self.values.len(),
        })
    }

    pub fn values(&self) -> &[Int] {
        &self.values
    }
}

/// tau(n) from a freshly built table of length `n + 1`.
pub fn tau(n: usize) -> Result<Int> {
    TauTable::new(n + 1).tau(n).cloned()
}

pub fn dim_mk(k: u32) -> usize {
    if k % 2 == 1 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

pub fn dim_sk(k: u32) -> usize {
    if k < 4 {
        0
    } else {
        dim_mk(k).saturating_sub(1)
    }
}

/// Exponent pairs `(a, b)` with `4a + 6b = k`, `a` descending.
pub fn basis_exponents(k: u32) -> Vec<(u32, u32)> {
    if k % 2 == 1 {
        return Vec::new();
    }
    (0..=k / 4)
        .rev()
        .filter(|a| (k - 4 * a) % 6 == 0)
        .map(|a| (a, (k - 4 * a) / 6))
        .collect()
}

/// The monomials `E4^a E6^b` spanning `M_k`, in the order of [`basis_exponents`].
pub fn mk_basis(k: u32, prec: usize) -> Result<Vec<((u32, u32), Form)>> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("mk_basis needs even k >= 4, got {k}")));
    }
    let e4 = eisenstein(4, prec)?;
    let e6 = eisenstein(6, prec)?;
    Ok(basis_exponents(k)
        .into_iter()
        .map(|(a, b)| ((a, b), e4.pow(a).mul(&e6.pow(b))))
        .collect())
}

/// Coordinates of a weight-`k` form in the `E4^a E6^b` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCoords {
    pub weight: u32,
    pub coords: BTreeMap<(u32, u32), Rat>,
}

#[derive(Serialize, Deserialize)]
struct BasisCoordsRepr {
    weight: u32,
    terms: Vec<BasisTerm>,
}

#[derive(Serialize, Deserialize)]
struct BasisTerm {
    a: u32,
    b: u32,
    #[serde(with = "serde_rat")]
    coeff: Rat,
}

impl Serialize for BasisCoords {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisCoordsRepr {
            weight: self.weight,
            terms: self
                .coords
                .iter()
                .rev()
                .map(|(&(a, b), c)| BasisTerm { a, b, coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisCoords {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BasisCoordsRepr::deserialize(d)?;
        let mut coords = BTreeMap::new();
        for t in r.terms {
            if 4 * t.a + 6 * t.b != r.weight {
                return Err(serde::de::Error::custom(format!(
                    "monomial E4^{} E6^{} does not have weight {}",
                    t.a, t.b, r.weight
                )));
            }
            coords.insert((t.a, t.b), t.coeff);
        }
        Ok(BasisCoords { weight: r.weight, coords })
    }
}

impl BasisCoords {
    pub fn get(&self, a: u32, b: u32) -> Rat {
        self.coords.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// `sum coords[(a,b)] E4^a E6^b` to precision `prec`.
    pub fn reconstruct(&self, prec: usize) -> Result<QSeries> {
        let mut acc = QSeries::zero(prec);
        for (ab, m) in mk_basis(self.weight, prec)? {
            let coeff = self.get(ab.0, ab.1);
            if coeff.cmp0().is_ne() {
                acc = acc + m.series().scale(&coeff);
            }
        }
        Ok(acc)
    }

    /// Splits the form as `alpha E_k + beta Delta E_{k-12}` (with `E_0 = 1`);
    /// requires `dim M_k = 2`, e.g. `k = 12` gives `alpha E12 + beta Delta`.
    pub fn eisenstein_cusp_parts(&self) -> Result<(Rat, Rat)> {
        let k = self.weight;
        if dim_mk(k) != 2 {
            return Err(Error::InvalidArgument(format!(
                "eisenstein/cusp split needs dim M_k = 2, weight {k} has {}",
                dim_mk(k)
            )));
        }
        let prec = 12;
        let ek = in_basis(&eisenstein(k, prec)?)?;
        let mut cusp = delta(prec)?;
        if k > 12 {
            cusp = cusp.mul(&eisenstein(k - 12, prec)?);
        }
        let cusp = in_basis(&cusp)?;
        let mons = basis_exponents(k);
        let rows: Vec<Vec<Rat>> = mons
            .iter()
            .map(|&(a, b)| vec![ek.get(a, b), cusp.get(a, b)])
            .collect();
        let rhs: Vec<Rat> = mons.iter().map(|&(a, b)| self.get(a, b)).collect();
        let sol = linalg::solve(&rows, &rhs)
            .map_err(|e| Error::Inconsistent(format!("change of basis failed: {e:?}")))?;
        let mut it = sol.x.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }
}

impl fmt::Display for BasisCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(a, b), c) in self.coords.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*E4^{a}*E6^{b}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Exact coordinates of `f` in the monomial basis of `M_{weight(f)}`.
///
/// The whole known expansion is used: every coefficient beyond the first
/// `dim M_k` must agree with the reconstruction, otherwise the input is
/// reported as not modular of that weight.
pub fn in_basis(f: &Form) -> Result<BasisCoords> {
    let k = f.weight();
    let mons = basis_exponents(k);
    let dim = if k == 2 || k % 2 == 1 { 0 } else { mons.len() };
    let prec = f.prec();
    if prec < dim + 5 {
        return Err(Error::Precision {
            what: "in_basis",
            needed: dim + 5,
            have: prec,
        });
    }
    if dim == 0 {
        if f.series().is_zero() {
            return Ok(BasisCoords { weight: k, coords: BTreeMap::new() });
        }
        return Err(Error::NotModular {
            weight: k,
            detail: "M_k is zero but the series is not".into(),
        });
    }
    let basis = mk_basis(k, prec)?;
    let rows: Vec<Vec<Rat>> = (0..prec)
        .map(|n| basis.iter().map(|(_, m)| m.series().coeff(n).clone()).collect())
        .collect();
    let sol = linalg::solve(&rows, f.series().coeffs()).map_err(|e| match e {
        SolveError::Inconsistent { row, residual } => Error::NotModular {
            weight: k,
            detail: format!("residual {residual} in the q^{row} coefficient"),
        },
        SolveError::DimensionMismatch => Error::InvalidArgument("basis shape".into()),
    })?;
    let coords = basis
        .iter()
        .zip(sol.x)
        .filter(|(_, c)| c.cmp0().is_ne())
        .map(|((ab, _), c)| (*ab, c))
        .collect();
    Ok(BasisCoords { weight: k, coords })
}
