//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QSeries`] of precision `N` knows the coefficients of `q^0 .. q^{N-1}`
//! and nothing beyond. Binary operations return the minimum of the operand
//! precisions; nothing is ever padded with zeros that are not known to be zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use rug::ops::Pow;
use serde::{Deserialize, Serialize};

use crate::arith::{serde_rat, Int, Rat};
use crate::error::{Error, Result};

/// Products above this precision compute output coefficients in parallel.
const PARALLEL_MUL_THRESHOLD: usize = 192;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QSeriesRepr", into = "QSeriesRepr")]
pub struct QSeries {
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    prec: usize,
    #[serde(with = "serde_rat::vec")]
    coeffs: Vec<Rat>,
}

impl TryFrom<QSeriesRepr> for QSeries {
    type Error = Error;

    fn try_from(r: QSeriesRepr) -> Result<Self> {
        if r.prec != r.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "prec {} does not match {} coefficients",
                r.prec,
                r.coeffs.len()
            )));
        }
        QSeries::from_coeffs(r.coeffs)
    }
}

impl From<QSeries> for QSeriesRepr {
    fn from(s: QSeries) -> Self {
        QSeriesRepr {
            prec: s.prec(),
            coeffs: s.coeffs,
        }
    }
}

impl QSeries {
    /// Series with the given known coefficients; at least one is required.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a q-series needs precision >= 1".into()));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_ints<I, T>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        Rat: From<T>,
    {
        QSeries::from_coeffs(coeffs.into_iter().map(Rat::from).collect())
    }

    /// The zero series known to precision `prec` (`prec >= 1`).
    pub fn zero(prec: usize) -> Self {
        assert!(prec >= 1, "q-series precision must be positive");
        QSeries {
            coeffs: vec![Rat::new(); prec],
        }
    }

    pub fn constant(c: Rat, prec: usize) -> Self {
        let mut s = QSeries::zero(prec);
        s.coeffs[0] = c;
        s
    }

    pub fn one(prec: usize) -> Self {
        QSeries::constant(Rat::from(1), prec)
    }

    /// `c q^n` to precision `prec` (zero when `n >= prec`).
    pub fn monomial(c: Rat, n: usize, prec: usize) -> Self {
        let mut s = QSeries::zero(prec);
        if n < prec {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `q^n`. Panics when `n >= prec`.
    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&Rat> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0().is_eq())
    }

    /// True when every known coefficient has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    /// Drops everything from `q^prec` on; `prec` is clamped to the known range.
    pub fn truncate(&self, prec: usize) -> QSeries {
        let p = prec.clamp(1, self.prec());
        QSeries {
            coeffs: self.coeffs[..p].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| Rat::from(a * c)).collect(),
        }
    }

    /// `D^j f` with `D = q d/dq`: coefficient `n` is multiplied by `n^j`.
    pub fn derive(&self, j: u32) -> QSeries {
        if j == 0 {
            return self.clone();
        }
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| {
                    if a.cmp0().is_eq() {
                        Rat::new()
                    } else {
                        Rat::from(a * Int::from(n).pow(j))
                    }
                })
                .collect(),
        }
    }

    /// Multiplication by `q^n`. The result is known to precision `prec + n`:
    /// the first `n` coefficients are exact zeros.
    pub fn shift(&self, n: usize) -> QSeries {
        let mut coeffs = vec![Rat::new(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut result = QSeries::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn add_like(&self, other: &QSeries, sign: i32) -> QSeries {
        let p = self.prec().min(other.prec());
        let coeffs = self.coeffs[..p]
            .iter()
            .zip(&other.coeffs[..p])
            .map(|(a, b)| if sign > 0 { Rat::from(a + b) } else { Rat::from(a - b) })
            .collect();
        QSeries { coeffs }
    }

    fn mul_series(&self, other: &QSeries) -> QSeries {
        let p = self.prec().min(other.prec());
        let lhs: Vec<(usize, &Rat)> = self.coeffs[..p]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.cmp0().is_ne())
            .collect();
        let rhs = &other.coeffs[..p];
        let cell = |n: usize| -> Rat {
            let mut acc = Rat::new();
            for &(i, a) in &lhs {
                if i > n {
                    break;
                }
                let b = &rhs[n - i];
                if b.cmp0().is_ne() {
                    acc += Rat::from(a * b);
                }
            }
            acc
        };
        let coeffs = if p >= PARALLEL_MUL_THRESHOLD {
            (0..p).into_par_iter().map(cell).collect()
        } else {
            (0..p).map(cell).collect()
        };
        QSeries { coeffs }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                $body(self, rhs)
            }
        }
        impl $tr<QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                $body(&self, &rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                $body(&self, rhs)
            }
        }
        impl $tr<QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &QSeries, b: &QSeries| a.add_like(b, 1));
forward_binop!(Sub, sub, |a: &QSeries, b: &QSeries| a.add_like(b, -1));
forward_binop!(Mul, mul, |a: &QSeries, b: &QSeries| a.mul_series(b));

impl Mul<&Rat> for &QSeries {
    type Output = QSeries;
    fn mul(self, c: &Rat) -> QSeries {
        self.scale(c)
    }
}

impl Mul<&Rat> for QSeries {
    type Output = QSeries;
    fn mul(self, c: &Rat) -> QSeries {
        self.scale(c)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| Rat::from(-a)).collect(),
        }
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            let neg = c.cmp0().is_lt();
            let abs = Rat::from(c.abs_ref());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match n {
                0 => write!(f, "{abs}")?,
                _ => {
                    if abs != 1 {
                        write!(f, "{abs}*")?;
                    }
                    if n == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}

/// Coefficients of the cube of the Euler product,
/// `prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}`, as sparse `(exponent, coeff)` pairs below `len`.
fn jacobi_cube_terms(len: usize) -> Vec<(usize, i128)> {
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        terms.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    terms
}

/// `acc * sparse` truncated to `acc.len()`, or `None` on i128 overflow.
fn sparse_mul_i128(acc: &[i128], sparse: &[(usize, i128)]) -> Option<Vec<i128>> {
    acc.par_iter()
        .enumerate()
        .with_min_len(1024)
        .map(|(n, _)| {
            let mut s: i128 = 0;
            for &(e, c) in sparse {
                if e > n {
                    break;
                }
                s = s.checked_add(c.checked_mul(acc[n - e])?)?;
            }
            Some(s)
        })
        .collect()
}

fn sparse_mul_big(acc: &[Int], sparse: &[(usize, i128)]) -> Vec<Int> {
    acc.par_iter()
        .enumerate()
        .with_min_len(256)
        .map(|(n, _)| {
            let mut s = Int::new();
            for &(e, c) in sparse {
                if e > n {
                    break;
                }
                s += Int::from(c) * &acc[n - e];
            }
            s
        })
        .collect()
}

/// `tau(0), tau(1), ..., tau(len-1)` with `tau(0) = 0`, from
/// `Delta = q * (prod (1-q^n)^3)^8`: eight sparse multiplications by the
/// Jacobi cube, `O(len^{3/2})` multiply-adds. Runs in `i128` and falls back to
/// big integers if a partial sum would overflow.
pub fn delta_coefficients(len: usize) -> Vec<Int> {
    if len <= 1 {
        return vec![Int::new(); len];
    }
    let body = len - 1;
    let jac = jacobi_cube_terms(body);
    let mut dense = vec![0i128; body];
    for &(e, c) in &jac {
        dense[e] = c;
    }
    let mut small = Some(dense);
    let mut big: Option<Vec<Int>> = None;
    for _ in 0..7 {
        if let Some(acc) = small.take() {
            match sparse_mul_i128(&acc, &jac) {
                Some(next) => small = Some(next),
                None => big = Some(sparse_mul_big(&acc.iter().map(|&v| Int::from(v)).collect::<Vec<_>>(), &jac)),
            }
        } else if let Some(acc) = big.take() {
            big = Some(sparse_mul_big(&acc, &jac));
        }
    }
    let body: Vec<Int> = match (small, big) {
        (Some(v), _) => v.into_iter().map(Int::from).collect(),
        (None, Some(v)) => v,
        (None, None) => unreachable!(),
    };
    let mut out = Vec::with_capacity(len);
    out.push(Int::new());
    out.extend(body);
    out
}

/// The q-expansion of `Delta` to precision `prec` (`prec >= 2`).
pub fn delta_series(prec: usize) -> Result<QSeries> {
    if prec < 2 {
        return Err(Error::Precision {
            what: "delta_series",
            needed: 2,
            have: prec,
        });
    }
    QSeries::from_ints(delta_coefficients(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64]) -> QSeries {
        QSeries::from_ints(c.iter().copied()).unwrap()
    }

    /// Dense expansion of q * prod_{n>=1} (1-q^n)^24, one factor at a time.
    fn delta_naive(len: usize) -> Vec<i64> {
        let mut p = vec![0i64; len];
        p[1 % len] = 1;
        for n in 1..len {
            for _ in 0..24 {
                for i in (n..len).rev() {
                    p[i] -= p[i - n];
                }
            }
        }
        p
    }

    #[test]
    fn add_and_precision() {
        assert_eq!(s(&[1, 1]) + s(&[1, -1]), s(&[2, 0]));
        let long = QSeries::one(10);
        let short = QSeries::one(5);
        assert_eq!((&long + &short).prec(), 5);
        assert!((&long - &long).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 1, 0]) * s(&[1, -1, 0]), s(&[1, 0, -1]));
        let f = s(&[3, 0, 5, -2]);
        assert_eq!(&f * &QSeries::one(4), f);
    }

    #[test]
    fn pow_examples() {
        let f = s(&[1, 1, 0, 0, 0]);
        assert_eq!(f.pow(0), QSeries::one(5));
        assert_eq!(f.pow(3), s(&[1, 3, 3, 1, 0]));
    }

    #[test]
    fn derive_and_shift() {
        let f = s(&[7, -24, 3]);
        assert_eq!(f.derive(0), f);
        assert_eq!(f.derive(1).coeff(1), &Rat::from(-24));
        assert_eq!(QSeries::monomial(Rat::from(1), 2, 4).derive(3), s(&[0, 0, 8, 0]));
        assert_eq!(QSeries::one(3).shift(3), s(&[0, 0, 0, 1, 0, 0]));
        assert_eq!(f.shift(0), f);
        assert_eq!(s(&[1, -24]).shift(2), s(&[0, 0, 1, -24]));
    }

    #[test]
    fn delta_matches_naive_product() {
        let naive = delta_naive(40);
        let fast = delta_coefficients(40);
        for (n, (a, b)) in naive.iter().zip(&fast).enumerate() {
            assert_eq!(Int::from(*a), *b, "tau({n})");
        }
        let d = delta_series(8).unwrap();
        assert_eq!(d.coeff(1), &Rat::from(1));
        assert_eq!(d.coeff(2), &Rat::from(-24));
        assert_eq!(d.coeff(6), &Rat::from(Rat::from(d.coeff(2) * d.coeff(3))));
        assert!(delta_series(1).is_err());
    }

    #[test]
    fn big_integer_fallback_agrees() {
        let jac = jacobi_cube_terms(300);
        let mut dense = vec![Int::new(); 300];
        for &(e, c) in &jac {
            dense[e] = Int::from(c);
        }
        for _ in 0..7 {
            dense = sparse_mul_big(&dense, &jac);
        }
        let fast = delta_coefficients(301);
        assert_eq!(&fast[1..], &dense[..]);
    }

    #[test]
    fn json_shape() {
        let f = QSeries::from_coeffs(vec![Rat::from((-5, 6)), Rat::from(-24)]).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"prec":2,"coeffs":["-5/6","-24"]}"#);
        let back: QSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<QSeries>(r#"{"prec":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        let f = QSeries::from_coeffs(vec![Rat::from((-5, 6)), Rat::from(-24), Rat::new(), Rat::from(1)]).unwrap();
        assert_eq!(f.to_string(), "-5/6 - 24*q + q^3 + O(q^4)");
    }

    fn arb_series(prec: usize) -> impl Strategy<Value = QSeries> {
        proptest::collection::vec((-50i64..50, 1i64..7), prec)
            .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(n, d)| Rat::from((n, d))).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn leibniz_rule(f in arb_series(50), g in arb_series(50)) {
            let lhs = (&f * &g).derive(1);
            let rhs = &f.derive(1) * &g + &f * &g.derive(1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pow_is_iterated_mul(f in arb_series(20), e in 0u32..=8) {
            let mut iter = QSeries::one(20);
            for _ in 0..e {
                iter = &iter * &f;
            }
            prop_assert_eq!(f.pow(e), iter);
        }

        #[test]
        fn parallel_mul_matches_sequential(f in arb_series(200), g in arb_series(200)) {
            // the 200-term product goes through the parallel path;
            // compare against a truncated 150-term sequential product
            let big = (&f * &g).truncate(150);
            let small = &f.truncate(150) * &g.truncate(150);
            prop_assert_eq!(big, small);
        }
    }
}
