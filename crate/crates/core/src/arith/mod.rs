//! Number substrate: exact integers and rationals, binary floats at a chosen
//! mantissa precision, and the combinatorial constants used by the calculus.
//!
//! Integers and rationals are GMP-backed via `rug`; [`Rat`] is always kept in
//! lowest terms with a positive denominator. [`BigFloat`] rounds to nearest at
//! the precision it was created with.

pub mod linalg;

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

pub type Int = rug::Integer;
pub type Rat = rug::Rational;
pub type BigFloat = rug::Float;

/// Default mantissa precision in bits for [`BigFloat`] values.
pub const DEFAULT_PRECISION: u32 = 256;

/// Environment variable that overrides [`DEFAULT_PRECISION`].
pub const PRECISION_ENV: &str = "MODCALC_FLOAT_BITS";

const BERNOULLI_MEMO: usize = 64;

/// Working float precision: [`PRECISION_ENV`] when set to a sane value,
/// otherwise [`DEFAULT_PRECISION`].
pub fn working_precision() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&p| (64..=1 << 16).contains(&p))
        .unwrap_or(DEFAULT_PRECISION)
}

fn bernoulli_table() -> &'static [Rat] {
    static TABLE: OnceLock<Vec<Rat>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_upto(BERNOULLI_MEMO))
}

/// B_0 ..= B_n from sum_{j=0}^{n} C(n+1, j) B_j = 0 (so B_1 = -1/2).
fn bernoulli_upto(n: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    b.push(Rat::from(1));
    for m in 1..=n {
        let mut acc = Rat::new();
        for (j, bj) in b.iter().enumerate() {
            if bj.cmp0().is_ne() {
                acc += Rat::from(binomial(m as i64 + 1, j as i64)) * bj;
            }
        }
        b.push(-acc / Int::from(m + 1));
    }
    b
}

/// The Bernoulli number B_k with B_2 = 1/6, B_12 = -691/2730.
///
/// Odd indices above 1 vanish and are rejected. Values up to k = 64 are read
/// from a shared table.
pub fn bernoulli(k: u32) -> Result<Rat> {
    if k > 1 && k % 2 == 1 {
        return Err(Error::OddBernoulli(k));
    }
    let k = k as usize;
    if k <= BERNOULLI_MEMO {
        Ok(bernoulli_table()[k].clone())
    } else {
        Ok(bernoulli_upto(k).pop().expect("nonempty"))
    }
}

/// C(n, k); zero outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> Int {
    if n < 0 || k < 0 || k > n {
        return Int::new();
    }
    Int::from(Int::binomial_u(n as u32, k as u32))
}

/// Rising factorial a (a+1) ... (a+m-1); 1 for m = 0.
pub fn pochhammer(a: i64, m: u32) -> Int {
    let mut acc = Int::from(1);
    for i in 0..m as i64 {
        acc *= a + i;
    }
    acc
}

/// (a-1)! / (b-1)! for a >= b >= 1 written as a Pochhammer product, so
/// `factorial_ratio(k + m, k + r)` is (k+m-1)!/(k+r-1)!.
pub fn factorial_ratio(a: i64, b: i64) -> Int {
    debug_assert!(a >= b);
    pochhammer(b, (a - b) as u32)
}

/// Integer power, with 0^0 = 1.
pub fn int_pow(base: i64, exp: u32) -> Int {
    Int::from(base).pow(exp)
}

/// Exact rational as `p/q`, or `p` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p/q` or `p` (optionally signed) into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    Rat::parse(t)
        .map(Rat::from)
        .map_err(|e| Error::InvalidArgument(format!("bad rational `{t}`: {e}")))
}

/// Rounds a rational to a float at `prec` bits (single rounding).
pub fn rat_to_float(r: &Rat, prec: u32) -> BigFloat {
    Float::with_val(prec, r)
}

/// Decimal rendering with an explicit number of significant digits.
pub fn float_to_decimal(x: &BigFloat, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Serde helpers storing a [`Rat`] as its exact `p/q` string.
pub mod serde_rat {
    use super::{parse_rat, rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{parse_rat, rat_to_string, Rat};
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&rat_to_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::from((n, d))
    }

    /// Akiyama-Tanigawa; gives B_1 = +1/2 but agrees on even indices.
    fn bernoulli_akiyama_tanigawa(n: usize) -> Rat {
        let mut a: Vec<Rat> = (0..=n).map(|m| rat(1, m as i64 + 1)).collect();
        for m in 0..=n {
            a[m] = rat(1, m as i64 + 1);
            for j in (1..=m).rev() {
                let diff = Rat::from(&a[j - 1] - &a[j]);
                a[j - 1] = diff * Int::from(j);
            }
        }
        a[0].clone()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0).unwrap(), rat(1, 1));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert_eq!(bernoulli(1).unwrap(), rat(-1, 2));
        assert_eq!(bernoulli(7), Err(Error::OddBernoulli(7)));
    }

    #[test]
    fn bernoulli_matches_independent_algorithm() {
        for k in (0..=40).step_by(2) {
            assert_eq!(bernoulli(k).unwrap(), bernoulli_akiyama_tanigawa(k as usize), "B_{k}");
        }
        // past the memo table
        assert_eq!(bernoulli(70).unwrap(), bernoulli_akiyama_tanigawa(70));
    }

    #[test]
    fn bernoulli_recurrence_holds() {
        let all: Vec<Rat> = (0..=31u32)
            .map(|j| if j > 1 && j % 2 == 1 { Rat::new() } else { bernoulli(j).unwrap() })
            .collect();
        for n in 1..=30i64 {
            let mut s = Rat::new();
            for j in 0..=n {
                s += Rat::from(binomial(n + 1, j)) * &all[j as usize];
            }
            assert_eq!(s, 0, "n = {n}");
        }
    }

    #[test]
    fn eisenstein_normalizers() {
        let expect = [
            (2, rat(24, 1)),
            (4, rat(-240, 1)),
            (6, rat(504, 1)),
            (8, rat(-480, 1)),
            (10, rat(264, 1)),
            (12, rat(-65520, 691)),
            (14, rat(24, 1)),
        ];
        for (k, v) in expect {
            let val = Rat::from(Int::from(2 * k)) / bernoulli(k).unwrap();
            assert_eq!(val, v, "2k/B_k at k={k}");
        }
    }

    #[test]
    fn binomial_and_pochhammer() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(pochhammer(3, 0), 1);
        assert_eq!(pochhammer(2, 3), 24);
        assert_eq!(pochhammer(8, 2), 72);
        assert_eq!(pochhammer(0, 3), 0);
        assert_eq!(factorial_ratio(9, 7), 56);
    }

    #[test]
    fn rat_strings() {
        assert_eq!(rat_to_string(&rat(-10, 12)), "-5/6");
        assert_eq!(rat_to_string(&rat(-24, 1)), "-24");
        assert_eq!(parse_rat("38016/691").unwrap(), rat(38016, 691));
        assert_eq!(parse_rat(" -24 ").unwrap(), rat(-24, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn float_rounding_is_single_step() {
        let x = rat_to_float(&rat(1, 3), 256);
        assert_eq!(x.prec(), 256);
        let back = x.to_rational().unwrap();
        let err = Rat::from(&back - rat(1, 3)).abs();
        assert!(err < Rat::from((Int::from(1), Int::from(1) << 256u32)));
        assert!(float_to_decimal(&x, 6).starts_with("3.33333"));
    }

    proptest! {
        #[test]
        fn rat_field_laws(a in -1000i64..1000, b in 1i64..500, c in -1000i64..1000,
                          d in 1i64..500, e in -1000i64..1000, f in 1i64..500) {
            let x = rat(a, b);
            let y = rat(c, d);
            let z = rat(e, f);
            prop_assert_eq!(Rat::from(&x + &y) + &z, Rat::from(&y + &z) + &x);
            prop_assert_eq!(Rat::from(&x * &y) * &z, Rat::from(&y * &z) * &x);
            prop_assert_eq!(Rat::from(&x + &y) * &z, Rat::from(&x * &z) + Rat::from(&y * &z));
            prop_assert!(x.denom().cmp0().is_gt());
            let renorm = Rat::from((x.numer().clone(), x.denom().clone()));
            prop_assert_eq!(&renorm, &x);
            prop_assert_eq!(parse_rat(&rat_to_string(&x)).unwrap(), x);
        }
    }
}
