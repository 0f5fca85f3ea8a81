//! Rankin-Cohen brackets, higher Serre derivatives and the seed functions whose
//! Poincare averages realize brackets and Serre derivatives of `P_{l,N}`.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;

use crate::arith::{binomial, factorial_ratio, int_pow, Int, Rat};
use crate::error::{Error, Result};
use crate::forms::{e2, eisenstein, Form};
use crate::qseries::QSeries;

fn require_modular(f: &Form, op: &'static str) -> Result<()> {
    if f.is_modular() {
        Ok(())
    } else {
        Err(Error::Quasimodular(op))
    }
}

/// `[f, g]_n = sum_j (-1)^j C(k+n-1, n-j) C(l+n-1, j) D^j f D^{n-j} g`.
pub fn rankin_cohen(f: &Form, g: &Form, n: u32) -> Result<Form> {
    require_modular(f, "rankin_cohen")?;
    require_modular(g, "rankin_cohen")?;
    let (k, l) = (f.weight() as i64, g.weight() as i64);
    let n_i = n as i64;
    let prec = f.prec().min(g.prec());
    let mut acc = QSeries::zero(prec);
    for j in 0..=n {
        let mut c = binomial(k + n_i - 1, n_i - j as i64) * binomial(l + n_i - 1, j as i64);
        if j % 2 == 1 {
            c = -c;
        }
        if c == 0 {
            continue;
        }
        let term = &f.series().derive(j) * &g.series().derive(n - j);
        acc = acc + term.scale(&Rat::from(c));
    }
    Form::modular(f.weight() + g.weight() + 2 * n, acc)
}

/// The first Serre derivative `D f - (w/12) E2 f` of a weight-`w` series.
fn theta_once(series: &QSeries, weight: u32, e2s: &QSeries) -> QSeries {
    series.derive(1) - (e2s * series).scale(&Rat::from((weight as i64, 12)))
}

/// Closed form `sum_r C(m,r) (k+m-1)!/(k+r-1)! (-E2/12)^{m-r} D^r f`.
pub fn serre(f: &Form, m: u32) -> Result<Form> {
    require_modular(f, "serre")?;
    let k = f.weight() as i64;
    let prec = f.prec();
    let neg_e2_12 = e2(prec).series().scale(&Rat::from((-1, 12)));
    let mut e2_pows = vec![QSeries::one(prec)];
    for i in 1..=m as usize {
        let next = &e2_pows[i - 1] * &neg_e2_12;
        e2_pows.push(next);
    }
    let mut acc = QSeries::zero(prec);
    for r in 0..=m {
        let c = binomial(m as i64, r as i64) * factorial_ratio(k + m as i64, k + r as i64);
        if c == 0 {
            continue;
        }
        let term = &e2_pows[(m - r) as usize] * &f.series().derive(r);
        acc = acc + term.scale(&Rat::from(c));
    }
    Form::modular(f.weight() + 2 * m, acc)
}

/// Serre derivatives by the three-term recursion
/// `theta^[n+1] f = theta(theta^[n] f) - n(k+n-1)/144 E4 theta^[n-1] f`.
pub fn serre_recursive(f: &Form, m: u32) -> Result<Form> {
    require_modular(f, "serre_recursive")?;
    let k = f.weight();
    let prec = f.prec();
    let e2s = e2(prec).into_series();
    let e4 = eisenstein(4, prec)?.into_series();
    let mut prev = QSeries::zero(prec);
    let mut cur = f.series().clone();
    for n in 0..m {
        let mut next = theta_once(&cur, k + 2 * n, &e2s);
        if n >= 1 {
            let c = Rat::from(((n * (k + n - 1)) as i64, 144));
            next = next - (&e4 * &prev).scale(&c);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Form::modular(k + 2 * m, cur)
}

/// A polynomial in `E2` times `q^shift`, with q-series coefficients.
///
/// This is the shape of the Serre-type seed functions: each component is a
/// constant or a genuine modular form, and `weight` is the formal weight the
/// seed is averaged at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Poly {
    pub weight: u32,
    pub shift: usize,
    pub components: BTreeMap<u32, QSeries>,
}

impl E2Poly {
    /// Substitutes the E2 expansion and multiplies by `q^shift`.
    pub fn evaluate(&self) -> QSeries {
        let prec = self.components.values().map(QSeries::prec).min().unwrap_or(1);
        let e2s = e2(prec).into_series();
        let mut acc = QSeries::zero(prec);
        let mut power = QSeries::one(prec);
        let top = self.components.keys().max().copied().unwrap_or(0);
        for r in 0..=top {
            if let Some(c) = self.components.get(&r) {
                acc = acc + &power * c;
            }
            if r < top {
                power = &power * &e2s;
            }
        }
        acc.shift(self.shift)
    }

    fn constant_coeff(c: &QSeries) -> Option<&Rat> {
        if c.coeffs()[1..].iter().all(|x| x.cmp0().is_eq()) {
            Some(c.coeff(0))
        } else {
            None
        }
    }
}

impl fmt::Display for E2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift > 0 {
            write!(f, "q^{}*(", self.shift)?;
        }
        let mut first = true;
        for (r, c) in &self.components {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match E2Poly::constant_coeff(c) {
                Some(v) => write!(f, "({v})")?,
                None => write!(f, "[{}]", c)?,
            }
            match r {
                0 => {}
                1 => f.write_str("*E2")?,
                _ => write!(f, "*E2^{r}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        if self.shift > 0 {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// The formal m-th Serre derivative of `q^N` viewed as weight `l`:
/// `q^N sum_r C(m,r) (l+m-1)!/(l+m-r-1)! (-E2/12)^r N^{m-r}`, no
/// convergence checks. Components are constants known to `prec`.
pub fn serre_seed_poly(l: u32, shift: usize, m: u32, prec: usize) -> E2Poly {
    let (l, mi) = (l as i64, m as i64);
    let mut components = BTreeMap::new();
    for r in 0..=m {
        let ri = r as i64;
        let c = binomial(mi, ri) * factorial_ratio(l + mi, l + mi - ri) * int_pow(shift as i64, m - r);
        if c == 0 {
            continue;
        }
        let v = Rat::from(c) / Int::from(-12).pow(r);
        components.insert(r, QSeries::constant(v, prec));
    }
    E2Poly {
        weight: (l + 2 * mi) as u32,
        shift,
        components,
    }
}

/// Seed whose weight-`(l+2m)` Poincare average is `theta^[m] P_{l,N}`.
/// Requires `l >= 2m + 2` and even `l`. `prec` is the precision before the `q^N`
/// shift, so the result is known to `prec + N`.
pub fn serre_seed(l: u32, shift: usize, m: u32, prec: usize) -> Result<QSeries> {
    if l % 2 == 1 || l < 2 * m + 2 {
        return Err(Error::Admissibility(format!(
            "serre seed needs even l >= 2m+2, got l = {l}, m = {m}"
        )));
    }
    Ok(serre_seed_formal(l, shift, m, prec))
}

pub fn serre_seed_formal(l: u32, shift: usize, m: u32, prec: usize) -> QSeries {
    serre_seed_poly(l, shift, m, prec).evaluate()
}

/// The `N = 0` case: `(l+m-1)! / ((-12)^m (l-1)!) E2^m`, whose average is `theta^[m] E_l`.
pub fn serre_eisenstein_seed(l: u32, m: u32, prec: usize) -> Result<QSeries> {
    serre_seed(l, 0, m, prec)
}

/// The formal bracket `[f, q^N]_m` with `q^N` treated as weight `l`:
/// `q^N sum_r (-1)^r C(k+m-1, m-r) C(l+m-1, r) N^{m-r} D^r f`, no
/// admissibility checks. Known to precision `prec(f) + N`.
pub fn rc_seed_formal(f: &Form, l: u32, shift: usize, m: u32) -> Result<QSeries> {
    require_modular(f, "rc_seed")?;
    let (k, l, mi) = (f.weight() as i64, l as i64, m as i64);
    let mut acc = QSeries::zero(f.prec());
    for r in 0..=m {
        let ri = r as i64;
        let mut c = binomial(k + mi - 1, mi - ri) * binomial(l + mi - 1, ri) * int_pow(shift as i64, m - r);
        if r % 2 == 1 {
            c = -c;
        }
        if c == 0 {
            continue;
        }
        acc = acc + f.series().derive(r).scale(&Rat::from(c));
    }
    Ok(acc.shift(shift))
}

/// Seed whose weight-`(k+l+2m)` Poincare average is `[f, P_{l,N}]_m`.
/// Requires even `l >= 4`, and `l >= k + 2` unless `f` is a cusp form.
pub fn rc_seed(f: &Form, l: u32, shift: usize, m: u32) -> Result<QSeries> {
    if l % 2 == 1 || l < 4 {
        return Err(Error::Admissibility(format!("bracket seed needs even l >= 4, got {l}")));
    }
    if !f.is_cusp() && l < f.weight() + 2 {
        return Err(Error::Admissibility(format!(
            "bracket seed with non-cusp f of weight {} needs l >= k+2, got l = {l}",
            f.weight()
        )));
    }
    rc_seed_formal(f, l, shift, m)
}

/// The `N = 0` case `(-1)^m C(l+m-1, m) D^m f`, averaging to `[f, E_l]_m`.
pub fn rc_eisenstein_seed(f: &Form, l: u32, m: u32) -> Result<QSeries> {
    rc_seed(f, l, 0, m)
}

/// Residual series of Ramanujan's system and the `E2^3 - E6` identity; all
/// are zero to the working precision.
#[derive(Clone, Debug)]
pub struct RamanujanResiduals {
    /// `D E2 - (E2^2 - E4)/12`
    pub de2: QSeries,
    /// `D E4 - (E2 E4 - E6)/3`
    pub de4: QSeries,
    /// `D E6 - (E2 E6 - E4^2)/2`
    pub de6: QSeries,
    /// `E2^3 - E6 - 9 D E4 - 72 D^2 E2`
    pub e2_cubed: QSeries,
}

impl RamanujanResiduals {
    pub fn all_zero(&self) -> bool {
        [&self.de2, &self.de4, &self.de6, &self.e2_cubed]
            .iter()
            .all(|s| s.is_zero())
    }
}

pub fn ramanujan_derivatives(prec: usize) -> Result<RamanujanResiduals> {
    let e2s = e2(prec).into_series();
    let e4 = eisenstein(4, prec)?.into_series();
    let e6 = eisenstein(6, prec)?.into_series();
    let de2 = e2s.derive(1) - (&e2s * &e2s - &e4).scale(&Rat::from((1, 12)));
    let de4 = e4.derive(1) - (&e2s * &e4 - &e6).scale(&Rat::from((1, 3)));
    let de6 = e6.derive(1) - (&e2s * &e6 - &e4 * &e4).scale(&Rat::from((1, 2)));
    let e2_cubed = e2s.pow(3) - &e6 - e4.derive(1).scale(&Rat::from(9)) - e2s.derive(2).scale(&Rat::from(72));
    Ok(RamanujanResiduals { de2, de4, de6, e2_cubed })
}
