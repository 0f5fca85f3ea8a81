//! Exact derivations of the tau identities from vanishing Poincare series.

use modcalc::arith::{Int, Rat};
use modcalc::calculus::rankin_cohen;
use modcalc::forms::{e2, eisenstein, Form};
use modcalc::poincare::{
    derive_identity, eval_low_weight, eval_modular_seed, find_identity, identity_catalog, serre3_formal,
    FormalPoincare, RelationKind,
};
use modcalc::qseries::QSeries;
use rug::ops::Pow;

#[test]
fn every_identity_for_m_up_to_10_over_200_rows() {
    for id in identity_catalog() {
        for m in 1..=10 {
            let d = derive_identity(&id, m, 200).unwrap_or_else(|e| panic!("{} m={m}: {e}", id.id));
            assert_eq!(d.multipliers.len(), id.relations.len());
        }
    }
}

#[test]
fn s10_sigma3_multipliers() {
    // tau(m) m^{-11} stream = 5/3 m^11 [P_{8,m} E4] - m^10/6 [E4, P_{6,m}]_1
    let id = find_identity("s10sig3").unwrap();
    for m in 1..=10usize {
        let d = derive_identity(&id, m, 200).unwrap();
        let m11 = Int::from(m).pow(11u32);
        let m10 = Int::from(m).pow(10u32);
        assert_eq!(
            d.multipliers,
            vec![
                (RelationKind::ProductP8E4, Rat::from((m11 * 5u32, Int::from(3)))),
                (RelationKind::BracketE4P6, Rat::from((-m10, Int::from(6)))),
            ]
        );
    }
}

#[test]
fn serre3_seed_matches_the_stated_form() {
    // q^m (m^3 - 2m^2 E2 + 7/6 m E2^2 - 7/36 (E2^3 - E6)), built directly from E2 and E6
    let prec = 80;
    let e2s = e2(prec).into_series();
    let e6 = eisenstein(6, prec).unwrap().into_series();
    for m in 0..6i64 {
        let want = QSeries::constant(Rat::from(m.pow(3)), prec)
            - e2s.scale(&Rat::from(2 * m * m))
            + e2s.pow(2).scale(&Rat::from((7 * m, 6)))
            - (e2s.pow(3) - &e6).scale(&Rat::from((7, 36)));
        assert_eq!(serre3_formal(m as usize, prec).unwrap(), want.shift(m as usize));
    }
}

#[test]
fn bracket_with_average_of_constant() {
    // [E4, P_8(1)]_1 = P_14([E4, 1]_1) where 1 is treated as weight 8; S_14 = 0 so both sides are exact
    let prec = 100;
    let e4 = eisenstein(4, prec).unwrap();
    let one = Form::modular(0, QSeries::one(prec)).unwrap();
    let lhs = rankin_cohen(&e4, &eval_modular_seed(&one, 8).unwrap(), 1).unwrap();
    let rhs = eval_low_weight(&FormalPoincare::bracket(&e4, 8, 0, 1).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(lhs.series().is_zero());
}
