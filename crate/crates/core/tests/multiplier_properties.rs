use nilspec_core::fit::GrowthFit;
use nilspec_core::group::GroupId;
use nilspec_core::multiplier::{
    end_to_end_bound, heat_decay, search_sup, sobolev_check, sup_bound, CustomPhi, ExponentPair, PhiFunction,
};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = ExponentPair> {
    (1.01f64..=2.0, 2.0f64..50.0).prop_map(|(p, q)| ExponentPair::new(p, q).unwrap())
}

fn group() -> impl Strategy<Value = GroupId> {
    prop_oneof![Just(GroupId::Engel), Just(GroupId::Cartan)]
}

fn e(group: GroupId) -> f64 {
    match group {
        GroupId::Engel => 3.0,
        GroupId::Cartan => 4.5,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn heat_search_matches_closed_form(t in 1e-3f64..1e3, pq in pair(), g in group()) {
        let b = sup_bound(&PhiFunction::heat(t).unwrap(), g, &pq);
        let c = e(g) * pq.inv_r();
        let exact = (c / t).powf(c) * (-c).exp();
        prop_assert!((b.sup - exact).abs() <= 1e-12 * exact);
        prop_assert!(b.rel_err.unwrap() <= 1e-6, "rel_err {:?}", b.rel_err);
    }

    #[test]
    fn power_search_matches_closed_form(extra in 0.05f64..5.0, pq in pair(), g in group()) {
        let c = e(g) * pq.inv_r();
        let a = c + extra;
        let b = sup_bound(&PhiFunction::power(a).unwrap(), g, &pq);
        prop_assert!(b.finite);
        if c > 0.0 {
            let s_star = c / (a - c);
            let at_star = (1.0 + s_star).powf(-a) * s_star.powf(c);
            prop_assert!((b.sup - at_star).abs() <= 1e-12 * at_star);
        }
        prop_assert!(b.rel_err.unwrap() <= 1e-6, "rel_err {:?}", b.rel_err);
    }

    #[test]
    fn sup_dominates_samples(t in 1e-2f64..1e2, extra in 0.0f64..3.0, pq in pair(), g in group()) {
        let c = e(g) * pq.inv_r();
        for phi in [PhiFunction::heat(t).unwrap(), PhiFunction::power(c + extra).unwrap()] {
            let b = sup_bound(&phi, g, &pq);
            for j in -40..=40 {
                let s = 10f64.powf(j as f64 / 5.0);
                prop_assert!(phi.eval(s) * s.powf(c) <= b.sup * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn heat_time_scaling(t in 1e-2f64..1e2, scale in 0.1f64..10.0, pq in pair()) {
        let a = sup_bound(&PhiFunction::heat(t).unwrap(), GroupId::Cartan, &pq).numeric;
        let b = sup_bound(&PhiFunction::heat(scale * t).unwrap(), GroupId::Cartan, &pq).numeric;
        let c = 4.5 * pq.inv_r();
        prop_assert!((b / a - scale.powf(-c)).abs() <= 1e-6 * scale.powf(-c));
    }
}

#[test]
fn heat_decay_examples() {
    let pq = ExponentPair::new(2.0, 2.0).unwrap();
    let d = heat_decay(GroupId::Engel, &pq, 1.0).unwrap();
    assert_eq!((d.exponent, d.constant, d.bound), (0.0, 1.0, 1.0));

    let pq = ExponentPair::new(4.0 / 3.0, 4.0).unwrap();
    for t in [0.1, 1.0, 10.0] {
        let d = heat_decay(GroupId::Engel, &pq, t).unwrap();
        assert!((d.exponent - 1.5).abs() < 1e-15);
        let c = 1.5f64.powf(1.5) * (-1.5f64).exp();
        assert!((d.constant - c).abs() < 1e-15);
        assert!(d.rel_err <= 1e-6, "t={t}: {}", d.rel_err);
    }
    let d = heat_decay(GroupId::Cartan, &pq, 1.0).unwrap();
    assert!((d.exponent - 2.25).abs() < 1e-15);
    assert!(heat_decay(GroupId::Cartan, &pq, 0.0).is_err());
}

#[test]
fn cartan_numeric_decay_exponent() {
    for (p, q) in [(4.0 / 3.0, 4.0), (1.5, 2.5), (1.9, 30.0)] {
        let pq = ExponentPair::new(p, q).unwrap();
        let (lo, hi) =
            (heat_decay(GroupId::Cartan, &pq, 0.1).unwrap(), heat_decay(GroupId::Cartan, &pq, 10.0).unwrap());
        let measured = -(hi.numeric.ln() - lo.numeric.ln()) / 100f64.ln();
        let exact = 4.5 * (1.0 / p - 1.0 / q);
        assert!((measured - exact).abs() <= 1e-6, "{measured} vs {exact}");
        assert_eq!(lo.exponent, exact);
    }
}

#[test]
fn sobolev_examples() {
    let pq = ExponentPair::new(4.0 / 3.0, 4.0).unwrap();
    let c = sobolev_check(GroupId::Engel, 1.5, 0.0, &pq);
    assert!(c.holds && c.margin.abs() < 1e-12);
    let c = sobolev_check(GroupId::Cartan, 2.25, 0.0, &pq);
    assert!(c.holds && c.margin.abs() < 1e-12);
    let c = sobolev_check(GroupId::Cartan, 2.0, 0.0, &pq);
    assert!(!c.holds);
    assert!(!sup_bound(&PhiFunction::power(2.0).unwrap(), GroupId::Cartan, &pq).finite);
}

#[test]
fn sobolev_condition_matches_finiteness() {
    let pairs: Vec<ExponentPair> =
        (0..10).map(|k| ExponentPair::new(1.1 + 0.09 * k as f64, 2.0 + 3.0 * k as f64).unwrap()).collect();
    for g in [GroupId::Engel, GroupId::Cartan] {
        for ai in 0..10 {
            let a = 0.5 * ai as f64;
            for bj in 0..10 {
                let b = a * bj as f64 / 10.0;
                for pq in &pairs {
                    let check = sobolev_check(g, a, b, pq);
                    let bound = sup_bound(&PhiFunction::power(a - b).unwrap(), g, pq);
                    assert_eq!(check.holds, bound.finite, "{g} a={a} b={b} {pq:?}");
                }
            }
        }
    }
}

#[test]
fn custom_table_tracks_heat() {
    let s: Vec<f64> = (0..=400).map(|j| 10f64.powf(-3.0 + 5.0 * j as f64 / 400.0)).collect();
    let v: Vec<f64> = s.iter().map(|x| (-x).exp()).collect();
    let phi = PhiFunction::Custom(CustomPhi::new(s, v).unwrap());
    let pq = ExponentPair::new(4.0 / 3.0, 4.0).unwrap();
    let b = sup_bound(&phi, GroupId::Engel, &pq);
    let exact = 1.5f64.powf(1.5) * (-1.5f64).exp();
    assert!(b.closed_form.is_none());
    assert!((b.sup / exact - 1.0).abs() < 1e-3, "{} vs {exact}", b.sup);
}

#[test]
fn custom_table_with_slow_tail_diverges() {
    let phi = PhiFunction::Custom(CustomPhi::new(vec![1.0, 10.0], vec![0.5, 0.25]).unwrap());
    assert!(!search_sup(&phi, 1.0).finite);
    assert!(search_sup(&phi, 0.1).finite);
}

fn exact_fit(slope: f64, intercept: f64) -> GrowthFit {
    let s = [1e2, 1e3, 1e4];
    let v: Vec<f64> = s.iter().map(|x: &f64| (intercept + slope * x.ln()).exp()).collect();
    GrowthFit::fit(&s, &v).unwrap()
}

#[test]
fn end_to_end_with_target_slope_is_sup_bound() {
    let pq = ExponentPair::new(1.5, 3.0).unwrap();
    for g in [GroupId::Engel, GroupId::Cartan] {
        let mut fit = exact_fit(e(g), 0.0);
        fit.slope = e(g);
        fit.intercept = 0.0;
        for phi in [PhiFunction::heat(0.7).unwrap(), PhiFunction::power(5.0).unwrap()] {
            let bound = end_to_end_bound(&phi, &pq, Some(&fit)).unwrap();
            assert_eq!(bound.value, sup_bound(&phi, g, &pq).sup);
        }
    }
}

#[test]
fn end_to_end_heat_decays_with_fitted_exponent() {
    let pq = ExponentPair::new(4.0 / 3.0, 4.0).unwrap();
    let fit = exact_fit(2.02, -0.25);
    let at = |t: f64| end_to_end_bound(&PhiFunction::heat(t).unwrap(), &pq, Some(&fit)).unwrap();
    let c = fit.slope * 0.5;
    for t in [0.1, 1.0, 10.0] {
        let expected = (fit.intercept * 0.5).exp() * (c / t).powf(c) * (-c).exp();
        assert!((at(t).value / expected - 1.0).abs() < 1e-12);
    }
    let measured = -(at(10.0).value.ln() - at(0.1).value.ln()) / 100f64.ln();
    assert!((measured - c).abs() < 1e-9);
}
