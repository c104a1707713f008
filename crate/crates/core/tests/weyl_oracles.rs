use nilspec_core::group::GroupId;
use nilspec_core::representation::DualPoint;
use nilspec_core::schrodinger::{build_symbol_cartan, build_symbol_engel, Potential, SchrodingerOp, SpectralConfig};
use nilspec_core::weyl::{counting_bound_check, phase_space_volume, sublevel_intervals, weyl_ratio, WeylSymbol};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ∫₀¹ √(1 − t⁴) dt = Γ(¼)Γ(3/2)/(4Γ(7/4))
const QUARTIC_AREA_CONST: f64 = 0.874_019_184_764_04;

#[test]
fn quartic_sublevel_endpoints_match_closed_form() {
    // λ = μ = 1: V = u⁴/4 + u²/2 + 9/4; V = 5 ⇔ w² + 2w − 11 = 0, w = u²
    let op = build_symbol_engel(1.0, 1.0).unwrap();
    let iv = sublevel_intervals(op.potential(), 5.0);
    assert_eq!(iv.len(), 1);
    let root = (-1.0 + 12f64.sqrt()).sqrt();
    assert!((iv[0].hi - root).abs() <= 1e-11 * root);
    assert!((iv[0].lo + root).abs() <= 1e-11 * root);
}

#[test]
fn engel_threshold_at_the_potential_minimum_is_empty() {
    // λ = 1, μ = 2: V = u⁴/4 + 3, so {V < 3} is empty and {V < 7} = (−2, 2)
    let op = build_symbol_engel(1.0, 2.0).unwrap();
    assert!(sublevel_intervals(op.potential(), 3.0).is_empty());
    let iv = sublevel_intervals(op.potential(), 7.0);
    assert_eq!(iv.len(), 1);
    assert!(iv[0].lo < 0.0 && iv[0].hi > 0.0);
    assert!((iv[0].hi - 2.0).abs() < 1e-11);
}

#[test]
fn pure_quartic_volume_matches_beta_function() {
    let sym = WeylSymbol { kinetic: 1.0, potential: Potential::new(vec![0.0, 0.0, 1.0]).unwrap() };
    for s in [1.0f64, 17.0, 1e4] {
        let exact = 4.0 * s.powf(0.75) * QUARTIC_AREA_CONST;
        let got = phase_space_volume(&sym, s);
        assert!((got / exact - 1.0).abs() < 1e-9, "s={s}: {got} vs {exact}");
    }
}

#[test]
fn kinetic_coefficient_scales_the_momentum_axis() {
    // {ξ²/ρ + V < s} and {ξ² + ρV < ρs} have the same area
    let b = build_symbol_cartan(0.8, 1.3, -0.5, true).unwrap();
    let rho = 0.8f64 * 0.8 + 1.3 * 1.3;
    let v1 = phase_space_volume(&WeylSymbol::from(&b), 40.0);
    let v2 = phase_space_volume(&WeylSymbol::from(&b.scaled(rho)), 40.0 * rho);
    assert!((v1 / v2 - 1.0).abs() < 1e-9);
}

#[test]
fn engel_volume_matches_monte_carlo() {
    let op = build_symbol_engel(1.0, 0.0).unwrap();
    let sym = WeylSymbol::from(&op);
    let s = 50.0;
    let vol = phase_space_volume(&sym, s);
    let u_max = op.potential().level_radius(s);
    let xi_max = s.sqrt();
    let box_area = 4.0 * u_max * xi_max;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples = 1_000_000;
    let hits = (0..samples)
        .filter(|_| {
            let u: f64 = rng.gen_range(-u_max..u_max);
            let xi: f64 = rng.gen_range(-xi_max..xi_max);
            xi * xi + op.potential().eval(u) < s
        })
        .count();
    let p = hits as f64 / samples as f64;
    let estimate = p * box_area;
    let sigma = box_area * (p * (1.0 - p) / samples as f64).sqrt();
    assert!((estimate - vol).abs() <= 3.0 * sigma, "{vol} vs {estimate} ± {sigma}");
}

#[test]
fn harmonic_weyl_ratio_is_one() {
    let r = weyl_ratio(&SchrodingerOp::harmonic(), 100.0, &SpectralConfig::default()).unwrap();
    assert!((r - 1.0).abs() < 1e-8, "{r}");
}

#[test]
fn engel_and_cartan_weyl_ratios_approach_one() {
    let cfg = SpectralConfig::default();
    let engel = build_symbol_engel(1.0, 0.0).unwrap();
    let cartan = build_symbol_cartan(1.0, 1.0, 0.0, true).unwrap().scaled(2.0);
    for s in [200.0, 1000.0, 5000.0] {
        for (name, op) in [("engel", &engel), ("cartan", &cartan)] {
            let r = weyl_ratio(op, s, &cfg).unwrap();
            assert!((0.9..=1.1).contains(&r), "{name} s={s}: ratio {r}");
        }
    }
}

#[test]
fn engel_counting_bound() {
    let cfg = SpectralConfig::default();
    let points: Vec<DualPoint> = [0.5, 1.0, 2.0, 5.0]
        .iter()
        .flat_map(|&l| [-5.0, 0.0, 10.0].map(move |m| DualPoint::engel(l, m).unwrap()))
        .collect();
    let s_grid = [1e2, 10f64.powf(2.5), 1e3];
    let report = counting_bound_check(GroupId::Engel, &points, &s_grid, &cfg).unwrap();
    assert!(report.bounded, "{report:?}");
    assert!(report.rows.iter().all(|r| r.ratio <= report.empirical_constant));
    assert!(report.rows.iter().all(|r| r.n > 0 && r.volume > 0.0));

    let single = counting_bound_check(GroupId::Engel, &[DualPoint::engel(1.0, 0.0).unwrap()], &s_grid, &cfg).unwrap();
    assert!(single.bounded && single.trend_slope < 0.0);

    let below = counting_bound_check(GroupId::Engel, &[DualPoint::engel(1.0, 0.0).unwrap()], &[1.0], &cfg).unwrap();
    assert_eq!(below.rows[0].n, 0);
    assert_eq!(below.rows[0].ratio, 0.0);
}

#[test]
fn cartan_counting_bound() {
    let cfg = SpectralConfig::default();
    let points: Vec<DualPoint> = [(0.5, 0.7, 0.0), (1.0, 1.0, -3.0), (2.0, 0.5, 5.0)]
        .iter()
        .map(|&(l, m, n)| DualPoint::cartan(l, m, n).unwrap())
        .collect();
    let report = counting_bound_check(GroupId::Cartan, &points, &[1e2, 1e3], &cfg).unwrap();
    assert!(report.bounded, "{report:?}");
    assert!(counting_bound_check(GroupId::Engel, &points, &[1e2], &cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_monotone(l in 0.2f64..3.0, m in -5.0f64..5.0, a in 1.0f64..500.0, b in 1.0f64..500.0) {
        let sym = WeylSymbol::from(&build_symbol_engel(l, m).unwrap());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(phase_space_volume(&sym, lo) <= phase_space_volume(&sym, hi) * (1.0 + 1e-12));
    }

    #[test]
    fn intervals_are_disjoint_and_inside(c1 in -6.0f64..2.0, s in -2.0f64..30.0) {
        let v = Potential::new(vec![3.0, c1, 0.5]).unwrap();
        let iv = sublevel_intervals(&v, s);
        for w in iv.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
        for i in &iv {
            prop_assert!(v.eval(0.5 * (i.lo + i.hi)) < s);
            prop_assert!((v.eval(i.lo) - s).abs() <= 1e-9 * s.abs().max(1.0));
        }
    }
}
