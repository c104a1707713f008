use nilspec_core::algebra::{rational, Poly, PolyDiffOp};
use nilspec_core::group::{lie_basis, vector_field, vector_fields, ExactElement, GroupElement, GroupId};
use num_rational::BigRational;
use proptest::prelude::*;

type Q = BigRational;

fn small_rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rational(n, d))
}

fn element(group: GroupId) -> impl Strategy<Value = ExactElement> {
    proptest::collection::vec(small_rational(), group.dimension())
        .prop_map(move |c| GroupElement::new(group, c).unwrap())
}

fn any_group() -> impl Strategy<Value = GroupId> {
    prop_oneof![Just(GroupId::Engel), Just(GroupId::Cartan)]
}

/// Coordinates of `g·x` as polynomials in `x`.
fn left_translation(g: &ExactElement) -> Vec<Poly<Q>> {
    let n = g.group().dimension();
    let x: Vec<Poly<Q>> = (0..n).map(|i| Poly::var(n, i)).collect();
    let c = |k: usize| Poly::constant(n, g.coords()[k].clone());
    let half = rational(1, 2);
    let mut out = vec![
        &c(0) + &x[0],
        &c(1) + &x[1],
        &(&c(2) + &x[2]) - &(&c(0) * &x[1]),
        &(&(&c(3) + &x[3]) + &(&c(0).pow(2) * &x[1]).scale(&half)) - &(&c(0) * &x[2]),
    ];
    if g.group() == GroupId::Cartan {
        out.push(
            &(&(&(&c(4) + &x[4]) + &(&c(0) * &x[1].pow(2)).scale(&half)) - &(&c(1) * &x[2]))
                + &(&(&c(0) * &c(1)) * &x[1]),
        );
    }
    out
}

fn monomials(n: usize, max_degree: u32) -> Vec<Poly<Q>> {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                (0..=max_degree).filter_map(move |k| {
                    let mut v = e.clone();
                    v.push(k);
                    (v.iter().sum::<u32>() <= max_degree).then_some(v)
                })
            })
            .collect();
    }
    exps.into_iter().map(|e| Poly::monomial(n, e, rational(1, 1))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn associativity(
        (g, h, k) in any_group().prop_flat_map(|grp| (element(grp), element(grp), element(grp)))
    ) {
        let left = g.multiply(&h).unwrap().multiply(&k).unwrap();
        let right = g.multiply(&h.multiply(&k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided(g in any_group().prop_flat_map(element)) {
        prop_assert!(g.multiply(&g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().multiply(&g).unwrap().is_identity());
    }

    #[test]
    fn dilation_is_an_automorphism(
        (g, h) in any_group().prop_flat_map(|grp| (element(grp), element(grp))),
        r in (1i64..=7, 1i64..=5).prop_map(|(n, d)| rational(n, d)),
    ) {
        let lhs = g.multiply(&h).unwrap().dilate(&r).unwrap();
        let rhs = g.dilate(&r).unwrap().multiply(&h.dilate(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// `X_i(f∘L_g) = (X_i f)∘L_g` for every monomial of degree ≤ 4.
    #[test]
    fn vector_fields_are_left_invariant(g in any_group().prop_flat_map(element)) {
        let group = g.group();
        let subs = left_translation(&g);
        let fields = vector_fields::<Q>(group);
        for f in monomials(group.dimension(), 4) {
            let translated = f.compose(&subs);
            for x in &fields {
                prop_assert_eq!(x.apply(&translated), x.apply(&f).compose(&subs));
            }
        }
    }
}

#[test]
fn left_translation_polynomials_match_the_group_law() {
    let g = GroupElement::new(
        GroupId::Cartan,
        vec![rational(1, 2), rational(-3, 1), rational(2, 3), rational(1, 1), rational(-1, 5)],
    )
    .unwrap();
    let x = GroupElement::new(
        GroupId::Cartan,
        vec![rational(3, 1), rational(1, 7), rational(-2, 1), rational(5, 1), rational(1, 1)],
    )
    .unwrap();
    let direct = g.multiply(&x).unwrap();
    let via_polys: Vec<Q> = left_translation(&g).iter().map(|p| p.eval(x.coords())).collect();
    assert_eq!(direct.coords(), via_polys.as_slice());
}

/// Substituting dilated coordinates into `X_i` scales it by `r^{w_i}`:
/// each coefficient `c_j` of `∂_j` satisfies `c_j(D_r x) = r^{w_j − w_i} c_j(x)`.
#[test]
fn vector_fields_are_homogeneous() {
    for group in [GroupId::Engel, GroupId::Cartan] {
        let n = group.dimension();
        let w = group.dilation_weights().0;
        for r in [rational(2, 1), rational(3, 2), rational(5, 7)] {
            let dilated: Vec<Poly<Q>> =
                (0..n).map(|k| Poly::var(n, k).scale(&(0..w[k]).fold(rational(1, 1), |a, _| a * r.clone()))).collect();
            for (i, x) in vector_fields::<Q>(group).iter().enumerate() {
                for (alpha, c) in x.terms() {
                    let j = alpha.iter().position(|&a| a == 1).unwrap();
                    let power = w[j] as i32 - w[i] as i32;
                    let factor = if power >= 0 {
                        (0..power).fold(rational(1, 1), |a, _| a * r.clone())
                    } else {
                        (0..-power).fold(rational(1, 1), |a, _| a / r.clone())
                    };
                    assert_eq!(c.compose(&dilated), c.scale(&factor), "{group} X{} ∂{}", i + 1, j + 1);
                }
            }
        }
    }
}

#[test]
fn first_layer_generates_the_algebra() {
    for group in [GroupId::Engel, GroupId::Cartan] {
        let i = |k| lie_basis::<Q>(group, k).unwrap();
        let i3 = i(1).commutator(&i(2));
        assert_eq!(i3, i(3));
        assert_eq!(i(1).commutator(&i3), i(4));
        if group == GroupId::Cartan {
            assert_eq!(i(2).commutator(&i3), i(5));
        }
        // third layer is central
        for k in 1..=group.dimension() {
            assert!(i(4).commutator(&i(k)).is_zero());
        }
    }
}

#[test]
fn raw_brackets() {
    let x = |g, k| vector_field::<Q>(g, k).unwrap();
    assert_eq!(x(GroupId::Engel, 1).commutator(&x(GroupId::Engel, 2)), -&x(GroupId::Engel, 3));
    assert!(x(GroupId::Engel, 2).commutator(&x(GroupId::Engel, 3)).is_zero());
    assert_eq!(x(GroupId::Cartan, 2).commutator(&x(GroupId::Cartan, 3)), -&x(GroupId::Cartan, 5));
    assert_eq!(PolyDiffOp::<Q>::zero(4).terms().count(), 0);
}
