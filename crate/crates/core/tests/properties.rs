use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use twistkit::exprs::{parse_scalar, Chart, ScalarExpr};
use twistkit::fields::{exterior_derivative, schouten_half, triple_contraction, KForm, KVector};
use twistkit::twistcheck::{
    check, induced_bracket, structure_functions, twist_residual, Background, ManifoldSpec,
};

/// Polynomial with at most four terms, coefficients in [-9, 9], degree <= `deg`.
fn poly(dim: usize, deg: u32) -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec((-9i64..=9, prop::collection::vec(0..=deg, dim)), 0..=4).prop_map(
        move |terms| {
            terms
                .into_iter()
                .filter(|(_, e)| e.iter().sum::<u32>() <= deg)
                .map(|(c, e)| {
                    e.iter()
                        .enumerate()
                        .fold(ScalarExpr::from_int(c), |acc, (i, &k)| {
                            &acc * &ScalarExpr::var(i).pow(k)
                        })
                })
                .sum()
        },
    )
}

/// `p / (1 + q^2)`, which never has a real pole.
fn rational(dim: usize) -> impl Strategy<Value = ScalarExpr> {
    (poly(dim, 2), poly(dim, 1))
        .prop_map(|(p, q)| p.checked_div(&(&ScalarExpr::one() + &(&q * &q))).unwrap())
}

fn tensor<V>(
    degree: usize,
    dim: usize,
    deg: u32,
) -> impl Strategy<Value = twistkit::fields::Alternating<V>> {
    let tuples: Vec<Vec<usize>> = itertools::Itertools::combinations(0..dim, degree).collect();
    prop::collection::vec(poly(dim, deg), tuples.len()).prop_map(move |vals| {
        twistkit::fields::Alternating::from_entries(
            degree,
            dim,
            tuples.clone().into_iter().zip(vals),
        )
        .unwrap()
    })
}

fn point(dim: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), dim).prop_map(|v| {
        v.into_iter()
            .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect()
    })
}

/// `{f, {g, h}} + cyclic`
fn jacobiator_of(f: &ScalarExpr, g: &ScalarExpr, h: &ScalarExpr, pi: &KVector) -> ScalarExpr {
    let b = |a: &ScalarExpr, c: &ScalarExpr| induced_bracket(a, c, pi);
    &(&b(f, &b(g, h)) + &b(g, &b(h, f))) + &b(h, &b(f, g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in rational(3), b in rational(3), c in rational(3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.checked_div(&a).unwrap(), ScalarExpr::one());
        }
    }

    #[test]
    fn differentiation_is_a_derivation(a in rational(3), b in rational(3), k in 0usize..3) {
        let lhs = (&a * &b).differentiate(k);
        let rhs = &(&a.differentiate(k) * &b) + &(&a * &b.differentiate(k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in rational(3), b in rational(3), x in point(3)) {
        let (va, vb) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap());
        prop_assert_eq!((&a * &b).evaluate(&x).unwrap(), &va * &vb);
        prop_assert_eq!((&a + &b).evaluate(&x).unwrap(), &va + &vb);
    }

    #[test]
    fn canonical_form_survives_printing(a in rational(3)) {
        let chart = Chart::standard(3);
        let again = parse_scalar(&a.display_with(&chart).to_string(), &chart).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(again.display_with(&chart).to_string(), a.display_with(&chart).to_string());
    }

    #[test]
    fn d_squared_vanishes(w in (2usize..=5, 0usize..=3).prop_flat_map(|(n, k)| tensor::<twistkit::fields::Down>(k.min(n), n, 3))) {
        prop_assert!(exterior_derivative(&exterior_derivative(&w)).is_zero());
    }

    #[test]
    fn two_index_sign_coherence(b in tensor::<twistkit::fields::Up>(2, 4, 2), i in 0usize..4, j in 0usize..4) {
        prop_assert_eq!(b.get(&[j, i]), -b.get(&[i, j]));
    }

    #[test]
    fn schouten_symmetries(pi in tensor::<twistkit::fields::Up>(2, 4, 2)) {
        let j = schouten_half(&pi).unwrap();
        for t in j.index_tuples() {
            let (a, b, c) = (t[0], t[1], t[2]);
            prop_assert_eq!(j.get(&[a, b, c]), j.get(&[b, c, a]));
            prop_assert_eq!(j.get(&[a, b, c]), -j.get(&[b, a, c]));
        }
    }

    #[test]
    fn contraction_is_additive_in_h(
        pi in tensor::<twistkit::fields::Up>(2, 4, 1),
        h1 in tensor::<twistkit::fields::Down>(3, 4, 1),
        h2 in tensor::<twistkit::fields::Down>(3, 4, 1),
    ) {
        let lhs = triple_contraction(&h1.add(&h2).unwrap(), &pi).unwrap();
        let rhs = triple_contraction(&h1, &pi).unwrap().add(&triple_contraction(&h2, &pi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_vanishes_in_three_dimensions(
        pi in tensor::<twistkit::fields::Up>(2, 3, 2),
        h in tensor::<twistkit::fields::Down>(3, 3, 2),
    ) {
        prop_assert!(triple_contraction(&h, &pi).unwrap().is_zero());
    }

    #[test]
    fn three_dimensional_verdicts_collapse(
        pi in tensor::<twistkit::fields::Up>(2, 3, 2),
        h in tensor::<twistkit::fields::Down>(3, 3, 2),
    ) {
        let spec = ManifoldSpec::new(Chart::standard(3), pi, Background::ThreeForm(h)).unwrap();
        let r = check(&spec).unwrap();
        prop_assert_eq!(r.is_poisson, r.is_twisted_poisson);
    }

    #[test]
    fn zero_background_reduces_to_jacobi(pi in tensor::<twistkit::fields::Up>(2, 4, 2)) {
        prop_assert_eq!(twist_residual(&pi, &KForm::zero(3, 4)).unwrap(), schouten_half(&pi).unwrap());
    }

    #[test]
    fn jacobiator_identity(
        (n, pi, f, g, h) in (2usize..=4).prop_flat_map(|n| {
            (Just(n), tensor::<twistkit::fields::Up>(2, n, 2), poly(n, 2), poly(n, 2), poly(n, 2))
        })
    ) {
        let j = schouten_half(&pi).unwrap();
        let mut rhs = ScalarExpr::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = j.get(&[a, b, c]);
                    if !t.is_zero() {
                        rhs = &rhs + &(&(&t * &f.differentiate(a)) * &(&g.differentiate(b) * &h.differentiate(c)));
                    }
                }
            }
        }
        prop_assert_eq!(jacobiator_of(&f, &g, &h, &pi), rhs);
    }

    #[test]
    fn structure_functions_match_raw_components(
        pi in tensor::<twistkit::fields::Up>(2, 4, 1),
        omega in tensor::<twistkit::fields::Down>(2, 4, 2),
    ) {
        let spec = ManifoldSpec::new(Chart::standard(4), pi.clone(), Background::TwoForm(omega.clone())).unwrap();
        let c = check(&spec).unwrap().structure_functions;
        // (d omega)_{klm} straight from the components
        let dw = |k: usize, l: usize, m: usize| {
            &(&omega.get(&[l, m]).differentiate(k) + &omega.get(&[m, k]).differentiate(l))
                + &omega.get(&[k, l]).differentiate(m)
        };
        for ((i, j, k), v) in &c {
            let mut raw = pi.get(&[*i, *j]).differentiate(*k);
            let mut swapped = pi.get(&[*j, *i]).differentiate(*k);
            for l in 0..4 {
                for m in 0..4 {
                    let h = dw(*k, l, m);
                    raw = &raw + &(&(&pi.get(&[*i, l]) * &pi.get(&[*j, m])) * &h);
                    swapped = &swapped + &(&(&pi.get(&[*j, l]) * &pi.get(&[*i, m])) * &h);
                }
            }
            prop_assert_eq!(v, &-raw);
            prop_assert_eq!(v, &swapped);
        }
        let h = exterior_derivative(&omega);
        prop_assert_eq!(&structure_functions(&pi, &h).unwrap(), &c);
    }
}
