use num_bigint::BigInt;
use proptest::prelude::*;

use voaplus_core::algebra::AlgebraDump;
use voaplus_core::autgroup::{aut_group, default_kind, distinguished_set, is_automorphism};
use voaplus_core::rational::{format_q, parse_q};
use voaplus_core::scalar::{q, qi};
use voaplus_core::spectra::{ad_is_form_symmetric, ad_spectrum};
use voaplus_core::verify::fixture_algebra;
use voaplus_core::{Algebra, Quadratic, QuadraticAlgebra, Q};

fn small_q() -> impl Strategy<Value = Q> {
    (-8i64..=8, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn element(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(small_q(), dim)
}

fn gram() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop_oneof![
        Just([[4, 0], [0, 4]]),
        Just([[4, 1], [1, 4]]),
        Just([[4, -1], [-1, 4]]),
        Just([[4, 2], [2, 4]]),
        Just([[4, 0], [0, 8]]),
        Just([[6, 1], [1, 6]]),
        Just([[4, 1], [1, 6]]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rationals_round_trip_through_text(x in small_q()) {
        let s = format_q(&x);
        prop_assert!(s.contains('/'));
        prop_assert_eq!(parse_q(&s).unwrap(), x);
    }

    #[test]
    fn quadratic_field_operations(d in prop_oneof![Just(2i64), Just(3), Just(5), Just(12)], (a, b, c, e) in (small_q(), small_q(), small_q(), small_q())) {
        let x = Quadratic::new(a, b, &BigInt::from(d));
        let y = Quadratic::new(c, e, &BigInt::from(d));
        prop_assert_eq!((x.clone() + y.clone()) * x.clone(), x.clone() * x.clone() + y.clone() * x.clone());
        prop_assert_eq!(x.norm(), (x.clone() * x.conj()).a);
        if x != Quadratic::rational(qi(0)) {
            prop_assert_eq!((y.clone() / x.clone()) * x.clone(), y);
        }
        let sq = x.clone() * x.clone();
        let r = sq.sqrt_in(&x.d).unwrap();
        prop_assert!(r == x || r == -x);
    }

    #[test]
    fn ad_is_form_symmetric_for_random_elements(g in gram(), seed in element(6)) {
        let alg = fixture_algebra(g);
        let w = &seed[..alg.dim()];
        prop_assert!(ad_is_form_symmetric(&alg, w));
        let s = ad_spectrum(&alg, w);
        let deg: usize = s.rational_eigenvalues.iter().map(|e| e.algebraic).sum::<usize>()
            + s.irrational_factors.iter().map(|(f, m)| f.degree().unwrap() * m).sum::<usize>();
        prop_assert_eq!(deg, alg.dim());
    }

    #[test]
    fn conjugation_is_multiplicative_without_sum_products(
        g in prop_oneof![Just([[4, 0], [0, 4]]), Just([[4, 1], [1, 4]]), Just([[4, -1], [-1, 4]]), Just([[4, 0], [0, 8]])],
        (x, y) in (element(6), element(6)),
    ) {
        let alg = fixture_algebra(g);
        let n = alg.dim();
        let c = |v: &[Q]| alg.conjugate(&alg.element(v.to_vec()).unwrap()).coords;
        prop_assert_eq!(c(&alg.mul(&x[..n], &y[..n])), alg.mul(&c(&x[..n]), &c(&y[..n])));
    }

    #[test]
    fn rational_and_quadratic_products_agree(g in gram(), (x, y) in (element(6), element(6))) {
        let alg: Algebra = fixture_algebra(g);
        let qalg: QuadraticAlgebra = alg.map_scalars(|v| Quadratic::rational(v.clone()));
        let n = alg.dim();
        let lift = |v: &[Q]| v.iter().map(|c| Quadratic::rational(c.clone())).collect::<Vec<_>>();
        prop_assert_eq!(lift(&alg.mul(&x[..n], &y[..n])), qalg.mul(&lift(&x[..n]), &lift(&y[..n])));
        prop_assert_eq!(Quadratic::rational(alg.form(&x[..n], &y[..n])), qalg.form(&lift(&x[..n]), &lift(&y[..n])));
    }
}

#[test]
fn dump_round_trip_preserves_structure_constants() {
    for g in [[[4, 0], [0, 4]], [[4, 1], [1, 4]], [[4, -2], [-2, 4]], [[4, 0], [0, 8]], [[6, 1], [1, 6]]] {
        let alg = fixture_algebra(g);
        let text = serde_json::to_string(&alg.dump()).unwrap();
        let back = Algebra::from_dump(&serde_json::from_str::<AlgebraDump>(&text).unwrap()).unwrap();
        assert_eq!(back.structure_constants(), alg.structure_constants());
        assert_eq!(back.form_matrix(), alg.form_matrix());
        assert_eq!(back.identity_element(), alg.identity_element());
    }
}

#[test]
fn group_elements_are_automorphisms_fixing_the_identity() {
    for g in [[[4, 0], [0, 4]], [[4, 2], [2, 4]], [[4, 0], [0, 8]]] {
        let alg = fixture_algebra(g);
        let Ok(ds) = distinguished_set(&alg, default_kind(&alg)) else {
            continue;
        };
        let res = aut_group(&alg, &ds, true).unwrap();
        assert!(res.closed());
        let id = alg.identity_element().coords;
        for m in &res.elements {
            assert!(is_automorphism(&alg, m, true));
            assert_eq!(m.mul_vec(&id), id);
        }
    }
}
