use std::collections::HashMap;

use moufang::gf3::{Coeff, Var, BLOCK};
use moufang::loop_core::{
    check_diassociativity_sampled, check_loop_axioms_sampled, check_moufang_sampled, inverse, subloop_closure,
    FiniteLoop,
};
use moufang::poly_loop::{PolyLoop, SymbolicLoop, Term, Vec11, DIM, ORDER};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vec11() -> impl Strategy<Value = Vec11> {
    (0..ORDER).prop_map(Vec11::from_index)
}

fn point(vs: &[Vec11]) -> HashMap<Var, Coeff> {
    let mut p = HashMap::new();
    for (b, v) in vs.iter().enumerate() {
        for k in 0..DIM {
            p.insert(b as Var * BLOCK + k as Var, v.coord(k));
        }
    }
    p
}

#[test]
fn loop_axioms_on_sampled_pairs() {
    let l = PolyLoop::new();
    let v = check_loop_axioms_sampled(&l, 100_000, 1);
    assert!(v.passed, "{v:?}");
}

#[test]
fn moufang_and_diassociativity_sampled() {
    let l = PolyLoop::new();
    assert!(check_moufang_sampled(&l, 100_000, 2).passed);
    assert!(check_diassociativity_sampled(&l, 100_000, 3).passed);
}

#[test]
fn graded_division_matches_brute_force() {
    let l = PolyLoop::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..4 {
        let x = Vec11::from_index(rng.gen_range(0..ORDER));
        let w = Vec11::from_index(rng.gen_range(0..ORDER));
        let left: Vec<Vec11> = l.elements().filter(|u| l.mul(&x, u) == w).collect();
        assert_eq!(left, vec![l.left_div(&x, &w)]);
        let right: Vec<Vec11> = l.elements().filter(|u| l.mul(u, &x) == w).collect();
        assert_eq!(right, vec![l.right_div(&w, &x)]);
    }
}

#[test]
fn symbolic_and_concrete_products_agree() {
    let l = PolyLoop::new();
    let sym = l.symbolic();
    let (lhs, rhs) = (
        Term::mul(Term::mul(Term::X, Term::Y), Term::mul(Term::Z, Term::X)),
        Term::ldiv(Term::X, Term::mul(Term::Y, Term::inv(Term::Z))),
    );
    let (pl, pr) = (sym.eval(&lhs).unwrap(), sym.eval(&rhs).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let [x, y, z] = [0; 3].map(|_| Vec11::from_index(rng.gen_range(0..ORDER)));
        let p = point(&[x, y, z]);
        let eval = |polys: &[moufang::gf3::Polynomial]| {
            let coords: Vec<i64> = polys.iter().map(|f| f.evaluate(&p).unwrap().value() as i64).collect();
            Vec11::new(coords.try_into().unwrap())
        };
        assert_eq!(eval(&pl), l.mul(&l.mul(&x, &y), &l.mul(&z, &x)));
        assert_eq!(eval(&pr), l.left_div(&x, &l.mul(&y, &l.inv(&z))));
    }
}

#[test]
fn variables_are_generic_points() {
    let x = SymbolicLoop::variable(0);
    assert_eq!(x.len(), DIM);
    let v = Vec11::new([1, 2, 0, 1, 0, 0, 2, 0, 0, 1, 2]);
    let p = point(&[v]);
    let coords: Vec<i64> = x.iter().map(|f| f.evaluate(&p).unwrap().value() as i64).collect();
    assert_eq!(Vec11::new(coords.try_into().unwrap()), v);
}

#[test]
fn span_of_n_closes_to_81_elements() {
    let l = PolyLoop::new();
    let n = subloop_closure(&l, &[5, 6, 7, 11].map(Vec11::e));
    assert_eq!(n.len(), 81);
    assert!(n.same_members(&l.span("N", &[5, 6, 7, 11])));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn text_and_index_roundtrip(x in vec11()) {
        prop_assert_eq!(x.to_string().parse::<Vec11>().unwrap(), x);
        prop_assert_eq!(Vec11::from_index(x.index()), x);
        let l = PolyLoop::new();
        prop_assert_eq!(l.parse_element(&l.format_element(&x)), Some(x));
    }

    #[test]
    fn identity_and_inverse(x in vec11()) {
        let l = PolyLoop::new();
        let zero = Vec11::ZERO;
        prop_assert_eq!(l.mul(&x, &zero), x);
        prop_assert_eq!(l.mul(&zero, &x), x);
        let xi = l.inv(&x);
        prop_assert_eq!(l.mul(&x, &xi), zero);
        prop_assert_eq!(l.mul(&xi, &x), zero);
        prop_assert_eq!(xi, inverse(&l, &x));
    }

    #[test]
    fn inverse_is_an_anti_automorphism(x in vec11(), y in vec11()) {
        let l = PolyLoop::new();
        prop_assert_eq!(l.inv(&l.mul(&x, &y)), l.mul(&l.inv(&y), &l.inv(&x)));
    }

    #[test]
    fn divisions_invert_multiplication(x in vec11(), y in vec11()) {
        let l = PolyLoop::new();
        let w = l.mul(&x, &y);
        prop_assert_eq!(l.left_div(&x, &w), y);
        prop_assert_eq!(l.right_div(&w, &y), x);
    }

    #[test]
    fn cubes_vanish(x in vec11()) {
        let l = PolyLoop::new();
        prop_assert_eq!(l.mul(&l.mul(&x, &x), &x), Vec11::ZERO);
    }
}
