mod common;

use std::sync::Arc;

use common::*;
use contactlab::{Chart, DiffForm, VecField};
use proptest::prelude::*;

fn four() -> Arc<Chart> {
    chart(&["x", "y", "z", "w"])
}

fn bracket(a: &VecField<contactlab::Rational>, b: &VecField<contactlab::Rational>) -> VecField<contactlab::Rational> {
    a.lie_bracket(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn d_squared_on_functions(f in expr(four())) {
        prop_assert!(DiffForm::from_scalar(f).d().d().is_zero());
    }

    #[test]
    fn d_squared_on_one_forms(a in form(four(), 1)) {
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn d_squared_on_two_forms(a in form(four(), 2)) {
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn leibniz(a in form(four(), 1), b in form(four(), 2)) {
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = &a.d().wedge(&b).unwrap() - &a.wedge(&b.d()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_commutativity(
        (p, q, a, b) in (1usize..3, 1usize..3)
            .prop_flat_map(|(p, q)| (Just(p), Just(q), form(four(), p), form(four(), q)))
    ) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale_const(&sign(p * q)));
    }

    #[test]
    fn wedge_is_associative(a in form(four(), 1), b in form(four(), 1), c in form(four(), 2)) {
        let lhs = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let rhs = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn interior_is_an_antiderivation(x in field(four()), a in form(four(), 1), b in form(four(), 2)) {
        let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
        let rhs = &a.interior(&x).unwrap().wedge(&b).unwrap() - &a.wedge(&b.interior(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn interior_squared_vanishes(x in field(four()), a in form(four(), 3)) {
        prop_assert!(a.interior(&x).unwrap().interior(&x).unwrap().is_zero());
    }

    #[test]
    fn jacobi(x in field(four()), y in field(four()), z in field(four())) {
        let sum = &(&bracket(&x, &bracket(&y, &z)) + &bracket(&y, &bracket(&z, &x))) + &bracket(&z, &bracket(&x, &y));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn exterior_derivative_on_vector_pairs(a in form(four(), 1), x in field(four()), y in field(four())) {
        let lhs = a.d().apply(&[x.clone(), y.clone()]).unwrap();
        let ay = a.apply(&[y.clone()]).unwrap();
        let ax = a.apply(&[x.clone()]).unwrap();
        let rhs = &(&x.derive(&ay) - &y.derive(&ax)) - &a.apply(&[bracket(&x, &y)]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_matches_finite_differences(a in form(four(), 1), points in prop::collection::vec(point(4), 10)) {
        let da = a.d();
        for p in &points {
            let values = da.eval(p).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let aj = a.coefficient(&[j]);
                    let ai = a.coefficient(&[i]);
                    let num = fd(|q| aj.eval(q).unwrap(), p, i) - fd(|q| ai.eval(q).unwrap(), p, j);
                    let sym = values.get(&vec![i, j]).copied().unwrap_or(0.0);
                    prop_assert!(close(sym, num), "d a at {:?}, ({}, {}): {} vs {}", p, i, j, sym, num);
                }
            }
        }
    }

    #[test]
    fn d_of_function_matches_finite_differences(f in expr(four()), points in prop::collection::vec(point(4), 10)) {
        let df = DiffForm::from_scalar(f.clone()).d();
        for p in &points {
            let values = df.eval(p).unwrap();
            for i in 0..4 {
                let sym = values.get(&vec![i]).copied().unwrap_or(0.0);
                let num = fd(|q| f.eval(q).unwrap(), p, i);
                prop_assert!(close(sym, num), "{} vs {}", sym, num);
            }
        }
    }
}

#[test]
fn float_forms() {
    let ch = chart(&["x", "y", "z"]);
    let f: contactlab::ExpPoly<f64> = contactlab::parse("x*y*exp(z) + 1/4*y^2", &ch).unwrap();
    let df = DiffForm::from_scalar(f).d();
    assert!(df.d().is_zero());
    let eta = DiffForm::<f64>::dx(&ch, 2).scale(&contactlab::parse("exp(x)", &ch).unwrap());
    assert_eq!(eta.d(), DiffForm::from_term(&ch, &[0, 2], contactlab::parse("exp(x)", &ch).unwrap()).unwrap());
}
