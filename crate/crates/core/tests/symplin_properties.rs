mod common;

use common::*;
use contactlab::symplin::{contraction_identity, lefschetz_matrix, lefschetz_summary, ConstForm, SymplecticSpace};
use contactlab::{DiffForm, ExpPoly, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn covector() -> impl Strategy<Value = (usize, Vec<Rational>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(rational(), 2 * n)))
}

#[test]
fn rank_is_full_for_small_n() {
    for n in 1..=5 {
        let m = lefschetz_matrix(n).unwrap();
        assert_eq!(m.rank(), 2 * n, "n = {n}");
        assert!(m.injective());
    }
}

#[test]
fn columns_have_disjoint_single_supports() {
    for n in 1..=5 {
        let m = lefschetz_matrix(n).unwrap();
        let factor: num_bigint::BigInt = (1..n).product::<usize>().into();
        let mut rows = Vec::new();
        for j in 0..2 * n {
            let support = m.column_support(j);
            assert_eq!(support.len(), 1, "n = {n}, column {j}");
            assert_eq!(support[0].1.abs(), factor);
            rows.push(support[0].0);
        }
        rows.sort_unstable();
        rows.dedup();
        assert_eq!(rows.len(), 2 * n, "columns are pairwise orthogonal");
        assert!(lefschetz_summary(n).unwrap().volume.holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_trivial((n, v) in covector()) {
        let image = lefschetz_matrix(n).unwrap().apply(&v);
        let zero_in = v.iter().all(Zero::is_zero);
        let zero_out = image.iter().all(Zero::is_zero);
        prop_assert_eq!(zero_in, zero_out);
    }

    #[test]
    fn matrix_agrees_with_chart_forms((n, v) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(rational(), 2 * n)))) {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).chain((0..n).map(|i| format!("q{i}"))).collect();
        let ch = contactlab::Chart::new(names).unwrap();
        let omega = (0..n).fold(DiffForm::zero(&ch, 2), |acc, i| acc + DiffForm::dx(&ch, i).wedge(&DiffForm::dx(&ch, n + i)).unwrap());
        let alpha = DiffForm::one_form(&ch, v.iter().map(|c| ExpPoly::constant(&ch, c.clone())).collect()).unwrap();
        let on_chart = alpha.wedge(&omega.wedge_pow(n - 1)).unwrap();
        let m = lefschetz_matrix(n).unwrap();
        for (t, c) in m.rows.iter().zip(m.apply(&v)) {
            prop_assert_eq!(on_chart.coefficient(t), ExpPoly::constant(&ch, c));
        }
        let sp = SymplecticSpace::new(n).unwrap();
        prop_assert_eq!(sp.lefschetz(&ConstForm::covector(2 * n, &v)).to_diff_form(&ch).unwrap(), on_chart);
    }

    #[test]
    fn contraction_identity_holds((n, v) in covector()) {
        prop_assert!(contraction_identity(n, &v).unwrap());
    }
}
