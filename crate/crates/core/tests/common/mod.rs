#![allow(dead_code)]

use std::sync::Arc;

use contactlab::{Chart, DiffForm, ExpPoly, Rational, Scalar, VecField};
use proptest::prelude::*;

pub fn chart(names: &[&str]) -> Arc<Chart> {
    Chart::new(names.iter().copied()).unwrap()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

/// `c · x^a · exp(Σ k_i x_i)` with small degrees and exponents.
pub fn term(chart: Arc<Chart>) -> impl Strategy<Value = ExpPoly<Rational>> {
    let dim = chart.dim();
    (rational(), prop::collection::vec(0u32..=2, dim), prop::collection::vec(-1i64..=1, dim)).prop_map(
        move |(c, exps, ks)| {
            let mut e = ExpPoly::constant(&chart, c);
            let mut lin = ExpPoly::zero(&chart);
            for i in 0..dim {
                e = e * ExpPoly::var(&chart, i).pow(exps[i]);
                lin = lin + ExpPoly::var(&chart, i).scale(&Rational::from_i64(ks[i]));
            }
            e * lin.exp().unwrap()
        },
    )
}

pub fn expr(chart: Arc<Chart>) -> impl Strategy<Value = ExpPoly<Rational>> {
    let zero = ExpPoly::zero(&chart);
    prop::collection::vec(term(chart), 0..4).prop_map(move |ts| ts.into_iter().fold(zero.clone(), |a, b| a + b))
}

/// Polynomial (exp-free) expression of degree at most 2.
pub fn poly(chart: Arc<Chart>) -> impl Strategy<Value = ExpPoly<Rational>> {
    let dim = chart.dim();
    let zero = ExpPoly::zero(&chart);
    prop::collection::vec((rational(), prop::collection::vec(0u32..=1, dim)), 0..4).prop_map(move |ts| {
        ts.into_iter().fold(zero.clone(), |acc, (c, exps)| {
            let mut m = ExpPoly::constant(&chart, c);
            for (i, &k) in exps.iter().enumerate() {
                m = m * ExpPoly::var(&chart, i).pow(k);
            }
            acc + m
        })
    })
}

pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            go(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, dim, k, &mut Vec::new(), &mut out);
    out
}

pub fn form(chart: Arc<Chart>, k: usize) -> impl Strategy<Value = DiffForm<Rational>> {
    let tuples = increasing_tuples(chart.dim(), k);
    let n = tuples.len();
    prop::collection::vec(prop::option::weighted(0.6, term(chart.clone())), n).prop_map(move |coeffs| {
        let mut out = DiffForm::zero(&chart, k);
        for (t, c) in tuples.iter().zip(coeffs) {
            if let Some(c) = c {
                out = out + DiffForm::from_term(&chart, t, c).unwrap();
            }
        }
        out
    })
}

pub fn field(chart: Arc<Chart>) -> impl Strategy<Value = VecField<Rational>> {
    let dim = chart.dim();
    prop::collection::vec(prop::option::weighted(0.6, term(chart.clone())), dim).prop_map(move |cs| {
        let comps = cs.into_iter().map(|c| c.unwrap_or_else(|| ExpPoly::zero(&chart))).collect();
        VecField::new(&chart, comps).unwrap()
    })
}

pub fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.75f64..0.75, dim)
}

pub fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::from_i64(1)
    } else {
        Rational::from_i64(-1)
    }
}

/// Central finite difference of `f` in direction `i`.
pub fn fd<F: Fn(&[f64]) -> f64>(f: F, p: &[f64], i: usize) -> f64 {
    let h = 1e-5;
    let mut a = p.to_vec();
    let mut b = p.to_vec();
    a[i] += h;
    b[i] -= h;
    (f(&a) - f(&b)) / (2.0 * h)
}

pub fn close(sym: f64, num: f64) -> bool {
    (sym - num).abs() <= 1e-5 * sym.abs().max(1.0)
}
