//! Differential forms and vector fields in a coordinate frame.
//!
//! A [`DiffForm`] of degree k is stored as a sparse map from strictly
//! increasing index tuples to nonzero coefficients. The exterior derivative
//! follows the non-halved convention, so for a 1-form
//! `dα(X, Y) = X α(Y) − Y α(X) − α([X, Y])`, and evaluation on vectors is the
//! determinant of pairings: `(dx∧dy)(∂x, ∂y) = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{same_chart, Chart, ExpPoly, ExprError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("forms or fields live on different charts")]
    ChartMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    ZeroDegree,
    #[error("form of degree {degree} applied to {given} vectors")]
    Arity { degree: usize, given: usize },
    #[error("vector field needs {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Sign of the permutation sorting `idx`, or None if an index repeats.
pub(crate) fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Merge two sorted tuples; sign is (-1)^(inversions between them).
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            inversions += a.len() - i;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, inversions % 2 == 1))
}

/// A vector field `Σ X^i ∂_i`.
#[derive(Debug, Clone)]
pub struct VecField<T> {
    chart: Arc<Chart>,
    comps: Vec<ExpPoly<T>>,
}

impl<T: Scalar> PartialEq for VecField<T> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.comps == other.comps
    }
}

impl<T: Scalar> VecField<T> {
    pub fn new(chart: &Arc<Chart>, comps: Vec<ExpPoly<T>>) -> Result<Self, FormError> {
        if comps.len() != chart.dim() {
            return Err(FormError::ComponentCount { expected: chart.dim(), got: comps.len() });
        }
        if comps.iter().any(|c| !same_chart(c.chart(), chart)) {
            return Err(FormError::ChartMismatch);
        }
        Ok(VecField { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VecField { chart: chart.clone(), comps: vec![ExpPoly::zero(chart); chart.dim()] }
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[i] = ExpPoly::one(chart);
        v
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[ExpPoly<T>] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &ExpPoly<T> {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ExpPoly::is_zero)
    }

    pub fn scale(&self, f: &ExpPoly<T>) -> Self {
        VecField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * f).collect() }
    }

    /// Directional derivative `X(f) = Σ X^i ∂_i f`.
    pub fn derive(&self, f: &ExpPoly<T>) -> ExpPoly<T> {
        let mut acc = ExpPoly::zero(&self.chart);
        for (i, x) in self.comps.iter().enumerate() {
            if !x.is_zero() {
                acc = acc + x * &f.partial(i);
            }
        }
        acc
    }

    /// `[X, Y]^i = Σ_j X^j ∂_j Y^i − Y^j ∂_j X^i`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self, FormError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(FormError::ChartMismatch);
        }
        let comps = (0..self.chart.dim())
            .map(|i| self.derive(&other.comps[i]) - other.derive(&self.comps[i]))
            .collect();
        Ok(VecField { chart: self.chart.clone(), comps })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(FormError::ChartMismatch);
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        Ok(VecField { chart: self.chart.clone(), comps })
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, FormError> {
        Ok(self.comps.iter().map(|c| c.eval(point)).collect::<Result<_, _>>()?)
    }
}

impl<T: Scalar> Add for &VecField<T> {
    type Output = VecField<T>;
    fn add(self, rhs: Self) -> VecField<T> {
        self.checked_add(rhs).expect("vector field chart mismatch")
    }
}

impl<T: Scalar> Sub for &VecField<T> {
    type Output = VecField<T>;
    fn sub(self, rhs: Self) -> VecField<T> {
        self.checked_add(&-rhs).expect("vector field chart mismatch")
    }
}

impl<T: Scalar> Neg for &VecField<T> {
    type Output = VecField<T>;
    fn neg(self) -> VecField<T> {
        VecField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| -c).collect() }
    }
}

/// A differential k-form with exponential-polynomial coefficients.
#[derive(Debug, Clone)]
pub struct DiffForm<T> {
    chart: Arc<Chart>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, ExpPoly<T>>,
}

impl<T: Scalar> PartialEq for DiffForm<T> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.degree == other.degree && self.terms == other.terms
    }
}

impl<T: Scalar> DiffForm<T> {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        DiffForm { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    /// Wraps a function as a 0-form.
    pub fn from_scalar(f: ExpPoly<T>) -> Self {
        let mut form = Self::zero(f.chart(), 0);
        if !f.is_zero() {
            form.terms.insert(Vec::new(), f);
        }
        form
    }

    /// `coeff · dx^{i1}∧…∧dx^{ik}` for indices in any order.
    pub fn from_term(chart: &Arc<Chart>, indices: &[usize], coeff: ExpPoly<T>) -> Result<Self, FormError> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= chart.dim()) {
            return Err(FormError::IndexOutOfRange(bad));
        }
        if !same_chart(coeff.chart(), chart) {
            return Err(FormError::ChartMismatch);
        }
        let mut form = Self::zero(chart, indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let c = if sign < 0 { -coeff } else { coeff };
            form.insert(sorted, c);
        }
        Ok(form)
    }

    /// The coordinate differential `dx^i`.
    pub fn dx(chart: &Arc<Chart>, i: usize) -> Self {
        Self::from_term(chart, &[i], ExpPoly::one(chart)).expect("coordinate index in range")
    }

    /// The 1-form `Σ c_i dx^i`.
    pub fn one_form(chart: &Arc<Chart>, comps: Vec<ExpPoly<T>>) -> Result<Self, FormError> {
        if comps.len() != chart.dim() {
            return Err(FormError::ComponentCount { expected: chart.dim(), got: comps.len() });
        }
        let mut form = Self::zero(chart, 1);
        for (i, c) in comps.into_iter().enumerate() {
            if !same_chart(c.chart(), chart) {
                return Err(FormError::ChartMismatch);
            }
            form.insert(vec![i], c);
        }
        Ok(form)
    }

    /// Unwraps a 0-form into its function.
    pub fn to_scalar(&self) -> Option<ExpPoly<T>> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ExpPoly<T>)> {
        self.terms.iter()
    }

    /// Coefficient on a strictly increasing index tuple.
    pub fn coefficient(&self, indices: &[usize]) -> ExpPoly<T> {
        self.terms.get(indices).cloned().unwrap_or_else(|| ExpPoly::zero(&self.chart))
    }

    /// Components of a 1-form as a dense vector.
    pub fn components(&self) -> Vec<ExpPoly<T>> {
        (0..self.chart.dim()).map(|i| self.coefficient(&[i])).collect()
    }

    fn insert(&mut self, idx: Vec<usize>, c: ExpPoly<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(existing) => {
                let sum = existing + c;
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), FormError> {
        if !same_chart(&self.chart, &other.chart) {
            Err(FormError::ChartMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, f: &ExpPoly<T>) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.terms {
            out.insert(idx.clone(), c * f);
        }
        out
    }

    pub fn scale_const(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, v) in &self.terms {
            out.insert(idx.clone(), v.scale(c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        self.check(other)?;
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, negative)) = merge_sign(ia, ib) {
                    let c = ca * cb;
                    out.insert(idx, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `k`-fold wedge power; `a^0` is the constant 0-form 1.
    pub fn wedge_pow(&self, k: usize) -> Self {
        let mut acc = Self::from_scalar(ExpPoly::one(&self.chart));
        for _ in 0..k {
            acc = acc.wedge(self).expect("same chart");
        }
        acc
    }

    /// Exterior derivative `d(c dx^I) = Σ_i ∂_i c dx^i ∧ dx^I`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(&self.chart, self.degree + 1);
        for (idx, c) in &self.terms {
            for i in 0..self.chart.dim() {
                if idx.contains(&i) {
                    continue;
                }
                let dc = c.partial(i);
                if dc.is_zero() {
                    continue;
                }
                let pos = idx.partition_point(|&j| j < i);
                let mut new_idx = idx.clone();
                new_idx.insert(pos, i);
                out.insert(new_idx, if pos % 2 == 1 { -dc } else { dc });
            }
        }
        out
    }

    /// Interior product `i_X`.
    pub fn interior(&self, x: &VecField<T>) -> Result<Self, FormError> {
        if !same_chart(&self.chart, x.chart()) {
            return Err(FormError::ChartMismatch);
        }
        if self.degree == 0 {
            return Err(FormError::ZeroDegree);
        }
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (idx, c) in &self.terms {
            for (p, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(p);
                let v = c * xi;
                out.insert(rest, if p % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Evaluates the form on `k` vector fields.
    pub fn apply(&self, vectors: &[VecField<T>]) -> Result<ExpPoly<T>, FormError> {
        if vectors.len() != self.degree {
            return Err(FormError::Arity { degree: self.degree, given: vectors.len() });
        }
        if vectors.iter().any(|v| !same_chart(v.chart(), &self.chart)) {
            return Err(FormError::ChartMismatch);
        }
        let mut acc = ExpPoly::zero(&self.chart);
        for (idx, c) in &self.terms {
            // rows: form indices, columns: vectors
            let rows: Vec<Vec<ExpPoly<T>>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v.component(i).clone()).collect())
                .collect();
            acc = acc + c * &determinant(&rows, &self.chart);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[f64]) -> Result<BTreeMap<Vec<usize>, f64>, FormError> {
        let mut out = BTreeMap::new();
        for (idx, c) in &self.terms {
            out.insert(idx.clone(), c.eval(point)?);
        }
        Ok(out)
    }
}

pub(crate) fn determinant<T: Scalar>(m: &[Vec<ExpPoly<T>>], chart: &Arc<Chart>) -> ExpPoly<T> {
    match m.len() {
        0 => ExpPoly::one(chart),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ExpPoly::zero(chart);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<ExpPoly<T>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(&minor, chart);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

impl<T: Scalar> Add for &DiffForm<T> {
    type Output = DiffForm<T>;
    fn add(self, rhs: Self) -> DiffForm<T> {
        self.checked_add(rhs).expect("form chart or degree mismatch")
    }
}

impl<T: Scalar> Add for DiffForm<T> {
    type Output = DiffForm<T>;
    fn add(self, rhs: Self) -> DiffForm<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for &DiffForm<T> {
    type Output = DiffForm<T>;
    fn sub(self, rhs: Self) -> DiffForm<T> {
        self.checked_add(&-rhs).expect("form chart or degree mismatch")
    }
}

impl<T: Scalar> Sub for DiffForm<T> {
    type Output = DiffForm<T>;
    fn sub(self, rhs: Self) -> DiffForm<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &DiffForm<T> {
    type Output = DiffForm<T>;
    fn neg(self) -> DiffForm<T> {
        DiffForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl<T: Scalar> Neg for DiffForm<T> {
    type Output = DiffForm<T>;
    fn neg(self) -> DiffForm<T> {
        -&self
    }
}

/// Sorted sum of `coeff dx^dy` terms, e.g. `-exp(z) dx^dy`.
impl<T: Scalar> fmt::Display for DiffForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.chart.coords();
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
            let basis = basis.join("^");
            let (neg, body) = if c.num_terms() == 1 {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({c})"))
            };
            let sep = match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            f.write_str(sep)?;
            if basis.is_empty() {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&basis)?;
            } else {
                write!(f, "{body} {basis}")?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for VecField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.coords();
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.num_terms() == 1 {
                    format!("{c}*d/d{}", names[i])
                } else {
                    format!("({c})*d/d{}", names[i])
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
