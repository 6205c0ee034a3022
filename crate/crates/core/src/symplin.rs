//! Constant-coefficient exterior algebra on a symplectic vector space.
//!
//! The basis is `e1..en, f1..fn` (indices `0..n` and `n..2n`) with
//! `Ω = Σ e_i*∧f_i*`. The map `L(α) = α∧Ω^{n−1}` on covectors is injective;
//! this module builds its integer matrix and checks the explicit identities
//! behind that fact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{Chart, ExpPoly};
use crate::forms::{sort_with_sign, DiffForm, FormError};
use crate::scalar::{Rational, Scalar};

pub const MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplinError {
    #[error("n = {0} is outside 1..={MAX_N}")]
    OutOfRange(usize),
    #[error("vector has {got} components, expected {expected}")]
    Length { expected: usize, got: usize },
}

/// A constant k-form on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstForm<T> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> ConstForm<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        ConstForm { dim, degree, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        let mut f = Self::zero(dim, 0);
        f.terms.insert(Vec::new(), T::one());
        f
    }

    /// `c · dx^{i1}∧…∧dx^{ik}` with indices in any order.
    pub fn from_term(dim: usize, indices: &[usize], c: T) -> Self {
        assert!(indices.iter().all(|&i| i < dim), "index out of range");
        let mut f = Self::zero(dim, indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            f.insert(sorted, if sign < 0 { -c } else { c });
        }
        f
    }

    pub fn covector(dim: usize, comps: &[T]) -> Self {
        let mut f = Self::zero(dim, 1);
        for (i, c) in comps.iter().enumerate() {
            f.insert(vec![i], c.clone());
        }
        f
    }

    fn insert(&mut self, idx: Vec<usize>, c: T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, indices: &[usize]) -> T {
        self.terms.get(indices).cloned().unwrap_or_else(T::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch");
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.insert(i.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (i, v) in &self.terms {
            out.insert(i.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "form dimension mismatch");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                if let Some((sorted, sign)) = sort_with_sign(&idx) {
                    let c = ca.clone() * cb.clone();
                    out.insert(sorted, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn wedge_pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.dim), |acc, _| acc.wedge(self))
    }

    /// `i_X` for a constant vector X.
    pub fn interior(&self, x: &[T]) -> Self {
        assert_eq!(x.len(), self.dim, "vector length mismatch");
        assert!(self.degree > 0, "interior product of a 0-form");
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (p, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(p);
                let v = c.clone() * x[i].clone();
                out.insert(rest, if p % 2 == 1 { -v } else { v });
            }
        }
        out
    }

    /// The same form on a chart of matching dimension, with constant coefficients.
    pub fn to_diff_form(&self, chart: &Arc<Chart>) -> Result<DiffForm<T>, FormError> {
        if chart.dim() != self.dim {
            return Err(FormError::ComponentCount { expected: self.dim, got: chart.dim() });
        }
        let mut out = DiffForm::zero(chart, self.degree);
        for (idx, c) in &self.terms {
            out = out + DiffForm::from_term(chart, idx, ExpPoly::constant(chart, c.clone()))?;
        }
        Ok(out)
    }
}

/// `(V, Ω)` of dimension 2n in the basis `e1..en, f1..fn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticSpace {
    n: usize,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Result<Self, SymplinError> {
        if n == 0 || n > MAX_N {
            return Err(SymplinError::OutOfRange(n));
        }
        Ok(SymplecticSpace { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn e(&self, i: usize) -> usize {
        i
    }

    pub fn f(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn label(&self, idx: usize) -> String {
        if idx < self.n {
            format!("e{}", idx + 1)
        } else {
            format!("f{}", idx - self.n + 1)
        }
    }

    pub fn omega<T: Scalar>(&self) -> ConstForm<T> {
        (0..self.n).fold(ConstForm::zero(self.dim(), 2), |acc, i| {
            acc.add(&ConstForm::from_term(self.dim(), &[self.e(i), self.f(i)], T::one()))
        })
    }

    /// Factors of `ν = e1*∧f1*∧…∧en*∧fn*` in order.
    pub fn volume_factors(&self) -> Vec<usize> {
        (0..self.n).flat_map(|i| [self.e(i), self.f(i)]).collect()
    }

    /// ν with one factor deleted, remaining factors kept in ν's order.
    pub fn volume_omitting<T: Scalar>(&self, idx: usize) -> ConstForm<T> {
        let rest: Vec<usize> = self.volume_factors().into_iter().filter(|&j| j != idx).collect();
        ConstForm::from_term(self.dim(), &rest, T::one())
    }

    /// `L(α) = α∧Ω^{n−1}`.
    pub fn lefschetz<T: Scalar>(&self, alpha: &ConstForm<T>) -> ConstForm<T> {
        alpha.wedge(&self.omega::<T>().wedge_pow(self.n - 1))
    }

    fn check_len(&self, len: usize) -> Result<(), SymplinError> {
        if len != self.dim() {
            return Err(SymplinError::Length { expected: self.dim(), got: len });
        }
        Ok(())
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Strictly increasing k-subsets of `0..m`, lexicographic.
fn increasing_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Exact rank of an integer matrix by fraction-free row reduction over ℚ.
pub fn exact_rank(m: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / pivot.clone();
            for c in col..cols {
                let v = rows[rank][c].clone() * factor.clone();
                rows[r][c] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix of L: rows are increasing `(2n−1)`-tuples, columns the covectors
/// `e1*..en*, f1*..fn*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzMatrix {
    pub space: SymplecticSpace,
    pub rows: Vec<Vec<usize>>,
    pub entries: Vec<Vec<BigInt>>,
}

impl LefschetzMatrix {
    pub fn rank(&self) -> usize {
        exact_rank(&self.entries)
    }

    pub fn injective(&self) -> bool {
        self.rank() == self.space.dim()
    }

    /// Nonzero entries of column j as (row, value).
    pub fn column_support(&self, j: usize) -> Vec<(usize, BigInt)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, r)| !r[j].is_zero())
            .map(|(i, r)| (i, r[j].clone()))
            .collect()
    }

    /// Applies the matrix to a covector given in the column basis.
    pub fn apply(&self, alpha: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .zip(alpha)
                    .fold(Rational::zero(), |acc, (m, a)| acc + Rational::from_integer(m.clone()) * a.clone())
            })
            .collect()
    }
}

impl fmt::Display for LefschetzMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = self.space;
        let header: Vec<String> = (0..sp.dim()).map(|j| format!("{}*", sp.label(j))).collect();
        writeln!(f, "{:>width$}  {}", "", header.join(" "), width = 2 * sp.dim() + 1)?;
        for (tuple, row) in self.rows.iter().zip(&self.entries) {
            let name: String = tuple.iter().map(|&i| sp.label(i)).collect::<Vec<_>>().join("");
            let vals: Vec<String> = row.iter().zip(&header).map(|(v, h)| format!("{:>w$}", v, w = h.len())).collect();
            writeln!(f, "{:>width$}  {}", name, vals.join(" "), width = 2 * sp.dim() + 1)?;
        }
        Ok(())
    }
}

pub fn lefschetz_matrix(n: usize) -> Result<LefschetzMatrix, SymplinError> {
    let sp = SymplecticSpace::new(n)?;
    let dim = sp.dim();
    let rows = increasing_tuples(dim, dim - 1);
    let power = sp.omega::<Rational>().wedge_pow(n - 1);
    let mut entries = vec![vec![BigInt::zero(); dim]; rows.len()];
    for j in 0..dim {
        let image = ConstForm::from_term(dim, &[j], Rational::one()).wedge(&power);
        for (r, tuple) in rows.iter().enumerate() {
            let c = image.coefficient(tuple);
            debug_assert!(c.is_integer());
            entries[r][j] = c.to_integer();
        }
    }
    Ok(LefschetzMatrix { space: sp, rows, entries })
}

/// One instance of `x∧Ω^{n−1} = sign · (n−1)! · ν_(omitted)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeIdentity {
    /// The covector on the left, e.g. `e2`.
    pub covector: String,
    /// The factor deleted from ν, e.g. `f2`.
    pub omitted: String,
    /// `Some(±1)` if the identity holds up to that sign, `None` otherwise.
    pub sign: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeIdentityReport {
    pub n: usize,
    pub factor: BigInt,
    pub identities: Vec<VolumeIdentity>,
}

impl VolumeIdentityReport {
    /// Every identity holds with sign exactly +1.
    pub fn holds(&self) -> bool {
        self.identities.iter().all(|i| i.sign == Some(1))
    }

    /// Every identity holds up to sign.
    pub fn holds_up_to_sign(&self) -> bool {
        self.identities.iter().all(|i| i.sign.is_some())
    }
}

/// Checks `e_i*∧Ω^{n−1} = (n−1)!·ν_(f̂_i)` and `f_i*∧Ω^{n−1} = (n−1)!·ν_(ê_i)`
/// coefficientwise, recording the sign of each.
pub fn omitted_volume_report(n: usize) -> Result<VolumeIdentityReport, SymplinError> {
    let sp = SymplecticSpace::new(n)?;
    let factor = factorial(n - 1);
    let fr = Rational::from_integer(factor.clone());
    let mut identities = Vec::new();
    for i in 0..n {
        for (left, omitted) in [(sp.e(i), sp.f(i)), (sp.f(i), sp.e(i))] {
            let lhs = sp.lefschetz(&ConstForm::from_term(sp.dim(), &[left], Rational::one()));
            let target = sp.volume_omitting::<Rational>(omitted).scale(&fr);
            let sign = if lhs == target {
                Some(1)
            } else if lhs == target.scale(&-Rational::one()) {
                Some(-1)
            } else {
                None
            };
            identities.push(VolumeIdentity { covector: sp.label(left), omitted: sp.label(omitted), sign });
        }
    }
    Ok(VolumeIdentityReport { n, factor, identities })
}

pub fn omitted_volume_identity(n: usize) -> Result<bool, SymplinError> {
    Ok(omitted_volume_report(n)?.holds())
}

/// `i_X(Ωⁿ) = n (i_XΩ)∧Ω^{n−1}` for a constant vector X.
pub fn contraction_identity<T: Scalar>(n: usize, x: &[T]) -> Result<bool, SymplinError> {
    let sp = SymplecticSpace::new(n)?;
    sp.check_len(x.len())?;
    let omega = sp.omega::<T>();
    let lhs = omega.wedge_pow(n).interior(x);
    let rhs = omega.interior(x).wedge(&omega.wedge_pow(n - 1)).scale(&T::from_i64(n as i64));
    Ok(lhs == rhs)
}

/// Deterministic random rational vectors with numerators in `−9..=9` and
/// denominators in `1..=6`.
pub fn random_vectors(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| Rational::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=6)))
                .collect()
        })
        .collect()
}

/// Everything the `lefschetz` command prints.
#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzSummary {
    pub matrix: LefschetzMatrix,
    pub rank: usize,
    pub columns_single_entry: bool,
    pub volume: VolumeIdentityReport,
    /// Basis vectors plus random ones.
    pub contraction_cases: usize,
    pub contraction_ok: bool,
}

pub const RANDOM_VECTOR_COUNT: usize = 20;

pub fn lefschetz_summary(n: usize) -> Result<LefschetzSummary, SymplinError> {
    let matrix = lefschetz_matrix(n)?;
    let rank = matrix.rank();
    let factor = factorial(n - 1);
    let columns_single_entry = (0..matrix.space.dim()).all(|j| {
        let s = matrix.column_support(j);
        s.len() == 1 && s[0].1.abs() == factor
    });
    let volume = omitted_volume_report(n)?;
    let dim = 2 * n;
    let mut vectors: Vec<Vec<Rational>> = (0..dim)
        .map(|j| (0..dim).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    vectors.extend(random_vectors(dim, RANDOM_VECTOR_COUNT, 0x1e5c + n as u64));
    let mut contraction_ok = true;
    for v in &vectors {
        contraction_ok &= contraction_identity(n, v)?;
    }
    Ok(LefschetzSummary { matrix, rank, columns_single_entry, volume, contraction_cases: vectors.len(), contraction_ok })
}

impl fmt::Display for LefschetzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.matrix.space.n();
        write!(f, "{}", self.matrix)?;
        writeln!(
            f,
            "rank {} / {}, injective: {}, factor (n-1)! = {}",
            self.rank,
            2 * n,
            if self.rank == 2 * n { "yes" } else { "no" },
            self.volume.factor
        )?;
        writeln!(f, "each column has one entry of size (n-1)!: {}", yes_no(self.columns_single_entry))?;
        for id in &self.volume.identities {
            let sign = match id.sign {
                Some(1) => "+".to_string(),
                Some(_) => "-".to_string(),
                None => "fails".to_string(),
            };
            writeln!(f, "  {}* ^ Omega^{} = {} (n-1)! nu without {}*", id.covector, n - 1, sign, id.omitted)?;
        }
        writeln!(
            f,
            "i_X(Omega^n) = n (i_X Omega) ^ Omega^(n-1): {} on {} vectors",
            yes_no(self.contraction_ok),
            self.contraction_cases
        )
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
