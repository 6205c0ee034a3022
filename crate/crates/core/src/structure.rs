//! Almost contact metric structures `(φ, ξ, η, g)` on a chart.
//!
//! `phi` uses the column convention `φ(∂_j) = Σ_i phi[i][j] ∂_i`, so it acts on
//! component vectors by ordinary matrix multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{same_chart, Chart, ExpPoly, ExprError};
use crate::forms::{DiffForm, FormError, VecField};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure dimension must be odd, got {0}")]
    EvenDimension(usize),
    #[error("{what} has shape {got}, expected {expected}")]
    Shape { what: &'static str, expected: String, got: String },
    #[error("fields live on different charts")]
    ChartMismatch,
    #[error("eta must be a 1-form, got degree {0}")]
    EtaDegree(usize),
    #[error("fundamental form is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("fundamental form does not annihilate xi")]
    XiNotInKernel,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Square matrix of expressions, row-major.
#[derive(Debug, Clone)]
pub struct Matrix<T> {
    chart: Arc<Chart>,
    n: usize,
    entries: Vec<ExpPoly<T>>,
}

impl<T: Scalar> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.n == other.n && self.entries == other.entries
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(chart: &Arc<Chart>, rows: Vec<Vec<ExpPoly<T>>>) -> Result<Self, StructureError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(StructureError::Shape {
                what: "matrix",
                expected: format!("{n}x{n}"),
                got: format!("{n} rows of lengths {:?}", rows.iter().map(Vec::len).collect::<Vec<_>>()),
            });
        }
        let entries: Vec<ExpPoly<T>> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !same_chart(e.chart(), chart)) {
            return Err(StructureError::ChartMismatch);
        }
        Ok(Matrix { chart: chart.clone(), n, entries })
    }

    pub fn zero(chart: &Arc<Chart>, n: usize) -> Self {
        Matrix { chart: chart.clone(), n, entries: vec![ExpPoly::zero(chart); n * n] }
    }

    pub fn identity(chart: &Arc<Chart>, n: usize) -> Self {
        let mut m = Self::zero(chart, n);
        for i in 0..n {
            m.entries[i * n + i] = ExpPoly::one(chart);
        }
        m
    }

    pub fn diagonal(chart: &Arc<Chart>, diag: Vec<ExpPoly<T>>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(chart, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExpPoly<T> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExpPoly<T>) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<ExpPoly<T>>> {
        self.entries.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExpPoly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(&self.chart, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zero(&self.chart, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExpPoly::zero(&self.chart);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix {
            chart: self.chart.clone(),
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix {
            chart: self.chart.clone(),
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, f: &ExpPoly<T>) -> Self {
        Matrix {
            chart: self.chart.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| a * f).collect(),
        }
    }

    /// Outer product `u vᵀ`.
    pub fn outer(chart: &Arc<Chart>, u: &[ExpPoly<T>], v: &[ExpPoly<T>]) -> Self {
        let n = u.len();
        let mut m = Self::zero(chart, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, &u[i] * &v[j]);
            }
        }
        m
    }

    /// Matrix–vector product on components.
    pub fn apply(&self, v: &[ExpPoly<T>]) -> Vec<ExpPoly<T>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(ExpPoly::zero(&self.chart), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc + a * &v[j]
                    }
                })
            })
            .collect()
    }

    pub fn apply_field(&self, x: &VecField<T>) -> VecField<T> {
        VecField::new(&self.chart, self.apply(x.components())).expect("same chart")
    }

    pub fn eval(&self, point: &[f64]) -> Result<DMatrix<f64>, ExprError> {
        let vals = self.entries.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>, _>>()?;
        Ok(DMatrix::from_row_slice(self.n, self.n, &vals))
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A residual left over by an exact identity check; the identity holds iff it is zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual<T: Scalar> {
    Scalar(ExpPoly<T>),
    Vector(Vec<ExpPoly<T>>),
    Matrix(Matrix<T>),
    Form(DiffForm<T>),
    /// Vector-valued 2-tensor on coordinate pairs `i < j`.
    PairTable(BTreeMap<(usize, usize), VecField<T>>),
}

impl<T: Scalar> Residual<T> {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Scalar(e) => e.is_zero(),
            Residual::Vector(v) => v.iter().all(ExpPoly::is_zero),
            Residual::Matrix(m) => m.is_zero(),
            Residual::Form(f) => f.is_zero(),
            Residual::PairTable(t) => t.values().all(VecField::is_zero),
        }
    }
}

impl<T: Scalar> fmt::Display for Residual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Scalar(e) => write!(f, "{e}"),
            Residual::Vector(v) => {
                write!(f, "[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            }
            Residual::Matrix(m) => write!(f, "{m}"),
            Residual::Form(form) => write!(f, "{form}"),
            Residual::PairTable(t) => {
                let parts: Vec<String> = t
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((i, j), v)| format!("({i},{j}): {v}"))
                    .collect();
                if parts.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&parts.join("; "))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// φ² = −Id + η⊗ξ
    PhiSquared,
    /// η(ξ) = 1
    EtaOfXi,
    /// φξ = 0
    PhiXi,
    /// η∘φ = 0
    EtaPhi,
    /// g = gᵀ
    MetricSymmetric,
    /// g(φX, φY) = g(X, Y) − η(X)η(Y)
    MetricCompatible,
    /// η(X) = g(ξ, X)
    EtaMetricDual,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::PhiSquared,
        Axiom::EtaOfXi,
        Axiom::PhiXi,
        Axiom::EtaPhi,
        Axiom::MetricSymmetric,
        Axiom::MetricCompatible,
        Axiom::EtaMetricDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::PhiSquared => "phi^2 = -Id + eta (x) xi",
            Axiom::EtaOfXi => "eta(xi) = 1",
            Axiom::PhiXi => "phi xi = 0",
            Axiom::EtaPhi => "eta o phi = 0",
            Axiom::MetricSymmetric => "g symmetric",
            Axiom::MetricCompatible => "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)",
            Axiom::EtaMetricDual => "eta(X) = g(xi, X)",
        }
    }

    /// The expression whose vanishing is the axiom.
    pub fn residual_label(self) -> &'static str {
        match self {
            Axiom::PhiSquared => "phi^2 + Id - eta (x) xi",
            Axiom::EtaOfXi => "eta(xi) - 1",
            Axiom::PhiXi => "phi xi",
            Axiom::EtaPhi => "eta o phi",
            Axiom::MetricSymmetric => "g - g^T",
            Axiom::MetricCompatible => "phi^T g phi - g + eta (x) eta",
            Axiom::EtaMetricDual => "g(xi, .) - eta",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Axiom::PhiSquared => "phi_squared",
            Axiom::EtaOfXi => "eta_xi",
            Axiom::PhiXi => "phi_xi",
            Axiom::EtaPhi => "eta_phi",
            Axiom::MetricSymmetric => "g_symmetric",
            Axiom::MetricCompatible => "g_compatible",
            Axiom::EtaMetricDual => "eta_metric_dual",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck<T: Scalar> {
    pub axiom: Axiom,
    pub residual: Residual<T>,
}

impl<T: Scalar> AxiomCheck<T> {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Numeric spot check of g and φ at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCheck {
    pub point: Vec<f64>,
    /// Leading principal minors of g, in order.
    pub leading_minors: Vec<f64>,
    pub phi_rank: usize,
}

impl SampleCheck {
    pub fn positive_definite(&self) -> bool {
        self.leading_minors.iter().all(|&m| m > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T: Scalar> {
    pub checks: Vec<AxiomCheck<T>>,
    /// η∧Φⁿ; must be nonzero.
    pub volume: Option<DiffForm<T>>,
    pub samples: Vec<SampleCheck>,
    /// Expected rank of φ, i.e. 2n.
    pub expected_phi_rank: usize,
}

impl<T: Scalar> ValidationReport<T> {
    pub fn symbolic_ok(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed) && self.volume_ok()
    }

    pub fn volume_ok(&self) -> bool {
        self.volume.as_ref().is_some_and(|v| !v.is_zero())
    }

    pub fn numeric_ok(&self) -> bool {
        self.samples
            .iter()
            .all(|s| s.positive_definite() && s.phi_rank == self.expected_phi_rank)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck<T>> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

impl<T: Scalar> fmt::Display for ValidationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed() {
                writeln!(f, "  [pass] {}", c.axiom.name())?;
            } else {
                writeln!(f, "  [FAIL] {}: {} = {}", c.axiom.name(), c.axiom.residual_label(), c.residual)?;
            }
        }
        match &self.volume {
            Some(v) if !v.is_zero() => writeln!(f, "  [pass] eta ^ Phi^n = {v}")?,
            _ => writeln!(f, "  [FAIL] eta ^ Phi^n vanishes")?,
        }
        for s in &self.samples {
            let status = if s.positive_definite() && s.phi_rank == self.expected_phi_rank { "ok" } else { "WARN" };
            writeln!(
                f,
                "  [{status}] sample {:?}: g leading minors {:?}, rank phi {}",
                s.point, s.leading_minors, s.phi_rank
            )?;
        }
        Ok(())
    }
}

/// The quadruple `(φ, ξ, η, g)` on an odd-dimensional chart.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostContactMetric<T: Scalar> {
    chart: Arc<Chart>,
    pub phi: Matrix<T>,
    pub xi: VecField<T>,
    pub eta: DiffForm<T>,
    pub g: Matrix<T>,
}

impl<T: Scalar> AlmostContactMetric<T> {
    pub fn new(
        chart: &Arc<Chart>,
        phi: Matrix<T>,
        xi: VecField<T>,
        eta: DiffForm<T>,
        g: Matrix<T>,
    ) -> Result<Self, StructureError> {
        let dim = chart.dim();
        if dim.is_multiple_of(2) {
            return Err(StructureError::EvenDimension(dim));
        }
        for (what, m) in [("phi", &phi), ("g", &g)] {
            if m.size() != dim {
                return Err(StructureError::Shape {
                    what,
                    expected: format!("{dim}x{dim}"),
                    got: format!("{0}x{0}", m.size()),
                });
            }
            if !same_chart(&m.chart, chart) {
                return Err(StructureError::ChartMismatch);
            }
        }
        if !same_chart(xi.chart(), chart) || !same_chart(eta.chart(), chart) {
            return Err(StructureError::ChartMismatch);
        }
        if eta.degree() != 1 {
            return Err(StructureError::EtaDegree(eta.degree()));
        }
        Ok(AlmostContactMetric { chart: chart.clone(), phi, xi, eta, g })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `n` with `dim = 2n + 1`.
    pub fn n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn phi_of(&self, x: &VecField<T>) -> VecField<T> {
        self.phi.apply_field(x)
    }

    fn basis(&self) -> Vec<VecField<T>> {
        (0..self.dim()).map(|i| VecField::coordinate(&self.chart, i)).collect()
    }

    /// Φ(X, Y) = g(X, φY), as a 2-form. Checks antisymmetry and `i_ξΦ = 0`.
    pub fn fundamental_form(&self) -> Result<DiffForm<T>, StructureError> {
        let gphi = self.g.mul(&self.phi);
        let dim = self.dim();
        let mut form = DiffForm::zero(&self.chart, 2);
        for i in 0..dim {
            if !gphi.get(i, i).is_zero() {
                return Err(StructureError::NotAntisymmetric(i, i));
            }
            for j in i + 1..dim {
                if !(gphi.get(i, j) + gphi.get(j, i)).is_zero() {
                    return Err(StructureError::NotAntisymmetric(i, j));
                }
                form = form + DiffForm::from_term(&self.chart, &[i, j], gphi.get(i, j).clone())?;
            }
        }
        if !form.interior(&self.xi)?.is_zero() {
            return Err(StructureError::XiNotInKernel);
        }
        Ok(form)
    }

    /// Every axiom as an exact residual, the volume form η∧Φⁿ, and numeric
    /// spot checks of g and φ at the given sample points.
    pub fn validate(&self, samples: &[Vec<f64>]) -> ValidationReport<T> {
        let dim = self.dim();
        let chart = &self.chart;
        let eta = self.eta.components();
        let xi = self.xi.components().to_vec();
        let one = ExpPoly::one(chart);

        let mut checks = Vec::new();
        let phi2 = self.phi.mul(&self.phi);
        let rhs = Matrix::outer(chart, &xi, &eta).sub(&Matrix::identity(chart, dim));
        checks.push(AxiomCheck { axiom: Axiom::PhiSquared, residual: Residual::Matrix(phi2.sub(&rhs)) });

        let eta_xi = self.eta.apply(std::slice::from_ref(&self.xi)).expect("1-form on one field");
        checks.push(AxiomCheck { axiom: Axiom::EtaOfXi, residual: Residual::Scalar(eta_xi - &one) });

        checks.push(AxiomCheck { axiom: Axiom::PhiXi, residual: Residual::Vector(self.phi.apply(&xi)) });

        let eta_phi = self.phi.transpose().apply(&eta);
        checks.push(AxiomCheck { axiom: Axiom::EtaPhi, residual: Residual::Vector(eta_phi) });

        checks.push(AxiomCheck {
            axiom: Axiom::MetricSymmetric,
            residual: Residual::Matrix(self.g.sub(&self.g.transpose())),
        });

        let compat = self
            .phi
            .transpose()
            .mul(&self.g)
            .mul(&self.phi)
            .sub(&self.g)
            .add(&Matrix::outer(chart, &eta, &eta));
        checks.push(AxiomCheck { axiom: Axiom::MetricCompatible, residual: Residual::Matrix(compat) });

        let g_xi = self.g.transpose().apply(&xi);
        let dual: Vec<ExpPoly<T>> = g_xi.iter().zip(&eta).map(|(a, b)| a - b).collect();
        checks.push(AxiomCheck { axiom: Axiom::EtaMetricDual, residual: Residual::Vector(dual) });

        let volume = self
            .fundamental_form()
            .ok()
            .map(|phi| self.eta.wedge(&phi.wedge_pow(self.n())).expect("same chart"));

        let samples = samples.iter().filter_map(|p| self.sample_check(p)).collect();

        ValidationReport { checks, volume, samples, expected_phi_rank: 2 * self.n() }
    }

    fn sample_check(&self, point: &[f64]) -> Option<SampleCheck> {
        let g = self.g.eval(point).ok()?;
        let phi = self.phi.eval(point).ok()?;
        let leading_minors = (1..=self.dim())
            .map(|k| g.view((0, 0), (k, k)).clone_owned().determinant())
            .collect();
        Some(SampleCheck { point: point.to_vec(), leading_minors, phi_rank: phi.rank(1e-9) })
    }

    /// Nijenhuis torsion `[φ,φ](∂_i, ∂_j)` for all `i < j`.
    pub fn nijenhuis(&self) -> BTreeMap<(usize, usize), VecField<T>> {
        let basis = self.basis();
        let phi_basis: Vec<VecField<T>> = basis.iter().map(|b| self.phi_of(b)).collect();
        let mut out = BTreeMap::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let bracket = |a: &VecField<T>, b: &VecField<T>| a.lie_bracket(b).expect("same chart");
                let t1 = self.phi_of(&self.phi_of(&bracket(&basis[i], &basis[j])));
                let t2 = bracket(&phi_basis[i], &phi_basis[j]);
                let t3 = self.phi_of(&bracket(&phi_basis[i], &basis[j]));
                let t4 = self.phi_of(&bracket(&basis[i], &phi_basis[j]));
                out.insert((i, j), &(&(&t1 + &t2) - &t3) - &t4);
            }
        }
        out
    }

    /// `N = [φ,φ] + 2 dη⊗ξ` on coordinate pairs `i < j`.
    pub fn normality_tensor(&self) -> BTreeMap<(usize, usize), VecField<T>> {
        let deta = self.eta.d();
        let two = ExpPoly::constant(&self.chart, T::from_i64(2));
        self.nijenhuis()
            .into_iter()
            .map(|((i, j), v)| {
                let c = deta.coefficient(&[i, j]);
                ((i, j), &v + &self.xi.scale(&(&two * &c)))
            })
            .collect()
    }

    pub fn is_normal(&self) -> bool {
        self.normality_tensor().values().all(VecField::is_zero)
    }
}

/// Number of numeric sample points used when none are given.
pub const DEFAULT_SAMPLE_COUNT: usize = 5;

/// Deterministic sample points in the box `[0.25, 1.25]^dim`, away from the
/// coordinate hyperplanes that chart domains commonly exclude.
pub fn default_samples(dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.random_range(0.25..1.25)).collect())
        .collect()
}
