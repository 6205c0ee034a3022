//! Conformal rescaling `(φ, ξ, η, g) ↦ (φ, e^σ ξ, e^{−σ} η, e^{−2σ} g)`.

use std::fmt;

use thiserror::Error;

use crate::classify::{check_lc_equations, Candidates, ClassifyError};
use crate::expr::{same_chart, ExpPoly};
use crate::forms::DiffForm;
use crate::scalar::Scalar;
use crate::structure::{AlmostContactMetric, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformalError {
    #[error("sigma must be a polynomial (no exp terms)")]
    NotPolynomial,
    #[error("sigma lives on a different chart than the structure")]
    ChartMismatch,
    #[error("input structure does not validate")]
    InvalidStructure,
    #[error("rescaled structure failed a stability check: {0}")]
    Unstable(&'static str),
    #[error("corollary precondition fails: (f, d sigma) does not solve the structure equations")]
    Precondition,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// A conformal factor `e^σ` with σ polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalChange<T: Scalar> {
    sigma: ExpPoly<T>,
}

impl<T: Scalar> ConformalChange<T> {
    pub fn new(sigma: ExpPoly<T>) -> Result<Self, ConformalError> {
        if !sigma.is_polynomial() {
            return Err(ConformalError::NotPolynomial);
        }
        Ok(ConformalChange { sigma })
    }

    pub fn sigma(&self) -> &ExpPoly<T> {
        &self.sigma
    }

    pub fn inverse(&self) -> Self {
        ConformalChange { sigma: -&self.sigma }
    }

    /// The change `σ + other.σ`, equal to applying `self` then `other`.
    pub fn then(&self, other: &Self) -> Self {
        ConformalChange { sigma: &self.sigma + &other.sigma }
    }

    /// `e^{kσ}` for an integer k.
    pub fn factor(&self, k: i64) -> ExpPoly<T> {
        self.sigma.scale(&T::from_i64(k)).exp().expect("sigma is polynomial")
    }
}

fn scaled<T: Scalar>(s: &AlmostContactMetric<T>, c: &ConformalChange<T>) -> Result<AlmostContactMetric<T>, ConformalError> {
    if !same_chart(c.sigma.chart(), s.chart()) {
        return Err(ConformalError::ChartMismatch);
    }
    Ok(AlmostContactMetric::new(
        s.chart(),
        s.phi.clone(),
        s.xi.scale(&c.factor(1)),
        s.eta.scale(&c.factor(-1)),
        s.g.scale(&c.factor(-2)),
    )?)
}

/// Rescales and asserts the result is again an almost contact metric
/// structure with `Φ' = e^{−2σ}Φ`.
pub fn rescale<T: Scalar>(s: &AlmostContactMetric<T>, c: &ConformalChange<T>) -> Result<AlmostContactMetric<T>, ConformalError> {
    if !s.validate(&[]).symbolic_ok() {
        return Err(ConformalError::InvalidStructure);
    }
    let out = scaled(s, c)?;
    if !out.validate(&[]).symbolic_ok() {
        return Err(ConformalError::Unstable("axioms"));
    }
    if out.fundamental_form()? != s.fundamental_form()?.scale(&c.factor(-2)) {
        return Err(ConformalError::Unstable("fundamental form"));
    }
    Ok(out)
}

/// How `(f, ω, σ)` transform: `(f e^σ, ω − dσ, σ_c − σ)`.
pub fn transform_candidates<T: Scalar>(cands: &Candidates<T>, c: &ConformalChange<T>) -> Candidates<T> {
    let dsigma = DiffForm::from_scalar(c.sigma.clone()).d();
    Candidates {
        f: cands.f.as_ref().map(|f| f * &c.factor(1)),
        omega: cands.omega.as_ref().map(|w| w - &dsigma),
        sigma: cands.sigma.as_ref().map(|sc| sc - &c.sigma),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryCase {
    /// f = 0: the rescaled structure is almost cosymplectic.
    Zero,
    /// f a nonzero constant.
    Constant,
    General,
}

impl CorollaryCase {
    pub fn as_str(self) -> &'static str {
        match self {
            CorollaryCase::Zero => "f = 0",
            CorollaryCase::Constant => "f constant",
            CorollaryCase::General => "general f",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport<T: Scalar> {
    pub case: CorollaryCase,
    pub rescaled: AlmostContactMetric<T>,
    /// `f e^σ`
    pub f_prime: ExpPoly<T>,
    /// `dη'`
    pub d_eta: DiffForm<T>,
    /// `dΦ'`
    pub d_phi: DiffForm<T>,
    /// `dΦ' − 2 f e^σ η'∧Φ'`
    pub residual: DiffForm<T>,
}

impl<T: Scalar> CorollaryReport<T> {
    pub fn passed(&self) -> bool {
        self.d_eta.is_zero() && self.residual.is_zero()
    }

    pub fn almost_cosymplectic(&self) -> bool {
        self.d_eta.is_zero() && self.d_phi.is_zero()
    }
}

impl<T: Scalar> fmt::Display for CorollaryReport<T> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "case: {}", self.case.as_str())?;
        writeln!(out, "f exp(sigma) = {}", self.f_prime)?;
        writeln!(out, "d eta' = {}", self.d_eta)?;
        writeln!(out, "d Phi' - 2 f exp(sigma) eta' ^ Phi' = {}", self.residual)
    }
}

/// Given `(f, dσ)` solving the structure equations on s, checks that the
/// rescaled structure is almost generalized `f e^σ`-cosymplectic.
pub fn verify_corollary<T: Scalar>(
    s: &AlmostContactMetric<T>,
    c: &ConformalChange<T>,
    f: &ExpPoly<T>,
) -> Result<CorollaryReport<T>, ConformalError> {
    let dsigma = DiffForm::from_scalar(c.sigma.clone()).d();
    if !check_lc_equations(s, f, &dsigma)?.passed() {
        return Err(ConformalError::Precondition);
    }
    let rescaled = rescale(s, c)?;
    let case = if f.is_zero() {
        CorollaryCase::Zero
    } else if f.is_constant() {
        CorollaryCase::Constant
    } else {
        CorollaryCase::General
    };
    let f_prime = f * &c.factor(1);
    let phi = rescaled.fundamental_form()?;
    let d_phi = phi.d();
    let target = rescaled.eta.wedge(&phi).map_err(StructureError::from)?.scale(&f_prime.scale(&T::from_i64(2)));
    let residual = &d_phi - &target;
    Ok(CorollaryReport { case, f_prime, d_eta: rescaled.eta.d(), d_phi, residual, rescaled })
}
