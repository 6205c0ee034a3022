//! Exponential-polynomial functions on a coordinate chart.
//!
//! An [`ExpPoly`] is a finite sum `Σ c · x^a · exp(p(x))` where `a` is a
//! monomial exponent and `p` is a polynomial. Terms are kept in a canonical
//! sorted map with no zero coefficients; since the functions `x^a·exp(p)` for
//! distinct `(a, p)` are linearly independent, two expressions are equal as
//! functions exactly when their maps coincide.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::{self, Scalar};

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("expressions live on different charts")]
    ChartMismatch,
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at column {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("nested exponential at column {pos}: exp() arguments must be polynomials")]
    NestedExponential { pos: usize },
    #[error("division by non-unit at column {pos}")]
    NonUnitDivisor { pos: usize },
    #[error("division by zero at column {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent too large at column {pos}")]
    ExponentTooLarge { pos: usize },
    #[error("divisor is not a single monomial term")]
    NonMonomialDivisor,
    #[error("monomial part of the divisor does not divide every term")]
    NotDivisible,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("point has {got} coordinates, chart has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expression is not an exp-free polynomial")]
    NotPolynomial,
}

/// Ordered coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vec<String>,
}

impl Chart {
    pub fn new<I, S>(coords: I) -> Result<Arc<Self>, ExprError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        if coords.is_empty() {
            return Err(ExprError::InvalidChart("a chart needs at least one coordinate".into()));
        }
        for (i, name) in coords.iter().enumerate() {
            let mut chars = name.chars();
            let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || name == "exp" {
                return Err(ExprError::InvalidChart(format!("bad coordinate name `{name}`")));
            }
            if coords[..i].contains(name) {
                return Err(ExprError::InvalidChart(format!("duplicate coordinate `{name}`")));
            }
        }
        Ok(Arc::new(Chart { coords }))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector of a monomial `x^a`.
///
/// Ordered graded-lexicographically: lower total degree first, and among
/// equal degrees the one with more weight on earlier coordinates first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut m = vec![0; dim];
        m[i] = 1;
        Monomial(m)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with coefficients in `T`, used as the argument of `exp`.
#[derive(Debug, Clone)]
pub struct Polynomial<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if scalar::is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if scalar::is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn negated(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    fn partial(&self, i: usize) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[i] -= 1;
                out.add_term(Monomial(exps), c.clone() * T::from_i64(e as i64));
            }
        }
        out
    }

    fn eval(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval(point)).sum()
    }
}

impl<T: Scalar> Ord for Polynomial<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter();
        let mut b = other.terms.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let ord = ma.cmp(mb).then_with(|| ca.total_cmp(cb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl<T: Scalar> PartialOrd for Polynomial<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> PartialEq for Polynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Polynomial<T> {}

type Key<T> = (Monomial, Polynomial<T>);

/// Exact scalar function `Σ c · x^a · exp(p(x))` on a chart.
#[derive(Debug, Clone)]
pub struct ExpPoly<T> {
    chart: Arc<Chart>,
    terms: BTreeMap<Key<T>, T>,
}

impl<T: Scalar> PartialEq for ExpPoly<T> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl<T: Scalar> ExpPoly<T> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        ExpPoly { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(chart: &Arc<Chart>, c: T) -> Self {
        let mut e = Self::zero(chart);
        e.add_term(Monomial::one(chart.dim()), Polynomial::zero(), c);
        e
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, T::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(chart: &Arc<Chart>, i: usize) -> Self {
        let mut e = Self::zero(chart);
        e.add_term(Monomial::var(chart.dim(), i), Polynomial::zero(), T::one());
        e
    }

    pub fn var_named(chart: &Arc<Chart>, name: &str) -> Result<Self, ExprError> {
        let i = chart
            .index_of(name)
            .ok_or_else(|| ExprError::UnknownCoordinate(name.to_string()))?;
        Ok(Self::var(chart, i))
    }

    /// A single term `c · x^a · exp(p)`.
    pub fn term(chart: &Arc<Chart>, mono: Monomial, exponent: Polynomial<T>, c: T) -> Self {
        assert_eq!(mono.0.len(), chart.dim(), "monomial length must match chart dimension");
        let mut e = Self::zero(chart);
        e.add_term(mono, exponent, c);
        e
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial<T>, &T)> {
        self.terms.iter().map(|((m, p), c)| (m, p, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_eq(&self, other: &Self) -> Result<bool, ExprError> {
        self.check_chart(other)?;
        Ok(self.terms == other.terms)
    }

    /// Some(c) when the expression is the constant function c.
    pub fn as_constant(&self) -> Option<T> {
        match self.terms.len() {
            0 => Some(T::zero()),
            1 => {
                let ((m, p), c) = self.terms.iter().next()?;
                (m.is_one() && p.is_zero()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// True when no term carries an exponential factor.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|(_, p)| p.is_zero())
    }

    pub fn to_polynomial(&self) -> Result<Polynomial<T>, ExprError> {
        let mut out = Polynomial::zero();
        for ((m, p), c) in &self.terms {
            if !p.is_zero() {
                return Err(ExprError::NotPolynomial);
            }
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Some((a, p, c)) when the expression is the single term `c·x^a·exp(p)`.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Polynomial<T>, &T)> {
        if self.terms.len() == 1 {
            self.terms()
                .next()
        } else {
            None
        }
    }

    /// `exp(self)`; only defined for exp-free polynomials.
    pub fn exp(&self) -> Result<Self, ExprError> {
        let p = self.to_polynomial()?;
        Ok(Self::term(&self.chart, Monomial::one(self.chart.dim()), p, T::one()))
    }

    /// Whether the expression depends only on the listed coordinate indices.
    pub fn depends_only_on(&self, allowed: &[usize]) -> bool {
        let ok = |m: &Monomial| {
            m.0.iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || allowed.contains(&i))
        };
        self.terms
            .keys()
            .all(|(m, p)| ok(m) && p.terms.keys().all(ok))
    }

    fn add_term(&mut self, m: Monomial, p: Polynomial<T>, c: T) {
        if scalar::is_zero(&c) {
            return;
        }
        let key = (m, p);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if scalar::is_zero(&sum) {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_chart(&self, other: &Self) -> Result<(), ExprError> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(ExprError::ChartMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for ((m, p), c) in &other.terms {
            out.add_term(m.clone(), p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExprError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_chart(other)?;
        let mut out = Self::zero(&self.chart);
        for ((ma, pa), ca) in &self.terms {
            for ((mb, pb), cb) in &other.terms {
                out.add_term(ma.mul(mb), pa.plus(pb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.chart);
        for ((m, p), v) in &self.terms {
            out.add_term(m.clone(), p.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.chart);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative along coordinate `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.chart.dim(), "coordinate index out of range");
        let mut out = Self::zero(&self.chart);
        for ((m, p), c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[i] -= 1;
                out.add_term(Monomial(exps), p.clone(), c.clone() * T::from_i64(e as i64));
            }
            for (dm, dc) in &p.partial(i).terms {
                out.add_term(m.mul(dm), p.clone(), c.clone() * dc.clone());
            }
        }
        out
    }

    pub fn partial_by_name(&self, coord: &str) -> Result<Self, ExprError> {
        let i = self
            .chart
            .index_of(coord)
            .ok_or_else(|| ExprError::UnknownCoordinate(coord.to_string()))?;
        Ok(self.partial(i))
    }

    /// Exact quotient by a single-term divisor `c·x^a·exp(p)`.
    pub fn div_exact(&self, den: &Self) -> Result<Self, ExprError> {
        self.check_chart(den)?;
        let (dm, dp, dc) = den.as_monomial().ok_or(ExprError::NonMonomialDivisor)?;
        let inv_exp = dp.negated();
        let mut out = Self::zero(&self.chart);
        for ((m, p), c) in &self.terms {
            let q = m.checked_div(dm).ok_or(ExprError::NotDivisible)?;
            out.add_term(q, p.plus(&inv_exp), c.clone() / dc.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, ExprError> {
        if point.len() != self.chart.dim() {
            return Err(ExprError::DimensionMismatch { expected: self.chart.dim(), got: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|((m, p), c)| c.to_f64() * m.eval(point) * p.eval(point).exp())
            .sum())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, T: Scalar> $tr<&'a ExpPoly<T>> for &'a ExpPoly<T> {
            type Output = ExpPoly<T>;
            fn $method(self, rhs: &'a ExpPoly<T>) -> ExpPoly<T> {
                self.$checked(rhs).expect("expression chart mismatch")
            }
        }

        impl<T: Scalar> $tr<ExpPoly<T>> for ExpPoly<T> {
            type Output = ExpPoly<T>;
            fn $method(self, rhs: ExpPoly<T>) -> ExpPoly<T> {
                (&self).$method(&rhs)
            }
        }

        impl<'a, T: Scalar> $tr<&'a ExpPoly<T>> for ExpPoly<T> {
            type Output = ExpPoly<T>;
            fn $method(self, rhs: &'a ExpPoly<T>) -> ExpPoly<T> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<T: Scalar> Neg for &ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn neg(self) -> ExpPoly<T> {
        ExpPoly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Neg for ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn neg(self) -> ExpPoly<T> {
        -&self
    }
}
