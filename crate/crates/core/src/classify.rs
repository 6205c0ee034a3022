//! Membership in the f-cosymplectic hierarchy and Lee-form extraction.
//!
//! The two structure equations `dη = ω∧η` and `dΦ = 2f η∧Φ + 2ω∧Φ` are solved
//! by contraction with ξ: `α = −i_ξ dη` is the part of ω killing ξ, and
//! `s = f + ω(ξ)` is read off `i_ξ dΦ = 2sΦ`. Both are gauge invariant; a
//! concrete pair `(f, ω)` needs a gauge choice, recorded in the report.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::expr::{same_chart, ExpPoly, ExprError};
use crate::forms::{DiffForm, FormError};
use crate::scalar::Scalar;
use crate::structure::{AlmostContactMetric, Residual, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no single-monomial coefficient in the fundamental form; indeterminate, supply candidate f and omega")]
    NoPivot,
    #[error("pivot division failed ({0}); indeterminate, supply candidate f and omega")]
    PivotDivision(ExprError),
    #[error("gauge 'candidate' requested but no candidate f or omega given")]
    MissingCandidate,
    #[error("candidate {0}")]
    BadCandidate(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Class tags, declared from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Cosymplectic,
    AlmostCosymplectic,
    AlmostKenmotsu,
    AlmostGeneralizedFCosymplectic,
    LcAlmostGeneralizedFCosymplectic,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Cosymplectic => "cosymplectic",
            Tag::AlmostCosymplectic => "almost-cosymplectic",
            Tag::AlmostKenmotsu => "almost-Kenmotsu",
            Tag::AlmostGeneralizedFCosymplectic => "almost-generalized-f-cosymplectic",
            Tag::LcAlmostGeneralizedFCosymplectic => "lc-almost-generalized-f-cosymplectic",
        }
    }

    /// Residual keys that must all vanish for the tag to be claimed.
    pub fn backing(self) -> &'static [&'static str] {
        match self {
            Tag::Cosymplectic => &["d_eta", "d_phi", "normality"],
            Tag::AlmostCosymplectic => &["d_eta", "d_phi"],
            Tag::AlmostKenmotsu | Tag::AlmostGeneralizedFCosymplectic => &["d_eta", "trace", "f_cosymplectic"],
            Tag::LcAlmostGeneralizedFCosymplectic => &["lc_d_omega", "lc_first", "lc_second"],
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which gauge the caller wants for `(f, ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// Candidates if given and closed, else `h = 0`.
    #[default]
    Auto,
    H0,
    Candidate,
}

/// Which gauge actually produced the reported pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedGauge {
    H0,
    Candidate,
    /// No pivot for `s`; the supplied pair was only checked.
    VerifyOnly,
}

impl ResolvedGauge {
    pub fn as_str(self) -> &'static str {
        match self {
            ResolvedGauge::H0 => "h0",
            ResolvedGauge::Candidate => "candidate",
            ResolvedGauge::VerifyOnly => "verify-only",
        }
    }
}

/// Optional user data: a function f, a Lee form ω, a conformal factor σ.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidates<T: Scalar> {
    pub f: Option<ExpPoly<T>>,
    pub omega: Option<DiffForm<T>>,
    pub sigma: Option<ExpPoly<T>>,
}

impl<T: Scalar> Default for Candidates<T> {
    fn default() -> Self {
        Candidates { f: None, omega: None, sigma: None }
    }
}

impl<T: Scalar> Candidates<T> {
    pub fn is_empty(&self) -> bool {
        self.f.is_none() && self.omega.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransverseLee<T: Scalar> {
    pub alpha: DiffForm<T>,
    /// `dη − α∧η`; nonzero means no ω solves the first equation.
    pub residual: DiffForm<T>,
}

/// `α = −i_ξ dη` together with the membership residual.
pub fn transverse_lee<T: Scalar>(s: &AlmostContactMetric<T>) -> TransverseLee<T> {
    let deta = s.eta.d();
    let alpha = -deta.interior(&s.xi).expect("2-form on the structure chart");
    let residual = &deta - &alpha.wedge(&s.eta).expect("same chart");
    TransverseLee { alpha, residual }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSolution<T: Scalar> {
    pub s: ExpPoly<T>,
    /// Index tuple of the Φ coefficient used as divisor.
    pub pivot: Vec<usize>,
    /// `i_ξ dΦ − 2sΦ`.
    pub residual: DiffForm<T>,
}

impl<T: Scalar> TraceSolution<T> {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Solves `i_ξ dΦ = 2sΦ` for s by exact division at the first
/// single-monomial coefficient of Φ.
pub fn solve_s<T: Scalar>(s: &AlmostContactMetric<T>) -> Result<TraceSolution<T>, ClassifyError> {
    let phi = s.fundamental_form()?;
    let trace = phi.d().interior(&s.xi)?;
    let (pivot, coeff) = phi
        .terms()
        .find(|(_, c)| c.as_monomial().is_some())
        .map(|(i, c)| (i.clone(), c.clone()))
        .ok_or(ClassifyError::NoPivot)?;
    let den = coeff.scale(&T::from_i64(2));
    let value = trace.coefficient(&pivot).div_exact(&den).map_err(ClassifyError::PivotDivision)?;
    let residual = &trace - &phi.scale(&value.scale(&T::from_i64(2)));
    Ok(TraceSolution { s: value, pivot, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcResiduals<T: Scalar> {
    /// `dω`
    pub d_omega: DiffForm<T>,
    /// `dη − ω∧η`
    pub first: DiffForm<T>,
    /// `dΦ − 2f η∧Φ − 2ω∧Φ`
    pub second: DiffForm<T>,
}

impl<T: Scalar> LcResiduals<T> {
    pub fn passed(&self) -> bool {
        self.d_omega.is_zero() && self.first.is_zero() && self.second.is_zero()
    }
}

fn check_candidate<T: Scalar>(
    s: &AlmostContactMetric<T>,
    f: Option<&ExpPoly<T>>,
    omega: Option<&DiffForm<T>>,
) -> Result<(), ClassifyError> {
    if let Some(f) = f {
        if !same_chart(f.chart(), s.chart()) {
            return Err(ClassifyError::BadCandidate("f is on a different chart".into()));
        }
    }
    if let Some(w) = omega {
        if !same_chart(w.chart(), s.chart()) {
            return Err(ClassifyError::BadCandidate("omega is on a different chart".into()));
        }
        if w.degree() != 1 {
            return Err(ClassifyError::BadCandidate(format!("omega has degree {}, expected 1", w.degree())));
        }
    }
    Ok(())
}

/// The three residuals of the locally conformal structure equations.
pub fn check_lc_equations<T: Scalar>(
    s: &AlmostContactMetric<T>,
    f: &ExpPoly<T>,
    omega: &DiffForm<T>,
) -> Result<LcResiduals<T>, ClassifyError> {
    check_candidate(s, Some(f), Some(omega))?;
    let phi = s.fundamental_form()?;
    let two = T::from_i64(2);
    let first = &s.eta.d() - &omega.wedge(&s.eta)?;
    let eta_phi = s.eta.wedge(&phi)?;
    let second = &(&phi.d() - &eta_phi.scale(&f.scale(&two))) - &omega.wedge(&phi)?.scale_const(&two);
    Ok(LcResiduals { d_omega: omega.d(), first, second })
}

fn omega_of_xi<T: Scalar>(s: &AlmostContactMetric<T>, omega: &DiffForm<T>) -> ExpPoly<T> {
    omega
        .interior(&s.xi)
        .expect("1-form on the structure chart")
        .to_scalar()
        .expect("0-form")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrability<T: Scalar> {
    /// `df + fω`
    pub one_form: DiffForm<T>,
    /// `(df + fω)∧η∧Φ`
    pub wedge: DiffForm<T>,
    /// `d(η∧Φ) − 3ω∧η∧Φ`
    pub volume_identity: DiffForm<T>,
    /// Dimension ≥ 5: `λ = (df + fω)(ξ)`.
    pub lambda: Option<ExpPoly<T>>,
    /// Dimension ≥ 5: `df + fω − λη`.
    pub lambda_residual: Option<DiffForm<T>>,
}

impl<T: Scalar> Integrability<T> {
    /// The identities every passing pair must satisfy in any dimension.
    pub fn consistent(&self) -> bool {
        self.wedge.is_zero()
            && self.volume_identity.is_zero()
            && self.lambda_residual.as_ref().is_none_or(DiffForm::is_zero)
    }

    /// Whether `df = −fω` holds exactly.
    pub fn df_equals_minus_f_omega(&self) -> bool {
        self.one_form.is_zero()
    }
}

/// Consequences of the structure equations for a passing `(f, ω)`.
pub fn integrability_check<T: Scalar>(
    s: &AlmostContactMetric<T>,
    f: &ExpPoly<T>,
    omega: &DiffForm<T>,
) -> Result<Integrability<T>, ClassifyError> {
    check_candidate(s, Some(f), Some(omega))?;
    let phi = s.fundamental_form()?;
    let eta_phi = s.eta.wedge(&phi)?;
    let df = DiffForm::from_scalar(f.clone()).d();
    let one_form = &df + &omega.scale(f);
    let wedge = one_form.wedge(&eta_phi)?;
    let volume_identity = &eta_phi.d() - &omega.wedge(&eta_phi)?.scale_const(&T::from_i64(3));
    let (lambda, lambda_residual) = if s.dim() >= 5 {
        let l = omega_of_xi(s, &one_form);
        let r = &one_form - &s.eta.scale(&l);
        (Some(l), Some(r))
    } else {
        (None, None)
    };
    Ok(Integrability { one_form, wedge, volume_identity, lambda, lambda_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FConstraint<T: Scalar> {
    /// `df∧η∧Φ`
    pub wedge: DiffForm<T>,
    /// Dimension ≥ 5: `ρ = df(ξ)`.
    pub rho: Option<ExpPoly<T>>,
    /// Dimension ≥ 5: `df − ρη`.
    pub rho_residual: Option<DiffForm<T>>,
}

impl<T: Scalar> FConstraint<T> {
    pub fn consistent(&self) -> bool {
        self.wedge.is_zero() && self.rho_residual.as_ref().is_none_or(DiffForm::is_zero)
    }

    /// In dimension 3 the wedge is a 4-form and carries no information.
    pub fn no_restriction(&self) -> bool {
        self.rho.is_none()
    }
}

/// Constraint on f for an almost generalized f-cosymplectic structure.
pub fn f_constraint<T: Scalar>(s: &AlmostContactMetric<T>, f: &ExpPoly<T>) -> Result<FConstraint<T>, ClassifyError> {
    check_candidate(s, Some(f), None)?;
    let phi = s.fundamental_form()?;
    let df = DiffForm::from_scalar(f.clone()).d();
    let wedge = df.wedge(&s.eta)?.wedge(&phi)?;
    if s.dim() < 5 {
        return Ok(FConstraint { wedge, rho: None, rho_residual: None });
    }
    let rho = omega_of_xi(s, &df);
    let residual = &df - &s.eta.scale(&rho);
    Ok(FConstraint { wedge, rho: Some(rho), rho_residual: Some(residual) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rigidity<T: Scalar> {
    /// `ω − hη`
    pub alpha: DiffForm<T>,
    /// `h = ω(ξ)`
    pub h: ExpPoly<T>,
    pub proportional: bool,
    /// Set when `dim ≥ 5` and ω is not proportional to η.
    pub theorem_violation: bool,
}

/// Splits `ω = α + hη` and tests whether ω is proportional to η.
pub fn rigidity_check<T: Scalar>(s: &AlmostContactMetric<T>, omega: &DiffForm<T>) -> Result<Rigidity<T>, ClassifyError> {
    check_candidate(s, None, Some(omega))?;
    let h = omega_of_xi(s, omega);
    let alpha = omega - &s.eta.scale(&h);
    let proportional = alpha.is_zero();
    Ok(Rigidity { alpha, h, proportional, theorem_violation: s.dim() >= 5 && !proportional })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<T: Scalar> {
    /// Most specific first; empty means "none".
    pub tags: Vec<Tag>,
    pub f: Option<ExpPoly<T>>,
    pub omega: Option<DiffForm<T>>,
    pub alpha: DiffForm<T>,
    pub s: Option<ExpPoly<T>>,
    pub rho: Option<ExpPoly<T>>,
    pub lambda: Option<ExpPoly<T>>,
    pub residuals: BTreeMap<String, Residual<T>>,
    pub gauge: Option<ResolvedGauge>,
    pub gauge_note: String,
    /// The `h = 0` pair when it also solves the equations but differs from the reported one.
    pub alternate: Option<(ExpPoly<T>, DiffForm<T>)>,
    pub normal: bool,
    pub integrability: Option<Integrability<T>>,
    pub f_constraint: Option<FConstraint<T>>,
    pub rigidity: Option<Rigidity<T>>,
    pub notes: Vec<String>,
}

impl<T: Scalar> ClassificationReport<T> {
    pub fn has(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn residual(&self, key: &str) -> Option<&Residual<T>> {
        self.residuals.get(key)
    }

    /// Every claimed tag has all of its backing residuals recorded and zero.
    pub fn tags_backed(&self) -> bool {
        self.tags.iter().all(|t| {
            t.backing()
                .iter()
                .all(|k| self.residuals.get(*k).is_some_and(Residual::is_zero))
        })
    }

    pub fn tag_names(&self) -> Vec<&'static str> {
        self.tags.iter().map(|t| t.as_str()).collect()
    }
}

struct Pair<T: Scalar> {
    f: ExpPoly<T>,
    omega: DiffForm<T>,
    lc: LcResiduals<T>,
}

fn try_pair<T: Scalar>(
    s: &AlmostContactMetric<T>,
    f: ExpPoly<T>,
    omega: DiffForm<T>,
) -> Result<Pair<T>, ClassifyError> {
    let lc = check_lc_equations(s, &f, &omega)?;
    Ok(Pair { f, omega, lc })
}

/// Runs the full decision ladder.
pub fn classify<T: Scalar>(
    s: &AlmostContactMetric<T>,
    candidates: &Candidates<T>,
    gauge: Gauge,
) -> Result<ClassificationReport<T>, ClassifyError> {
    check_candidate(s, candidates.f.as_ref(), candidates.omega.as_ref())?;
    if gauge == Gauge::Candidate && candidates.is_empty() {
        return Err(ClassifyError::MissingCandidate);
    }
    let chart = s.chart();
    let phi = s.fundamental_form()?;
    let deta = s.eta.d();
    let dphi = phi.d();
    let eta_phi = s.eta.wedge(&phi)?;
    let two = T::from_i64(2);

    let mut residuals = BTreeMap::new();
    let mut notes = Vec::new();
    let mut tags = Vec::new();

    residuals.insert("d_eta".to_string(), Residual::Form(deta.clone()));
    residuals.insert("d_phi".to_string(), Residual::Form(dphi.clone()));
    let normality = s.normality_tensor();
    let normal = normality.values().all(|v| v.is_zero());
    residuals.insert("normality".to_string(), Residual::PairTable(normality));

    if deta.is_zero() && dphi.is_zero() {
        tags.push(Tag::AlmostCosymplectic);
        if normal {
            tags.push(Tag::Cosymplectic);
        }
    }

    let lee = transverse_lee(s);
    residuals.insert("transverse_lee".to_string(), Residual::Form(lee.residual.clone()));
    let alpha = lee.alpha.clone();

    let trace = match solve_s(s) {
        Ok(t) => Some(t),
        Err(ClassifyError::NoPivot | ClassifyError::PivotDivision(_))
            if candidates.f.is_some() && candidates.omega.is_some() =>
        {
            None
        }
        Err(e) => return Err(e),
    };

    let mut report_f = None;
    let mut report_omega = None;
    let mut report_s = None;
    let mut rho = None;
    let mut f_check = None;
    let mut resolved = None;
    let mut alternate = None;
    let gauge_note;

    if let Some(trace) = &trace {
        residuals.insert("trace".to_string(), Residual::Form(trace.residual.clone()));
        let invariant = &(&dphi - &eta_phi.scale(&trace.s.scale(&two))) - &alpha.wedge(&phi)?.scale_const(&two);
        residuals.insert("invariant_structure".to_string(), Residual::Form(invariant.clone()));
        if trace.passed() {
            report_s = Some(trace.s.clone());
        } else {
            notes.push("i_xi dPhi is not a multiple of Phi; the second structure equation fails".to_string());
        }

        // dη = 0 forces α = 0, so f = s is the only candidate.
        if deta.is_zero() && trace.passed() {
            let gen = &dphi - &eta_phi.scale(&trace.s.scale(&two));
            let gen_ok = gen.is_zero();
            residuals.insert("f_cosymplectic".to_string(), Residual::Form(gen));
            if gen_ok {
                tags.push(Tag::AlmostGeneralizedFCosymplectic);
                if trace.s.is_constant() && !trace.s.is_zero() {
                    tags.push(Tag::AlmostKenmotsu);
                }
                let fc = f_constraint(s, &trace.s)?;
                if !fc.consistent() {
                    notes.push("inconsistency: df ^ eta ^ Phi or df - rho eta is nonzero".to_string());
                }
                rho = fc.rho.clone();
                f_check = Some(fc);
            }
        }

        let lc_possible = lee.residual.is_zero() && trace.passed() && invariant.is_zero();
        if lc_possible {
            let cand = if gauge != Gauge::H0 && !candidates.is_empty() {
                let (f, omega) = match (&candidates.f, &candidates.omega) {
                    (Some(f), Some(w)) => (f.clone(), w.clone()),
                    (Some(f), None) => (f.clone(), &alpha + &s.eta.scale(&(&trace.s - f))),
                    (None, Some(w)) => (&trace.s - &omega_of_xi(s, w), w.clone()),
                    (None, None) => unreachable!(),
                };
                Some(try_pair(s, f, omega)?)
            } else {
                None
            };
            let h0 = if gauge != Gauge::Candidate {
                Some(try_pair(s, trace.s.clone(), alpha.clone())?)
            } else {
                None
            };
            let chosen = match (&cand, &h0) {
                (Some(c), _) if c.lc.passed() => Some((ResolvedGauge::Candidate, c)),
                (_, Some(h)) if h.lc.passed() => Some((ResolvedGauge::H0, h)),
                _ => None,
            };
            match chosen {
                Some((g, pair)) => {
                    resolved = Some(g);
                    insert_lc(&mut residuals, &pair.lc);
                    tags.push(Tag::LcAlmostGeneralizedFCosymplectic);
                    report_f = Some(pair.f.clone());
                    report_omega = Some(pair.omega.clone());
                    if g == ResolvedGauge::Candidate {
                        if let Some(h) = h0.as_ref().filter(|h| h.lc.passed()) {
                            if h.f != pair.f || h.omega != pair.omega {
                                alternate = Some((h.f.clone(), h.omega.clone()));
                            }
                        }
                    }
                    gauge_note = match g {
                        ResolvedGauge::H0 => "gauge h = 0: omega = alpha, f = s".to_string(),
                        _ => match (&candidates.f, &candidates.omega) {
                            (Some(_), Some(_)) => "candidate gauge: supplied f and omega".to_string(),
                            (Some(_), None) => "candidate gauge: supplied f, omega = alpha + (s - f) eta".to_string(),
                            _ => "candidate gauge: supplied omega, f = s - omega(xi)".to_string(),
                        },
                    };
                    if let Some((f0, w0)) = &alternate {
                        notes.push(format!(
                            "gauge h = 0 also solves the equations: f = {f0}, omega = {w0}; the pair (f, omega) is not unique"
                        ));
                    }
                }
                None => {
                    // Record whichever attempt was made last for diagnosis.
                    if let Some(p) = h0.as_ref().or(cand.as_ref()) {
                        insert_lc(&mut residuals, &p.lc);
                    }
                    gauge_note = "no closed gauge representative found; reporting (alpha, s) only".to_string();
                }
            }
        } else {
            gauge_note = "structure equations have no solution (see residuals)".to_string();
        }
    } else {
        let f = candidates.f.clone().expect("checked above");
        let omega = candidates.omega.clone().expect("checked above");
        notes.push("no monomial pivot in Phi; supplied (f, omega) checked without solving".to_string());
        let pair = try_pair(s, f, omega)?;
        insert_lc(&mut residuals, &pair.lc);
        if pair.lc.passed() {
            tags.push(Tag::LcAlmostGeneralizedFCosymplectic);
            report_s = Some(&pair.f + &omega_of_xi(s, &pair.omega));
            report_f = Some(pair.f);
            report_omega = Some(pair.omega);
        }
        resolved = Some(ResolvedGauge::VerifyOnly);
        gauge_note = "verify-only: supplied f and omega".to_string();
    }

    if report_f.is_none() && tags.contains(&Tag::AlmostGeneralizedFCosymplectic) {
        report_f = report_s.clone();
        report_omega = Some(DiffForm::zero(chart, 1));
    }

    if let (Some(cf), Some(s_val)) = (&candidates.f, &report_s) {
        if tags.contains(&Tag::AlmostGeneralizedFCosymplectic) && cf != s_val {
            notes.push(format!(
                "dPhi = 2 f eta ^ Phi holds with f = {s_val}, although the supplied f is {cf}"
            ));
        }
    }

    let mut integrability = None;
    let mut rigidity = None;
    let mut lambda = None;
    if let (Some(f), Some(omega)) = (&report_f, &report_omega) {
        if tags.contains(&Tag::LcAlmostGeneralizedFCosymplectic) {
            let ic = integrability_check(s, f, omega)?;
            if !ic.consistent() {
                notes.push("inconsistency: the integrability identities fail for a passing pair".to_string());
            }
            if s.dim() == 3 && !ic.df_equals_minus_f_omega() {
                notes.push(format!(
                    "dim 3: df + f omega = {} is nonzero in this gauge (the wedge condition is vacuous here)",
                    ic.one_form
                ));
            }
            lambda = ic.lambda.clone();
            integrability = Some(ic);
            let rg = rigidity_check(s, omega)?;
            if rg.theorem_violation {
                notes.push("theorem violation: dim >= 5 but omega is not proportional to eta".to_string());
            } else if !rg.proportional {
                notes.push("omega not proportional to eta".to_string());
            }
            rigidity = Some(rg);
        }
    }

    tags.sort();
    Ok(ClassificationReport {
        tags,
        f: report_f,
        omega: report_omega,
        alpha,
        s: report_s,
        rho,
        lambda,
        residuals,
        gauge: resolved,
        gauge_note,
        alternate,
        normal,
        integrability,
        f_constraint: f_check,
        rigidity,
        notes,
    })
}

fn insert_lc<T: Scalar>(residuals: &mut BTreeMap<String, Residual<T>>, lc: &LcResiduals<T>) {
    residuals.insert("lc_d_omega".to_string(), Residual::Form(lc.d_omega.clone()));
    residuals.insert("lc_first".to_string(), Residual::Form(lc.first.clone()));
    residuals.insert("lc_second".to_string(), Residual::Form(lc.second.clone()));
}

impl<T: Scalar> fmt::Display for ClassificationReport<T> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tags.is_empty() {
            writeln!(out, "tags: none")?;
        } else {
            writeln!(out, "tags: {}", self.tag_names().join(", "))?;
        }
        let show = |e: &Option<ExpPoly<T>>| e.as_ref().map_or("-".to_string(), ToString::to_string);
        writeln!(out, "alpha: {}", self.alpha)?;
        writeln!(out, "s = f + omega(xi): {}", show(&self.s))?;
        writeln!(out, "f: {}", show(&self.f))?;
        writeln!(out, "omega: {}", self.omega.as_ref().map_or("-".to_string(), ToString::to_string))?;
        writeln!(out, "gauge: {}", self.gauge_note)?;
        writeln!(out, "normal: {}", if self.normal { "yes" } else { "no" })?;
        if let Some(r) = &self.rho {
            writeln!(out, "rho: {r}")?;
        }
        if let Some(l) = &self.lambda {
            writeln!(out, "lambda: {l}")?;
        }
        if let Some(r) = &self.rigidity {
            writeln!(
                out,
                "rigidity: h = {}, alpha = {}, proportional: {}",
                r.h,
                r.alpha,
                if r.proportional { "yes" } else { "no" }
            )?;
        }
        writeln!(out, "residuals:")?;
        for (k, r) in &self.residuals {
            writeln!(out, "  {k}: {r}")?;
        }
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::expr::parse;
    use crate::scalar::Rational;

    fn expr(s: &AlmostContactMetric<Rational>, text: &str) -> ExpPoly<Rational> {
        parse(text, s.chart()).unwrap()
    }

    fn dx(s: &AlmostContactMetric<Rational>, name: &str) -> DiffForm<Rational> {
        DiffForm::dx(s.chart(), s.chart().index_of(name).unwrap())
    }

    #[test]
    fn dim3_lee_and_trace() {
        let e = corpus::example_dim3();
        let s = &e.structure;
        assert_eq!(transverse_lee(s).alpha, dx(s, "x"));
        assert!(transverse_lee(s).residual.is_zero());
        let t = solve_s(s).unwrap();
        assert_eq!(t.s, expr(s, "1/2*exp(-x)"));
        assert!(t.passed());
    }

    #[test]
    fn dim3_wrong_f_fails_second_equation() {
        let e = corpus::example_dim3();
        let s = &e.structure;
        let lc = check_lc_equations(s, &expr(s, "0"), &dx(s, "x")).unwrap();
        assert!(lc.d_omega.is_zero() && lc.first.is_zero());
        assert!(!lc.second.is_zero());
    }

    #[test]
    fn dim3_classifies_in_h0_gauge() {
        let e = corpus::example_dim3();
        let s = &e.structure;
        let r = classify(s, &Candidates::default(), Gauge::Auto).unwrap();
        assert_eq!(r.tags, vec![Tag::LcAlmostGeneralizedFCosymplectic]);
        assert_eq!(r.gauge, Some(ResolvedGauge::H0));
        assert_eq!(r.omega, Some(dx(s, "x")));
        assert_eq!(r.f, Some(expr(s, "1/2*exp(-x)")));
        assert!(!r.rigidity.as_ref().unwrap().proportional);
        assert!(!r.rigidity.as_ref().unwrap().theorem_violation);
        assert!(r.integrability.as_ref().unwrap().df_equals_minus_f_omega());
        assert!(r.tags_backed());
        assert!(r.f_constraint.is_none());
    }

    #[test]
    fn dim5_candidate_gauge_and_alternate() {
        let e = corpus::example_dim5(None).unwrap();
        let s = &e.structure;
        let r = classify(s, &e.candidates, Gauge::Auto).unwrap();
        assert_eq!(
            r.tags,
            vec![Tag::AlmostKenmotsu, Tag::AlmostGeneralizedFCosymplectic, Tag::LcAlmostGeneralizedFCosymplectic]
        );
        assert_eq!(r.gauge, Some(ResolvedGauge::Candidate));
        assert_eq!(r.f, Some(expr(s, "1/2 - z1")));
        assert_eq!(r.s, Some(expr(s, "1/2")));
        assert_eq!(r.lambda, Some(expr(s, "-1 + z1/2 - z1^2")));
        let (f0, w0) = r.alternate.clone().unwrap();
        assert_eq!(f0, expr(s, "1/2"));
        assert!(w0.is_zero());
        assert_eq!(r.rho, Some(expr(s, "0")));
        assert!(r.tags_backed());
        let rg = r.rigidity.unwrap();
        assert!(rg.proportional);
        assert_eq!(rg.h, expr(s, "z1"));
    }

    #[test]
    fn h0_gauge_forced() {
        let e = corpus::example_dim5(None).unwrap();
        let r = classify(&e.structure, &e.candidates, Gauge::H0).unwrap();
        assert_eq!(r.gauge, Some(ResolvedGauge::H0));
        assert!(r.omega.unwrap().is_zero());
        assert!(r.alternate.is_none());
    }

    #[test]
    fn candidate_gauge_requires_candidates() {
        let e = corpus::flat_cosymplectic(1);
        assert_eq!(
            classify(&e.structure, &Candidates::default(), Gauge::Candidate),
            Err(ClassifyError::MissingCandidate)
        );
    }

    #[test]
    fn partial_candidates_complete_the_pair() {
        let e = corpus::example_dim5(None).unwrap();
        let s = &e.structure;
        let only_f = Candidates { f: Some(expr(s, "1/2 - z1")), omega: None, sigma: None };
        let r = classify(s, &only_f, Gauge::Candidate).unwrap();
        assert_eq!(r.omega, Some(dx(s, "z1").scale(&expr(s, "z1"))));
        let only_w = Candidates { f: None, omega: Some(dx(s, "z1").scale(&expr(s, "z1"))), sigma: None };
        let r = classify(s, &only_w, Gauge::Candidate).unwrap();
        assert_eq!(r.f, Some(expr(s, "1/2 - z1")));
    }

    #[test]
    fn flat_is_everything_with_zero_data() {
        for n in 1..=2 {
            let e = corpus::flat_cosymplectic(n);
            let r = classify(&e.structure, &Candidates::default(), Gauge::Auto).unwrap();
            assert_eq!(r.tags[0], Tag::Cosymplectic);
            assert!(r.has(Tag::AlmostCosymplectic) && !r.has(Tag::AlmostKenmotsu));
            assert!(r.f.as_ref().unwrap().is_zero());
            assert!(r.omega.as_ref().unwrap().is_zero());
            assert!(r.tags_backed());
        }
    }

    #[test]
    fn trace_failure_gets_no_tags() {
        // Only one of the two symplectic pairs is conformally scaled along z1.
        let e = corpus::example_dim5(None).unwrap();
        let mut s = e.structure.clone();
        let c = s.chart().clone();
        for (i, text) in ["exp(x)", "exp(x)", "exp(z1)", "1", "exp(z1)"].iter().enumerate() {
            s.g.set(i, i, parse(text, &c).unwrap());
        }
        assert!(s.validate(&[]).symbolic_ok());
        let t = solve_s(&s).unwrap();
        assert!(t.s.is_zero() && !t.passed());
        let r = classify(&s, &Candidates::default(), Gauge::Auto).unwrap();
        assert!(r.tags.is_empty());
        assert!(r.s.is_none() && r.f.is_none());
    }

    #[test]
    fn alpha_kills_xi() {
        for e in corpus::all() {
            let a = transverse_lee(&e.structure).alpha;
            assert!(a.interior(&e.structure.xi).unwrap().is_zero(), "{}", e.name);
        }
    }

    #[test]
    fn classify_is_idempotent() {
        let e = corpus::example_dim3();
        let a = classify(&e.structure, &e.candidates, Gauge::Auto).unwrap();
        let b = classify(&e.structure, &e.candidates, Gauge::Auto).unwrap();
        assert_eq!(a, b);
    }
}
