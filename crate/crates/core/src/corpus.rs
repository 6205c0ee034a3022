//! Builtin structures with their known data.
//!
//! Each entry carries an expected block that [`CorpusEntry::verify`] checks
//! against the classifier. Expected tags are a subset of the reported ones,
//! since the tags are cumulative.

use std::sync::Arc;

use thiserror::Error;

use crate::classify::{classify, Candidates, ClassificationReport, Gauge, Tag};
use crate::conformal::{rescale, transform_candidates, ConformalChange, ConformalError};
use crate::expr::{parse, Chart, ExpPoly, ExprError, Monomial, Polynomial};
use crate::forms::{DiffForm, VecField};
use crate::scalar::{Rational, Scalar};
use crate::structure::{default_samples, AlmostContactMetric, Matrix, DEFAULT_SAMPLE_COUNT};

type E = ExpPoly<Rational>;
type F = DiffForm<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("b must be a polynomial in z1 only")]
    BadParameter,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
}

/// Values an entry must reproduce. `None` means "not pinned".
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub tags: Vec<Tag>,
    pub fundamental_form: Option<F>,
    pub alpha: Option<F>,
    pub s: Option<E>,
    pub f: Option<E>,
    pub omega: Option<F>,
    pub lambda: Option<E>,
    pub rho: Option<E>,
    pub h: Option<E>,
    pub proportional: Option<bool>,
    pub normal: Option<bool>,
}

impl Expected {
    fn new(tags: &[Tag]) -> Self {
        Expected {
            tags: tags.to_vec(),
            fundamental_form: None,
            alpha: None,
            s: None,
            f: None,
            omega: None,
            lambda: None,
            rho: None,
            h: None,
            proportional: None,
            normal: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub structure: AlmostContactMetric<Rational>,
    pub candidates: Candidates<Rational>,
    pub expected: Expected,
    pub samples: Vec<Vec<f64>>,
    pub notes: String,
}

impl CorpusEntry {
    fn new(name: &str, structure: AlmostContactMetric<Rational>, candidates: Candidates<Rational>, expected: Expected, notes: &str) -> Self {
        let samples = default_samples(structure.dim(), DEFAULT_SAMPLE_COUNT);
        CorpusEntry { name: name.to_string(), structure, candidates, expected, samples, notes: notes.to_string() }
    }

    /// Classifies with the entry's candidates and compares against the
    /// expected block; returns the report or the list of mismatches.
    pub fn verify(&self) -> Result<ClassificationReport<Rational>, Vec<String>> {
        let mut bad = Vec::new();
        let s = &self.structure;
        let v = s.validate(&self.samples);
        if !v.symbolic_ok() || !v.volume_ok() {
            bad.push("structure does not validate".to_string());
        }
        let phi = s.fundamental_form().ok();
        let report = match classify(s, &self.candidates, Gauge::Auto) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("classification failed: {e}"));
                return Err(bad);
            }
        };
        for t in &self.expected.tags {
            if !report.has(*t) {
                bad.push(format!("missing tag {t}"));
            }
        }
        if !report.tags_backed() {
            bad.push("a tag is not backed by a zero residual".to_string());
        }
        let x = &self.expected;
        let mut cmp = |what: &str, want: Option<String>, got: Option<String>| {
            if let Some(w) = want {
                if got.as_ref() != Some(&w) {
                    bad.push(format!("{what}: expected {w}, got {}", got.unwrap_or_else(|| "-".into())));
                }
            }
        };
        let show = |e: &Option<E>| e.as_ref().map(ToString::to_string);
        let showf = |e: &Option<F>| e.as_ref().map(ToString::to_string);
        cmp("fundamental form", showf(&x.fundamental_form), showf(&phi));
        cmp("alpha", showf(&x.alpha), Some(report.alpha.to_string()));
        cmp("s", show(&x.s), show(&report.s));
        cmp("f", show(&x.f), show(&report.f));
        cmp("omega", showf(&x.omega), showf(&report.omega));
        cmp("lambda", show(&x.lambda), show(&report.lambda));
        cmp("rho", show(&x.rho), show(&report.rho));
        let rig = report.rigidity.as_ref();
        cmp("h", show(&x.h), rig.map(|r| r.h.to_string()));
        cmp("proportional", x.proportional.map(|b| b.to_string()), rig.map(|r| r.proportional.to_string()));
        cmp("normal", x.normal.map(|b| b.to_string()), Some(report.normal.to_string()));
        if bad.is_empty() {
            Ok(report)
        } else {
            Err(bad)
        }
    }
}

fn ex(chart: &Arc<Chart>, text: &str) -> E {
    parse(text, chart).expect("builtin expression")
}

fn matrix(chart: &Arc<Chart>, rows: &[&[&str]]) -> Matrix<Rational> {
    let rows = rows.iter().map(|r| r.iter().map(|t| ex(chart, t)).collect()).collect();
    Matrix::from_rows(chart, rows).expect("square builtin matrix")
}

fn one_form(chart: &Arc<Chart>, comps: &[(&str, &str)]) -> F {
    let mut w = F::zero(chart, 1);
    for (name, text) in comps {
        let i = chart.index_of(name).expect("builtin coordinate");
        w = w + F::from_term(chart, &[i], ex(chart, text)).expect("in range");
    }
    w
}

fn field(chart: &Arc<Chart>, comps: &[(&str, &str)]) -> VecField<Rational> {
    let mut v = vec![E::zero(chart); chart.dim()];
    for (name, text) in comps {
        v[chart.index_of(name).expect("builtin coordinate")] = ex(chart, text);
    }
    VecField::new(chart, v).expect("builtin field")
}

fn two_form(chart: &Arc<Chart>, terms: &[(&str, &str, &str)]) -> F {
    let mut w = F::zero(chart, 2);
    for (a, b, text) in terms {
        let idx = [chart.index_of(a).unwrap(), chart.index_of(b).unwrap()];
        w = w + F::from_term(chart, &idx, ex(chart, text)).unwrap();
    }
    w
}

fn structure(
    chart: &Arc<Chart>,
    phi: Matrix<Rational>,
    xi: VecField<Rational>,
    eta: F,
    g: Matrix<Rational>,
) -> AlmostContactMetric<Rational> {
    AlmostContactMetric::new(chart, phi, xi, eta, g).expect("builtin structure")
}

/// Dimension 3, chart (x, y, z): `η = e^x dz`, `ξ = e^{−x} ∂z`,
/// `g = e^z(dx² + dy²) + e^{2x} dz²`, `φ∂x = ∂y`, `φ∂y = −∂x`.
pub fn example_dim3() -> CorpusEntry {
    let c = Chart::new(["x", "y", "z"]).unwrap();
    let s = structure(
        &c,
        matrix(&c, &[&["0", "-1", "0"], &["1", "0", "0"], &["0", "0", "0"]]),
        field(&c, &[("z", "exp(-x)")]),
        one_form(&c, &[("z", "exp(x)")]),
        matrix(&c, &[&["exp(z)", "0", "0"], &["0", "exp(z)", "0"], &["0", "0", "exp(2*x)"]]),
    );
    let candidates = Candidates {
        f: Some(ex(&c, "1/2*exp(-x)")),
        omega: Some(one_form(&c, &[("x", "1")])),
        sigma: Some(ex(&c, "x")),
    };
    let mut x = Expected::new(&[Tag::LcAlmostGeneralizedFCosymplectic]);
    x.fundamental_form = Some(two_form(&c, &[("x", "y", "-exp(z)")]));
    x.alpha = Some(one_form(&c, &[("x", "1")]));
    x.s = Some(ex(&c, "1/2*exp(-x)"));
    x.f = candidates.f.clone();
    x.omega = candidates.omega.clone();
    x.h = Some(ex(&c, "0"));
    x.proportional = Some(false);
    x.normal = Some(false);
    CorpusEntry::new(
        "example-dim3",
        s,
        candidates,
        x,
        "three-dimensional lc structure whose Lee form dx is transverse to eta; not normal",
    )
}

/// [`example_dim3`] rescaled by `σ = x`: almost Kenmotsu with `f = 1/2`.
pub fn example_dim3_rescaled() -> CorpusEntry {
    let base = example_dim3();
    let c = base.structure.chart().clone();
    let change = ConformalChange::new(ex(&c, "x")).unwrap();
    let s = rescale(&base.structure, &change).expect("builtin rescale");
    let candidates = transform_candidates(&base.candidates, &change);
    let mut x = Expected::new(&[
        Tag::AlmostKenmotsu,
        Tag::AlmostGeneralizedFCosymplectic,
        Tag::LcAlmostGeneralizedFCosymplectic,
    ]);
    x.f = Some(ex(&c, "1/2"));
    x.s = Some(ex(&c, "1/2"));
    x.omega = Some(F::zero(&c, 1));
    x.alpha = Some(F::zero(&c, 1));
    CorpusEntry::new(
        "example-dim3-rescaled",
        s,
        candidates,
        x,
        "example-dim3 after the conformal change sigma = x; d eta' = 0 and f exp(sigma) = 1/2",
    )
}

fn product_chart() -> Arc<Chart> {
    Chart::new(["theta", "x1", "y1", "x2", "y2"]).unwrap()
}

/// `S¹ × ℝ⁴` on the cover chart (θ, x1, y1, x2, y2) with `η = dθ`, `ξ = ∂θ`,
/// flat metric and `J∂x_i = −∂y_i`, `J∂y_i = ∂x_i`, so `Φ = Σ dx_i∧dy_i`.
pub fn example_product() -> CorpusEntry {
    let c = product_chart();
    let s = structure(
        &c,
        matrix(
            &c,
            &[
                &["0", "0", "0", "0", "0"],
                &["0", "0", "1", "0", "0"],
                &["0", "-1", "0", "0", "0"],
                &["0", "0", "0", "0", "1"],
                &["0", "0", "0", "-1", "0"],
            ],
        ),
        field(&c, &[("theta", "1")]),
        one_form(&c, &[("theta", "1")]),
        Matrix::identity(&c, 5),
    );
    let mut x = Expected::new(&[Tag::Cosymplectic, Tag::AlmostCosymplectic]);
    x.fundamental_form = Some(two_form(&c, &[("x1", "y1", "1"), ("x2", "y2", "1")]));
    x.alpha = Some(F::zero(&c, 1));
    x.s = Some(ex(&c, "0"));
    x.f = Some(ex(&c, "0"));
    x.omega = Some(F::zero(&c, 1));
    x.normal = Some(true);
    CorpusEntry::new(
        "example-product",
        s,
        Candidates::default(),
        x,
        "cosymplectic product of the circle (cover coordinate theta) with flat R^4",
    )
}

/// [`example_product`] rescaled by `σ = θ`; Lee form `ω = −dθ`, `f = 0`.
/// On the circle ω is closed but not exact; that is not computed here.
pub fn example_product_rescaled() -> CorpusEntry {
    let base = example_product();
    let c = base.structure.chart().clone();
    let change = ConformalChange::new(ex(&c, "theta")).unwrap();
    let s = rescale(&base.structure, &change).expect("builtin rescale");
    let candidates = Candidates {
        f: Some(ex(&c, "0")),
        omega: Some(one_form(&c, &[("theta", "-1")])),
        sigma: Some(ex(&c, "-theta")),
    };
    let mut x = Expected::new(&[Tag::LcAlmostGeneralizedFCosymplectic]);
    x.alpha = Some(F::zero(&c, 1));
    x.s = Some(ex(&c, "-exp(theta)"));
    x.f = candidates.f.clone();
    x.omega = candidates.omega.clone();
    x.lambda = Some(ex(&c, "0"));
    x.h = Some(ex(&c, "-exp(theta)"));
    x.proportional = Some(true);
    CorpusEntry::new(
        "example-product-rescaled",
        s,
        candidates,
        x,
        "example-product after sigma = theta; locally but not globally conformal cosymplectic (omega = -d theta is not exact on the circle)",
    )
}

fn dim5_chart() -> Arc<Chart> {
    Chart::new(["x", "y1", "y2", "z1", "z2"]).unwrap()
}

/// `∫ b dz1` with zero constant term.
fn antiderivative_z1(b: &E) -> Result<E, CorpusError> {
    let chart = b.chart();
    let z1 = chart.index_of("z1").expect("dim5 chart");
    if !b.is_polynomial() || !b.depends_only_on(&[z1]) {
        return Err(CorpusError::BadParameter);
    }
    let mut out = E::zero(chart);
    for (m, _, c) in b.terms() {
        let mut exps = m.exponents().to_vec();
        exps[z1] += 1;
        let k = Rational::from_i64(exps[z1] as i64);
        out = out + E::term(chart, Monomial::from_exponents(exps), Polynomial::zero(), c.clone() / k);
    }
    Ok(out)
}

/// Dimension 5, chart (x, y1, y2, z1, z2): `η = dz1`, `ξ = ∂z1`,
/// `g = e^{z1}(dx² + dy1² + dz2² + dy2²) + dz1²`, with Lee form `b dz1` and
/// `f = 1/2 − b`. `b` is a polynomial in z1, default `z1`.
pub fn example_dim5(b: Option<&str>) -> Result<CorpusEntry, CorpusError> {
    let c = dim5_chart();
    let b = parse(b.unwrap_or("z1"), &c)?;
    let sigma = antiderivative_z1(&b)?;
    let s = structure(
        &c,
        matrix(
            &c,
            &[
                &["0", "-1", "0", "0", "0"],
                &["1", "0", "0", "0", "0"],
                &["0", "0", "0", "0", "1"],
                &["0", "0", "0", "0", "0"],
                &["0", "0", "-1", "0", "0"],
            ],
        ),
        field(&c, &[("z1", "1")]),
        one_form(&c, &[("z1", "1")]),
        matrix(
            &c,
            &[
                &["exp(z1)", "0", "0", "0", "0"],
                &["0", "exp(z1)", "0", "0", "0"],
                &["0", "0", "exp(z1)", "0", "0"],
                &["0", "0", "0", "1", "0"],
                &["0", "0", "0", "0", "exp(z1)"],
            ],
        ),
    );
    let z1 = c.index_of("z1").unwrap();
    let half = ex(&c, "1/2");
    let f = &half - &b;
    let omega = F::from_term(&c, &[z1], b.clone()).unwrap();
    let db = b.partial(z1);
    let lambda = &(-&db) + &(&b * &f);
    let candidates = Candidates { f: Some(f.clone()), omega: Some(omega.clone()), sigma: Some(sigma) };
    let mut x = Expected::new(&[Tag::LcAlmostGeneralizedFCosymplectic]);
    x.fundamental_form = Some(two_form(&c, &[("x", "y1", "-exp(z1)"), ("z2", "y2", "-exp(z1)")]));
    x.alpha = Some(F::zero(&c, 1));
    x.s = Some(half);
    x.f = Some(f);
    x.omega = Some(omega);
    x.lambda = Some(lambda);
    x.h = Some(b);
    x.proportional = Some(true);
    Ok(CorpusEntry::new(
        "example-dim5",
        s,
        candidates,
        x,
        "five-dimensional lc structure with omega = b dz1 proportional to eta; b = z1 by default",
    ))
}

/// [`example_dim5`] rescaled by `σ = ∫ b dz1`, which closes η.
pub fn example_dim5_rescaled(b: Option<&str>) -> Result<CorpusEntry, CorpusError> {
    let base = example_dim5(b)?;
    let c = base.structure.chart().clone();
    let change = ConformalChange::new(base.candidates.sigma.clone().expect("dim5 sigma"))?;
    let s = rescale(&base.structure, &change)?;
    let candidates = transform_candidates(&base.candidates, &change);
    let f = candidates.f.clone().expect("dim5 f");
    let z1 = c.index_of("z1").unwrap();
    // ρ = df(ξ') with ξ' = e^σ ∂z1
    let rho = &f.partial(z1) * &change.factor(1);
    let mut x = Expected::new(&[Tag::AlmostGeneralizedFCosymplectic, Tag::LcAlmostGeneralizedFCosymplectic]);
    x.alpha = Some(F::zero(&c, 1));
    x.s = Some(f.clone());
    x.f = Some(f);
    x.omega = Some(F::zero(&c, 1));
    x.rho = Some(rho);
    x.proportional = Some(true);
    Ok(CorpusEntry::new(
        "example-dim5-rescaled",
        s,
        candidates,
        x,
        "example-dim5 after sigma = integral of b; almost generalized f'-cosymplectic with f' = (1/2 - b) exp(sigma)",
    ))
}

/// `ℝ^{2n+1}` with coordinates (x1..xn, y1..yn, z), identity metric,
/// `η = dz`, `ξ = ∂z`, `φ∂x_i = ∂y_i`, `φ∂y_i = −∂x_i`.
pub fn flat_cosymplectic(n: usize) -> CorpusEntry {
    assert!(n >= 1, "flat_cosymplectic needs n >= 1");
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.extend((1..=n).map(|i| format!("y{i}")));
    names.push("z".to_string());
    let c = Chart::new(names).unwrap();
    let dim = 2 * n + 1;
    let mut phi = Matrix::zero(&c, dim);
    for i in 0..n {
        phi.set(n + i, i, E::one(&c));
        phi.set(i, n + i, -E::one(&c));
    }
    let z = dim - 1;
    let s = structure(&c, phi, VecField::coordinate(&c, z), F::dx(&c, z), Matrix::identity(&c, dim));
    let mut x = Expected::new(&[Tag::Cosymplectic, Tag::AlmostCosymplectic]);
    x.alpha = Some(F::zero(&c, 1));
    x.s = Some(E::zero(&c));
    x.f = Some(E::zero(&c));
    x.omega = Some(F::zero(&c, 1));
    x.normal = Some(true);
    CorpusEntry::new(&format!("flat-{dim}"), s, Candidates::default(), x, "constant standard structure on flat space")
}

/// Every builtin entry, default parameters.
pub fn all() -> Vec<CorpusEntry> {
    vec![
        example_dim3(),
        example_dim3_rescaled(),
        example_product(),
        example_product_rescaled(),
        example_dim5(None).expect("default b"),
        example_dim5_rescaled(None).expect("default b"),
        flat_cosymplectic(1),
        flat_cosymplectic(2),
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    all().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_reproduces_its_expected_block() {
        for e in all() {
            if let Err(bad) = e.verify() {
                panic!("{}: {}", e.name, bad.join("; "));
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let names: Vec<String> = all().into_iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(by_name("example-dim3").is_some());
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn dim5_phi_matches_stated_action() {
        let e = example_dim5(None).unwrap();
        let c = e.structure.chart().clone();
        let d = |n: &str| VecField::coordinate(&c, c.index_of(n).unwrap());
        assert_eq!(e.structure.phi_of(&d("x")), d("y1"));
        assert_eq!(e.structure.phi_of(&d("y1")), -&d("x"));
        assert_eq!(e.structure.phi_of(&d("z2")), d("y2"));
        assert_eq!(e.structure.phi_of(&d("y2")), -&d("z2"));
        assert!(e.structure.phi_of(&d("z1")).is_zero());
    }

    #[test]
    fn dim5_rescaled_rho() {
        let e = example_dim5_rescaled(None).unwrap();
        let c = e.structure.chart().clone();
        assert_eq!(e.expected.rho, Some(parse("(-1 + z1/2 - z1^2)*exp(z1^2)", &c).unwrap()));
        assert_eq!(e.candidates.f, Some(parse("(1/2 - z1)*exp(z1^2/2)", &c).unwrap()));
    }

    #[test]
    fn b_parameter_is_checked() {
        assert_eq!(example_dim5(Some("x")).unwrap_err(), CorpusError::BadParameter);
        assert_eq!(example_dim5(Some("exp(z1)")).unwrap_err(), CorpusError::BadParameter);
        let e = example_dim5(Some("3*z1^2 + 1")).unwrap();
        assert_eq!(e.candidates.sigma, Some(parse("z1^3 + z1", e.structure.chart()).unwrap()));
        assert!(e.verify().is_ok());
    }

    #[test]
    fn product_rescaled_matches_direct_construction() {
        let e = example_product_rescaled();
        let c = e.structure.chart().clone();
        assert_eq!(e.structure.eta, one_form(&c, &[("theta", "exp(-theta)")]));
        assert_eq!(e.structure.xi, field(&c, &[("theta", "exp(theta)")]));
    }
}
