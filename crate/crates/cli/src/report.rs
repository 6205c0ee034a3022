//! Machine-readable reports. Every expression and form is rendered in its
//! canonical printed form, so output is byte-stable for identical input.

use serde_json::{json, Map, Value};

use contactlab::classify::ClassificationReport;
use contactlab::structure::{Residual, ValidationReport};
use contactlab::{ExpPoly, KForm, Rational};

fn opt_expr(e: &Option<ExpPoly<Rational>>) -> Value {
    e.as_ref().map_or(Value::Null, |e| Value::String(e.to_string()))
}

fn opt_form(f: &Option<KForm>) -> Value {
    f.as_ref().map_or(Value::Null, |f| Value::String(f.to_string()))
}

fn residual(r: &Residual<Rational>) -> Value {
    json!({ "zero": r.is_zero(), "value": r.to_string() })
}

pub fn validation(r: &ValidationReport<Rational>) -> Value {
    let axioms: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "key": c.axiom.key(),
                "name": c.axiom.name(),
                "passed": c.passed(),
                "residual": format!("{} = {}", c.axiom.residual_label(), c.residual),
            })
        })
        .collect();
    let samples: Vec<Value> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "point": s.point,
                "leading_minors": s.leading_minors,
                "positive_definite": s.positive_definite(),
                "phi_rank": s.phi_rank,
            })
        })
        .collect();
    json!({
        "ok": r.symbolic_ok(),
        "axioms": axioms,
        "volume": opt_form(&r.volume),
        "volume_ok": r.volume_ok(),
        "samples": samples,
        "expected_phi_rank": r.expected_phi_rank,
        "numeric_ok": r.numeric_ok(),
    })
}

pub fn classification(r: &ClassificationReport<Rational>) -> Value {
    let residuals: Map<String, Value> = r.residuals.iter().map(|(k, v)| (k.clone(), residual(v))).collect();
    let integrability = r.integrability.as_ref().map_or(Value::Null, |i| {
        json!({
            "df_plus_f_omega": i.one_form.to_string(),
            "wedge_eta_phi": i.wedge.to_string(),
            "volume_identity": i.volume_identity.to_string(),
            "lambda": opt_expr(&i.lambda),
            "lambda_residual": opt_form(&i.lambda_residual),
            "consistent": i.consistent(),
        })
    });
    let f_constraint = r.f_constraint.as_ref().map_or(Value::Null, |c| {
        json!({
            "df_eta_phi": c.wedge.to_string(),
            "rho": opt_expr(&c.rho),
            "rho_residual": opt_form(&c.rho_residual),
            "no_restriction": c.no_restriction(),
            "consistent": c.consistent(),
        })
    });
    let rigidity = r.rigidity.as_ref().map_or(Value::Null, |g| {
        json!({
            "alpha": g.alpha.to_string(),
            "h": g.h.to_string(),
            "proportional": g.proportional,
            "theorem_violation": g.theorem_violation,
        })
    });
    let alternate = r
        .alternate
        .as_ref()
        .map_or(Value::Null, |(f, w)| json!({ "f": f.to_string(), "omega": w.to_string() }));
    json!({
        "tags": r.tag_names(),
        "alpha": r.alpha.to_string(),
        "s": opt_expr(&r.s),
        "f": opt_expr(&r.f),
        "omega": opt_form(&r.omega),
        "rho": opt_expr(&r.rho),
        "lambda": opt_expr(&r.lambda),
        "gauge": r.gauge.map_or(Value::Null, |g| Value::String(g.as_str().to_string())),
        "gauge_note": r.gauge_note,
        "alternate_gauge": alternate,
        "normal": r.normal,
        "residuals": residuals,
        "integrability": integrability,
        "f_constraint": f_constraint,
        "rigidity": rigidity,
        "notes": r.notes,
    })
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
