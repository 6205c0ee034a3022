use std::fmt;

use super::{Chart, ExpPoly, Monomial, Polynomial};

use crate::scalar::Scalar;

fn monomial_factors(m: &Monomial, chart: &Chart, out: &mut Vec<String>) {
    for (name, &e) in chart.coords().iter().zip(m.exponents()) {
        match e {
            0 => {}
            1 => out.push(name.clone()),
            _ => out.push(format!("{name}^{e}")),
        }
    }
}

/// Joins signed terms as `a + b - c`; each term is (factors, coefficient).
fn write_sum<'a, T: Scalar>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Vec<String>, &'a T)>,
) -> fmt::Result {
    let mut first = true;
    for (factors, c) in terms {
        let neg = c.is_negative();
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let mag = c.abs();
        let mut parts = Vec::with_capacity(factors.len() + 1);
        if !mag.is_one() || factors.is_empty() {
            parts.push(mag.to_exact_string());
        }
        parts.extend(factors);
        f.write_str(&parts.join("*"))?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

pub(crate) struct PolyDisplay<'a, T> {
    pub poly: &'a Polynomial<T>,
    pub chart: &'a Chart,
}

impl<T: Scalar> fmt::Display for PolyDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.poly.terms.iter().map(|(m, c)| {
                let mut factors = Vec::new();
                monomial_factors(m, self.chart, &mut factors);
                (factors, c)
            }),
        )
    }
}

/// Canonical text form, re-parseable by [`super::parse`].
impl<T: Scalar> fmt::Display for ExpPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chart = &*self.chart;
        write_sum(
            f,
            self.terms.iter().map(|((m, p), c)| {
                let mut factors = Vec::new();
                monomial_factors(m, chart, &mut factors);
                if !p.is_zero() {
                    factors.push(format!("exp({})", PolyDisplay { poly: p, chart }));
                }
                (factors, c)
            }),
        )
    }
}
