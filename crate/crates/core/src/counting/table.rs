use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::CountingError;
use crate::qfield::{format_rational, QPoly, RationalFunction};
use crate::series::{DimVector, Series, SeriesError, TruncationSpec};

/// Polynomials indexed by dimension vector, tagged with the algorithm that
/// produced them. Entries are kept ordered by height, then lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    provenance: String,
    entries: Vec<(DimVector, QPoly)>,
}

impl CountTable {
    pub fn new(provenance: &str, entries: impl IntoIterator<Item = (DimVector, QPoly)>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by(|(a, _), (b, _)| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        entries.dedup_by(|x, y| x.0 == y.0);
        CountTable { provenance: provenance.to_string(), entries }
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn get(&self, alpha: &DimVector) -> Option<&QPoly> {
        self.entries.iter().find(|(a, _)| a == alpha).map(|(_, p)| p)
    }

    pub fn entries(&self) -> &[(DimVector, QPoly)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Replaces one entry; used to exercise mismatch detection.
    pub fn with_entry(mut self, alpha: &DimVector, value: QPoly) -> Self {
        match self.entries.iter_mut().find(|(a, _)| a == alpha) {
            Some(e) => e.1 = value,
            None => {
                self.entries.push((alpha.clone(), value));
                self.entries = Self::new(&self.provenance, self.entries).entries;
            }
        }
        self
    }

    /// `Σ_α entry_α x^α` under `trunc`.
    pub fn to_series(&self, trunc: &TruncationSpec) -> Result<Series, SeriesError> {
        Series::from_terms(
            trunc,
            self.entries.iter().map(|(a, p)| (a.clone(), RationalFunction::from_qpoly(p))),
        )
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(a, p)| {
                let qm1: Vec<String> = p.in_qminus1_basis().iter().map(format_rational).collect();
                json!({ "alpha": a, "poly_q": p, "poly_qminus1": qm1 })
            })
            .collect();
        json!({ "provenance": self.provenance, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self, CountingError> {
        let bad = |m: &str| CountingError::Series(SeriesError::Malformed(m.to_string()));
        let provenance = v.get("provenance").and_then(Value::as_str).unwrap_or_default();
        let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))?;
        let mut out = Vec::new();
        for e in entries {
            let alpha: DimVector = serde_json::from_value(e.get("alpha").cloned().unwrap_or_default())
                .map_err(|err| bad(&err.to_string()))?;
            let poly: QPoly = serde_json::from_value(e.get("poly_q").cloned().unwrap_or_default())
                .map_err(|err| bad(&err.to_string()))?;
            out.push((alpha, poly));
        }
        Ok(Self::new(provenance, out))
    }

    /// One line per entry: `a(2,1) = q^2 - 1  =  (q-1)^2 + 2*(q-1)`.
    pub fn to_text(&self, name: &str) -> String {
        let mut out = String::new();
        for (a, p) in &self.entries {
            let qm1 = QPolyIn(&p.in_qminus1_basis(), "(q-1)");
            writeln!(out, "{name}{a} = {p}  =  {qm1}").expect("write to string");
        }
        out
    }

    /// A `tabular` with columns `α`, the polynomial in `q`, and in `q-1`.
    pub fn to_latex(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str("\\begin{tabular}{lll}\n");
        writeln!(out, "$\\alpha$ & ${name}_\\alpha(q)$ & in powers of $(q-1)$ \\\\").unwrap();
        out.push_str("\\hline\n");
        for (a, p) in &self.entries {
            let q = latex_poly(p.coeffs(), "q");
            let qm1 = latex_poly(&p.in_qminus1_basis(), "(q-1)");
            writeln!(out, "${a}$ & ${q}$ & ${qm1}$ \\\\").unwrap();
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

/// Displays coefficients in powers of an arbitrary variable, highest first.
pub(crate) struct QPolyIn<'a>(pub &'a [BigRational], pub &'a str);

impl std::fmt::Display for QPolyIn<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.iter().all(Zero::is_zero) {
            return write!(f, "0");
        }
        crate::qfield::write_terms(f, self.0, self.1, false)
    }
}

/// LaTeX rendering, highest degree first.
pub fn latex_poly(coeffs: &[BigRational], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let coeff = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        match i {
            0 => out.push_str(&coeff),
            _ => {
                if !mag.is_one() {
                    out.push_str(&coeff);
                }
                out.push_str(var);
                if i > 1 {
                    write!(out, "^{{{i}}}").unwrap();
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_text() {
        let t = CountTable::new(
            "test",
            [
                (DimVector::new(vec![2]), QPoly::from_ints(&[0, -1, 0, 1])),
                (DimVector::new(vec![1]), QPoly::from_ints(&[0, 0, 1])),
            ],
        );
        assert_eq!(t.entries()[0].0, DimVector::new(vec![1]));
        let v = t.to_json();
        assert_eq!(v["entries"][1]["poly_qminus1"], json!(["0/1", "2/1", "3/1", "1/1"]));
        assert_eq!(CountTable::from_json(&v).unwrap(), t);
        assert!(t.to_text("a").contains("a(2) = q^3 - q  =  (q-1)^3 + 3*(q-1)^2 + 2*(q-1)"));
        assert!(t.to_latex("a").contains("$(1)$ & $q^{2}$ & $(q-1)^{2} + 2(q-1) + 1$"));
        assert_eq!(latex_poly(&[BigRational::new(1.into(), 2.into())], "q"), "\\frac{1}{2}");
    }
}
