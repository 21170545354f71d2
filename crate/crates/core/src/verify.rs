//! Compares the counting formulas, evaluated at `q = p`, with brute-force
//! counts over `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::counting::{s_of_dim, CountTable, CountingContext, CountingError};
use crate::oracle::{census, Census, OracleConfig, OracleError};
use crate::qfield::QPoly;
use crate::quiver::{Quiver, Stability};
use crate::series::DimVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyEntry {
    pub alpha: DimVector,
    pub p: u32,
    /// `t`, `r`, `a`, or `s_r` for the stable classes with `dim End = r`.
    pub quantity: String,
    pub formula: String,
    pub oracle: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub alpha: DimVector,
    pub p: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub theta: Vec<i64>,
    pub slope: String,
    pub entries: Vec<VerifyEntry>,
    pub skipped: Vec<Skipped>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.matches)
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{} {} p={}: formula {} oracle {} {}\n",
                e.quantity,
                e.alpha,
                e.p,
                e.formula,
                e.oracle,
                if e.matches { "ok" } else { "MISMATCH" }
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped {} p={}: {}\n", s.alpha, s.p, s.reason));
        }
        out
    }
}

/// What to compare and where.
#[derive(Debug, Clone)]
pub struct VerifyPlan {
    pub max_height: u32,
    pub primes: Vec<u32>,
    pub oracle: OracleConfig,
    /// Replaces one `a_α` before comparing; used to check that mismatches
    /// are caught.
    pub corrupt: Option<(DimVector, QPoly)>,
}

fn at(p: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

fn entry(alpha: &DimVector, p: u32, quantity: &str, formula: BigRational, oracle: BigRational) -> VerifyEntry {
    VerifyEntry {
        alpha: alpha.clone(),
        p,
        quantity: quantity.to_string(),
        matches: formula == oracle,
        formula: formula.to_string(),
        oracle: oracle.to_string(),
    }
}

/// Runs `t`, `r`, `a` and `s_r` comparisons for every dimension vector of
/// the cone of `(θ, μ)` up to `plan.max_height`, at every prime of the
/// plan. Dimension vectors beyond the oracle budgets are listed as skipped.
pub fn verify(
    quiver: &Quiver,
    theta: &Stability,
    mu: &BigRational,
    plan: &VerifyPlan,
) -> Result<VerifyReport, VerifyError> {
    let ctx = CountingContext::new(quiver.clone(), theta.clone(), mu.clone(), plan.max_height)?;
    let mut table = ctx.a_series()?;
    if let Some((alpha, value)) = &plan.corrupt {
        table = table.with_entry(alpha, value.clone());
    }
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &p in &plan.primes {
        for alpha in ctx.cone() {
            let c = match census(quiver, &alpha, theta, p, &plan.oracle) {
                Ok(c) => c,
                Err(e @ (OracleError::PointBudget { .. } | OracleError::StabilityBudget { .. })) => {
                    skipped.push(Skipped { alpha, p, reason: e.to_string() });
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            entries.extend(compare(&ctx, &table, &alpha, p, &c)?);
        }
    }
    Ok(VerifyReport { theta: theta.theta.clone(), slope: mu.to_string(), entries, skipped })
}

fn compare(
    ctx: &CountingContext,
    table: &CountTable,
    alpha: &DimVector,
    p: u32,
    c: &Census,
) -> Result<Vec<VerifyEntry>, VerifyError> {
    let q = at(p);
    let mut out = Vec::new();
    let t = ctx.t_alpha(alpha).eval(&q).map_err(CountingError::from)?;
    out.push(entry(alpha, p, "t", t, c.point_ratio()));
    let r = ctx.r_alpha(alpha)?.eval(&q).map_err(CountingError::from)?;
    out.push(entry(alpha, p, "r", r, c.semistable_ratio()));
    let a = table.get(alpha).ok_or_else(|| CountingError::MissingEntry(alpha.clone()))?.eval(&q);
    out.push(entry(alpha, p, "a", a, BigRational::from_integer(c.stable_classes(1)?)));
    let g = alpha.entries().iter().fold(0u32, |acc, &x| acc.gcd(&x));
    for r in 2..=alpha.height() {
        let formula = if g % r == 0 {
            s_of_dim(table, alpha, r)?.eval(&q)
        } else {
            BigRational::zero()
        };
        let oracle = BigRational::from_integer(c.stable_classes(r)?);
        out.push(entry(alpha, p, &format!("s_{r}"), formula, oracle));
    }
    Ok(out)
}
