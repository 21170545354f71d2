//! Observations on `a_α` and `f` in the `(q-1)` basis. Nothing here fails
//! on an unexpected value; the reports record what was seen.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::CountTable;
use crate::arith::{binomial, divisors, mobius};
use crate::qfield::format_rational;
use crate::series::{DimVector, Series, TruncationSpec};

/// Primitive necklaces of `d` beads in `m` colours:
/// `(1/d) Σ_{k|d} μ(d/k) m^k`.
pub fn necklace_count(m: u64, d: u32) -> BigInt {
    assert!(m >= 1 && d >= 1, "necklace_count needs m, d >= 1");
    let mut acc = BigInt::zero();
    for k in divisors(d) {
        acc += BigInt::from(mobius(d / k)) * BigInt::from(m).pow(k);
    }
    acc / BigInt::from(d)
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityEntry {
    pub alpha: DimVector,
    #[serde(serialize_with = "ser_rationals")]
    pub qminus1_coeffs: Vec<BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub constant_term: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub linear_term: BigRational,
    /// Only for one-vertex quivers.
    pub necklace: Option<String>,
    pub linear_matches_necklace: Option<bool>,
    pub all_nonnegative: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub entries: Vec<PositivityEntry>,
}

impl PositivityReport {
    pub fn all_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| e.all_nonnegative)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{}: constant {}, linear {}{}, all (q-1)-coefficients nonnegative: {}\n",
                e.alpha,
                e.constant_term,
                e.linear_term,
                match (&e.necklace, e.linear_matches_necklace) {
                    (Some(n), Some(ok)) => format!(" (necklaces {n}, match: {ok})"),
                    _ => String::new(),
                },
                if e.all_nonnegative { "yes" } else { "no" },
            ));
        }
        out
    }
}

/// Rewrites every `a_α` in powers of `q-1`. For a quiver with one vertex
/// and `loops` loops, the linear term is compared with
/// `necklace_count(loops, d)` for `d >= 2`.
pub fn positivity_report(table: &CountTable, loops: Option<u32>) -> PositivityReport {
    let entries = table
        .entries()
        .iter()
        .map(|(alpha, p)| {
            let c = p.in_qminus1_basis();
            let at = |i: usize| c.get(i).cloned().unwrap_or_else(BigRational::zero);
            let (necklace, matches) = match loops {
                Some(m) if m >= 1 && alpha.len() == 1 && alpha.height() >= 2 => {
                    let n = necklace_count(m as u64, alpha.height());
                    let ok = at(1) == BigRational::from_integer(n.clone());
                    (Some(n.to_string()), Some(ok))
                }
                _ => (None, None),
            };
            PositivityEntry {
                alpha: alpha.clone(),
                constant_term: at(0),
                linear_term: at(1),
                all_nonnegative: c.iter().all(|x| !x.is_negative()),
                qminus1_coeffs: c,
                necklace,
                linear_matches_necklace: matches,
            }
        })
        .collect();
    PositivityReport { entries }
}

/// The one-variable series `C(m,2) t(t-1) / (1-mt)^2`, truncated.
pub fn f1_conjecture_series(m: u64, trunc: &TruncationSpec) -> Series<BigRational> {
    let c = BigRational::from_integer(binomial(m as i64, 2));
    let h = trunc.max_height();
    // t(t-1) Σ_k (k+1) m^k t^k
    let geo = |k: i64| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(BigInt::from(k + 1) * BigInt::from(m).pow(k as u32))
        }
    };
    let terms = (0..=h).map(|n| {
        let n = n as i64;
        (DimVector::new(vec![n as u32]), &c * (geo(n - 2) - geo(n - 1)))
    });
    Series::from_terms(trunc, terms.collect::<Vec<_>>()).expect("one variable")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    /// `3n - 1`
    pub exponent: i64,
    /// Highest power of `t` with a nonzero coefficient in
    /// `f_n (1-mt)^{3n-1}`, within the truncation.
    pub observed_degree: Option<u32>,
    pub max_height: u32,
    /// The observed degree is below the truncation, so terms above it were
    /// seen to vanish.
    pub below_truncation: bool,
}

/// Multiplies the one-variable series `f_n` by `(1-mt)^{3n-1}` and records
/// the highest surviving power of `t`.
pub fn scaled_degree_report(f_n: &Series<BigRational>, m: u64, n: usize) -> DegreeReport {
    let h = f_n.trunc().max_height();
    let e = 3 * n as i64 - 1;
    let factor = |k: u32| -> BigRational {
        // coefficient of t^k in (1 - m t)^e
        let b = binomial(e, k) * BigInt::from(-(m as i64)).pow(k);
        BigRational::from_integer(b)
    };
    let mut prod = vec![BigRational::zero(); h as usize + 1];
    for (alpha, c) in f_n.terms() {
        let i = alpha.height();
        for k in 0..=(h - i) {
            prod[(i + k) as usize] += c * factor(k);
        }
    }
    let observed = prod.iter().rposition(|c| !c.is_zero()).map(|d| d as u32);
    DegreeReport {
        n,
        exponent: e,
        observed_degree: observed,
        max_height: h,
        below_truncation: observed.is_some_and(|d| d < h),
    }
}
