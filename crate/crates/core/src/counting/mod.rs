//! Counting polynomials of stable quiver representations.
//!
//! The pipeline is: `t_α` (all points over `#GL_α`) → `r_α` (semistable
//! points over `#GL_α`, by a resolution over prefix slopes) → `a(q)`
//! recovered from `r ∘ Exp(a/(1-q)) = 1` as `(1-q) Log(r^{∘-1})`.

mod recursion;
mod report;
mod table;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{divisors, mobius};
use crate::qfield::zpoly::ZPoly;
use crate::qfield::{QFieldError, QPoly, RationalFunction};
use crate::quiver::{Quiver, QuiverError, Stability};
use crate::series::{BilinearForm, DimVector, Series, SeriesError, SupportFilter, TruncationSpec};

pub use recursion::{f_at_one, f_recursive, f_series, q1_expansion, specialize_at_one};
pub use report::{
    f1_conjecture_series, necklace_count, positivity_report, scaled_degree_report, DegreeReport,
    PositivityEntry, PositivityReport,
};
pub use table::{latex_poly, CountTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    QField(#[from] QFieldError),
    #[error("{alpha} has slope {found}, but the context slope is {expected}")]
    SlopeMismatch { alpha: DimVector, expected: BigRational, found: BigRational },
    #[error("no dimension vector of height <= {max_height} has slope {mu}")]
    SlopeNotAttained { mu: BigRational, max_height: u32 },
    #[error("this computation requires the zero stability")]
    NonzeroStability,
    #[error("coefficient at {alpha} is not an integer polynomial: {value}")]
    NotIntegral { alpha: DimVector, value: String },
    #[error("coefficient at {alpha} has a pole at q = 1")]
    PoleAtOne { alpha: DimVector },
    #[error("{alpha} is not divisible by {r}")]
    NotDivisible { alpha: DimVector, r: u32 },
    #[error("no table entry for {0}")]
    MissingEntry(DimVector),
    #[error("count at {alpha} evaluates to {value} at q = {q}, not a nonnegative integer")]
    NotACount { alpha: DimVector, q: u32, value: BigRational },
}

/// A quiver with a stability and a target slope, fixing the cone of
/// dimension vectors all series live on.
pub struct CountingContext {
    quiver: Quiver,
    stability: Stability,
    mu: BigRational,
    trunc: TruncationSpec,
    form: BilinearForm,
    t_cache: Mutex<HashMap<DimVector, RationalFunction>>,
    d_cache: Mutex<HashMap<DimVector, RationalFunction>>,
}

impl CountingContext {
    pub fn new(
        quiver: Quiver,
        stability: Stability,
        mu: BigRational,
        max_height: u32,
    ) -> Result<Self, CountingError> {
        stability.check_for(&quiver)?;
        let n = quiver.num_vertices();
        let filter = if stability.is_zero() && mu.is_zero() {
            SupportFilter::All
        } else {
            SupportFilter::Slope { theta: stability.theta.clone(), mu: mu.clone() }
        };
        let trunc = TruncationSpec::new(n, max_height)?.with_filter(filter)?;
        if trunc.support().len() < 2 {
            return Err(CountingError::SlopeNotAttained { mu, max_height });
        }
        let form = quiver.ringel_matrix();
        Ok(CountingContext {
            quiver,
            stability,
            mu,
            trunc,
            form,
            t_cache: Mutex::new(HashMap::new()),
            d_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Zero stability and slope 0: every dimension vector is in the cone.
    pub fn unstable(quiver: Quiver, max_height: u32) -> Result<Self, CountingError> {
        let n = quiver.num_vertices();
        Self::new(quiver, Stability::zero(n), BigRational::zero(), max_height)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn stability(&self) -> &Stability {
        &self.stability
    }

    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    /// Nonzero dimension vectors of the cone, by height then lexicographic.
    pub fn cone(&self) -> Vec<DimVector> {
        self.trunc.support().into_iter().skip(1).collect()
    }

    fn require_zero_stability(&self) -> Result<(), CountingError> {
        if self.stability.is_zero() {
            Ok(())
        } else {
            Err(CountingError::NonzeroStability)
        }
    }

    /// `t_α = q^{α·α - T(α)} / Π_i #GL_{α^i}(q)`, i.e. `#R_α / #GL_α`.
    pub fn t_alpha(&self, alpha: &DimVector) -> RationalFunction {
        if let Some(t) = self.t_cache.lock().expect("t cache").get(alpha) {
            return t.clone();
        }
        let exp = alpha.dot(alpha) - self.form.quadratic(alpha);
        let den = alpha.entries().iter().fold(ZPoly::one(), |acc, &n| acc.mul(&gl_order(n)));
        let t = RationalFunction::from_zpolys(ZPoly::one(), den).mul_q_pow(exp);
        self.t_cache.lock().expect("t cache").insert(alpha.clone(), t.clone());
        t
    }

    /// `μ(β) > μ`
    fn above_slope(&self, beta: &DimVector) -> bool {
        BigRational::new(BigInt::from(self.stability.weight(beta)), BigInt::from(beta.height()))
            > self.mu
    }

    /// Signed sum over tuples `(α_1, …, α_k)` with sum `β` all of whose
    /// prefix sums (β included) have slope above `μ`.
    fn d_value(&self, beta: &DimVector) -> RationalFunction {
        if beta.is_zero() {
            return RationalFunction::one();
        }
        if let Some(d) = self.d_cache.lock().expect("d cache").get(beta) {
            return d.clone();
        }
        let d = -self.last_part_sum(beta);
        self.d_cache.lock().expect("d cache").insert(beta.clone(), d.clone());
        d
    }

    /// `Σ_γ q^{-⟨γ, β-γ⟩} t_γ D(β-γ)` over last parts `γ` whose remainder is
    /// zero or has slope above `μ`.
    fn last_part_sum(&self, beta: &DimVector) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for gamma in beta.sub_vectors().into_iter().skip(1) {
            let rest = beta.checked_sub(&gamma).expect("gamma <= beta");
            if !rest.is_zero() && !self.above_slope(&rest) {
                continue;
            }
            let d = self.d_value(&rest);
            let term = (&self.t_alpha(&gamma) * &d).mul_q_pow(-self.form.pair(&gamma, &rest));
            acc = &acc + &term;
        }
        acc
    }

    fn check_slope(&self, alpha: &DimVector) -> Result<(), CountingError> {
        if alpha.is_zero() {
            return Ok(());
        }
        let found = self.stability.slope(alpha)?;
        if found != self.mu {
            return Err(CountingError::SlopeMismatch {
                alpha: alpha.clone(),
                expected: self.mu.clone(),
                found,
            });
        }
        Ok(())
    }

    /// `r_α = #R^{ss}_α / #GL_α` as a rational function of `q`, by dynamic
    /// programming over prefix sums.
    pub fn r_alpha(&self, alpha: &DimVector) -> Result<RationalFunction, CountingError> {
        if alpha.len() != self.quiver.num_vertices() {
            return Err(QuiverError::DimensionMismatch {
                expected: self.quiver.num_vertices(),
                found: alpha.len(),
            }
            .into());
        }
        self.check_slope(alpha)?;
        if alpha.is_zero() {
            return Ok(RationalFunction::one());
        }
        Ok(self.last_part_sum(alpha))
    }

    /// Reference implementation of `r_α`: the alternating sum over all
    /// tuples `(α_1, …, α_k)` of nonzero vectors summing to `α` whose
    /// proper prefix sums have slope above `μ`, each weighted by
    /// `(-1)^{k-1} q^{-Σ_{i<j} ⟨α_j, α_i⟩} Π t_{α_i}`.
    pub fn r_alpha_enumerated(&self, alpha: &DimVector) -> Result<RationalFunction, CountingError> {
        self.check_slope(alpha)?;
        if alpha.is_zero() {
            return Ok(RationalFunction::one());
        }
        let mut total = RationalFunction::zero();
        let mut parts = Vec::new();
        self.enumerate_tuples(alpha, &DimVector::zero(alpha.len()), &mut parts, &mut total);
        Ok(total)
    }

    fn enumerate_tuples(
        &self,
        alpha: &DimVector,
        prefix: &DimVector,
        parts: &mut Vec<DimVector>,
        total: &mut RationalFunction,
    ) {
        let remaining = alpha.checked_sub(prefix).expect("prefix <= alpha");
        for part in remaining.sub_vectors().into_iter().skip(1) {
            let next = prefix.add(&part);
            parts.push(part);
            if next == *alpha {
                let k = parts.len();
                let mut exp = 0i64;
                for j in 0..k {
                    for i in 0..j {
                        exp += self.form.pair(&parts[j], &parts[i]);
                    }
                }
                let mut term = parts
                    .iter()
                    .fold(RationalFunction::one(), |acc, p| &acc * &self.t_alpha(p))
                    .mul_q_pow(-exp);
                if k % 2 == 0 {
                    term = -term;
                }
                *total = &*total + &term;
            } else if self.above_slope(&next) {
                self.enumerate_tuples(alpha, &next, parts, total);
            }
            parts.pop();
        }
    }

    /// `r = Σ_α r_α x^α` over the cone; constant term 1.
    pub fn r_series(&self) -> Result<Series, CountingError> {
        let values: Vec<(DimVector, RationalFunction)> = self
            .cone()
            .into_iter()
            .map(|a| self.r_alpha(&a).map(|r| (a, r)))
            .collect::<Result<_, _>>()?;
        let mut terms = vec![(DimVector::zero(self.quiver.num_vertices()), RationalFunction::one())];
        terms.extend(values);
        Ok(Series::from_terms(&self.trunc, terms)?)
    }

    /// Solves `r ∘ Exp(a/(1-q)) = 1` for `a`, asserting that every `a_α`
    /// is an integer polynomial.
    pub fn a_series(&self) -> Result<CountTable, CountingError> {
        let r = self.r_series()?;
        self.a_from_r(&r)
    }

    pub fn a_from_r(&self, r: &Series) -> Result<CountTable, CountingError> {
        let g = r.twisted_inverse(&self.form)?;
        let one_minus_q = RationalFunction::one_minus_q_pow(1);
        let a = g.log()?.scale(&one_minus_q);
        let mut entries = Vec::new();
        for alpha in self.cone() {
            let c = a.coeff(&alpha);
            let p = c
                .to_qpoly()
                .filter(QPoly::has_integer_coefficients)
                .ok_or_else(|| CountingError::NotIntegral { alpha: alpha.clone(), value: c.to_string() })?;
            entries.push((alpha, p));
        }
        Ok(CountTable::new("a_series: (1-q) * Log(twisted inverse of r)", entries))
    }
}

/// `#GL_n(q) = Π_{i=0}^{n-1} (q^n - q^i)`
fn gl_order(n: u32) -> ZPoly {
    let n = n as usize;
    let mut acc = ZPoly::one();
    for i in 0..n {
        let f = ZPoly::monomial(BigInt::from(1), n).sub(&ZPoly::monomial(BigInt::from(1), i));
        acc = acc.mul(&f);
    }
    acc
}

/// `#GL_n(q)` as a polynomial.
pub fn gl_order_poly(n: u32) -> QPoly {
    QPoly::from_zpoly(&gl_order(n), &BigRational::from_integer(1.into()))
}

/// `s_{rα,r} = (1/r) Σ_{k|r} μ(r/k) ψ_k(a_α)`: the number of stable
/// classes of dimension `rα` whose endomorphism field has degree `r`.
/// Checked to take nonnegative integer values at `q = 2, 3`.
pub fn s_alpha_r(table: &CountTable, alpha: &DimVector, r: u32) -> Result<QPoly, CountingError> {
    assert!(r >= 1, "r must be positive");
    let a = table.get(alpha).ok_or_else(|| CountingError::MissingEntry(alpha.clone()))?;
    let mut acc = QPoly::zero();
    for k in divisors(r) {
        let m = mobius(r / k);
        if m != 0 {
            let term = a.adams(k).mul(&QPoly::from_ints(&[m as i64]));
            acc = acc.add(&term);
        }
    }
    let s = acc.mul(&QPoly::new(vec![BigRational::new(1.into(), BigInt::from(r))]));
    let beta = alpha.scale(r);
    for q in [2u32, 3] {
        let v = s.eval(&BigRational::from_integer(q.into()));
        if !v.is_integer() || v.is_negative() {
            return Err(CountingError::NotACount { alpha: beta, q, value: v });
        }
    }
    Ok(s)
}

/// `s_{β,r}` for a dimension vector `β` divisible by `r`.
pub fn s_of_dim(table: &CountTable, beta: &DimVector, r: u32) -> Result<QPoly, CountingError> {
    let alpha = beta
        .div_exact(r)
        .ok_or_else(|| CountingError::NotDivisible { alpha: beta.clone(), r })?;
    s_alpha_r(table, &alpha, r)
}

#[cfg(test)]
mod tests;
