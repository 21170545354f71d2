//! The twisted product `x^α ∘ x^β = q^{-⟨α,β⟩} x^{α+β}` and the grading
//! operators `T`, `S_λ` and bar-conjugation on `Q(q)`-series.

use serde::{Deserialize, Serialize};

use super::{Coefficient, DimVector, Series, SeriesError};
use crate::qfield::RationalFunction;

/// A bilinear form `⟨α,β⟩ = α^t R β` on `Z^I`, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearForm {
    entries: Vec<Vec<i64>>,
}

impl BilinearForm {
    /// Fails unless `entries` is square.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, SeriesError> {
        let n = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(SeriesError::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(BilinearForm { entries })
    }

    pub fn zero(n: usize) -> Self {
        BilinearForm { entries: vec![vec![0; n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn check(&self, v: &DimVector) -> Result<(), SeriesError> {
        if v.len() != self.dim() {
            return Err(SeriesError::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// `α^t R β`; panics on a length mismatch (see [`BilinearForm::try_pair`]).
    pub fn pair(&self, alpha: &DimVector, beta: &DimVector) -> i64 {
        self.try_pair(alpha, beta).expect("vector length matches the form")
    }

    pub fn try_pair(&self, alpha: &DimVector, beta: &DimVector) -> Result<i64, SeriesError> {
        self.check(alpha)?;
        self.check(beta)?;
        let mut s = 0i64;
        for (i, &a) in alpha.entries().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.entries().iter().enumerate() {
                s += a as i64 * self.entries[i][j] * b as i64;
            }
        }
        Ok(s)
    }

    /// `⟨α,α⟩`
    pub fn quadratic(&self, alpha: &DimVector) -> i64 {
        self.pair(alpha, alpha)
    }

    /// `R α` as an integer vector.
    pub fn apply(&self, alpha: &DimVector) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(alpha.entries()).map(|(&r, &a)| r * a as i64).sum())
            .collect()
    }
}

impl Series<RationalFunction> {
    fn check_form(&self, form: &BilinearForm) -> Result<(), SeriesError> {
        if form.dim() != self.trunc.nvars() {
            return Err(SeriesError::DimensionMismatch {
                expected: self.trunc.nvars(),
                found: form.dim(),
            });
        }
        Ok(())
    }

    /// Twisted product with respect to `form`.
    pub fn twisted_mul(&self, other: &Self, form: &BilinearForm) -> Result<Self, SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::IncompatibleTruncation);
        }
        self.check_form(form)?;
        let max = self.trunc.max_height();
        let mut out = Self::zero(&self.trunc);
        for (a, ca) in &self.coeffs {
            let ha = a.height();
            for (b, cb) in &other.coeffs {
                if ha + b.height() > max {
                    continue;
                }
                let w = ca.times(cb).mul_q_pow(-form.pair(a, b));
                out.add_term(a.add(b), w);
            }
        }
        Ok(out)
    }

    /// The two-sided inverse for the twisted product.
    pub fn twisted_inverse(&self, form: &BilinearForm) -> Result<Self, SeriesError> {
        self.check_form(form)?;
        let a0_inv = self.constant_term().recip().ok_or(SeriesError::NotInvertible)?;
        let mut g = Self::constant(&self.trunc, a0_inv.clone());
        for alpha in self.trunc.support().into_iter().skip(1) {
            let mut acc = RationalFunction::zero();
            for (beta, ab) in &self.coeffs {
                if beta.is_zero() || !beta.fits_in(&alpha) {
                    continue;
                }
                let rest = alpha.checked_sub(beta).expect("beta <= alpha");
                if let Some(gr) = g.coeffs.get(&rest) {
                    acc = acc + (ab * gr).mul_q_pow(-form.pair(beta, &rest));
                }
            }
            g.add_term(alpha, -(&acc * &a0_inv));
        }
        Ok(g)
    }

    /// `T(x^α) = q^{T(α)} x^α` for the quadratic form of `form`.
    pub fn apply_t(&self, form: &BilinearForm) -> Result<Self, SeriesError> {
        self.check_form(form)?;
        Ok(self.graded_rescale(|a| form.quadratic(a)))
    }

    /// `S_λ(x^α) = q^{λ·α} x^α`.
    pub fn apply_s_lambda(&self, lambda: &[i64]) -> Result<Self, SeriesError> {
        if lambda.len() != self.trunc.nvars() {
            return Err(SeriesError::DimensionMismatch {
                expected: self.trunc.nvars(),
                found: lambda.len(),
            });
        }
        Ok(self.graded_rescale(|a| {
            a.entries().iter().zip(lambda).map(|(&x, &l)| x as i64 * l).sum()
        }))
    }

    fn graded_rescale(&self, weight: impl Fn(&DimVector) -> i64) -> Self {
        let mut out = Self::zero(&self.trunc);
        for (a, c) in &self.coeffs {
            out.add_term(a.clone(), c.mul_q_pow(weight(a)));
        }
        out
    }

    /// `q -> 1/q` on every coefficient.
    pub fn bar(&self) -> Self {
        self.map_coeffs(RationalFunction::bar)
    }
}
