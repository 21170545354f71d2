//! λ-ring operations: Adams operations, ordinary `exp`/`log` of truncated
//! series, and the plethystic `Exp`, `Log` and `Pow`.
//!
//! `exp` and `log` use the Euler operator `D(x^α) = height(α) x^α`, which is
//! a derivation: `D(exp a) = exp(a) D(a)` gives a triangular recursion over
//! the support instead of summing powers.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Coefficient, Series, SeriesError};
use crate::arith::mobius;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl<C: Coefficient> Series<C> {
    /// Adams operation `ψ_k`: `c x^α -> ψ_k(c) x^{kα}`.
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1, "Adams operation index must be positive");
        let mut out = Self::zero(&self.trunc);
        for (a, c) in &self.coeffs {
            if a.height() * k <= self.trunc.max_height {
                out.add_term(a.scale(k), c.adams(k));
            }
        }
        out
    }

    /// Truncated exponential `Σ a^n / n!`; requires a zero constant term.
    pub fn exp_plain(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::one(&self.trunc);
        for alpha in self.trunc.support().into_iter().skip(1) {
            let mut acc = C::zero();
            for (beta, ab) in &self.coeffs {
                if !beta.fits_in(&alpha) {
                    continue;
                }
                let rest = alpha.checked_sub(beta).expect("beta <= alpha");
                if let Some(e) = out.coeffs.get(&rest) {
                    let w = C::from_rational(&ratio(beta.height() as i64, 1));
                    acc = acc.plus(&w.times(ab).times(e));
                }
            }
            let c = acc.times(&C::from_rational(&ratio(1, alpha.height() as i64)));
            out.add_term(alpha, c);
        }
        Ok(out)
    }

    /// Truncated logarithm; requires constant term 1.
    pub fn log_plain(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != C::one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let mut out = Self::zero(&self.trunc);
        for alpha in self.trunc.support().into_iter().skip(1) {
            let mut acc = C::zero();
            for (gamma, fg) in &self.coeffs {
                if gamma.is_zero() || gamma == &alpha || !gamma.fits_in(&alpha) {
                    continue;
                }
                let beta = alpha.checked_sub(gamma).expect("gamma <= alpha");
                if let Some(l) = out.coeffs.get(&beta) {
                    let w = C::from_rational(&ratio(beta.height() as i64, 1));
                    acc = acc.plus(&w.times(l).times(fg));
                }
            }
            let scaled = acc.times(&C::from_rational(&ratio(1, alpha.height() as i64)));
            let c = self.coeff(&alpha).minus(&scaled);
            out.add_term(alpha, c);
        }
        Ok(out)
    }

    /// Plethystic exponential `Exp(a) = exp(Σ_k ψ_k(a)/k)`.
    ///
    /// `ψ_k(a)` starts in height `k`, so summing `k <= max_height` is exact.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut sum = Self::zero(&self.trunc);
        for k in 1..=self.trunc.max_height {
            let term = self.adams(k).scale(&C::from_rational(&ratio(1, k as i64)));
            sum = sum.add(&term)?;
        }
        sum.exp_plain()
    }

    /// Plethystic logarithm `Log(f) = Σ_k μ(k)/k ψ_k(log f)`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let l = self.log_plain()?;
        let mut out = Self::zero(&self.trunc);
        for k in 1..=self.trunc.max_height {
            let m = mobius(k);
            if m == 0 {
                continue;
            }
            let term = l.adams(k).scale(&C::from_rational(&ratio(m as i64, k as i64)));
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `Pow(f, g) = Exp(g Log f)`; requires `f` to have constant term 1.
    pub fn pow(&self, g: &Self) -> Result<Self, SeriesError> {
        g.mul(&self.log()?)?.exp()
    }

    /// Ordinary power `f^g = exp(g log f)` for `f` with constant term 1.
    pub fn pow_plain(&self, g: &Self) -> Result<Self, SeriesError> {
        g.mul(&self.log_plain()?)?.exp_plain()
    }

    /// The elements `g_d` with `Σ_{d | n} d g_d = ψ_n(g)`, for
    /// `d = 1..=max_height`, by Möbius inversion.
    pub fn power_formula_exponents(&self) -> Vec<Self> {
        let max = self.trunc.max_height;
        (1..=max)
            .map(|d| {
                let mut acc = Self::zero(&self.trunc);
                for k in crate::arith::divisors(d) {
                    let m = mobius(d / k);
                    if m == 0 {
                        continue;
                    }
                    let term = self.adams(k).scale(&C::from_rational(&ratio(m as i64, d as i64)));
                    acc = acc.add(&term).expect("same truncation");
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{DimVector, TruncationSpec};
    use super::*;
    use crate::qfield::RationalFunction;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn rf(n: i64) -> RationalFunction {
        RationalFunction::from_int(n)
    }

    #[test]
    fn exp_of_zero_is_one() {
        let t = TruncationSpec::new(2, 4).unwrap();
        assert_eq!(Series::<RationalFunction>::zero(&t).exp().unwrap(), Series::one(&t));
        assert_eq!(Series::<RationalFunction>::one(&t).log().unwrap(), Series::zero(&t));
    }

    #[test]
    fn exp_of_minus_x_is_one_minus_x() {
        let t = TruncationSpec::new(1, 7).unwrap();
        let x = Series::monomial(&t, dv(&[1]), rf(1)).unwrap();
        let expected = Series::one(&t).sub(&x).unwrap();
        assert_eq!(x.neg().exp().unwrap(), expected);
    }

    #[test]
    fn adams_substitutes() {
        let t = TruncationSpec::new(1, 4).unwrap();
        let a = Series::monomial(&t, dv(&[1]), RationalFunction::one_minus_q_pow(1).inv().unwrap())
            .unwrap();
        let expected =
            Series::monomial(&t, dv(&[2]), RationalFunction::one_minus_q_pow(2).inv().unwrap())
                .unwrap();
        assert_eq!(a.adams(2), expected);
        assert_eq!(a.adams(1), a);
    }

    #[test]
    fn precondition_errors() {
        let t = TruncationSpec::new(1, 3).unwrap();
        let one = Series::<RationalFunction>::one(&t);
        assert_eq!(one.exp(), Err(SeriesError::NonzeroConstantTerm));
        let two = Series::constant(&t, rf(2));
        assert_eq!(two.log(), Err(SeriesError::ConstantTermNotOne));
        assert_eq!(Series::<RationalFunction>::zero(&t).log(), Err(SeriesError::ConstantTermNotOne));
    }

    #[test]
    fn exp_plain_matches_power_sum() {
        // exp(x) over Q: coefficients 1/n!
        let t = TruncationSpec::new(1, 6).unwrap();
        let x = Series::<BigRational>::monomial(&t, dv(&[1]), ratio(1, 1)).unwrap();
        let e = x.exp_plain().unwrap();
        let mut fact = 1i64;
        for n in 0..=6u32 {
            if n > 0 {
                fact *= n as i64;
            }
            assert_eq!(e.coeff(&dv(&[n])), ratio(1, fact));
        }
    }

    fn small_q_series(nvars: usize, h: u32) -> impl Strategy<Value = Series<BigRational>> {
        let t = TruncationSpec::new(nvars, h).unwrap();
        let support = t.support();
        prop::collection::vec(-3i64..=3, support.len()).prop_map(move |c| {
            Series::from_terms(
                &t,
                support.iter().cloned().zip(c).skip(1).map(|(a, v)| (a, ratio(v, 1))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn plain_exp_log_inverse(a in small_q_series(2, 5)) {
            let e = a.exp_plain().unwrap();
            prop_assert_eq!(e.log_plain().unwrap(), a.clone());
            // exp(a) = Σ a^n / n!
            let mut direct = Series::one(a.trunc());
            let mut power = Series::one(a.trunc());
            let mut fact = 1i64;
            for n in 1..=5 {
                power = power.mul(&a).unwrap();
                fact *= n;
                direct = direct.add(&power.scale(&ratio(1, fact))).unwrap();
            }
            prop_assert_eq!(e, direct);
        }

        #[test]
        fn adams_composes(a in small_q_series(2, 5), j in 1u32..3, k in 1u32..3) {
            prop_assert_eq!(a.adams(j).adams(k), a.adams(j * k));
        }
    }
}
