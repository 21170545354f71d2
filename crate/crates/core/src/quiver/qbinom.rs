use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::binomial;
use crate::qfield::zpoly::ZPoly;
use crate::qfield::RationalFunction;
use crate::series::{DimVector, Series, SeriesError, TruncationSpec};

/// Upper argument of a q-binomial coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QBinomTop {
    Finite(i64),
    Infinity,
}

/// The Gaussian binomial `(N choose m)_q` as an integer polynomial.
fn gaussian(n: u64, m: u64) -> ZPoly {
    let mut g = ZPoly::one();
    for i in 1..=m {
        g = g
            .mul(&ZPoly::one_minus_q_pow((n - m + i) as usize))
            .div_exact(&ZPoly::one_minus_q_pow(i as usize))
            .expect("partial products are Gaussian polynomials");
    }
    g
}

/// `[n,m] = Π_{i=1}^m (1-q^{n+i}) / (1-q^i)` and `[∞,m] = 1 / Π_{i=1}^m (1-q^i)`.
pub fn qbinom(n: QBinomTop, m: u32) -> RationalFunction {
    let m = m as i64;
    match n {
        QBinomTop::Infinity => {
            let den = (1..=m).fold(ZPoly::one(), |acc, i| acc.mul(&ZPoly::one_minus_q_pow(i as usize)));
            RationalFunction::from_zpolys(ZPoly::one(), den)
        }
        QBinomTop::Finite(n) if n >= 0 => {
            RationalFunction::from_zpoly(gaussian((n + m) as u64, m as u64))
        }
        // one factor is 1 - q^0
        QBinomTop::Finite(n) if n >= -m => RationalFunction::zero(),
        QBinomTop::Finite(n) => {
            // 1 - q^{-k} = -q^{-k} (1 - q^k) with k = s, s-1, ..., s-m+1
            let s = -n - 1;
            let shift: i64 = (s - m + 1..=s).sum();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let g = gaussian(s as u64, m as u64).scale(&BigInt::from(sign));
            RationalFunction::from_zpoly(g).mul_q_pow(-shift)
        }
    }
}

/// `[λ,α] = Π_i [λ^i, α^i]`.
pub fn qbinom_vec(lambda: &[QBinomTop], alpha: &DimVector) -> Result<RationalFunction, SeriesError> {
    if lambda.len() != alpha.len() {
        return Err(SeriesError::DimensionMismatch { expected: alpha.len(), found: lambda.len() });
    }
    let mut acc = RationalFunction::one();
    for (&l, &a) in lambda.iter().zip(alpha.entries()) {
        let b = qbinom(l, a);
        if b.is_zero() {
            return Ok(b);
        }
        acc = acc * b;
    }
    Ok(acc)
}

/// `p = Σ_α [∞,α] x^α`
pub fn p_series(trunc: &TruncationSpec) -> Series {
    let inf = vec![QBinomTop::Infinity; trunc.nvars()];
    let terms = trunc
        .support()
        .into_iter()
        .map(|a| {
            let c = qbinom_vec(&inf, &a).expect("lengths agree");
            (a, c)
        })
        .collect::<Vec<_>>();
    Series::from_terms(trunc, terms).expect("support has the right arity")
}

/// `p(λ) = Σ_α [λ,α] x^α`
pub fn p_lambda_series(lambda: &[i64], trunc: &TruncationSpec) -> Result<Series, SeriesError> {
    if lambda.len() != trunc.nvars() {
        return Err(SeriesError::DimensionMismatch { expected: trunc.nvars(), found: lambda.len() });
    }
    let top: Vec<QBinomTop> = lambda.iter().map(|&l| QBinomTop::Finite(l)).collect();
    let mut terms = Vec::new();
    for a in trunc.support() {
        terms.push((a.clone(), qbinom_vec(&top, &a)?));
    }
    Series::from_terms(trunc, terms)
}

/// `p(λ)` at `q = 1`: `Π_i (1 - x_i)^{-λ^i - 1}`, whose coefficient at
/// `x^α` is `Π_i C(λ^i + α^i, α^i)`.
pub fn p_lambda_at_one(
    lambda: &[i64],
    trunc: &TruncationSpec,
) -> Result<Series<BigRational>, SeriesError> {
    if lambda.len() != trunc.nvars() {
        return Err(SeriesError::DimensionMismatch { expected: trunc.nvars(), found: lambda.len() });
    }
    let terms = trunc.support().into_iter().map(|a| {
        let c: BigInt = lambda
            .iter()
            .zip(a.entries())
            .map(|(&l, &k)| binomial(l + k as i64, k))
            .product();
        (a, BigRational::from_integer(c))
    });
    Series::from_terms(trunc, terms.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QPoly;
    use crate::series::Coefficient;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    /// The defining product, computed naively in `Q(q)`.
    fn qbinom_naive(n: i64, m: u32) -> RationalFunction {
        let mut acc = RationalFunction::one();
        for i in 1..=m as i64 {
            let e = n + i;
            let num = RationalFunction::one() - RationalFunction::q_pow(e);
            acc = acc * num / RationalFunction::one_minus_q_pow(i as usize);
        }
        acc
    }

    #[test]
    fn examples() {
        for n in -3..4 {
            assert!(qbinom(QBinomTop::Finite(n), 0).is_one());
        }
        for n in 1..6 {
            assert!(qbinom(QBinomTop::Finite(-n), n as u32).is_zero());
        }
        assert_eq!(qbinom(QBinomTop::Finite(1), 1), RationalFunction::from_qpoly(&QPoly::from_ints(&[1, 1])));
        let inf11 = qbinom_vec(&[QBinomTop::Infinity; 2], &dv(&[1, 1])).unwrap();
        assert_eq!(inf11, RationalFunction::one_minus_q_pow(1).pow(2).inv().unwrap());
        assert!(qbinom_vec(&[QBinomTop::Infinity], &dv(&[1, 1])).is_err());
    }

    #[test]
    fn p_lambda_at_one_examples() {
        let t = TruncationSpec::new(2, 4).unwrap();
        let geom = p_lambda_at_one(&[0, 0], &t).unwrap();
        assert!(geom.terms().all(|(_, c)| c == &BigRational::from_integer(1.into())));
        assert_eq!(geom.num_terms(), t.support().len());
        assert_eq!(p_lambda_at_one(&[-1, -1], &t).unwrap(), Series::one(&t));
        let t1 = TruncationSpec::new(1, 5).unwrap();
        let s = p_lambda_at_one(&[3], &t1).unwrap();
        for k in 0..=5u32 {
            assert_eq!(s.coeff(&dv(&[k])), BigRational::from_integer(binomial(3 + k as i64, k)));
        }
    }

    #[test]
    fn at_q_equal_one_matches_binomial() {
        for n in -8i64..8 {
            for m in 0..6u32 {
                let v = qbinom(QBinomTop::Finite(n), m).eval(&BigRational::from_integer(1.into())).unwrap();
                assert_eq!(v, BigRational::from_integer(binomial(n + m as i64, m)), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn taylor_slice_of_p_lambda() {
        let t = TruncationSpec::new(2, 4).unwrap();
        for lambda in [[0, 0], [2, -1], [-3, 1], [-5, -2]] {
            let p = p_lambda_series(&lambda, &t).unwrap();
            let at_one = p
                .try_map_coeffs(|_, c| c.taylor_at_one(0).map(|v| v[0].clone()))
                .unwrap();
            assert_eq!(at_one, p_lambda_at_one(&lambda, &t).unwrap());
        }
    }

    #[test]
    fn p_has_unit_constant_term() {
        let t = TruncationSpec::new(3, 3).unwrap();
        assert!(p_series(&t).constant_term().is_one());
        assert!(p_lambda_series(&[1, 2], &t).is_err());
        assert!(<RationalFunction as Coefficient>::is_zero(&p_series(&t).coeff(&dv(&[4, 0, 0]))));
    }

    proptest! {
        #[test]
        fn closed_forms_match_product(n in -10i64..10, m in 0u32..7) {
            prop_assert_eq!(qbinom(QBinomTop::Finite(n), m), qbinom_naive(n, m));
        }
    }
}
