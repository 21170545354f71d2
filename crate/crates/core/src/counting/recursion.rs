//! `f = Exp((a - Σ x_i)/(1-q))` for the zero stability, either from `a` or
//! through the recursion `(p(-Rα)·f)_α = 0`, and its expansion around
//! `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CountTable, CountingContext, CountingError};
use crate::arith::binomial;
use crate::qfield::{QFieldError, RationalFunction};
use crate::quiver::{qbinom_vec, QBinomTop};
use crate::series::{DimVector, Series};

/// `f` computed directly from the table of `a_α`.
pub fn f_series(ctx: &CountingContext, table: &CountTable) -> Result<Series, CountingError> {
    ctx.require_zero_stability()?;
    let trunc = ctx.trunc();
    let n = trunc.nvars();
    let a = table.to_series(trunc)?;
    let xs = Series::from_terms(trunc, (0..n).map(|i| (DimVector::unit(n, i), RationalFunction::one())))?;
    let inv = RationalFunction::one_minus_q_pow(1).inv()?;
    let f = a.sub(&xs)?.scale(&inv).exp()?;
    for (alpha, c) in f.terms() {
        if c.eval(&BigRational::from_integer(1.into())).is_err() {
            return Err(CountingError::PoleAtOne { alpha: alpha.clone() });
        }
    }
    Ok(f)
}

fn neg_ringel(ctx: &CountingContext, alpha: &DimVector) -> Vec<i64> {
    ctx.form().apply(alpha).into_iter().map(|v| -v).collect()
}

/// `f` from `f_0 = 1`, `f_α = -Σ_{0<β≤α} [-Rα, β] f_{α-β}`, without using
/// `a`.
pub fn f_recursive(ctx: &CountingContext) -> Result<Series, CountingError> {
    ctx.require_zero_stability()?;
    let mut f = Series::<RationalFunction>::one(ctx.trunc());
    for alpha in ctx.cone() {
        let top: Vec<QBinomTop> =
            neg_ringel(ctx, &alpha).into_iter().map(QBinomTop::Finite).collect();
        let lower: Vec<(DimVector, RationalFunction)> = f
            .terms()
            .filter(|(g, _)| g.fits_in(&alpha))
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect();
        let mut acc = RationalFunction::zero();
        for (gamma, fg) in lower {
            let beta = alpha.checked_sub(&gamma).expect("gamma <= alpha");
            let b = qbinom_vec(&top, &beta)?;
            acc = &acc + &(&b * &fg);
        }
        f.add_term(alpha, -acc);
    }
    Ok(f)
}

/// The same recursion run at `q = 1`, where `[λ,β]` becomes
/// `Π_i C(λ^i + β^i, β^i)`.
pub fn f_at_one(ctx: &CountingContext) -> Result<Series<BigRational>, CountingError> {
    ctx.require_zero_stability()?;
    let mut f = Series::<BigRational>::one(ctx.trunc());
    for alpha in ctx.cone() {
        let lambda = neg_ringel(ctx, &alpha);
        let lower: Vec<(DimVector, BigRational)> = f
            .terms()
            .filter(|(g, _)| g.fits_in(&alpha))
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect();
        let mut acc = BigRational::from_integer(0.into());
        for (gamma, fg) in lower {
            let beta = alpha.checked_sub(&gamma).expect("gamma <= alpha");
            let b: BigInt = lambda
                .iter()
                .zip(beta.entries())
                .map(|(&l, &k)| binomial(l + k as i64, k))
                .product();
            acc += BigRational::from_integer(b) * fg;
        }
        f.add_term(alpha, -acc);
    }
    Ok(f)
}

/// Slices `f = Σ_n f_n (q-1)^n` for `n = 0..=order`, coefficientwise.
pub fn specialize_at_one(f: &Series, order: usize) -> Result<Vec<Series<BigRational>>, CountingError> {
    let mut slices = vec![Series::<BigRational>::zero(f.trunc()); order + 1];
    for (alpha, c) in f.terms() {
        let taylor = c.taylor_at_one(order).map_err(|e| match e {
            QFieldError::Pole { .. } => CountingError::PoleAtOne { alpha: alpha.clone() },
            other => other.into(),
        })?;
        for (n, v) in taylor.into_iter().enumerate() {
            slices[n].add_term(alpha.clone(), v);
        }
    }
    Ok(slices)
}

/// `f_0, …, f_order` with `f = Σ_n f_n (q-1)^n`, via [`f_recursive`].
pub fn q1_expansion(ctx: &CountingContext, order: usize) -> Result<Vec<Series<BigRational>>, CountingError> {
    specialize_at_one(&f_recursive(ctx)?, order)
}
