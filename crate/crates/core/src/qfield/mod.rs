//! Exact arithmetic in the coefficient field `Q(q)`.
//!
//! [`QPoly`] is a polynomial with rational coefficients and
//! [`RationalFunction`] a normalized quotient of polynomials. Both are
//! immutable values. Rationals are `num_rational::BigRational`.

mod qpoly;
mod ratfunc;
pub(crate) mod zpoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use qpoly::QPoly;
pub(crate) use qpoly::write_terms;
pub use ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {at}")]
    Pole { at: BigRational },
    #[error("malformed rational number {0:?}")]
    Parse(String),
}

/// Renders a rational as `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<BigRational, QFieldError> {
    let bad = || QFieldError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
