use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qfield::{format_rational, parse_rational, RationalFunction};

/// Coefficient ring of a [`Series`](super::Series): `Q(q)` for the
/// `q`-deformed series, plain `Q` for their `q = 1` specializations.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn from_rational(r: &BigRational) -> Self;
    /// Adams operation on the coefficient alone (`q -> q^k`).
    fn adams(&self, k: u32) -> Self;
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, String>;
}

impl Coefficient for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_rational(r: &BigRational) -> Self {
        RationalFunction::from_rational(r)
    }
    fn adams(&self, k: u32) -> Self {
        RationalFunction::adams(self, k)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("rational function serializes")
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        serde_json::from_value(v.clone()).map_err(|e| e.to_string())
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| num_rational::Ratio::recip(self))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn adams(&self, _k: u32) -> Self {
        self.clone()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let s = v.as_str().ok_or("expected a rational string")?;
        parse_rational(s).map_err(|e| e.to_string())
    }
}
