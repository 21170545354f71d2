//! Truncated multivariate power series in the variables `x_i`, one per
//! quiver vertex, with the λ-ring operations (Adams operations, plethystic
//! `Exp`/`Log`/`Pow`) and the twisted product.
//!
//! A [`Series`] lives in a [`TruncationSpec`]: only monomials `x^α` with
//! `height(α) <= max_height` and passing the support filter are stored.
//! Every operation is exact modulo the discarded terms.

mod coefficient;
mod dimvec;
mod lambda;
mod twisted;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::qfield::{QFieldError, RationalFunction};

pub use coefficient::Coefficient;
pub use dimvec::DimVector;
pub use twisted::BilinearForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have incompatible truncations")]
    IncompatibleTruncation,
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("series is not invertible: zero constant term")]
    NotInvertible,
    #[error("Exp requires a zero constant term")]
    NonzeroConstantTerm,
    #[error("Log requires constant term 1")]
    ConstantTermNotOne,
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("malformed series: {0}")]
    Malformed(String),
    #[error(transparent)]
    QField(#[from] QFieldError),
}

/// Restricts the support of a series beyond the height bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportFilter {
    All,
    /// Keeps the zero vector and the vectors `α` with
    /// `theta(α) / height(α) = mu`.
    Slope { theta: Vec<i64>, mu: BigRational },
}

impl SupportFilter {
    pub fn accepts(&self, alpha: &DimVector) -> bool {
        match self {
            SupportFilter::All => true,
            SupportFilter::Slope { theta, mu } => {
                if alpha.is_zero() {
                    return true;
                }
                let t: i64 = alpha
                    .entries()
                    .iter()
                    .zip(theta)
                    .map(|(&a, &th)| a as i64 * th)
                    .sum();
                BigRational::new(BigInt::from(t), BigInt::from(alpha.height())) == *mu
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSpec {
    nvars: usize,
    max_height: u32,
    filter: SupportFilter,
}

impl TruncationSpec {
    pub fn new(nvars: usize, max_height: u32) -> Result<Self, SeriesError> {
        if max_height < 1 {
            return Err(SeriesError::InvalidTruncation("max_height must be at least 1".into()));
        }
        Ok(TruncationSpec { nvars, max_height, filter: SupportFilter::All })
    }

    pub fn with_filter(mut self, filter: SupportFilter) -> Result<Self, SeriesError> {
        if let SupportFilter::Slope { theta, .. } = &filter {
            if theta.len() != self.nvars {
                return Err(SeriesError::DimensionMismatch {
                    expected: self.nvars,
                    found: theta.len(),
                });
            }
        }
        self.filter = filter;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_height(&self) -> u32 {
        self.max_height
    }

    pub fn filter(&self) -> &SupportFilter {
        &self.filter
    }

    pub fn accepts(&self, alpha: &DimVector) -> bool {
        alpha.len() == self.nvars && alpha.height() <= self.max_height && self.filter.accepts(alpha)
    }

    /// Every admissible vector, ordered by height and then lexicographically.
    pub fn support(&self) -> Vec<DimVector> {
        let mut out = Vec::new();
        for h in 0..=self.max_height {
            let mut buf = vec![0u32; self.nvars];
            compositions(h, 0, &mut buf, &mut |v| {
                let d = DimVector::new(v.to_vec());
                if self.filter.accepts(&d) {
                    out.push(d);
                }
            });
            if self.nvars == 0 {
                break;
            }
        }
        out
    }

    fn check_arity(&self, alpha: &DimVector) -> Result<(), SeriesError> {
        if alpha.len() != self.nvars {
            return Err(SeriesError::DimensionMismatch { expected: self.nvars, found: alpha.len() });
        }
        Ok(())
    }
}

/// Weak compositions of `h` into the slots `buf[pos..]`, in lexicographic
/// order.
fn compositions(h: u32, pos: usize, buf: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if pos + 1 >= buf.len() {
        if let Some(last) = buf.last_mut() {
            *last = h;
            f(buf);
        } else if h == 0 {
            f(buf);
        }
        return;
    }
    for v in 0..=h {
        buf[pos] = v;
        compositions(h - v, pos + 1, buf, f);
    }
}

/// A truncated power series with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct Series<C = RationalFunction> {
    trunc: TruncationSpec,
    coeffs: BTreeMap<DimVector, C>,
}

impl<C: Coefficient> Series<C> {
    pub fn zero(trunc: &TruncationSpec) -> Self {
        Series { trunc: trunc.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: &TruncationSpec) -> Self {
        Self::constant(trunc, C::one())
    }

    pub fn constant(trunc: &TruncationSpec, c: C) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(DimVector::zero(trunc.nvars), c);
        s
    }

    /// `c * x^alpha`; the zero series when `alpha` lies outside the
    /// truncation.
    pub fn monomial(trunc: &TruncationSpec, alpha: DimVector, c: C) -> Result<Self, SeriesError> {
        Self::from_terms(trunc, [(alpha, c)])
    }

    /// Sums the given terms; terms beyond the truncation are dropped.
    pub fn from_terms(
        trunc: &TruncationSpec,
        terms: impl IntoIterator<Item = (DimVector, C)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(trunc);
        for (alpha, c) in terms {
            trunc.check_arity(&alpha)?;
            s.add_term(alpha, c);
        }
        Ok(s)
    }

    /// Adds `c x^alpha` in place, respecting the truncation.
    pub(crate) fn add_term(&mut self, alpha: DimVector, c: C) {
        if c.is_zero() || !self.trunc.accepts(&alpha) {
            return;
        }
        match self.coeffs.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().plus(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    /// Coefficient of `x^alpha` (zero when absent).
    pub fn coeff(&self, alpha: &DimVector) -> C {
        self.coeffs.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, alpha: &DimVector) -> Option<&C> {
        self.coeffs.get(alpha)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&DimVector::zero(self.trunc.nvars))
    }

    /// Nonzero terms in lexicographic order of the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&DimVector, &C)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::IncompatibleTruncation);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(C::negated)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.times(c))
    }

    /// Ordinary (commutative) Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let max = self.trunc.max_height;
        let mut out = Self::zero(&self.trunc);
        for (a, ca) in &self.coeffs {
            let ha = a.height();
            for (b, cb) in &other.coeffs {
                if ha + b.height() > max {
                    continue;
                }
                out.add_term(a.add(b), ca.times(cb));
            }
        }
        Ok(out)
    }

    pub fn pow_int(&self, n: u32) -> Result<Self, SeriesError> {
        let mut acc = Self::one(&self.trunc);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient; zero results are dropped.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut out = Series::<D>::zero(&self.trunc);
        for (a, c) in &self.coeffs {
            out.add_term(a.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient, E>(
        &self,
        f: impl Fn(&DimVector, &C) -> Result<D, E>,
    ) -> Result<Series<D>, E> {
        let mut out = Series::<D>::zero(&self.trunc);
        for (a, c) in &self.coeffs {
            out.add_term(a.clone(), f(a, c)?);
        }
        Ok(out)
    }

    /// Same coefficients under another truncation; terms outside it are
    /// dropped.
    pub fn retruncate(&self, trunc: &TruncationSpec) -> Result<Self, SeriesError> {
        Self::from_terms(trunc, self.coeffs.iter().map(|(a, c)| (a.clone(), c.clone())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(a, c)| serde_json::json!({ "alpha": a, "coeff": c.to_json() }))
            .collect();
        serde_json::json!({ "max_height": self.trunc.max_height, "terms": terms })
    }

    /// Parses the `{"max_height", "terms"}` form. `nvars` is required when
    /// the series has no terms.
    pub fn from_json(v: &serde_json::Value, nvars: Option<usize>) -> Result<Self, SeriesError> {
        let bad = |m: &str| SeriesError::Malformed(m.to_string());
        let max_height = v
            .get("max_height")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| bad("missing max_height"))?;
        let terms = v.get("terms").and_then(|t| t.as_array()).ok_or_else(|| bad("missing terms"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let alpha: DimVector = serde_json::from_value(t.get("alpha").cloned().unwrap_or_default())
                .map_err(|e| SeriesError::Malformed(e.to_string()))?;
            let coeff = C::from_json(t.get("coeff").ok_or_else(|| bad("missing coeff"))?)
                .map_err(SeriesError::Malformed)?;
            parsed.push((alpha, coeff));
        }
        let nvars = match (nvars, parsed.first()) {
            (Some(n), _) => n,
            (None, Some((a, _))) => a.len(),
            (None, None) => return Err(bad("cannot infer variable count of an empty series")),
        };
        let trunc = TruncationSpec::new(nvars, max_height as u32)?;
        Self::from_terms(&trunc, parsed)
    }
}

impl<C: Coefficient> Serialize for Series<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.to_json();
        let mut st = s.serialize_struct("Series", 2)?;
        st.serialize_field("max_height", &v["max_height"])?;
        st.serialize_field("terms", &v["terms"])?;
        st.end()
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by_key(|(a, _)| a.height());
        for (i, (a, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if a.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", a.monomial_string())?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

/// Rational-coefficient series in one variable rendered as a polynomial in
/// `var`, e.g. `1 - 2*t`.
pub fn univariate_string(s: &Series<BigRational>, var: &str) -> String {
    struct W<'a>(&'a [BigRational], &'a str);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.0.iter().all(|c| num_traits::Zero::is_zero(c)) {
                return write!(f, "0");
            }
            crate::qfield::write_terms(f, self.0, self.1, true)
        }
    }
    let n = s.trunc.max_height as usize;
    let mut coeffs = vec![<BigRational as num_traits::Zero>::zero(); n + 1];
    for (a, c) in s.terms() {
        coeffs[a.height() as usize] = c.clone();
    }
    W(&coeffs, var).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc(n: usize, h: u32) -> TruncationSpec {
        TruncationSpec::new(n, h).unwrap()
    }

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn rf(n: i64) -> RationalFunction {
        RationalFunction::from_int(n)
    }

    #[test]
    fn support_enumeration() {
        let t = trunc(2, 2);
        let s: Vec<Vec<u32>> = t.support().iter().map(|d| d.entries().to_vec()).collect();
        assert_eq!(
            s,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        let cone = t
            .clone()
            .with_filter(SupportFilter::Slope {
                theta: vec![1, 0],
                mu: BigRational::new(1.into(), 2.into()),
            })
            .unwrap();
        assert_eq!(cone.support(), vec![dv(&[0, 0]), dv(&[1, 1])]);
        assert!(TruncationSpec::new(1, 0).is_err());
    }

    #[test]
    fn product_examples() {
        let t = trunc(1, 4);
        let x = Series::monomial(&t, dv(&[1]), rf(1)).unwrap();
        let one = Series::one(&t);
        let a = one.add(&x).unwrap();
        let b = one.sub(&x).unwrap();
        assert_eq!(a.mul(&one).unwrap(), a);
        let expected = one.sub(&Series::monomial(&t, dv(&[2]), rf(1)).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn truncation_drops_high_terms() {
        let t = trunc(1, 2);
        let x = Series::monomial(&t, dv(&[1]), rf(1)).unwrap();
        assert_eq!(x.pow_int(3).unwrap(), Series::zero(&t));
        assert!(Series::monomial(&t, dv(&[3]), rf(1)).unwrap().is_zero());
        assert!(matches!(
            Series::monomial(&t, dv(&[1, 1]), rf(1)),
            Err(SeriesError::DimensionMismatch { .. })
        ));
        let other = trunc(1, 3);
        assert_eq!(x.mul(&Series::one(&other)), Err(SeriesError::IncompatibleTruncation));
    }

    #[test]
    fn json_round_trip() {
        let t = trunc(2, 3);
        let s = Series::from_terms(
            &t,
            [
                (dv(&[0, 0]), rf(1)),
                (dv(&[1, 0]), RationalFunction::one_minus_q_pow(1).inv().unwrap()),
                (dv(&[0, 2]), RationalFunction::q_pow(-2)),
            ],
        )
        .unwrap();
        let v = s.to_json();
        let alphas: Vec<_> = v["terms"].as_array().unwrap().iter().map(|t| t["alpha"].clone()).collect();
        assert_eq!(alphas, vec![serde_json::json!([0, 0]), serde_json::json!([0, 2]), serde_json::json!([1, 0])]);
        assert_eq!(v["max_height"], 3);
        let back = Series::<RationalFunction>::from_json(&v, None).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_value(&s).unwrap(), v);
    }
}
