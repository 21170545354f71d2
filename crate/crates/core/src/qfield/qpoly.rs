use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::zpoly::ZPoly;
use super::{format_rational, parse_rational};

/// A polynomial in `q` with rational coefficients, stored in ascending
/// degree. The highest stored coefficient is nonzero; the zero polynomial
/// has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `c * q^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `q^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// `q -> q^k`
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1, "Adams operation index must be positive");
        let k = k as usize;
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Coefficients `c_n` with `self = sum_n c_n (q - 1)^n`.
    pub fn in_qminus1_basis(&self) -> Vec<BigRational> {
        let (scale, z) = self.to_zpoly();
        z.taylor_shift_one()
            .into_iter()
            .map(|c| BigRational::from_integer(c) / &scale)
            .collect()
    }

    /// Inverse of [`QPoly::in_qminus1_basis`].
    pub fn from_qminus1_basis(coeffs: &[BigRational]) -> Self {
        // Horner in (q - 1)
        let q_minus_1 = Self::from_ints(&[-1, 1]);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&q_minus_1).add(&Self::new(vec![c.clone()]));
        }
        acc
    }

    /// Splits into a positive integer `d` and an integer polynomial `z` with
    /// `self = z / d`.
    pub(crate) fn to_zpoly(&self) -> (BigInt, ZPoly) {
        let d = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let z = ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&d / c.denom()))
                .collect(),
        );
        (d, z)
    }

    pub(crate) fn from_zpoly(z: &ZPoly, scale: &BigRational) -> Self {
        Self::new(
            z.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()) * scale)
                .collect(),
        )
    }
}

impl fmt::Display for QPoly {
    /// Renders as e.g. `q^3 - 2*q + 1/2`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write_terms(f, &self.coeffs, "q", false)
    }
}

/// Shared pretty printer for polynomials in a named variable.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[BigRational],
    var: &str,
    ascending: bool,
) -> fmt::Result {
    let mut first = true;
    let order: Vec<usize> = if ascending {
        (0..coeffs.len()).collect()
    } else {
        (0..coeffs.len()).rev().collect()
    };
    for i in order {
        let c = &coeffs[i];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    Ok(())
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::new(coeffs))
    }
}
