use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::zpoly::ZPoly;
use super::{QFieldError, QPoly};

/// An element of `Q(q)`.
///
/// Stored as `num / den` with `num, den` in `Z[q]`, `den` nonzero with
/// positive leading coefficient, `num` and `den` coprime in `Q[q]`, and the
/// integer content of the pair jointly 1. This form is unique, so derived
/// equality is value equality. [`RationalFunction::numer`] and
/// [`RationalFunction::denom`] expose the equivalent normalization with a
/// monic denominator over `Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: ZPoly,
    den: ZPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        RationalFunction { num: ZPoly::constant(n), den: ZPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RationalFunction {
            num: ZPoly::constant(r.numer().clone()),
            den: ZPoly::constant(r.denom().clone()),
        }
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = ZPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RationalFunction { num: m, den: ZPoly::one() }
        } else {
            RationalFunction { num: ZPoly::one(), den: m }
        }
    }

    /// `1 - q^k`, `k >= 1`.
    pub fn one_minus_q_pow(k: usize) -> Self {
        Self::from_zpoly(ZPoly::one_minus_q_pow(k))
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        let (d, z) = p.to_zpoly();
        Self::normalized(z, ZPoly::constant(d))
    }

    /// `num / den`; fails when `den` is zero.
    pub fn from_qpolys(num: &QPoly, den: &QPoly) -> Result<Self, QFieldError> {
        if den.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        let (dn, zn) = num.to_zpoly();
        let (dd, zd) = den.to_zpoly();
        Ok(Self::normalized(zn.scale(&dd), zd.scale(&dn)))
    }

    pub(crate) fn from_zpoly(num: ZPoly) -> Self {
        Self::normalized(num, ZPoly::one())
    }

    pub(crate) fn from_zpolys(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(num, den)
    }

    fn normalized(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = ZPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::fix_content(num, den)
    }

    /// Assumes `num`, `den` coprime as polynomials.
    fn fix_content(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = num.content().gcd(&den.content());
        if den.lc().is_negative() {
            c = -c;
        }
        RationalFunction {
            num: num.div_scalar_exact(&c),
            den: den.div_scalar_exact(&c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Q[q]`.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Numerator, scaled so that [`RationalFunction::denom`] is monic.
    pub fn numer(&self) -> QPoly {
        let scale = BigRational::new(BigInt::one(), self.den.lc().clone());
        QPoly::from_zpoly(&self.num, &scale)
    }

    /// Monic denominator.
    pub fn denom(&self) -> QPoly {
        let scale = BigRational::new(BigInt::one(), self.den.lc().clone());
        QPoly::from_zpoly(&self.den, &scale)
    }

    /// The value as a polynomial, if it is one.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        self.is_polynomial().then(|| self.numer())
    }

    /// The value as a constant, if it has no `q`-dependence.
    pub fn to_constant(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| {
            let n = self.num.coeffs().first().cloned().unwrap_or_default();
            BigRational::new(n, self.den.lc().clone())
        })
    }

    /// Multiplication by `q^k`, `k` of either sign.
    pub fn mul_q_pow(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let n = k.unsigned_abs() as usize;
        let (num, den) = if k > 0 {
            let cancel = n.min(self.den.q_valuation());
            (self.num.shift_up(n - cancel), self.den.shift_down(cancel))
        } else {
            let cancel = n.min(self.num.q_valuation());
            (self.num.shift_down(cancel), self.den.shift_up(n - cancel))
        };
        RationalFunction { num, den }
    }

    /// Adams operation `q -> q^k`.
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1, "Adams operation index must be positive");
        // coprimality survives the substitution q -> q^k
        RationalFunction {
            num: self.num.substitute_power(k as usize),
            den: self.den.substitute_power(k as usize),
        }
    }

    /// Conjugation `q -> 1/q`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let shift = self.den.degree() as i64 - self.num.degree() as i64;
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }.mul_q_pow(shift)
    }

    pub fn inv(&self) -> Result<Self, QFieldError> {
        if self.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { num, den })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, QFieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, v: &BigRational) -> Result<BigRational, QFieldError> {
        let d = self.den.eval_rational(v);
        if d.is_zero() {
            return Err(QFieldError::Pole { at: v.clone() });
        }
        Ok(self.num.eval_rational(v) / d)
    }

    /// Coefficients `c_0..=c_order` of the expansion in powers of `q - 1`.
    pub fn taylor_at_one(&self, order: usize) -> Result<Vec<BigRational>, QFieldError> {
        let den = self.den.taylor_shift_one();
        if den.first().is_none_or(Zero::is_zero) {
            return Err(QFieldError::Pole { at: BigRational::one() });
        }
        let num = self.num.taylor_shift_one();
        let at = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        // power-series division num / den in e = q - 1
        let d0 = BigRational::from_integer(den[0].clone());
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = BigRational::from_integer(at(&num, n));
            for (k, c) in out.iter().enumerate() {
                let dk = at(&den, n - k);
                if !dk.is_zero() {
                    acc -= c * BigRational::from_integer(dk);
                }
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }

    /// Total degree bound `max(deg num, deg den)`, a cheap size measure.
    pub fn height(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let a = self.num.scale(rhs.den.lc());
            let b = rhs.num.scale(self.den.lc());
            let d = self.den.lc() * rhs.den.lc();
            return RationalFunction::fix_content(a.add(&b), ZPoly::constant(d));
        }
        // Henrici: only gcd(num, g) can cancel
        let g = ZPoly::gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let den = b1.mul(&rhs.den);
        if g.is_constant() {
            return RationalFunction::fix_content(num, den);
        }
        let h = ZPoly::gcd(&num, &g);
        if h.is_one() {
            RationalFunction::fix_content(num, den)
        } else {
            RationalFunction::fix_content(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let cross = |n: &ZPoly, d: &ZPoly| -> (ZPoly, ZPoly) {
            if d.is_constant() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = ZPoly::gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
            }
        };
        let (a, d) = cross(&self.num, &rhs.den);
        let (c, b) = cross(&rhs.num, &self.den);
        RationalFunction::fix_content(a.mul(&c), b.mul(&d))
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// Panics on division by zero; use [`RationalFunction::checked_div`] to
/// handle it.
impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numer();
        let den = self.denom();
        if den.degree() == Some(0) {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionRepr {
    num: QPoly,
    den: QPoly,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalFunctionRepr { num: self.numer(), den: self.denom() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RationalFunctionRepr::deserialize(d)?;
        RationalFunction::from_qpolys(&repr.num, &repr.den).map_err(serde::de::Error::custom)
    }
}
