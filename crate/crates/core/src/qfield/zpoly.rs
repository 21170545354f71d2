//! Dense univariate polynomials over `Z`, the storage layer underneath
//! [`RationalFunction`](super::RationalFunction).
//!
//! Coefficients are stored in ascending degree with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        ZPoly { coeffs }
    }

    /// `1 - q^k`
    pub fn one_minus_q_pow(k: usize) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] = BigInt::one();
        coeffs[k] = -BigInt::one();
        ZPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    /// Largest `k` with `q^k` dividing `self`; 0 for the zero polynomial.
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    fn is_monomial(&self) -> bool {
        !self.is_zero() && self.q_valuation() == self.degree()
    }

    pub fn neg(&self) -> Self {
        ZPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (c, s) in coeffs.iter_mut().zip(&other.coeffs) {
            *c -= s;
        }
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides every coefficient by `c`; caller guarantees exactness.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|x| x / c).collect() }
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_positive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Divides by `q^k`; caller guarantees `k <= q_valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        ZPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    /// `q -> q^k`
    pub fn substitute_power(&self, k: usize) -> Self {
        if k == 1 || self.is_constant() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        ZPoly { coeffs }
    }

    /// `q^deg * f(1/q)`
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Coefficients of `f(1 + e)` in powers of `e`.
    pub fn taylor_shift_one(&self) -> Vec<BigInt> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let next = c[j + 1].clone();
                c[j] += next;
            }
        }
        c
    }

    /// Exact quotient `self / d` over `Z`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let db = d.degree();
        let lb = d.lc();
        let mut r = self.coeffs.clone();
        let qlen = self.degree() - db + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &r[i + db];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[i + j] -= &qi * dc;
                }
            }
            quot[i] = qi;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quot))
    }

    fn max_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.primitive_positive();
        }
        if b.is_zero() {
            return a.primitive_positive();
        }
        let k = a.q_valuation().min(b.q_valuation());
        if a.is_monomial() || b.is_monomial() {
            return Self::monomial(BigInt::one(), k);
        }
        let a1 = a.shift_down(a.q_valuation());
        let b1 = b.shift_down(b.q_valuation());
        Self::gcd_unit_constant(&a1, &b1).shift_up(k)
    }

    fn gcd_unit_constant(a: &Self, b: &Self) -> Self {
        if a.is_constant() || b.is_constant() {
            return Self::one();
        }
        let pa = a.primitive_positive();
        let pb = b.primitive_positive();
        if pa == pb {
            return pa;
        }
        heuristic_gcd(&pa, &pb).unwrap_or_else(|| prs_gcd(&pa, &pb))
    }

    /// Remainder of `lc(b)^k * self` modulo `b`, up to a constant factor.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree();
        let lb = b.lc().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= db {
            let lr = r.lc().clone();
            let shift = r.degree() - db;
            r = r.scale(&lb).sub(&b.shift_up(shift).scale(&lr));
        }
        r
    }
}

const HEU_GCD_ATTEMPTS: usize = 8;

/// Heuristic gcd by evaluation at a large integer and `x`-adic
/// reconstruction. Inputs are primitive of positive degree. The evaluation
/// point always exceeds `2 * min(|a|, |b|) + 2`, so any reconstructed
/// common divisor is the gcd.
fn heuristic_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let an = a.max_norm();
    let bn = b.max_norm();
    let bound = BigInt::from(2) * (&an).min(&bn) + BigInt::from(29);
    let ratio = (&an / a.lc().abs()).min(&bn / b.lc().abs());
    let mut x = bound.max(BigInt::from(2) * ratio + BigInt::from(2));
    for _ in 0..HEU_GCD_ATTEMPTS {
        let av = a.eval_int(&x);
        let bv = b.eval_int(&x);
        if !av.is_zero() && !bv.is_zero() {
            let h = av.gcd(&bv);
            let candidate = interpolate(h, &x).primitive_positive();
            if !candidate.is_zero()
                && a.div_exact(&candidate).is_some()
                && b.div_exact(&candidate).is_some()
            {
                return Some(candidate);
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn interpolate(mut h: BigInt, x: &BigInt) -> ZPoly {
    let half = x / 2;
    let mut coeffs = Vec::new();
    while !h.is_zero() {
        let mut g = h.mod_floor(x);
        if g > half {
            g -= x;
        }
        h = (h - &g) / x;
        coeffs.push(g);
    }
    ZPoly::new(coeffs)
}

/// Primitive polynomial remainder sequence.
fn prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.primitive_positive(), b.primitive_positive())
    } else {
        (b.primitive_positive(), a.primitive_positive())
    };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).primitive_positive();
        a = b;
        b = r;
    }
    a.primitive_positive()
}
