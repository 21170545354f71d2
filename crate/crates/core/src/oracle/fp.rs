//! Arithmetic over a prime field `F_p` and dense matrices over it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::OracleError;
use crate::arith::is_prime;

/// An element of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: u32,
}

impl FpScalar {
    pub fn new(value: u64, p: u32) -> Result<Self, OracleError> {
        check_prime(p)?;
        Ok(FpScalar { value: (value % p as u64) as u32, p })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<Self> {
        (self.value != 0).then(|| FpScalar { value: Field::new(self.p).inv(self.value), p: self.p })
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "scalars from different fields");
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        FpScalar { value: Field::new(self.p).add(self.value, rhs.value), p: self.p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        FpScalar { value: Field::new(self.p).sub(self.value, rhs.value), p: self.p }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        FpScalar { value: Field::new(self.p).mul(self.value, rhs.value), p: self.p }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar { value: Field::new(self.p).neg(self.value), p: self.p }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn check_prime(p: u32) -> Result<(), OracleError> {
    if is_prime(p as u64) && p < 1 << 16 {
        Ok(())
    } else {
        Err(OracleError::NotPrime(p))
    }
}

/// Raw `u32` arithmetic mod `p`, for the inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Field {
    pub p: u32,
}

impl Field {
    pub fn new(p: u32) -> Self {
        Field { p }
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// Smallest generator of `F_p^×`.
    pub fn primitive_root(self) -> u32 {
        let order = self.p - 1;
        let factors: Vec<u32> = (2..=order).filter(|&d| order % d == 0 && is_prime(d as u64)).collect();
        (1..self.p)
            .find(|&g| factors.iter().all(|&f| self.pow(g, order / f) != 1))
            .expect("prime fields have primitive roots")
    }
}

/// A dense `rows × cols` matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, p: u32, data: Vec<u32>) -> Result<Self, OracleError> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(OracleError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, p, data: data.into_iter().map(|x| x % p).collect() })
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self, OracleError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(OracleError::Shape("ragged rows".into()));
        }
        Self::new(rows.len(), cols, p, rows.concat())
    }

    pub fn zero(rows: usize, cols: usize, p: u32) -> Self {
        Matrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zero(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Entries read from base-`p` digits, most significant first.
    pub(crate) fn from_code(rows: usize, cols: usize, p: u32, mut code: u64) -> Self {
        let mut data = vec![0; rows * cols];
        for slot in data.iter_mut().rev() {
            *slot = (code % p as u64) as u32;
            code /= p as u64;
        }
        Matrix { rows, cols, p, data }
    }

    /// Overwrites the entries from `code`, as in [`Matrix::from_code`].
    pub(crate) fn set_code(&mut self, mut code: u64) {
        for slot in self.data.iter_mut().rev() {
            *slot = (code % self.p as u64) as u32;
            code /= self.p as u64;
        }
    }

    /// Code of `Mv`.
    pub(crate) fn apply_code(&self, v: &[u32]) -> usize {
        let mut code = 0usize;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let s: u64 = row.iter().zip(v).map(|(&a, &b)| (a * b) as u64).sum();
            code = code * self.p as usize + (s % self.p as u64) as usize;
        }
        code
    }

    pub(crate) fn code(&self) -> u64 {
        self.data.iter().fold(0u64, |acc, &x| acc * self.p as u64 + x as u64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let f = Field::new(self.p);
        let mut out = Matrix::zero(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        let f = Field::new(self.p);
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = Field::new(self.p);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce()
    }

    /// Reduces in place to reduced row echelon form; returns the rank.
    pub(crate) fn row_reduce(&mut self) -> usize {
        let f = Field::new(self.p);
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(rank * self.cols + j, pivot * self.cols + j);
            }
            let inv = f.inv(self.get(rank, col));
            for j in 0..self.cols {
                let idx = rank * self.cols + j;
                self.data[idx] = f.mul(self.data[idx], inv);
            }
            for r in 0..self.rows {
                let c = self.get(r, col);
                if r == rank || c == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(c, self.get(rank, j)));
                    self.data[r * self.cols + j] = v;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// A basis of `{v : Mv = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let f = Field::new(self.p);
        let mut m = self.clone();
        let rank = m.row_reduce();
        let mut pivots = Vec::with_capacity(rank);
        for r in 0..rank {
            pivots.push((0..m.cols).find(|&c| m.get(r, c) != 0).expect("pivot row"));
        }
        let mut basis = Vec::new();
        for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; m.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n, self.p);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        aug.row_reduce();
        let left_is_identity = (0..n).all(|i| (0..n).all(|j| aug.get(i, j) == u32::from(i == j)));
        if !left_is_identity {
            return None;
        }
        let data = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| aug.get(i, n + j)).collect();
        Some(Matrix { rows: n, cols: n, p: self.p, data })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Codes vectors of `F_p^n` as base-`p` integers, first entry most
/// significant.
pub(crate) fn encode(v: &[u32], p: u32) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub(crate) fn decode(mut code: usize, n: usize, p: u32) -> Vec<u32> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = (code % p as usize) as u32;
        code /= p as usize;
    }
    v
}
