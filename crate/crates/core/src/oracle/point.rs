//! Points of `R_α(F_p)`, their subrepresentations and endomorphisms.

use std::cmp::Ordering;

use super::fp::{decode, Matrix};
use super::subspace::{subspaces, Subspace};
use super::OracleError;
use crate::quiver::{Quiver, Stability};
use crate::series::DimVector;

/// A representation with dimension vector `alpha`: arrow `h: i -> j`
/// carries an `α^j × α^i` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepPoint {
    alpha: DimVector,
    p: u32,
    arrows: Vec<(usize, usize)>,
    mats: Vec<Matrix>,
}

impl RepPoint {
    pub fn new(quiver: &Quiver, alpha: DimVector, p: u32, mats: Vec<Matrix>) -> Result<Self, OracleError> {
        super::fp::check_prime(p)?;
        if alpha.len() != quiver.num_vertices() {
            return Err(OracleError::DimensionMismatch { expected: quiver.num_vertices(), found: alpha.len() });
        }
        let arrows = quiver.arrows();
        if mats.len() != arrows.len() {
            return Err(OracleError::Shape(format!("{} arrows but {} matrices", arrows.len(), mats.len())));
        }
        for (k, (&(i, j), m)) in arrows.iter().zip(&mats).enumerate() {
            let shape = (alpha.entries()[j] as usize, alpha.entries()[i] as usize);
            if (m.rows(), m.cols()) != shape || m.p() != p {
                return Err(OracleError::Shape(format!(
                    "arrow {k} ({i} -> {j}) needs a {}x{} matrix over F_{p}, got {}x{} over F_{}",
                    shape.0,
                    shape.1,
                    m.rows(),
                    m.cols(),
                    m.p()
                )));
            }
        }
        Ok(RepPoint { alpha, p, arrows, mats })
    }

    pub(crate) fn from_parts(alpha: DimVector, p: u32, arrows: Vec<(usize, usize)>, mats: Vec<Matrix>) -> Self {
        RepPoint { alpha, p, arrows, mats }
    }

    pub fn alpha(&self) -> &DimVector {
        &self.alpha
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }
}

/// Matrix shapes of the arrows and how to read a point off an index.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub p: u32,
    pub shapes: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(alpha: &DimVector, arrows: &[(usize, usize)], p: u32) -> Self {
        let a = alpha.entries();
        let shapes = arrows.iter().map(|&(i, j)| (a[j] as usize, a[i] as usize)).collect();
        Layout { p, shapes }
    }

    pub fn entries(&self, arrows: &[usize]) -> u32 {
        arrows.iter().map(|&k| (self.shapes[k].0 * self.shapes[k].1) as u32).sum()
    }

    /// Fills the matrices of `free` from `index`, the first entry of the
    /// first free arrow being the most significant digit.
    pub fn fill(&self, free: &[usize], mut index: u64, mats: &mut [Matrix]) {
        for &k in free.iter().rev() {
            let (r, c) = self.shapes[k];
            let n = (r * c) as u32;
            let base = (self.p as u64).pow(n);
            if (mats[k].rows(), mats[k].cols()) == (r, c) {
                mats[k].set_code(index % base);
            } else {
                mats[k] = Matrix::from_code(r, c, self.p, index % base);
            }
            index /= base;
        }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    parts: Vec<usize>,
    /// `μ(β) = μ(α)`; otherwise `μ(β) > μ(α)`.
    equal: bool,
}

/// Subspace tuples still to be tested, and an arrow already known to
/// preserve all of them.
#[derive(Debug, Clone)]
pub(crate) struct Candidates {
    list: Vec<Candidate>,
    skip: Option<usize>,
}

/// Decides semistability and stability for points of one dimension
/// vector by testing every tuple of subspaces whose slope is at least
/// `μ(α)`.
pub(crate) struct Classifier {
    arrows: Vec<(usize, usize)>,
    vectors: Vec<Vec<Vec<u32>>>,
    subspaces: Vec<Vec<Subspace>>,
    candidates: Candidates,
}

impl Classifier {
    pub fn new(alpha: &DimVector, arrows: &[(usize, usize)], theta: &Stability, p: u32) -> Self {
        let dims: Vec<usize> = alpha.entries().iter().map(|&a| a as usize).collect();
        let subs: Vec<Vec<Subspace>> = dims.iter().map(|&n| subspaces(n, p)).collect();
        let vectors = dims
            .iter()
            .map(|&n| (0..(p as usize).pow(n as u32)).map(|c| decode(c, n, p)).collect())
            .collect();
        let ht = alpha.height() as i64;
        let w = theta.weight(alpha);
        let mut list = Vec::new();
        let mut parts = vec![0usize; dims.len()];
        loop {
            let beta = DimVector::new(parts.iter().enumerate().map(|(i, &s)| subs[i][s].dim as u32).collect());
            if !beta.is_zero() && beta != *alpha {
                // μ(β) against μ(α) by cross-multiplication
                match (theta.weight(&beta) * ht).cmp(&(w * beta.height() as i64)) {
                    Ordering::Greater => list.push(Candidate { parts: parts.clone(), equal: false }),
                    Ordering::Equal => list.push(Candidate { parts: parts.clone(), equal: true }),
                    Ordering::Less => {}
                }
            }
            let Some(i) = (0..dims.len()).rev().find(|&i| parts[i] + 1 < subs[i].len()) else {
                break;
            };
            parts[i] += 1;
            for x in parts.iter_mut().skip(i + 1) {
                *x = 0;
            }
        }
        list.sort_by_key(|c| c.equal);
        Classifier {
            arrows: arrows.to_vec(),
            vectors,
            subspaces: subs,
            candidates: Candidates { list, skip: None },
        }
    }

    pub fn candidates(&self) -> &Candidates {
        &self.candidates
    }

    fn preserves(&self, cand: &Candidate, h: usize, image: &[usize]) -> bool {
        let (i, j) = self.arrows[h];
        let target = &self.subspaces[j][cand.parts[j]].members;
        self.subspaces[i][cand.parts[i]].basis.iter().all(|&b| target[image[b]])
    }

    fn image(&self, h: usize, m: &Matrix, out: &mut Vec<usize>) {
        out.clear();
        out.extend(self.vectors[self.arrows[h].0].iter().map(|v| m.apply_code(v)));
    }

    /// The tuples preserved by arrow `k` carrying `x`.
    pub fn restrict(&self, k: usize, x: &Matrix) -> Candidates {
        let mut image = Vec::new();
        self.image(k, x, &mut image);
        let list = self.candidates.list.iter().filter(|c| self.preserves(c, k, &image)).cloned().collect();
        Candidates { list, skip: Some(k) }
    }

    /// `(semistable, stable)`
    pub fn classify(&self, cands: &Candidates, mats: &[Matrix], images: &mut Vec<Vec<usize>>) -> (bool, bool) {
        images.resize(self.arrows.len(), Vec::new());
        for (h, m) in mats.iter().enumerate() {
            if Some(h) != cands.skip {
                self.image(h, m, &mut images[h]);
            }
        }
        let mut stable = true;
        for cand in &cands.list {
            let invariant = (0..self.arrows.len())
                .filter(|&h| Some(h) != cands.skip)
                .all(|h| self.preserves(cand, h, &images[h]));
            if invariant {
                if !cand.equal {
                    return (false, false);
                }
                stable = false;
            }
        }
        (true, stable)
    }
}

/// Solves `φ_j X_h = X_h φ_i` inside a fixed space of tuples `(φ_i)`,
/// each stored as the concatenation of the row-major `φ_i`.
pub(crate) struct EndSolver {
    p: u32,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    skip: Option<usize>,
    basis: Vec<Vec<u32>>,
}

impl EndSolver {
    pub fn full(alpha: &DimVector, arrows: &[(usize, usize)], p: u32) -> Self {
        let (dims, offsets, total) = Self::offsets(alpha);
        let basis = (0..total)
            .map(|k| {
                let mut v = vec![0; total];
                v[k] = 1;
                v
            })
            .collect();
        EndSolver { p, dims, offsets, arrows: arrows.to_vec(), skip: None, basis }
    }

    /// Restricted to tuples commuting with arrow `k` carrying `x`, which is
    /// then left out of later solves.
    pub fn commuting_with(alpha: &DimVector, arrows: &[(usize, usize)], p: u32, k: usize, x: &Matrix) -> Self {
        let full = Self::full(alpha, arrows, p);
        let total = full.basis.len();
        let rows = x.rows() * x.cols();
        let mut map = Matrix::zero(rows, total, p);
        for (col, phi) in full.basis.iter().enumerate() {
            for (row, v) in full.residual(phi, k, x).into_iter().enumerate() {
                map.set(row, col, v);
            }
        }
        EndSolver { basis: map.nullspace(), skip: Some(k), ..full }
    }

    fn offsets(alpha: &DimVector) -> (Vec<usize>, Vec<usize>, usize) {
        let dims: Vec<usize> = alpha.entries().iter().map(|&a| a as usize).collect();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &d in &dims {
            offsets.push(total);
            total += d * d;
        }
        (dims, offsets, total)
    }

    fn block(&self, phi: &[u32], i: usize) -> Matrix {
        let d = self.dims[i];
        Matrix::new(d, d, self.p, phi[self.offsets[i]..self.offsets[i] + d * d].to_vec())
            .expect("block shape")
    }

    /// Entries of `φ_j X - X φ_i` for arrow `h: i -> j`.
    fn residual(&self, phi: &[u32], h: usize, x: &Matrix) -> Vec<u32> {
        let (i, j) = self.arrows[h];
        self.block(phi, j).mul(x).sub(&x.mul(&self.block(phi, i))).data().to_vec()
    }

    pub fn dim(&self, mats: &[Matrix]) -> u32 {
        let p = self.p as u64;
        let active: Vec<usize> = (0..self.arrows.len()).filter(|&h| Some(h) != self.skip).collect();
        let width: usize = active.iter().map(|&h| mats[h].rows() * mats[h].cols()).sum();
        if self.basis.is_empty() {
            return 0;
        }
        let mut data = Vec::with_capacity(self.basis.len() * width);
        for phi in &self.basis {
            for &h in &active {
                let (i, j) = self.arrows[h];
                let x = &mats[h];
                let (di, dj) = (self.dims[i], self.dims[j]);
                let (oi, oj) = (self.offsets[i], self.offsets[j]);
                // (φ_j X - X φ_i)[r][c]
                for r in 0..dj {
                    for c in 0..di {
                        let mut left = 0u64;
                        for k in 0..dj {
                            left += (phi[oj + r * dj + k] * x.get(k, c)) as u64;
                        }
                        let mut right = 0u64;
                        for k in 0..di {
                            right += (x.get(r, k) * phi[oi + k * di + c]) as u64;
                        }
                        data.push(((left % p + p - right % p) % p) as u32);
                    }
                }
            }
        }
        let m = Matrix::new(self.basis.len(), width, self.p, data).expect("rectangular");
        (self.basis.len() - m.rank()) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(p: u32, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn shapes_are_checked() {
        let q = Quiver::linear_a(2);
        let alpha = DimVector::new(vec![2, 1]);
        assert!(RepPoint::new(&q, alpha.clone(), 2, vec![mat(2, &[&[1, 0]])]).is_ok());
        assert!(RepPoint::new(&q, alpha.clone(), 2, vec![mat(2, &[&[1], &[0]])]).is_err());
        assert!(RepPoint::new(&q, alpha, 2, vec![]).is_err());
    }

    #[test]
    fn commutant_restriction_agrees_with_full_solve() {
        let q = Quiver::loops(2);
        let alpha = DimVector::new(vec![2]);
        let arrows = q.arrows();
        let x = mat(3, &[&[0, 1], &[1, 1]]);
        let restricted = EndSolver::commuting_with(&alpha, &arrows, 3, 0, &x);
        let full = EndSolver::full(&alpha, &arrows, 3);
        for y in [mat(3, &[&[1, 0], &[0, 2]]), mat(3, &[&[0, 0], &[0, 0]]), x.clone()] {
            let ms = vec![x.clone(), y];
            assert_eq!(restricted.dim(&ms), full.dim(&ms));
        }
    }
}
