//! All subspaces of `F_p^n`, each given by its reduced row echelon basis
//! and a membership table over the `p^n` vectors.

use super::fp::{decode, encode, Field};

#[derive(Debug, Clone)]
pub(crate) struct Subspace {
    pub dim: usize,
    /// Codes of the RREF basis rows.
    pub basis: Vec<usize>,
    pub members: Vec<bool>,
}

/// Subspaces of `F_p^n` ordered by dimension, then by pivot columns and
/// free entries.
pub(crate) fn subspaces(n: usize, p: u32) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let count = (p as usize).pow(free.len() as u32);
            for assignment in 0..count {
                let digits = decode(assignment, free.len(), p);
                let mut rows = vec![vec![0u32; n]; k];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = 1;
                }
                for (&(r, c), &d) in free.iter().zip(&digits) {
                    rows[r][c] = d;
                }
                out.push(span(&rows, n, p));
            }
        }
    }
    out
}

fn span(rows: &[Vec<u32>], n: usize, p: u32) -> Subspace {
    let f = Field::new(p);
    let size = (p as usize).pow(n as u32);
    let mut members = vec![false; size];
    let k = rows.len();
    for coeffs in 0..(p as usize).pow(k as u32) {
        let c = decode(coeffs, k, p);
        let mut v = vec![0u32; n];
        for (row, &ci) in rows.iter().zip(&c) {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(ci, y));
            }
        }
        members[encode(&v, p)] = true;
    }
    Subspace { dim: k, basis: rows.iter().map(|r| encode(r, p)).collect(), members }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Number of `k`-dimensional subspaces of `F_p^n`.
#[cfg(test)]
fn gaussian(n: u32, k: u32, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= p.pow(n - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    num / den
}
