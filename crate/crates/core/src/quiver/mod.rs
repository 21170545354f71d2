//! Quivers as arrow-multiplicity matrices, their Ringel and Tits forms,
//! stabilities and slopes, and the q-binomial series `p`, `p(λ)`.

mod qbinom;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{BilinearForm, DimVector};

pub use qbinom::{p_lambda_at_one, p_lambda_series, p_series, qbinom, qbinom_vec, QBinomTop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("malformed quiver description: {0}")]
    Parse(String),
    #[error("invalid quiver: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("slope of the zero vector is undefined")]
    ZeroVector,
}

/// A finite quiver: entry `(i, j)` of `matrix` counts the arrows `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    vertices: Vec<String>,
    matrix: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Option<Vec<String>>,
    arrows: Option<Vec<(String, String)>>,
    matrix: Option<Vec<Vec<u32>>>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, matrix: Vec<Vec<u32>>) -> Result<Self, QuiverError> {
        let n = vertices.len();
        if n == 0 {
            return Err(QuiverError::Invalid("a quiver needs at least one vertex".into()));
        }
        if matrix.len() != n {
            return Err(QuiverError::DimensionMismatch { expected: n, found: matrix.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(QuiverError::DimensionMismatch { expected: n, found: row.len() });
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(v) = vertices.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(QuiverError::Invalid(format!("duplicate vertex {v:?}")));
        }
        Ok(Quiver { vertices, matrix })
    }

    /// Vertices named `1..=n`.
    pub fn from_matrix(matrix: Vec<Vec<u32>>) -> Result<Self, QuiverError> {
        let names = (1..=matrix.len()).map(|i| i.to_string()).collect();
        Self::new(names, matrix)
    }

    /// One vertex with `m` loops.
    pub fn loops(m: u32) -> Self {
        Self::from_matrix(vec![vec![m]]).expect("valid")
    }

    /// The linearly oriented `A_n`: one arrow `i -> i+1`.
    pub fn linear_a(n: usize) -> Self {
        let mut m = vec![vec![0; n]; n];
        for i in 0..n.saturating_sub(1) {
            m[i][i + 1] = 1;
        }
        Self::from_matrix(m).expect("valid")
    }

    /// Two vertices with two arrows `1 -> 2`.
    pub fn kronecker() -> Self {
        Self::from_matrix(vec![vec![0, 2], vec![0, 0]]).expect("valid")
    }

    /// Parses `{"vertices": [...], "arrows": [[s, t], ...]}` or
    /// `{"vertices": [...], "matrix": [[...], ...]}`.
    pub fn from_json_str(s: &str) -> Result<Self, QuiverError> {
        let file: QuiverFile =
            serde_json::from_str(s).map_err(|e| QuiverError::Parse(e.to_string()))?;
        match (file.vertices, file.arrows, file.matrix) {
            (_, Some(_), Some(_)) => {
                Err(QuiverError::Parse("give either \"arrows\" or \"matrix\", not both".into()))
            }
            (Some(vertices), Some(arrows), None) => {
                let n = vertices.len();
                let index = |name: &str| {
                    vertices
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| QuiverError::Invalid(format!("unknown vertex {name:?}")))
                };
                let mut matrix = vec![vec![0u32; n]; n];
                for (s, t) in &arrows {
                    matrix[index(s)?][index(t)?] += 1;
                }
                Self::new(vertices, matrix)
            }
            (Some(vertices), None, Some(matrix)) => Self::new(vertices, matrix),
            (None, None, Some(matrix)) => Self::from_matrix(matrix),
            (None, Some(_), None) => {
                Err(QuiverError::Parse("\"arrows\" requires a \"vertices\" list".into()))
            }
            (Some(vertices), None, None) => {
                let n = vertices.len();
                Self::new(vertices, vec![vec![0; n]; n])
            }
            (None, None, None) => Err(QuiverError::Parse("no vertices given".into())),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn arrow_count(&self, i: usize, j: usize) -> u32 {
        self.matrix[i][j]
    }

    /// Every arrow as `(source, target)`, repeated by multiplicity, in
    /// row-major order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                out.extend(std::iter::repeat((i, j)).take(c as usize));
            }
        }
        out
    }

    /// `R_ij = δ_ij - #(arrows i -> j)`
    pub fn ringel_matrix(&self) -> BilinearForm {
        let n = self.num_vertices();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64 - self.matrix[i][j] as i64).collect())
            .collect();
        BilinearForm::new(entries).expect("square")
    }

    fn check(&self, v: &DimVector) -> Result<(), QuiverError> {
        if v.len() != self.num_vertices() {
            return Err(QuiverError::DimensionMismatch {
                expected: self.num_vertices(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `⟨α,β⟩ = Σ α^i β^i - Σ_{h: i -> j} α^i β^j`
    pub fn ringel_form(&self, alpha: &DimVector, beta: &DimVector) -> Result<i64, QuiverError> {
        self.check(alpha)?;
        self.check(beta)?;
        let mut s = alpha.dot(beta);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                s -= c as i64 * alpha.entries()[i] as i64 * beta.entries()[j] as i64;
            }
        }
        Ok(s)
    }

    /// `T(α) = ⟨α,α⟩`
    pub fn tits_form(&self, alpha: &DimVector) -> Result<i64, QuiverError> {
        self.ringel_form(alpha, alpha)
    }

    /// `dim R_α = Σ_{h: i -> j} α^i α^j`
    pub fn rep_space_dim(&self, alpha: &DimVector) -> u64 {
        self.arrows()
            .iter()
            .map(|&(i, j)| alpha.entries()[i] as u64 * alpha.entries()[j] as u64)
            .sum()
    }

    /// A vertex order in which every arrow between distinct vertices goes
    /// forward, or `None` if there is an oriented cycle (loops included).
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        if (0..n).any(|i| self.matrix[i][i] > 0) {
            return None;
        }
        let mut indeg: Vec<usize> =
            (0..n).map(|j| (0..n).filter(|&i| self.matrix[i][j] > 0).count()).collect();
        let mut order = Vec::with_capacity(n);
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for j in 0..n {
                if self.matrix[i][j] > 0 {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn has_oriented_cycle(&self) -> bool {
        self.topological_order().is_none()
    }

    /// The same quiver with vertex `order[k]` moved to position `k`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self, QuiverError> {
        let n = self.num_vertices();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(QuiverError::Invalid("not a permutation of the vertices".into()));
        }
        let vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let matrix = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.matrix[i][j]).collect())
            .collect();
        Self::new(vertices, matrix)
    }
}

/// A stability `θ: I -> Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    pub theta: Vec<i64>,
}

impl Stability {
    pub fn new(theta: Vec<i64>) -> Self {
        Stability { theta }
    }

    pub fn zero(n: usize) -> Self {
        Stability { theta: vec![0; n] }
    }

    /// Parses `{"theta": [...]}`.
    pub fn from_json_str(s: &str) -> Result<Self, QuiverError> {
        serde_json::from_str(s).map_err(|e| QuiverError::Parse(e.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(|&t| t == 0)
    }

    pub fn check_for(&self, quiver: &Quiver) -> Result<(), QuiverError> {
        if self.theta.len() != quiver.num_vertices() {
            return Err(QuiverError::DimensionMismatch {
                expected: quiver.num_vertices(),
                found: self.theta.len(),
            });
        }
        Ok(())
    }

    /// `θ(α) = Σ θ_i α^i`
    pub fn weight(&self, alpha: &DimVector) -> i64 {
        alpha.entries().iter().zip(&self.theta).map(|(&a, &t)| a as i64 * t).sum()
    }

    /// `μ(α) = θ(α) / height(α)`
    pub fn slope(&self, alpha: &DimVector) -> Result<BigRational, QuiverError> {
        if alpha.len() != self.theta.len() {
            return Err(QuiverError::DimensionMismatch {
                expected: self.theta.len(),
                found: alpha.len(),
            });
        }
        if alpha.is_zero() {
            return Err(QuiverError::ZeroVector);
        }
        Ok(BigRational::new(BigInt::from(self.weight(alpha)), BigInt::from(alpha.height())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn forms() {
        let a2 = Quiver::linear_a(2);
        assert_eq!(a2.ringel_form(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), -1);
        assert_eq!(a2.ringel_form(&dv(&[0, 1]), &dv(&[1, 0])).unwrap(), 0);
        assert_eq!(a2.ringel_form(&dv(&[2, 3]), &dv(&[0, 0])).unwrap(), 0);
        for m in 0..4 {
            let l = Quiver::loops(m);
            for d in 0..4 {
                for e in 0..4 {
                    let expected = (1 - m as i64) * d as i64 * e as i64;
                    assert_eq!(l.ringel_form(&dv(&[d]), &dv(&[e])).unwrap(), expected);
                }
                assert_eq!(l.tits_form(&dv(&[d])).unwrap(), (1 - m as i64) * (d * d) as i64);
            }
        }
        assert_eq!(Quiver::kronecker().tits_form(&dv(&[1, 1])).unwrap(), 0);
        assert!(a2.ringel_form(&dv(&[1]), &dv(&[0, 1])).is_err());
    }

    #[test]
    fn slopes() {
        let th = Stability::new(vec![1, 0]);
        assert_eq!(th.slope(&dv(&[1, 1])).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(th.slope(&dv(&[2, 2])).unwrap(), th.slope(&dv(&[1, 1])).unwrap());
        assert_eq!(th.slope(&dv(&[0, 0])), Err(QuiverError::ZeroVector));
        assert_eq!(Stability::zero(2).slope(&dv(&[3, 1])).unwrap(), BigRational::from_integer(0.into()));
    }

    #[test]
    fn json_forms() {
        let a = Quiver::from_json_str(r#"{"vertices": ["a","b"], "arrows": [["a","b"],["a","b"]]}"#)
            .unwrap();
        let b = Quiver::from_json_str(r#"{"vertices": ["a","b"], "matrix": [[0,2],[0,0]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matrix(), Quiver::kronecker().matrix());
        assert!(Quiver::from_json_str("").is_err());
        assert!(Quiver::from_json_str("{}").is_err());
        assert!(Quiver::from_json_str(r#"{"vertices": ["a"], "arrows": [["a","z"]]}"#).is_err());
        assert!(Quiver::from_json_str(r#"{"matrix": [[0,1]]}"#).is_err());
        assert_eq!(
            Stability::from_json_str(r#"{"theta": [1, 0]}"#).unwrap(),
            Stability::new(vec![1, 0])
        );
    }

    #[test]
    fn topological() {
        let q = Quiver::from_matrix(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let order = q.topological_order().unwrap();
        assert_eq!(order, vec![2, 1, 0]);
        let r = q.reordered(&order).unwrap();
        assert_eq!(r.matrix(), Quiver::linear_a(3).matrix());
        assert!(Quiver::loops(1).has_oriented_cycle());
        assert!(Quiver::from_matrix(vec![vec![0, 1], vec![1, 0]]).unwrap().has_oriented_cycle());
    }

    proptest! {
        #[test]
        fn ringel_form_is_gram(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3),
                               m in prop::collection::vec(0u32..3, 9)) {
            let q = Quiver::from_matrix(m.chunks(3).map(|r| r.to_vec()).collect()).unwrap();
            let (a, b) = (DimVector::new(a), DimVector::new(b));
            prop_assert_eq!(q.ringel_form(&a, &b).unwrap(), q.ringel_matrix().pair(&a, &b));
        }
    }
}
