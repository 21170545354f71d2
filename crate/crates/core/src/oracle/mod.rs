//! Brute force over prime fields: enumerate `R_α(F_p)`, test every point
//! for (semi)stability by searching all tuples of subspaces, and turn the
//! tallies into the numbers the counting formulas predict at `q = p`.
//!
//! With [`OracleConfig::reduce_orbits`] set, the matrix of the largest
//! arrow is only enumerated up to the action of `GL_α`: every orbit is
//! represented by its smallest member, and the tallies for that member are
//! weighted by the orbit size. All tested properties are `GL_α`-invariant,
//! so the totals are the same as for the full enumeration.

mod fp;
mod point;
mod subspace;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::quiver::{Quiver, QuiverError, Stability};
use crate::series::DimVector;

pub use fp::{FpScalar, Matrix};
pub use point::RepPoint;

use fp::Field;
use point::{Candidates, Classifier, EndSolver, Layout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not a supported prime")]
    NotPrime(u32),
    #[error("bad matrix shape: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} needs {needed} points, over the budget of {budget}; use a smaller dimension vector or prime")]
    PointBudget { what: String, needed: String, budget: u64 },
    #[error("subrepresentation search for height {height} over F_{p} exceeds the limit of height {limit}")]
    StabilityBudget { height: u32, p: u32, limit: u32 },
    #[error("{count} stable points of dimension {alpha} with End of degree {r} over F_{p} do not split into orbits of size {orbit}")]
    NotDivisible { alpha: DimVector, p: u32, r: u32, count: BigInt, orbit: BigInt },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of points visited for one dimension vector.
    pub point_budget: u64,
    /// Largest height admitted for the subspace search, per prime.
    pub stability_heights: BTreeMap<u32, u32>,
    /// Limit for primes not listed above.
    pub default_stability_height: u32,
    pub reduce_orbits: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            point_budget: 1 << 24,
            stability_heights: BTreeMap::from([(2, 4), (3, 3)]),
            default_stability_height: 2,
            reduce_orbits: true,
        }
    }
}

impl OracleConfig {
    pub fn stability_height(&self, p: u32) -> u32 {
        self.stability_heights.get(&p).copied().unwrap_or(self.default_stability_height)
    }

    fn check_height(&self, alpha: &DimVector, p: u32) -> Result<(), OracleError> {
        let limit = self.stability_height(p);
        if alpha.height() > limit {
            return Err(OracleError::StabilityBudget { height: alpha.height(), p, limit });
        }
        Ok(())
    }
}

fn check_inputs(quiver: &Quiver, alpha: &DimVector, p: u32) -> Result<(), OracleError> {
    fp::check_prime(p)?;
    if alpha.len() != quiver.num_vertices() {
        return Err(OracleError::DimensionMismatch { expected: quiver.num_vertices(), found: alpha.len() });
    }
    Ok(())
}

/// `p^e` if it is at most `budget`.
fn within_budget(p: u32, e: u32, budget: u64, what: &str) -> Result<u64, OracleError> {
    match (p as u64).checked_pow(e) {
        Some(n) if n <= budget => Ok(n),
        _ => Err(OracleError::PointBudget { what: what.to_string(), needed: format!("{p}^{e}"), budget }),
    }
}

/// Every point of `R_α(F_p)` once, in lexicographic order of the matrix
/// entries (arrows in [`Quiver::arrows`] order, each matrix row-major).
pub fn enumerate_points(
    quiver: &Quiver,
    alpha: &DimVector,
    p: u32,
    budget: u64,
) -> Result<impl Iterator<Item = RepPoint>, OracleError> {
    check_inputs(quiver, alpha, p)?;
    let arrows = quiver.arrows();
    let layout = Layout::new(alpha, &arrows, p);
    let all: Vec<usize> = (0..arrows.len()).collect();
    let n = within_budget(p, layout.entries(&all), budget, &format!("R_{alpha}(F_{p})"))?;
    let alpha = alpha.clone();
    Ok((0..n).map(move |index| {
        let mut mats: Vec<Matrix> = layout.shapes.iter().map(|&(r, c)| Matrix::zero(r, c, p)).collect();
        layout.fill(&all, index, &mut mats);
        RepPoint::from_parts(alpha.clone(), p, arrows.clone(), mats)
    }))
}

fn classifier_for(point: &RepPoint, theta: &Stability, cfg: &OracleConfig) -> Result<Classifier, OracleError> {
    if theta.theta.len() != point.alpha().len() {
        return Err(OracleError::DimensionMismatch { expected: point.alpha().len(), found: theta.theta.len() });
    }
    cfg.check_height(point.alpha(), point.p())?;
    Ok(Classifier::new(point.alpha(), point.arrows(), theta, point.p()))
}

/// No nonzero proper subrepresentation has larger slope. The zero
/// representation counts as semistable.
pub fn is_semistable(point: &RepPoint, theta: &Stability, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let c = classifier_for(point, theta, cfg)?;
    Ok(c.classify(c.candidates(), point.mats(), &mut Vec::new()).0)
}

/// Nonzero, and every nonzero proper subrepresentation has smaller slope.
pub fn is_stable(point: &RepPoint, theta: &Stability, cfg: &OracleConfig) -> Result<bool, OracleError> {
    if point.alpha().is_zero() {
        return Ok(false);
    }
    let c = classifier_for(point, theta, cfg)?;
    Ok(c.classify(c.candidates(), point.mats(), &mut Vec::new()).1)
}

/// `dim_{F_p} End(M)`.
pub fn end_dim(point: &RepPoint) -> u32 {
    EndSolver::full(point.alpha(), point.arrows(), point.p()).dim(point.mats())
}

/// `#GL_α(F_p) = Π_i Π_{j<α^i} (p^{α^i} - p^j)`
pub fn gl_order_at(alpha: &DimVector, p: u32) -> BigInt {
    let p = BigInt::from(p);
    let mut acc = BigInt::one();
    for &n in alpha.entries() {
        for j in 0..n {
            acc *= p.pow(n) - p.pow(j);
        }
    }
    acc
}

/// Tallies of one dimension vector over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub alpha: DimVector,
    pub p: u32,
    pub points: BigInt,
    pub semistable: BigInt,
    /// Stable points by `dim End`.
    pub stable_by_end_dim: BTreeMap<u32, BigInt>,
    pub gl_order: BigInt,
    /// Orbits of the reduced arrow, if the reduction was used.
    pub orbits: Option<usize>,
}

impl Census {
    /// `#R_α(F_p) / #GL_α(F_p)`
    pub fn point_ratio(&self) -> BigRational {
        BigRational::new(self.points.clone(), self.gl_order.clone())
    }

    /// `#R^{ss}_α(F_p) / #GL_α(F_p)`
    pub fn semistable_ratio(&self) -> BigRational {
        BigRational::new(self.semistable.clone(), self.gl_order.clone())
    }

    pub fn stable_points(&self, r: u32) -> BigInt {
        self.stable_by_end_dim.get(&r).cloned().unwrap_or_default()
    }

    /// Isomorphism classes of stable points with `dim End = r`. Their
    /// automorphism group is `F_{p^r}^×`, so every orbit has
    /// `#GL_α / (p^r - 1)` points.
    pub fn stable_classes(&self, r: u32) -> Result<BigInt, OracleError> {
        assert!(r >= 1, "r must be positive");
        let count = self.stable_points(r);
        let units = BigInt::from(self.p).pow(r) - 1;
        let (orbit, rem) = self.gl_order.div_rem(&units);
        if count.is_zero() {
            return Ok(count);
        }
        let (classes, rem2) = count.div_rem(&orbit);
        if !rem.is_zero() || !rem2.is_zero() {
            return Err(OracleError::NotDivisible { alpha: self.alpha.clone(), p: self.p, r, count, orbit });
        }
        Ok(classes)
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    semistable: u64,
    stable: BTreeMap<u32, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.semistable += other.semistable;
        for (r, n) in other.stable {
            *self.stable.entry(r).or_default() += n;
        }
        self
    }
}

const BLOCK: u64 = 1 << 12;

/// Orbits of `GL_{α^j} × GL_{α^i}` on `α^j × α^i` matrices (conjugation
/// for a loop), as `(smallest code, size)` in increasing order of codes.
fn arrow_orbits(i: usize, j: usize, alpha: &DimVector, p: u32, size: u64) -> Vec<(u64, u64)> {
    let a = alpha.entries();
    let (rows, cols) = (a[j] as usize, a[i] as usize);
    let gens_j = gl_generators(rows, p);
    let gens_i = gl_generators(cols, p);
    let act = |x: &Matrix| -> Vec<Matrix> {
        if i == j {
            gens_i.iter().map(|(g, gi)| g.mul(x).mul(gi)).collect()
        } else {
            let left = gens_j.iter().map(|(g, _)| g.mul(x));
            left.chain(gens_i.iter().map(|(_, gi)| x.mul(gi))).collect()
        }
    };
    let mut seen = vec![false; size as usize];
    let mut orbits = Vec::new();
    for start in 0..size {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut stack = vec![start];
        let mut count = 0u64;
        while let Some(code) = stack.pop() {
            count += 1;
            for y in act(&Matrix::from_code(rows, cols, p, code)) {
                let c = y.code();
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        orbits.push((start, count));
    }
    orbits
}

/// Generators of `GL_n(F_p)` with their inverses: the elementary
/// transvections and `diag(g, 1, …, 1)` for a primitive root `g`.
fn gl_generators(n: usize, p: u32) -> Vec<(Matrix, Matrix)> {
    let f = Field::new(p);
    let mut gens = Vec::new();
    if n == 0 {
        return gens;
    }
    let g = f.primitive_root();
    let mut d = Matrix::identity(n, p);
    let mut di = Matrix::identity(n, p);
    d.set(0, 0, g);
    di.set(0, 0, f.inv(g));
    gens.push((d, di));
    for r in 0..n {
        for c in 0..n {
            if r != c {
                let mut t = Matrix::identity(n, p);
                let mut ti = Matrix::identity(n, p);
                t.set(r, c, 1);
                ti.set(r, c, p - 1);
                gens.push((t, ti));
            }
        }
    }
    gens
}

/// Classifies every point of `R_α(F_p)`.
pub fn census(
    quiver: &Quiver,
    alpha: &DimVector,
    theta: &Stability,
    p: u32,
    cfg: &OracleConfig,
) -> Result<Census, OracleError> {
    check_inputs(quiver, alpha, p)?;
    theta.check_for(quiver)?;
    cfg.check_height(alpha, p)?;
    let arrows = quiver.arrows();
    let layout = Layout::new(alpha, &arrows, p);
    let gl_order = gl_order_at(alpha, p);
    let total_entries = layout.entries(&(0..arrows.len()).collect::<Vec<_>>());
    let points = BigInt::from(p).pow(total_entries);
    if alpha.is_zero() {
        return Ok(Census {
            alpha: alpha.clone(),
            p,
            points: points.clone(),
            semistable: points,
            stable_by_end_dim: BTreeMap::new(),
            gl_order,
            orbits: None,
        });
    }
    let classifier = Classifier::new(alpha, &arrows, theta, p);

    let reduced = (0..arrows.len())
        .filter(|&k| layout.shapes[k].0 * layout.shapes[k].1 > 0)
        .max_by_key(|&k| (layout.shapes[k].0 * layout.shapes[k].1, std::cmp::Reverse(k)))
        .filter(|_| cfg.reduce_orbits);

    // (fixed arrow and its matrix, weight, end solver, subspace tuples)
    let mut groups: Vec<(Option<(usize, Matrix)>, u64, EndSolver, Candidates)> = Vec::new();
    let free: Vec<usize>;
    let label = format!("R_{alpha}(F_{p})");
    match reduced {
        Some(k) => {
            let (i, j) = arrows[k];
            let size = within_budget(p, layout.entries(&[k]), cfg.point_budget, &label)?;
            free = (0..arrows.len()).filter(|&h| h != k).collect();
            let rest = within_budget(p, layout.entries(&free), cfg.point_budget, &label)?;
            let orbits = arrow_orbits(i, j, alpha, p, size);
            if (orbits.len() as u64).saturating_mul(rest) > cfg.point_budget {
                return Err(OracleError::PointBudget {
                    what: label,
                    needed: format!("{} orbits x {p}^{}", orbits.len(), layout.entries(&free)),
                    budget: cfg.point_budget,
                });
            }
            let (r, c) = layout.shapes[k];
            for (code, weight) in orbits {
                let x = Matrix::from_code(r, c, p, code);
                let solver = EndSolver::commuting_with(alpha, &arrows, p, k, &x);
                let cands = classifier.restrict(k, &x);
                groups.push((Some((k, x)), weight, solver, cands));
            }
        }
        None => {
            free = (0..arrows.len()).collect();
            within_budget(p, layout.entries(&free), cfg.point_budget, &label)?;
            groups.push((None, 1, EndSolver::full(alpha, &arrows, p), classifier.candidates().clone()));
        }
    }
    let rest = (p as u64).pow(layout.entries(&free));
    let jobs: Vec<(usize, u64)> = (0..groups.len())
        .flat_map(|g| (0..rest.div_ceil(BLOCK)).map(move |b| (g, b * BLOCK)))
        .collect();

    let tallies: Vec<(usize, Tally)> = jobs
        .par_iter()
        .map(|&(g, start)| {
            let (fixed, _, solver, cands) = &groups[g];
            let mut mats: Vec<Matrix> = layout.shapes.iter().map(|&(r, c)| Matrix::zero(r, c, p)).collect();
            if let Some((k, x)) = fixed {
                mats[*k] = x.clone();
            }
            let mut images = Vec::new();
            let mut tally = Tally::default();
            for index in start..(start + BLOCK).min(rest) {
                layout.fill(&free, index, &mut mats);
                let (ss, st) = classifier.classify(cands, &mats, &mut images);
                if ss {
                    tally.semistable += 1;
                }
                if st {
                    *tally.stable.entry(solver.dim(&mats)).or_default() += 1;
                }
            }
            (g, tally)
        })
        .collect();

    let mut per_group: HashMap<usize, Tally> = HashMap::new();
    for (g, t) in tallies {
        let e = per_group.remove(&g).unwrap_or_default();
        per_group.insert(g, e.merge(t));
    }
    let mut semistable = BigInt::zero();
    let mut stable_by_end_dim: BTreeMap<u32, BigInt> = BTreeMap::new();
    let mut seen_points = BigInt::zero();
    for (g, (_, weight, _, _)) in groups.iter().enumerate() {
        let w = BigInt::from(*weight);
        seen_points += &w * BigInt::from(rest);
        if let Some(t) = per_group.get(&g) {
            semistable += &w * BigInt::from(t.semistable);
            for (&r, &n) in &t.stable {
                *stable_by_end_dim.entry(r).or_default() += &w * BigInt::from(n);
            }
        }
    }
    assert_eq!(seen_points, points, "orbit sizes must add up to the whole space");
    Ok(Census {
        alpha: alpha.clone(),
        p,
        points,
        semistable,
        stable_by_end_dim,
        gl_order,
        orbits: reduced.map(|_| groups.len()),
    })
}

/// `#R^{ss}_α(F_p) / #GL_α(F_p)`
pub fn count_semistable_ratio(
    quiver: &Quiver,
    alpha: &DimVector,
    theta: &Stability,
    p: u32,
    cfg: &OracleConfig,
) -> Result<BigRational, OracleError> {
    Ok(census(quiver, alpha, theta, p, cfg)?.semistable_ratio())
}

/// Isomorphism classes of absolutely stable representations of dimension
/// `α` over `F_p`.
pub fn count_abs_stable_classes(
    quiver: &Quiver,
    alpha: &DimVector,
    theta: &Stability,
    p: u32,
    cfg: &OracleConfig,
) -> Result<BigInt, OracleError> {
    census(quiver, alpha, theta, p, cfg)?.stable_classes(1)
}

/// Isomorphism classes of stable representations of dimension `α` over
/// `F_p` whose endomorphism field is `F_{p^r}`.
pub fn count_stable_with_r(
    quiver: &Quiver,
    alpha: &DimVector,
    theta: &Stability,
    p: u32,
    r: u32,
    cfg: &OracleConfig,
) -> Result<BigInt, OracleError> {
    census(quiver, alpha, theta, p, cfg)?.stable_classes(r)
}
