//! Root data of type A_{n-1}: simple roots, fundamental weights, the
//! pairing on the dual of the Cartan subspace, Theta-subsets and the Weyl
//! group realized as coordinate permutations.
//!
//! A [`Functional`] is stored as a raw coefficient vector `c` acting on a
//! trace-zero diagonal `H` by `sum c_i h_i`. Adding a constant to `c` does not
//! change that action, so canonicalization (mean-centering) happens only
//! inside [`pairing`].

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "pairing equals zero" in partial chamber tests.
pub const PAIRING_TOL: f64 = 1e-12;

/// Largest rank for which Weyl subgroups are enumerated.
pub const MAX_WEYL_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    coeffs: Vec<f64>,
}

impl Functional {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `lambda(H) = sum c_i h_i`.
    pub fn eval(&self, h: &[f64]) -> Result<f64> {
        check_dim(self.dim(), h.len())?;
        Ok(self.coeffs.iter().zip(h).map(|(c, x)| c * x).sum())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Functional) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Functional) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    fn centered(&self) -> Vec<f64> {
        let n = self.dim().max(1) as f64;
        let mean = self.coeffs.iter().sum::<f64>() / n;
        self.coeffs.iter().map(|c| c - mean).collect()
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Euclidean inner product of the mean-centered coefficient vectors.
pub fn pairing(lambda: &Functional, beta: &Functional) -> Result<f64> {
    check_dim(lambda.dim(), beta.dim())?;
    Ok(lambda
        .centered()
        .iter()
        .zip(beta.centered())
        .map(|(a, b)| a * b)
        .sum())
}

/// Subset of simple roots, stored as 1-based indices `i` naming `alpha_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaSet {
    indices: BTreeSet<usize>,
}

impl ThetaSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All simple roots of SL(n).
    pub fn full(n: usize) -> Self {
        Self {
            indices: (1..n).collect(),
        }
    }

    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::InvalidRootIndex {
                index: bad,
                rank: n,
            });
        }
        Ok(Self { indices })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Partition of `0..n` (0-based coordinates) into the blocks merged by
    /// the roots in Theta: `alpha_i` in Theta glues coordinates `i-1` and `i`.
    pub fn blocks(&self, n: usize) -> Vec<Vec<usize>> {
        let mut blocks = vec![vec![0]];
        for c in 1..n {
            if self.contains(c) {
                blocks.last_mut().unwrap().push(c);
            } else {
                blocks.push(vec![c]);
            }
        }
        blocks
    }
}

impl fmt::Display for ThetaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "alpha_{i}")?;
        }
        write!(f, "}}")
    }
}

/// Simple roots and fundamental weights of SL(n, R).
#[derive(Debug, Clone, PartialEq)]
pub struct RootDatum {
    n: usize,
    simple_roots: Vec<Functional>,
    fundamental_weights: Vec<Functional>,
}

impl RootDatum {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "rank must be at least 2, got {n}"
            )));
        }
        let simple_roots = (1..n)
            .map(|i| {
                let mut c = vec![0.0; n];
                c[i - 1] = 1.0;
                c[i] = -1.0;
                Functional::new(c)
            })
            .collect();
        let fundamental_weights = (1..n)
            .map(|i| Functional::new((0..n).map(|j| if j < i { 1.0 } else { 0.0 }).collect()))
            .collect();
        Ok(Self {
            n,
            simple_roots,
            fundamental_weights,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn simple_roots(&self) -> &[Functional] {
        &self.simple_roots
    }

    pub fn fundamental_weights(&self) -> &[Functional] {
        &self.fundamental_weights
    }

    /// `alpha_i`, 1-based.
    pub fn simple_root(&self, i: usize) -> Result<&Functional> {
        self.index_check(i)?;
        Ok(&self.simple_roots[i - 1])
    }

    /// `mu_i = e_1 + ... + e_i`, 1-based.
    pub fn fundamental_weight(&self, i: usize) -> Result<&Functional> {
        self.index_check(i)?;
        Ok(&self.fundamental_weights[i - 1])
    }

    fn index_check(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.n {
            return Err(Error::InvalidRootIndex {
                index: i,
                rank: self.n,
            });
        }
        Ok(())
    }
}

/// True iff `<alpha_i, lambda>` vanishes for `i` in Theta and is positive
/// for every other simple root.
pub fn in_partial_chamber(lambda: &Functional, theta: &ThetaSet) -> Result<bool> {
    let roots = RootDatum::new(lambda.dim())?;
    for (k, alpha) in roots.simple_roots().iter().enumerate() {
        let p = pairing(alpha, lambda)?;
        let inside = if theta.contains(k + 1) {
            p.abs() <= PAIRING_TOL
        } else {
            p > PAIRING_TOL
        };
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weyl group element of A_{n-1} as a permutation of coordinates:
/// `(w H)_{perm[j]} = H_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    /// Reflection in `ker alpha_i`: the transposition of coordinates `i`, `i+1`
    /// (1-based).
    pub fn reflection(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::InvalidRootIndex { index: i, rank: n });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i - 1, i);
        Ok(Self { perm })
    }

    /// Longest element `w0`, reversing the coordinates.
    pub fn longest(n: usize) -> Self {
        Self {
            perm: (0..n).rev().collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> Self {
        Self {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        Self { perm: inv }
    }

    pub fn act(&self, h: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; h.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            out[p] = h[j];
        }
        out
    }
}

/// The subgroup of permutations generated by the reflections `r_{alpha_i}`,
/// `i` in Theta.
pub fn weyl_theta_members(n: usize, theta: &ThetaSet) -> Result<HashSet<WeylElement>> {
    if n > MAX_WEYL_RANK {
        return Err(Error::RankTooLarge {
            rank: n,
            max: MAX_WEYL_RANK,
        });
    }
    let generators = theta
        .iter()
        .map(|i| WeylElement::reflection(n, i))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([WeylElement::identity(n)]);
    while let Some(w) = queue.pop_front() {
        if !seen.insert(w.clone()) {
            continue;
        }
        for s in &generators {
            let next = s.compose(&w);
            if !seen.contains(&next) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
