use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::qr::qr_positive;
use super::MatrixRows;
use crate::error::{Error, Result};
use crate::rootdata::ThetaSet;

const ORTHO_TOL: f64 = 1e-12;

/// Full flag `V_1 < ... < V_{n-1}` stored as a special-orthogonal frame whose
/// first `d` columns span `V_d`. The frame is defined modulo right
/// multiplication by sign-diagonal matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRows", into = "MatrixRows")]
pub struct Flag {
    frame: DMatrix<f64>,
}

impl TryFrom<MatrixRows> for Flag {
    type Error = Error;

    fn try_from(rows: MatrixRows) -> Result<Self> {
        Flag::from_frame(rows.to_matrix()?)
    }
}

impl From<Flag> for MatrixRows {
    fn from(f: Flag) -> Self {
        MatrixRows::from_matrix(&f.frame)
    }
}

impl Flag {
    pub fn standard(n: usize) -> Self {
        Self {
            frame: DMatrix::identity(n, n),
        }
    }

    /// Checks that `frame` is special orthogonal to 1e-12.
    pub fn from_frame(frame: DMatrix<f64>) -> Result<Self> {
        let n = frame.nrows();
        if frame.ncols() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: frame.ncols(),
            });
        }
        let defect = (frame.transpose() * &frame - DMatrix::identity(n, n)).amax();
        if defect > ORTHO_TOL || frame.determinant() < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "frame is not special orthogonal (defect {defect:e})"
            )));
        }
        Ok(Self { frame })
    }

    pub(crate) fn from_frame_unchecked(frame: DMatrix<f64>) -> Self {
        Self { frame }
    }

    /// Flag spanned by the columns of an invertible matrix, in order.
    pub fn from_basis(basis: &DMatrix<f64>) -> Result<Self> {
        let mut b = basis.clone();
        if b.determinant() < 0.0 {
            // The last column does not affect V_1 .. V_{n-1}.
            let last = b.ncols() - 1;
            b.column_mut(last).neg_mut();
        }
        let (q, _) = qr_positive(&b)?;
        Ok(Self { frame: q })
    }

    /// Flag whose first subspace is the line through `v`, completed by the
    /// standard basis vectors in order.
    pub fn from_line(v: &[f64]) -> Result<Self> {
        let n = v.len();
        let mut basis = DMatrix::identity(n, n);
        let pivot = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .ok_or(Error::InvalidParameter("empty vector".into()))?;
        // Put v first and drop the standard vector it replaces.
        let mut cols: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
        cols.insert(0, usize::MAX);
        for (c, &j) in cols.iter().enumerate() {
            for i in 0..n {
                basis[(i, c)] = if j == usize::MAX {
                    v[i]
                } else if i == j {
                    1.0
                } else {
                    0.0
                };
            }
        }
        Self::from_basis(&basis)
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    /// Orthonormal basis of `V_d`.
    pub fn subspace(&self, d: usize) -> DMatrix<f64> {
        self.frame.columns(0, d).into_owned()
    }
}

/// Largest principal angle between the column spans of two orthonormal
/// `n x d` bases, computed from both its sine and cosine.
fn largest_principal_angle(u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    let utv = u.transpose() * v;
    let residual = v - u * &utv;
    let sin = residual
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .min(1.0);
    let cos = utv
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, 1.0);
    sin.atan2(cos)
}

fn distance_over(x: &Flag, y: &Flag, dims: impl Iterator<Item = usize>) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(dims
        .map(|d| largest_principal_angle(&x.subspace(d), &y.subspace(d)))
        .fold(0.0, f64::max))
}

/// Maximum over `d` of the largest principal angle between `V_d(x)` and
/// `V_d(y)`.
pub fn flag_distance(x: &Flag, y: &Flag) -> Result<f64> {
    distance_over(x, y, 1..x.dim())
}

/// A point of the partial flag manifold of type Theta. The full frame is
/// kept; only `V_d` with `alpha_d` outside Theta carry meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFlag {
    flag: Flag,
    theta: ThetaSet,
}

impl PartialFlag {
    pub fn new(flag: Flag, theta: ThetaSet) -> Self {
        Self { flag, theta }
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    pub fn theta(&self) -> &ThetaSet {
        &self.theta
    }

    pub fn meaningful_dims(&self) -> Vec<usize> {
        (1..self.flag.dim())
            .filter(|d| !self.theta.contains(*d))
            .collect()
    }

    pub fn distance(&self, other: &PartialFlag) -> Result<f64> {
        if self.theta != other.theta {
            return Err(Error::InvalidParameter(
                "partial flags of different types".into(),
            ));
        }
        distance_over(&self.flag, &other.flag, self.meaningful_dims().into_iter())
    }

    pub fn act(&self, g: &super::GroupElement) -> Result<PartialFlag> {
        Ok(PartialFlag::new(
            super::act(g, &self.flag)?,
            self.theta.clone(),
        ))
    }
}
