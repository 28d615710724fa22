//! Pointed polyhedral cones given by extreme rays, with membership via
//! nonnegative least squares (or ray-basis coordinates when the cone is
//! simplicial).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MEMBER_TOL: f64 = 1e-12;
const NNLS_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    /// Unit-normalized rays as columns.
    rays: DMatrix<f64>,
    /// Inverse of the ray matrix when the rays form a basis.
    ray_basis_inverse: Option<DMatrix<f64>>,
    /// Normalized sum of the rays, an interior point.
    center: DVector<f64>,
}

impl Cone {
    pub fn new(rays: &[Vec<f64>]) -> Result<Self> {
        let n = rays
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidSpec("cone needs at least one ray".into()))?;
        if let Some(bad) = rays.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let m = rays.len();
        let mut mat = DMatrix::zeros(n, m);
        for (j, r) in rays.iter().enumerate() {
            let v = DVector::from_column_slice(r);
            let norm = v.norm();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::InvalidSpec(format!("ray {j} is zero or non-finite")));
            }
            mat.set_column(j, &(v / norm));
        }
        let sv = mat.singular_values();
        let smax = sv.max();
        let rank = sv.iter().filter(|&&s| s > 1e-10 * smax).count();
        if rank < n {
            return Err(Error::InvalidSpec(format!(
                "rays span a {rank}-dimensional subspace of R^{n}"
            )));
        }
        let ray_basis_inverse = if m == n {
            mat.clone().try_inverse()
        } else {
            None
        };
        if ray_basis_inverse.is_none() && !is_pointed(&mat) {
            return Err(Error::InvalidSpec("cone is not pointed".into()));
        }
        let center = mat.column_sum().normalize();
        Ok(Self {
            rays: mat,
            ray_basis_inverse,
            center,
        })
    }

    pub fn dim(&self) -> usize {
        self.rays.nrows()
    }

    pub fn rays(&self) -> &DMatrix<f64> {
        &self.rays
    }

    pub fn is_simplicial(&self) -> bool {
        self.ray_basis_inverse.is_some()
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        match &self.ray_basis_inverse {
            Some(inv) => {
                let c = inv * v;
                let scale = c.amax();
                c.iter().all(|&x| x >= -MEMBER_TOL * scale)
            }
            None => {
                let (_, residual) = nnls(&self.rays, v);
                residual <= NNLS_RESIDUAL_TOL * v.norm()
            }
        }
    }

    /// Largest `delta` with `v/|v| - delta * center` in the cone; positive
    /// exactly for interior points.
    pub fn interior_margin(&self, v: &DVector<f64>) -> f64 {
        let norm = v.norm();
        if !(norm > 0.0) {
            return f64::NEG_INFINITY;
        }
        let u = v / norm;
        match &self.ray_basis_inverse {
            Some(inv) => {
                let cu = inv * &u;
                let cc = inv * &self.center;
                cu.iter()
                    .zip(cc.iter())
                    .map(|(a, b)| a / b)
                    .fold(f64::INFINITY, f64::min)
            }
            None => {
                if !self.contains(&u) {
                    return f64::NEG_INFINITY;
                }
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    if self.contains(&(&u - &self.center * mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }

    /// True iff every column of `images` lies in the cone.
    pub fn contains_columns(&self, images: &DMatrix<f64>) -> bool {
        images.column_iter().all(|c| self.contains(&c.into_owned()))
    }
}

/// Pointed iff the origin is not in the convex hull of the unit rays.
fn is_pointed(rays: &DMatrix<f64>) -> bool {
    let (n, m) = rays.shape();
    // Enforce sum(c) = 1 through a heavily weighted extra row.
    let weight = 1e4;
    let mut a = DMatrix::zeros(n + 1, m);
    a.view_mut((0, 0), (n, m)).copy_from(rays);
    a.row_mut(n).fill(weight);
    let mut b = DVector::zeros(n + 1);
    b[n] = weight;
    let (c, _) = nnls(&a, &b);
    let hull_point = rays * c;
    hull_point.norm() > 1e-8
}

/// Lawson-Hanson nonnegative least squares: `min |a x - b|`, `x >= 0`.
/// Returns the minimizer and the residual norm.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let m = a.ncols();
    let mut x = DVector::zeros(m);
    let mut passive = vec![false; m];
    let tol = 1e-12 * a.amax().max(1.0) * b.amax().max(1.0);
    let max_outer = 3 * m + 10;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..m)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate else { break };
        passive[t] = true;

        for _ in 0..(3 * m + 10) {
            let z = solve_passive(a, b, &passive);
            let blocking: Vec<usize> = (0..m).filter(|&j| passive[j] && z[j] <= 0.0).collect();
            if blocking.is_empty() {
                x = z;
                break;
            }
            let alpha = blocking
                .iter()
                .map(|&j| x[j] / (x[j] - z[j]))
                .fold(f64::INFINITY, f64::min);
            x += (&z - &x) * alpha;
            for j in 0..m {
                if passive[j] && x[j] <= tol {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&j| passive[j]).collect();
    let sub = a.select_columns(&cols);
    let svd = sub.svd(true, true);
    let sol = svd
        .solve(b, 1e-14)
        .unwrap_or_else(|_| DVector::zeros(cols.len()));
    let mut z = DVector::zeros(passive.len());
    for (k, &j) in cols.iter().enumerate() {
        z[j] = sol[k];
    }
    z
}
