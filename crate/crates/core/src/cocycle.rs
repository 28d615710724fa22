//! Cocycles `rho_lambda(g, x) = exp(lambda(a(g, x)))`, evaluated in the log
//! domain.
//!
//! Besides the Iwasawa route there is an independent route for fundamental
//! weights: `rho_{mu_i}(g, x)` is the factor by which `g` distorts
//! `i`-dimensional volume on `V_i(x)`, computed from a Gram determinant.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{a_cocycle, a_cocycle_and_act, a_of_frame, Flag, GroupElement};
use crate::rootdata::{Functional, ThetaSet};

/// Natural log of a cocycle value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CocycleValue {
    pub log_value: f64,
}

impl CocycleValue {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// `lambda(a(g, x))`.
pub fn rho_log(lambda: &Functional, g: &GroupElement, x: &Flag) -> Result<f64> {
    lambda.eval(&a_cocycle(g, x)?)
}

fn check_root_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::InvalidRootIndex { index: i, rank: n });
    }
    Ok(())
}

/// Log of the `i`-volume distortion of `g` on the span of the first `i`
/// frame columns: `0.5 log det(B^T B)` with `B = g frame[:, ..i]`.
///
/// `i = n` is accepted as a diagnostic and yields `log |det g|`.
pub fn rho_mu_oracle(i: usize, g: &GroupElement, x: &Flag) -> Result<f64> {
    let n = g.dim();
    if i == 0 || i > n {
        return Err(Error::InvalidRootIndex { index: i, rank: n });
    }
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    let b: DMatrix<f64> = g.matrix() * x.subspace(i);
    let gram = b.transpose() * &b;
    let det = gram.determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::Singular);
    }
    Ok(0.5 * det.ln())
}

/// `log rho_{alpha_i}(g, x) = h_i - h_{i+1}`.
pub fn rho_alpha_log(i: usize, g: &GroupElement, x: &Flag) -> Result<f64> {
    check_root_index(i, g.dim())?;
    let h = a_cocycle(g, x)?;
    Ok(h[i - 1] - h[i])
}

/// Prefix-accumulated cocycle along a word `g_m ... g_1` applied to `base`.
#[derive(Debug, Clone)]
pub struct WordTrace {
    pub letters: Vec<GroupElement>,
    pub base: Flag,
    /// `partial_logs[m] = sum_{j <= m} lambda(a(g_j, g_{j-1} ... g_1 base))`.
    pub partial_logs: Vec<f64>,
    /// `g_m ... g_1 base`.
    pub end: Flag,
}

impl WordTrace {
    pub fn total(&self) -> f64 {
        self.partial_logs.last().copied().unwrap_or(0.0)
    }
}

/// Evaluates the cocycle of a word letter by letter via
/// `rho(gh, x) = rho(g, hx) rho(h, x)`; the product itself is never formed.
pub fn word_cocycle(
    lambda: &Functional,
    letters: &[GroupElement],
    base: &Flag,
) -> Result<WordTrace> {
    if letters.is_empty() {
        return Err(Error::InvalidParameter("empty word".into()));
    }
    let mut x = base.clone();
    let mut acc = 0.0;
    let mut partial_logs = Vec::with_capacity(letters.len());
    for g in letters {
        let (h, next) = a_cocycle_and_act(g, &x)?;
        acc += lambda.eval(&h)?;
        partial_logs.push(acc);
        x = next;
    }
    Ok(WordTrace {
        letters: letters.to_vec(),
        base: base.clone(),
        partial_logs,
        end: x,
    })
}

const K_THETA_TOL: f64 = 1e-10;

/// Checks that `u` is special orthogonal and block diagonal for the
/// partition of coordinates merged by Theta.
pub fn check_k_theta(u: &GroupElement, theta: &ThetaSet) -> Result<()> {
    let n = u.dim();
    let m = u.matrix();
    let defect = (m.transpose() * m - DMatrix::identity(n, n)).amax();
    if defect > K_THETA_TOL {
        return Err(Error::NotInKTheta(format!(
            "orthogonality defect {defect:e}"
        )));
    }
    let mut block_of = vec![0; n];
    for (b, block) in theta.blocks(n).iter().enumerate() {
        for &c in block {
            block_of[c] = b;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if block_of[i] != block_of[j] && m[(i, j)].abs() > K_THETA_TOL {
                return Err(Error::NotInKTheta(format!(
                    "entry ({i}, {j}) = {:e} crosses blocks",
                    m[(i, j)]
                )));
            }
        }
    }
    Ok(())
}

/// `|log rho_lambda(g u, x) - log rho_lambda(g, x)|` with `u` in `K_Theta`.
///
/// `u` acts in the frame of `x` (the flag is `k x_0` and `g u` stands for
/// `g k u` in the `G x K` picture), which is the setting where the defect
/// vanishes whenever `lambda` kills `a(Theta)`.
pub fn restriction_invariance_check(
    lambda: &Functional,
    theta: &ThetaSet,
    g: &GroupElement,
    x: &Flag,
    u: &GroupElement,
) -> Result<f64> {
    check_k_theta(u, theta)?;
    let rotated = x.frame() * u.matrix();
    let (h_u, _) = a_of_frame(g, &rotated)?;
    let (h, _) = a_of_frame(g, x.frame())?;
    Ok((lambda.eval(&h_u)? - lambda.eval(&h)?).abs())
}
