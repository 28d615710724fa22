//! SL(n, R) elements, the Iwasawa decomposition `g = k exp(H) n`, full and
//! partial flags, the left action on flags and attractor flags of regular
//! elements.
//!
//! The decomposition is realized by the QR factorization with positive
//! diagonal: `g = Q R`, `R = D N` with `D = diag(R)`, so `k = Q`,
//! `H = log diag(R)` and `n = D^{-1} R`.

mod flag;
mod qr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use flag::{flag_distance, Flag, PartialFlag};
pub use qr::qr_positive;

/// Determinants further than this from 1 are rejected on ingestion.
pub const DET_REJECT: f64 = 1e-3;
/// Drift above this is removed by rescaling to unit determinant.
pub const DET_RENORMALIZE: f64 = 1e-14;

/// Element of SL(n, R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRows", into = "MatrixRows")]
pub struct GroupElement {
    mat: DMatrix<f64>,
}

/// Row-major matrix carrier used for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRows(pub Vec<Vec<f64>>);

impl MatrixRows {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self(m.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if let Some(bad) = self.0.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(DMatrix::from_row_iterator(
            rows,
            cols,
            self.0.iter().flatten().copied(),
        ))
    }
}

impl TryFrom<MatrixRows> for GroupElement {
    type Error = Error;

    fn try_from(rows: MatrixRows) -> Result<Self> {
        GroupElement::new(rows.to_matrix()?)
    }
}

impl From<GroupElement> for MatrixRows {
    fn from(g: GroupElement) -> Self {
        MatrixRows::from_matrix(&g.mat)
    }
}

impl GroupElement {
    /// Validates a unit-determinant matrix. Small determinant drift is
    /// removed by `g <- g / det(g)^{1/n}`; drift beyond [`DET_REJECT`] is an
    /// error.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let det = mat.determinant();
        if !det.is_finite() || (det - 1.0).abs() > DET_REJECT {
            return Err(Error::DeterminantOutOfRange { det });
        }
        if (det - 1.0).abs() > DET_RENORMALIZE {
            let s = det.powf(1.0 / rows as f64);
            return Ok(Self { mat: mat / s });
        }
        Ok(Self { mat })
    }

    /// Rescales any matrix with positive determinant into SL(n, R).
    pub fn from_scaled(mat: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let det = mat.determinant();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::DeterminantOutOfRange { det });
        }
        let s = det.powf(1.0 / rows as f64);
        Self::new(mat / s)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(MatrixRows(rows.to_vec()).to_matrix()?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: DMatrix::identity(n, n),
        }
    }

    /// `diag(exp(h))` for a trace-zero `h`.
    pub fn from_log_diagonal(h: &[f64]) -> Result<Self> {
        let n = h.len();
        let mut mat = DMatrix::zeros(n, n);
        for (i, v) in h.iter().enumerate() {
            mat[(i, i)] = v.exp();
        }
        Self::new(mat)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Product `self * other` (apply `other` first). Determinants multiply,
    /// so no re-validation happens.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn pow(&self, k: usize) -> GroupElement {
        let mut out = GroupElement::identity(self.dim());
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let inv = self.mat.clone().try_inverse().ok_or(Error::Singular)?;
        Ok(GroupElement { mat: inv })
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|v| v.is_finite())
    }
}

/// Iwasawa factors `g = k exp(H) n_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors {
    pub k: DMatrix<f64>,
    pub h: Vec<f64>,
    pub n_u: DMatrix<f64>,
}

impl IwasawaFactors {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.h.len();
        let mut a = DMatrix::zeros(n, n);
        for (i, v) in self.h.iter().enumerate() {
            a[(i, i)] = v.exp();
        }
        &self.k * a * &self.n_u
    }
}

fn iwasawa_of_matrix(m: &DMatrix<f64>) -> Result<IwasawaFactors> {
    let (q, r) = qr_positive(m)?;
    let n = r.nrows();
    let h: Vec<f64> = (0..n).map(|i| r[(i, i)].ln()).collect();
    let mut n_u = r;
    for i in 0..n {
        let d = n_u[(i, i)];
        for j in i..n {
            n_u[(i, j)] /= d;
        }
        n_u[(i, i)] = 1.0;
    }
    Ok(IwasawaFactors { k: q, h, n_u })
}

pub fn iwasawa_decompose(g: &GroupElement) -> Result<IwasawaFactors> {
    iwasawa_of_matrix(&g.mat)
}

/// The `a`-part of `g` applied at `frame`, i.e. `H` in `g frame = k exp(H) n`.
pub(crate) fn a_of_frame(
    g: &GroupElement,
    frame: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let (q, r) = qr_positive(&(&g.mat * frame))?;
    let h = (0..r.nrows()).map(|i| r[(i, i)].ln()).collect();
    Ok((h, q))
}

/// Iwasawa cocycle `a(g, x)`.
pub fn a_cocycle(g: &GroupElement, x: &Flag) -> Result<Vec<f64>> {
    check_dims(g, x)?;
    Ok(a_of_frame(g, x.frame())?.0)
}

/// Cocycle value and moved flag in one factorization.
pub fn a_cocycle_and_act(g: &GroupElement, x: &Flag) -> Result<(Vec<f64>, Flag)> {
    check_dims(g, x)?;
    let (h, q) = a_of_frame(g, x.frame())?;
    Ok((h, Flag::from_frame_unchecked(q)))
}

pub fn act(g: &GroupElement, x: &Flag) -> Result<Flag> {
    Ok(a_cocycle_and_act(g, x)?.1)
}

fn check_dims(g: &GroupElement, x: &Flag) -> Result<()> {
    if g.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

pub fn project(x: &Flag, theta: &crate::rootdata::ThetaSet) -> PartialFlag {
    PartialFlag::new(x.clone(), theta.clone())
}

/// Options for [`attractor_flag`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorOptions {
    pub max_iter: usize,
    /// Random restarts when the iteration settles on a non-attracting fixed
    /// flag.
    pub restarts: usize,
    /// Required gap between consecutive `a`-coordinates at the fixed flag.
    pub min_gap: f64,
}

impl Default for AttractorOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            restarts: 3,
            min_gap: 1e-9,
        }
    }
}

/// Attractor flag of a regular element, by orthogonal iteration
/// `x <- g x` from the standard flag.
pub fn attractor_flag<R: Rng + ?Sized>(g: &GroupElement, rng: &mut R) -> Result<Flag> {
    attractor_flag_with(g, rng, AttractorOptions::default())
}

pub fn attractor_flag_with<R: Rng + ?Sized>(
    g: &GroupElement,
    rng: &mut R,
    opts: AttractorOptions,
) -> Result<Flag> {
    let n = g.dim();
    let mut start = Flag::standard(n);
    for _ in 0..=opts.restarts {
        let fixed = orthogonal_iteration(g, start, opts.max_iter)?;
        let h = a_cocycle(g, &fixed)?;
        let attracting = h.windows(2).all(|w| w[0] - w[1] > opts.min_gap);
        if attracting {
            return Ok(fixed);
        }
        // Settled on a saddle or repeller: the start was on a lower
        // dimensional invariant set.
        start = random_flag(n, rng)?;
    }
    Err(Error::NotRegular {
        iterations: opts.max_iter,
    })
}

fn orthogonal_iteration(g: &GroupElement, start: Flag, max_iter: usize) -> Result<Flag> {
    let mut x = start;
    let mut prev = f64::INFINITY;
    for _ in 0..max_iter {
        let next = act(g, &x)?;
        let d = flag_distance(&next, &x)?;
        x = next;
        if d <= 1e-13 {
            return Ok(x);
        }
        // Rounding floor reached: no further contraction is observable.
        if d <= 1e-10 && d > 0.9 * prev {
            return Ok(x);
        }
        prev = d;
    }
    if prev <= 1e-8 {
        return Ok(x);
    }
    Err(Error::NotRegular {
        iterations: max_iter,
    })
}

/// Gaussian matrix rescaled into SL(n, R) (a row is negated when the
/// determinant is negative).
pub fn random_group_element<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GroupElement {
    loop {
        let mut m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let det = m.determinant();
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            m.row_mut(0).neg_mut();
        }
        if let Ok(g) = GroupElement::from_scaled(m) {
            return g;
        }
    }
}

pub fn random_flag<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Flag> {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        match Flag::from_basis(&m) {
            Ok(f) => return Ok(f),
            Err(Error::Singular) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Random trace-zero matrix with unit Frobenius norm.
pub fn random_trace_zero_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    loop {
        let mut z = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let tr = z.trace() / n as f64;
        for i in 0..n {
            z[(i, i)] -= tr;
        }
        let norm = z.norm();
        if norm > 1e-12 {
            return z / norm;
        }
    }
}

/// `exp(z)` for a trace-zero `z`, as a group element.
pub fn exp_trace_zero(z: &DMatrix<f64>) -> Result<GroupElement> {
    GroupElement::from_scaled(z.clone().exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn identity_decomposes_trivially() {
        let f = iwasawa_decompose(&GroupElement::identity(3)).unwrap();
        assert_eq!(f.k, DMatrix::identity(3, 3));
        assert!(f.h.iter().all(|&v| v == 0.0));
        assert_eq!(f.n_u, DMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_element_is_pure_a() {
        let g = GroupElement::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let f = iwasawa_decompose(&g).unwrap();
        assert!((&f.k - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!((f.h[0] - 2f64.ln()).abs() < 1e-15);
        assert!((f.h[1] + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn unipotent_element_is_pure_n() {
        let g = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let f = iwasawa_decompose(&g).unwrap();
        assert!((&f.k - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!(f.h.iter().all(|v| v.abs() < 1e-15));
        assert!((&f.n_u - g.matrix()).norm() < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        let mut r = rng(7);
        for n in 2..=5 {
            for _ in 0..100 {
                let g = random_group_element(n, &mut r);
                let f = iwasawa_decompose(&g).unwrap();
                assert!(rel_err(&f.reconstruct(), g.matrix()) < 1e-10);
                assert!((f.k.transpose() * &f.k - DMatrix::identity(n, n)).norm() < 1e-12);
                assert!(f.h.iter().sum::<f64>().abs() < 1e-12);
                for i in 0..n {
                    assert_eq!(f.n_u[(i, i)], 1.0);
                }
            }
        }
    }

    #[test]
    fn uniqueness_from_random_factors() {
        let mut r = rng(8);
        for n in 2..=4 {
            for _ in 0..50 {
                let k = random_flag(n, &mut r).unwrap().frame().clone();
                let mut h: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
                let mean = h.iter().sum::<f64>() / n as f64;
                h.iter_mut().for_each(|v| *v -= mean);
                let mut n_u = DMatrix::identity(n, n);
                for i in 0..n {
                    for j in (i + 1)..n {
                        n_u[(i, j)] = r.random_range(-3.0..3.0);
                    }
                }
                let built = IwasawaFactors {
                    k: k.clone(),
                    h: h.clone(),
                    n_u: n_u.clone(),
                };
                let g = GroupElement::new(built.reconstruct()).unwrap();
                let f = iwasawa_decompose(&g).unwrap();
                assert!((&f.k - &k).norm() < 1e-10);
                assert!((&f.n_u - &n_u).norm() < 1e-10);
                for (a, b) in f.h.iter().zip(&h) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn determinant_guard() {
        let far = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            GroupElement::new(far),
            Err(Error::DeterminantOutOfRange { .. })
        ));

        let near = DMatrix::from_row_slice(2, 2, &[1.0005, 0.0, 0.0, 1.0]);
        let g = GroupElement::new(near).unwrap();
        assert!((g.matrix().determinant() - 1.0).abs() < 1e-14);

        let flipped = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(GroupElement::new(flipped).is_err());
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            GroupElement::new(DMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let nan = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert_eq!(GroupElement::new(nan).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn rotation_has_zero_cocycle() {
        let mut r = rng(9);
        for n in 2..=4 {
            let k = GroupElement::new(random_flag(n, &mut r).unwrap().frame().clone()).unwrap();
            for _ in 0..20 {
                let x = random_flag(n, &mut r).unwrap();
                assert!(a_cocycle(&k, &x).unwrap().iter().all(|v| v.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn diagonal_cocycle_on_first_axis() {
        let s = 0.7;
        let g = GroupElement::from_log_diagonal(&[s, -s]).unwrap();
        let h = a_cocycle(&g, &Flag::standard(2)).unwrap();
        assert!((h[0] - s).abs() < 1e-15 && (h[1] + s).abs() < 1e-15);
    }

    #[test]
    fn cocycle_additivity() {
        let mut r = rng(10);
        for n in 2..=4 {
            for _ in 0..100 {
                let g = random_group_element(n, &mut r);
                let h = random_group_element(n, &mut r);
                let x = random_flag(n, &mut r).unwrap();
                let lhs = a_cocycle(&g.mul(&h), &x).unwrap();
                let hx = act(&h, &x).unwrap();
                let a1 = a_cocycle(&g, &hx).unwrap();
                let a2 = a_cocycle(&h, &x).unwrap();
                for i in 0..n {
                    assert!((lhs[i] - a1[i] - a2[i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn cocycle_is_m_invariant() {
        let mut r = rng(11);
        let n = 4;
        for _ in 0..50 {
            let g = random_group_element(n, &mut r);
            let x = random_flag(n, &mut r).unwrap();
            let mut frame = x.frame().clone();
            frame.column_mut(0).neg_mut();
            frame.column_mut(2).neg_mut();
            let y = Flag::from_frame(frame).unwrap();
            let a = a_cocycle(&g, &x).unwrap();
            let b = a_cocycle(&g, &y).unwrap();
            for i in 0..n {
                assert!((a[i] - b[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn action_examples() {
        let mut r = rng(12);
        let x = random_flag(3, &mut r).unwrap();
        assert!(flag_distance(&act(&GroupElement::identity(3), &x).unwrap(), &x).unwrap() < 1e-15);

        let a = GroupElement::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0 / 3.0],
        ])
        .unwrap();
        let std = Flag::standard(3);
        assert!(flag_distance(&act(&a, &std).unwrap(), &std).unwrap() < 1e-15);
    }

    #[test]
    fn action_law() {
        let mut r = rng(13);
        for n in 2..=4 {
            for _ in 0..100 {
                let g = random_group_element(n, &mut r);
                let h = random_group_element(n, &mut r);
                let x = random_flag(n, &mut r).unwrap();
                let lhs = act(&g, &act(&h, &x).unwrap()).unwrap();
                let rhs = act(&g.mul(&h), &x).unwrap();
                assert!(flag_distance(&lhs, &rhs).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn attractor_of_ordered_diagonal() {
        let g = GroupElement::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0 / 3.0],
        ])
        .unwrap();
        let x = attractor_flag(&g, &mut rng(1)).unwrap();
        assert!(flag_distance(&x, &Flag::standard(3)).unwrap() < 1e-12);
    }

    #[test]
    fn attractor_restarts_from_repeller() {
        // The standard flag is the repelling fixed point here.
        let g = GroupElement::from_rows(&[
            vec![1.0 / 3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        let x = attractor_flag(&g, &mut rng(2)).unwrap();
        let reversed = Flag::from_basis(&DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        ))
        .unwrap();
        assert!(flag_distance(&x, &reversed).unwrap() < 1e-8);
    }

    #[test]
    fn rotation_is_not_regular() {
        let c = std::f64::consts::FRAC_PI_4.cos();
        let s = std::f64::consts::FRAC_PI_4.sin();
        let g = GroupElement::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let opts = AttractorOptions {
            max_iter: 2000,
            ..Default::default()
        };
        assert!(matches!(
            attractor_flag_with(&g, &mut rng(3), opts),
            Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn attractor_matches_eigenvector_flag() {
        // g = P diag(lambda) P^{-1}; the attractor is the flag of the columns
        // of P ordered by decreasing |lambda|.
        let mut r = rng(14);
        for n in 2..=4 {
            for _ in 0..30 {
                let p = random_group_element(n, &mut r).matrix().clone();
                let mut mags: Vec<f64> = (0..n).map(|i| (i as f64 * 0.9).exp()).collect();
                mags.reverse();
                let mut d = DMatrix::zeros(n, n);
                for i in 0..n {
                    let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
                    d[(i, i)] = sign * mags[i];
                }
                let mut m = &p * d * p.clone().try_inverse().unwrap();
                if m.determinant() < 0.0 {
                    m = -m;
                    if m.determinant() < 0.0 {
                        continue;
                    }
                }
                let g = GroupElement::from_scaled(m).unwrap();
                let x = attractor_flag(&g, &mut r).unwrap();
                let expected = Flag::from_basis(&p).unwrap();
                assert!(flag_distance(&x, &expected).unwrap() < 1e-6);
                assert!(flag_distance(&act(&g, &x).unwrap(), &x).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn matrix_rows_round_trip() {
        let g = GroupElement::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let rows = MatrixRows::from(g.clone());
        assert_eq!(GroupElement::try_from(rows).unwrap(), g);
        assert!(MatrixRows(vec![vec![1.0, 0.0], vec![1.0]])
            .to_matrix()
            .is_err());
    }

    #[test]
    fn exp_of_trace_zero_has_unit_det() {
        let mut r = rng(15);
        let z = random_trace_zero_unit(3, &mut r);
        assert!(z.trace().abs() < 1e-14);
        assert!((z.norm() - 1.0).abs() < 1e-14);
        let g = exp_trace_zero(&(z * 0.3)).unwrap();
        assert!((g.matrix().determinant() - 1.0).abs() < 1e-13);
    }
}
