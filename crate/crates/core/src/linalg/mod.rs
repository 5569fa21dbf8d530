//! Linear algebra kernels shared by every other module.
//!
//! Elimination-based routines are generic over the scalar backend; rank
//! decisions go through [`Scalar::kernel_basis`] and friends, which are exact
//! row reduction for `Q(i)` and singular-value thresholds for floats.

pub mod exact;
pub mod float;

use alloc::vec::Vec;
use num_complex::Complex64;

pub use float::{hermitian_eigen, spectral_clusters, svd, SpectralCluster};

use crate::matrix::Matrix;
use crate::scalar::{Backend, PsdCertificate, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. In float mode entries below `tol` times the
/// largest entry are treated as zero and pivots are chosen by magnitude;
/// in exact mode the first nonzero entry is the pivot.
pub fn row_echelon<S: Scalar>(m: &Matrix<S>, tol: f64) -> Rref<S> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = 1.0f64.max(m.max_abs());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidate = match S::BACKEND {
            Backend::Exact => (r..rows).find(|&i| !a[(i, c)].is_zero()),
            Backend::Float => (r..rows)
                .filter(|&i| !a[(i, c)].negligible(scale, tol))
                .max_by(|&i, &j| a[(i, c)].abs_f64().total_cmp(&a[(j, c)].abs_f64())),
        };
        let Some(p) = candidate else {
            for i in r..rows {
                a[(i, c)] = S::zero();
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = S::one().div_ref(&a[(r, c)]);
        for j in c..cols {
            a[(r, j)] = a[(r, j)].mul_ref(&inv);
        }
        let pivot_row: Vec<S> = a.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[(i, c)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let d = factor.mul_ref(&pivot_row[j]);
                a[(i, j)] -= d;
            }
            a[(i, c)] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

/// Basis of `{x : m x = 0}`, one vector per free column of the echelon form.
pub fn kernel_from_rref<S: Scalar>(rref: &Rref<S>) -> Vec<Vec<S>> {
    let cols = rref.matrix.cols();
    let mut is_pivot = alloc::vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = alloc::vec![S::zero(); cols];
            x[f] = S::one();
            for (r, &p) in rref.pivots.iter().enumerate() {
                x[p] = -rref.matrix[(r, f)].clone();
            }
            x
        })
        .collect()
}

/// Right null space basis: reduced row echelon in exact mode, small singular
/// values in float mode.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>, tol: &ToleranceConfig) -> Vec<Vec<S>> {
    S::kernel_basis(m, tol)
}

pub fn rank<S: Scalar>(m: &Matrix<S>, tol: &ToleranceConfig) -> usize {
    m.cols() - kernel_basis(m, tol).len()
}

/// Certifies `g >= 0`, or returns a vector on which the quadratic form is
/// negative.
pub fn psd_certify<S: Scalar>(g: &Matrix<S>, tol: &ToleranceConfig) -> Result<PsdCertificate<S>> {
    S::psd_certify(g, tol)
}

/// Inverse of a square matrix.
pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: f64) -> Result<Matrix<S>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |r, c| {
        if c < n {
            m[(r, c)].clone()
        } else if c - n == r {
            S::one()
        } else {
            S::zero()
        }
    });
    let rref = row_echelon(&aug, tol);
    if n > 0 && (rref.pivots.len() < n || rref.pivots[n - 1] != n - 1) {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |r, c| rref.matrix[(r, n + c)].clone()))
}

/// Solves `a x = b` for square nonsingular `a`.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, tol: f64) -> Result<Matrix<S>> {
    Ok(inverse(a, tol)?.mul(b))
}

/// Adjoint of `f : dom -> cod` with respect to the Hermitian forms given by
/// Gram matrices, `<f x, y>_cod = <x, f* y>_dom` where
/// `<x, y>_G = sum_ij x_i conj(y_j) G_ij`.
pub fn adjoint_wrt_forms<S: Scalar>(
    f: &Matrix<S>,
    g_dom: &Matrix<S>,
    g_cod: &Matrix<S>,
    tol: f64,
) -> Result<Matrix<S>> {
    if g_dom.rows() != f.cols() || g_cod.rows() != f.rows() {
        return Err(Error::ShapeMismatch("Gram matrices do not match the map".into()));
    }
    let dom_inv = inverse(&g_dom.conj(), tol).map_err(|_| Error::DegenerateForm)?;
    // singularity check on the codomain form as well
    inverse(g_cod, tol).map_err(|_| Error::DegenerateForm)?;
    Ok(dom_inv.mul(&f.adjoint()).mul(&g_cod.conj()))
}

/// Expresses vectors in a fixed basis of linearly independent columns.
#[derive(Debug, Clone)]
pub struct Coordinatizer<S> {
    basis: Matrix<S>,
    rows: Vec<usize>,
    left_inverse: Matrix<S>,
    tol: f64,
}

impl<S: Scalar> Coordinatizer<S> {
    /// `basis` must have linearly independent columns.
    pub fn new(basis: Matrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        let d = basis.cols();
        let rows = S::pivot_columns(&basis.transpose(), tol);
        if rows.len() != d {
            return Err(Error::Singular);
        }
        let all: Vec<usize> = (0..d).collect();
        let square = basis.submatrix(&rows, &all);
        let left_inverse = inverse(&square, tol.rank_tol)?;
        Ok(Coordinatizer {
            basis,
            rows,
            left_inverse,
            tol: crate::scalar::cmp_tol::<S>(tol),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    /// Coordinates of `x`, or `None` when `x` is outside the span.
    pub fn coords(&self, x: &[S]) -> Option<Vec<S>> {
        let picked: Vec<S> = self.rows.iter().map(|&r| x[r].clone()).collect();
        let c = self.left_inverse.mul_vec(&picked);
        let back = self.basis.mul_vec(&c);
        crate::matrix::vec_approx_eq(&back, x, self.tol).then_some(c)
    }
}

/// Indices of a maximal independent subset of `vectors`, scanning left to right.
pub fn independent_subset<S: Scalar>(
    len: usize,
    vectors: &[Vec<S>],
    tol: &ToleranceConfig,
) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    S::pivot_columns(&Matrix::from_columns(len, vectors), tol)
}

/// Frobenius norm of a float matrix.
pub fn frobenius(m: &Matrix<Complex64>) -> f64 {
    num_traits::Float::sqrt(m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>())
}
