//! Exact kernels over `Q(i)`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{kernel_from_rref, row_echelon, Rref};
use crate::matrix::{form, Matrix};
use crate::scalar::{Exact, PsdCertificate, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

pub fn rref(m: &Matrix<Exact>) -> Rref<Exact> {
    row_echelon(m, 0.0)
}

pub fn kernel_basis(m: &Matrix<Exact>) -> Vec<Vec<Exact>> {
    kernel_from_rref(&rref(m))
}

/// Pivoted LDL* on a Hermitian matrix.
///
/// Keeps `M = T* G T` for a change of basis `T`, eliminating one positive
/// diagonal pivot at a time. A negative diagonal, or a zero diagonal block
/// with a nonzero off-diagonal entry, yields a witness.
pub fn psd_ldl(g: &Matrix<Exact>, _tol: &ToleranceConfig) -> Result<PsdCertificate<Exact>> {
    if !g.is_hermitian(0.0) {
        return Err(Error::NotHermitian);
    }
    let n = g.rows();
    let mut m = g.clone();
    let mut t = Matrix::<Exact>::identity(n);
    let mut active: Vec<usize> = (0..n).collect();

    let witness = |t: &Matrix<Exact>, x: Vec<Exact>| {
        let w = t.mul_vec(&x);
        // quadratic form x* g x = <w, w>_g with the column convention below
        let value = form(g, &w.iter().map(Scalar::conj).collect::<Vec<_>>(), &w.iter().map(Scalar::conj).collect::<Vec<_>>());
        PsdCertificate::Indefinite { witness: w, value }
    };

    while !active.is_empty() {
        if let Some(&k) = active
            .iter()
            .find(|&&k| m[(k, k)].real_sign(0.0) == Some(Ordering::Less))
        {
            return Ok(witness(&t, crate::matrix::unit_vector(n, k)));
        }
        let Some(&k) = active
            .iter()
            .find(|&&k| m[(k, k)].real_sign(0.0) == Some(Ordering::Greater))
        else {
            // every remaining diagonal entry is zero
            for &j in &active {
                for &k in &active {
                    if j != k && !Scalar::is_zero(&m[(j, k)]) {
                        let mut x = crate::matrix::unit_vector::<Exact>(n, j);
                        x[k] = -m[(j, k)].conj();
                        return Ok(witness(&t, x));
                    }
                }
            }
            break;
        };
        let pivot = m[(k, k)].clone();
        active.retain(|&j| j != k);
        for &j in &active {
            let factor = m[(k, j)].div_ref(&pivot);
            if Scalar::is_zero(&factor) {
                continue;
            }
            for r in 0..n {
                let d = t[(r, k)].mul_ref(&factor);
                t[(r, j)] -= d;
            }
        }
        for &i in &active {
            if Scalar::is_zero(&m[(i, k)]) {
                continue;
            }
            for &j in &active {
                if Scalar::is_zero(&m[(k, j)]) {
                    continue;
                }
                let d = m[(i, k)].mul_ref(&m[(k, j)]).div_ref(&pivot);
                m[(i, j)] -= d;
            }
        }
    }
    Ok(PsdCertificate::Psd)
}
