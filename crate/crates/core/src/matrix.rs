use core::ops::{Index, IndexMut};

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S> Matrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { S::zero() })
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    out.data[i * rhs.cols + j].mul_acc(a, b);
                }
            }
        }
        Ok(out)
    }

    /// Product where the shapes are known to agree.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.matmul(rhs).expect("matrix shapes agree")
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    acc.mul_acc(a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "matrix add shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "matrix sub shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.mul_ref(s))
    }

    /// Kronecker product, row index `(i, k) -> i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            let (i, k) = (r / rhs.rows, r % rhs.rows);
            let (j, l) = (c / rhs.cols, c % rhs.cols);
            self[(i, j)].mul_ref(&rhs[(k, l)])
        })
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)].clone();
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Entrywise comparison, exact in exact mode, relative to the larger
    /// matrix scale (at least one) in float mode.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        let scale = 1.0f64.max(self.max_abs()).max(other.max_abs());
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.sub_ref(b).negligible(scale, tol))
    }

    /// Largest entrywise difference modulus.
    pub fn residual(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "residual shape");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub_ref(b).abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    /// Explicit one-way conversion to the float backend.
    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(Scalar::to_c64)
    }

    /// Rows `rs` and columns `cs`.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        Self::from_fn(rs.len(), cs.len(), |r, c| self[(rs[r], cs[c])].clone())
    }

    pub fn select_columns(&self, cs: &[usize]) -> Self {
        Self::from_fn(self.rows, cs.len(), |r, c| self[(r, cs[c])].clone())
    }
}

/// Sesquilinear pairing `sum_ij x_i conj(y_j) g_ij`.
pub fn form<S: Scalar>(g: &Matrix<S>, x: &[S], y: &[S]) -> S {
    let mut acc = S::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            let gij = &g[(i, j)];
            if gij.is_zero() || yj.is_zero() {
                continue;
            }
            acc += xi.mul_ref(&yj.conj()).mul_ref(gij);
        }
    }
    acc
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.mul_ref(s)).collect()
}

pub fn vec_conj<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(Scalar::conj).collect()
}

pub fn unit_vector<S: Scalar>(n: usize, k: usize) -> Vec<S> {
    (0..n).map(|i| if i == k { S::one() } else { S::zero() }).collect()
}

pub fn vec_approx_eq<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let scale = a
        .iter()
        .chain(b)
        .map(Scalar::abs_f64)
        .fold(1.0f64, f64::max);
    a.iter().zip(b).all(|(x, y)| x.sub_ref(y).negligible(scale, tol))
}

/// Kronecker product of coordinate vectors.
pub fn vec_kron<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul_ref(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m(rows: &[&[i64]]) -> Matrix<Exact> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Exact::from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kron_layout() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 1)], Exact::from_i64(1));
        assert_eq!(k[(2, 3)], Exact::from_i64(4));
        assert_eq!(k[(3, 0)], Exact::from_i64(3));
    }

    #[test]
    fn matmul_rejects_bad_shapes() {
        let a = m(&[&[1, 2]]);
        assert!(a.matmul(&a).is_err());
        assert_eq!(a.matmul(&a.transpose()).unwrap(), m(&[&[5]]));
    }

    #[test]
    fn form_is_sesquilinear() {
        let g = Matrix::<Exact>::identity(2);
        let i = Exact::imag_unit();
        let x = vec![i.clone(), Exact::zero()];
        // <i e1, i e1> = i * conj(i) = 1
        assert_eq!(form(&g, &x, &x), Exact::one());
        let y = vec![Exact::one(), Exact::zero()];
        assert_eq!(form(&g, &x, &y), i);
        assert_eq!(form(&g, &y, &x), -Exact::imag_unit());
    }
}
