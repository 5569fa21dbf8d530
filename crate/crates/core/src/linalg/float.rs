//! Floating-point kernels: cyclic Jacobi for Hermitian eigenproblems and
//! one-sided Jacobi for singular values.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use super::frobenius;
use crate::matrix::Matrix;
use crate::scalar::PsdCertificate;
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary matrix whose columns are the matching eigenvectors.
pub fn hermitian_eigen(h: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let n = h.rows();
    // symmetrize to remove rounding asymmetry
    let mut a = Matrix::from_fn(n, n, |r, s| (h[(r, s)] + h[(s, r)].conj()) * 0.5);
    let mut v = Matrix::<Complex64>::identity(n);
    let norm = frobenius(&a).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if Float::sqrt(off) <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // rotate column q by a phase so that a_pq becomes real
                let phase = apq / mag;
                let ph_conj = phase.conj();
                for k in 0..n {
                    a[(k, q)] *= ph_conj;
                    v[(k, q)] *= ph_conj;
                }
                for k in 0..n {
                    a[(q, k)] *= phase;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + Float::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + Float::sqrt(theta * theta + 1.0))
                };
                let cs = 1.0 / Float::sqrt(t * t + 1.0);
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * sn;
                    a[(k, q)] = akp * sn + akq * cs;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs - vkq * sn;
                    v[(k, q)] = vkp * sn + vkq * cs;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * sn;
                    a[(q, k)] = apk * sn + aqk * cs;
                }
                a[(p, q)] = c(0.0);
                a[(q, p)] = c(0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    (values, vectors)
}

/// Singular values (in column order of the rotated matrix) and the right
/// singular vectors as columns of a unitary matrix.
pub fn svd(m: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = Matrix::<Complex64>::identity(cols);
    let col_dot = |a: &Matrix<Complex64>, p: usize, q: usize| -> Complex64 {
        (0..rows).map(|k| a[(k, p)].conj() * a[(k, q)]).sum()
    };

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = col_dot(&a, p, p).re;
                let beta = col_dot(&a, q, q).re;
                let gamma = col_dot(&a, p, q);
                let g = gamma.norm();
                if g <= 1e-15 * Float::sqrt(alpha * beta) || g <= 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                // column q scaled by conj(phase) makes a_p^H a_q real positive
                for k in 0..rows {
                    a[(k, q)] *= phase.conj();
                }
                for k in 0..cols {
                    v[(k, q)] *= phase.conj();
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + Float::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + Float::sqrt(1.0 + zeta * zeta))
                };
                let cs = 1.0 / Float::sqrt(1.0 + t * t);
                let sn = cs * t;
                for k in 0..rows {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    a[(k, p)] = ap * cs - aq * sn;
                    a[(k, q)] = ap * sn + aq * cs;
                }
                for k in 0..cols {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * cs - vq * sn;
                    v[(k, q)] = vp * sn + vq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..cols).map(|j| Float::sqrt(col_dot(&a, j, j).re)).collect();
    (sigma, v)
}

/// Right singular vectors whose singular value is at most `rank_tol` times
/// the largest one.
pub fn kernel_basis_svd(m: &Matrix<Complex64>, rank_tol: f64) -> Vec<Vec<Complex64>> {
    if m.cols() == 0 {
        return Vec::new();
    }
    let (sigma, v) = svd(m);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let thr = rank_tol * smax;
    let mut idx: Vec<usize> = (0..sigma.len()).filter(|&j| sigma[j] <= thr).collect();
    idx.sort_by(|&i, &j| sigma[i].total_cmp(&sigma[j]));
    idx.into_iter().map(|j| v.column(j)).collect()
}

/// Leftmost independent columns, each admission decided by the smallest
/// singular value of the selected set against `rank_tol` times the largest
/// singular value of the whole matrix.
pub fn greedy_pivot_columns(m: &Matrix<Complex64>, rank_tol: f64) -> Vec<usize> {
    if m.cols() == 0 || m.rows() == 0 {
        return Vec::new();
    }
    let (sigma, _) = svd(m);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    let thr = rank_tol * smax;
    let rank = sigma.iter().filter(|&&s| s > thr).count();
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols() {
        if chosen.len() == rank {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        let (s, _) = svd(&m.select_columns(&trial));
        if s.iter().all(|&x| x > thr) {
            chosen = trial;
        }
    }
    chosen
}

pub fn psd_eigen(g: &Matrix<Complex64>, tol: &ToleranceConfig) -> Result<PsdCertificate<Complex64>> {
    if !g.is_hermitian(tol.rank_tol) {
        return Err(Error::NotHermitian);
    }
    if g.rows() == 0 {
        return Ok(PsdCertificate::Psd);
    }
    let (vals, vecs) = hermitian_eigen(g);
    let scale = 1.0f64.max(g.max_abs());
    if vals[0] >= -tol.psd_tol * scale {
        Ok(PsdCertificate::Psd)
    } else {
        Ok(PsdCertificate::Indefinite {
            witness: vecs.column(0),
            value: c(vals[0]),
        })
    }
}

/// One eigenvalue cluster of a normal matrix with its spectral projection.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub eigenvalue: Complex64,
    pub projection: Matrix<Complex64>,
    pub multiplicity: usize,
}

fn group(values: &[f64], radius: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if x - values[*g.last().unwrap()] <= radius => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Clusters the spectrum of a normal matrix within `spec_tol * max(1, |n|)`
/// and returns the spectral projections. The Hermitian part is diagonalized
/// first; each of its eigenspaces is then split by the anti-Hermitian part.
pub fn spectral_clusters(n: &Matrix<Complex64>, tol: &ToleranceConfig) -> Result<Vec<SpectralCluster>> {
    if !n.is_square() {
        return Err(Error::ShapeMismatch("spectral decomposition of a non-square matrix".into()));
    }
    let dim = n.rows();
    let norm = frobenius(n);
    let scale = 1.0f64.max(norm);
    let adj = n.adjoint();
    let comm = n.mul(&adj).sub(&adj.mul(n));
    if frobenius(&comm) > tol.rank_tol.max(tol.spec_tol) * scale * scale {
        return Err(Error::NotNormal);
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let radius = tol.spec_tol * scale;
    let herm = n.add(&adj).scale(&c(0.5));
    let anti = n.sub(&adj).scale(&Complex64::new(0.0, -0.5));
    let (hvals, hvecs) = hermitian_eigen(&herm);

    let mut out = Vec::new();
    for g in group(&hvals, radius) {
        let q = hvecs.select_columns(&g);
        let k = q.adjoint().mul(&anti).mul(&q);
        let (kvals, kvecs) = hermitian_eigen(&k);
        for sub in group(&kvals, radius) {
            let w = q.mul(&kvecs.select_columns(&sub));
            let projection = w.mul(&w.adjoint());
            let mult = sub.len();
            let eigenvalue = projection.mul(n).trace() / mult as f64;
            out.push(SpectralCluster {
                eigenvalue,
                projection,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(rows: &[&[f64]]) -> Matrix<Complex64> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| c(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn eigen_reconstructs_complex_hermitian() {
        let h = Matrix::from_rows(vec![
            vec![c(2.0), Complex64::new(1.0, 1.0), c(0.0)],
            vec![Complex64::new(1.0, -1.0), c(3.0), Complex64::new(0.0, 2.0)],
            vec![c(0.0), Complex64::new(0.0, -2.0), c(-1.0)],
        ])
        .unwrap();
        let (vals, v) = hermitian_eigen(&h);
        let d = Matrix::diag(&vals.iter().map(|&x| c(x)).collect::<Vec<_>>());
        let back = v.mul(&d).mul(&v.adjoint());
        assert!(back.residual(&h) < 1e-12);
        assert!(v.adjoint().mul(&v).residual(&Matrix::identity(3)) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_small_singular_value_is_accurate() {
        let eps = 1e-13;
        let m = fl(&[&[1.0, 1.0], &[1.0, 1.0 + eps]]);
        let (s, _) = svd(&m);
        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        // det = eps, smax ~ 2, so smin ~ eps / 2
        assert!((smin - eps / 2.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_clusters() {
        let tol = ToleranceConfig::default();
        let x = fl(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let cl = spectral_clusters(&x, &tol).unwrap();
        assert_eq!(cl.len(), 2);
        // 2x2 diagonalization by hand: P(+-1) = 1/2 [[1, +-1], [+-1, 1]]
        let minus = fl(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        let plus = fl(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!((cl[0].eigenvalue - c(-1.0)).norm() < 1e-12);
        assert!(cl[0].projection.residual(&minus) < 1e-12);
        assert!((cl[1].eigenvalue - c(1.0)).norm() < 1e-12);
        assert!(cl[1].projection.residual(&plus) < 1e-12);
    }

    #[test]
    fn identity_single_cluster_and_diag() {
        let tol = ToleranceConfig::default();
        let cl = spectral_clusters(&Matrix::identity(3), &tol).unwrap();
        assert_eq!(cl.len(), 1);
        assert!(cl[0].projection.residual(&Matrix::identity(3)) < 1e-12);
        let d = spectral_clusters(&fl(&[&[1.0, 0.0], &[0.0, -1.0]]), &tol).unwrap();
        assert!((d[1].eigenvalue - c(1.0)).norm() < 1e-12);
        assert!(d[1].projection.residual(&fl(&[&[1.0, 0.0], &[0.0, 0.0]])) < 1e-12);
    }

    #[test]
    fn rotation_has_complex_spectrum() {
        let tol = ToleranceConfig::default();
        // normal, not Hermitian: eigenvalues +-i
        let r = fl(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let cl = spectral_clusters(&r, &tol).unwrap();
        assert_eq!(cl.len(), 2);
        let mut sum = Matrix::<Complex64>::zeros(2, 2);
        for k in &cl {
            assert!((k.eigenvalue.norm() - 1.0).abs() < 1e-12 && k.eigenvalue.re.abs() < 1e-12);
            sum = sum.add(&k.projection.scale(&k.eigenvalue));
        }
        assert!(sum.residual(&r) < 1e-12);
    }

    #[test]
    fn non_normal_rejected() {
        let tol = ToleranceConfig::default();
        let j = fl(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(spectral_clusters(&j, &tol), Err(Error::NotNormal)));
    }
}
