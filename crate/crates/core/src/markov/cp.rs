use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{StarAlgebra, StarLinearMap};
use crate::linalg::{self, inverse};
use crate::matrix::Matrix;
use crate::scalar::{PsdCertificate, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Choi matrix `sum_pq E_pq (x) rho_B(Phi(E(E_pq)))` of a map between
/// represented algebras.
///
/// `Phi` is only defined on `rho_A(A) in M_n`, so it is first extended by
/// the trace-preserving conditional expectation `E : M_n -> rho_A(A)`, the
/// orthogonal projection for `<x, y> = tr(x* y)`. `E` is completely positive
/// and restricts to the identity on `rho_A(A)`, so `Phi` is completely
/// positive exactly when `Phi o E` is.
pub fn choi_matrix<S: Scalar>(map: &StarLinearMap<S>, tol: &ToleranceConfig) -> Result<Matrix<S>> {
    let rep_a = map.dom().rep().ok_or(Error::NoFaithfulRep)?;
    let rep_b = map.cod().rep().ok_or(Error::NoFaithfulRep)?;
    let (n, m) = (rep_a.dim, rep_b.dim);
    let basis = &rep_a.matrices;
    let d = basis.len();
    let hs = Matrix::from_fn(d, d, |i, j| basis[i].adjoint().mul(&basis[j]).trace());
    let hs_inv = inverse(&hs, tol.rank_tol).map_err(|_| Error::NotFaithful)?;
    let mut choi = Matrix::zeros(n * m, n * m);
    for p in 0..n {
        for q in 0..n {
            // tr(R_i* E_pq) = conj(R_i[p, q])
            let rhs: Vec<S> = basis.iter().map(|r| r[(p, q)].conj()).collect();
            let coords = hs_inv.mul_vec(&rhs);
            let image = rep_b.apply(&map.apply(&coords));
            for r in 0..m {
                for s in 0..m {
                    choi[(p * m + r, q * m + s)] = image[(r, s)].clone();
                }
            }
        }
    }
    Ok(choi)
}

/// A *-linear map certified completely positive by its Choi matrix.
#[derive(Debug, Clone)]
pub struct CpMap<S> {
    underlying: StarLinearMap<S>,
    choi: Matrix<S>,
    unital: bool,
}

/// Outcome of [`is_completely_positive`].
#[derive(Debug, Clone)]
pub enum CpVerdict<S> {
    Cp(CpMap<S>),
    /// `witness* choi witness = value < 0`.
    NotCp { choi: Matrix<S>, witness: Vec<S>, value: S },
}

pub fn is_completely_positive<S: Scalar>(map: &StarLinearMap<S>, tol: &ToleranceConfig) -> Result<CpVerdict<S>> {
    let choi = choi_matrix(map, tol)?;
    Ok(match S::psd_certify(&choi, tol)? {
        PsdCertificate::Psd => CpVerdict::Cp(CpMap {
            unital: map.is_unital(tol),
            underlying: map.clone(),
            choi,
        }),
        PsdCertificate::Indefinite { witness, value } => CpVerdict::NotCp { choi, witness, value },
    })
}

impl<S: Scalar> CpMap<S> {
    /// Certifies `map`, failing with `NotCP`.
    pub fn new(map: &StarLinearMap<S>, tol: &ToleranceConfig) -> Result<Self> {
        match is_completely_positive(map, tol)? {
            CpVerdict::Cp(cp) => Ok(cp),
            CpVerdict::NotCp { .. } => Err(Error::NotCP),
        }
    }

    pub fn underlying(&self) -> &StarLinearMap<S> {
        &self.underlying
    }
    pub fn choi(&self) -> &Matrix<S> {
        &self.choi
    }
    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Minimal number of Kraus operators, the rank of the Choi matrix.
    pub fn kraus_rank(&self, tol: &ToleranceConfig) -> usize {
        linalg::rank(&self.choi, tol)
    }

    /// `self o inner`, re-certified.
    pub fn compose(&self, inner: &CpMap<S>, tol: &ToleranceConfig) -> Result<Self> {
        CpMap::new(&self.underlying.compose(&inner.underlying)?, tol)
    }
}

/// `a -> sum_j K_j* rho_A(a) K_j`, read back in `B` through its
/// representation. Each `K_j` maps the representation space of `B` into
/// that of `A`.
pub fn kraus_map<S: Scalar>(
    dom: &Arc<StarAlgebra<S>>,
    cod: &Arc<StarAlgebra<S>>,
    kraus: &[Matrix<S>],
    tol: &ToleranceConfig,
) -> Result<StarLinearMap<S>> {
    let rep_a = dom.rep().ok_or(Error::NoFaithfulRep)?;
    let rep_b = cod.rep().ok_or(Error::NoFaithfulRep)?;
    if kraus.iter().any(|k| k.shape() != (rep_a.dim, rep_b.dim)) {
        return Err(Error::ShapeMismatch("Kraus operators must map rep(B) into rep(A)".into()));
    }
    let images: Vec<Matrix<S>> = rep_a
        .matrices
        .iter()
        .map(|r| {
            kraus
                .iter()
                .fold(Matrix::zeros(rep_b.dim, rep_b.dim), |acc, k| acc.add(&k.adjoint().mul(r).mul(k)))
        })
        .collect();
    StarLinearMap::from_rep_images(dom.clone(), cod.clone(), &images, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_numbers, generated_subalgebra, matrix_algebra, Element, StarHomomorphism};
    use crate::scalar::Exact;
    use crate::Complex64;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    fn transpose_map<S: Scalar>(m2: &Arc<StarAlgebra<S>>) -> StarLinearMap<S> {
        let f = Matrix::from_fn(4, 4, |r, c| if r == (c % 2) * 2 + c / 2 { S::one() } else { S::zero() });
        StarLinearMap::new(m2.clone(), m2.clone(), f, &tol()).unwrap()
    }

    #[test]
    fn homomorphisms_are_cp() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let c = Arc::new(complex_numbers::<Exact>());
        let unit = StarHomomorphism::unit_inclusion(&c, &m2).unwrap();
        let cp = CpMap::new(&unit.as_linear(), &tol()).unwrap();
        assert!(cp.is_unital());
        let a = Element::new(m2.clone(), vec![q(1), q(0), q(0), q(-1)]).unwrap();
        let sub = generated_subalgebra(&m2, &[a], &tol()).unwrap();
        let cp = CpMap::new(&sub.inclusion.as_linear(), &tol()).unwrap();
        // the expectation kills off-diagonal units: Choi = sum_p E_pp (x) E_pp
        let mut expected = Matrix::zeros(4, 4);
        expected[(0, 0)] = q(1);
        expected[(3, 3)] = q(1);
        assert_eq!(cp.choi(), &expected);
        assert_eq!(cp.kraus_rank(&tol()), 2);
    }

    #[test]
    fn transpose_is_not_cp() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let t = transpose_map(&m2);
        // the Choi matrix of the transpose is the swap operator
        let swap = Matrix::from_fn(4, 4, |r, c| if c == (r % 2) * 2 + r / 2 { q(1) } else { q(0) });
        assert_eq!(choi_matrix(&t, &tol()).unwrap(), swap);
        match is_completely_positive(&t, &tol()).unwrap() {
            CpVerdict::NotCp { choi, witness, value } => {
                assert!(value.re_f64() < 0.0);
                let w = Matrix::from_columns(4, &[witness]);
                assert_eq!(w.adjoint().mul(&choi).mul(&w)[(0, 0)], value);
            }
            CpVerdict::Cp(_) => panic!("transpose is not completely positive"),
        }
        assert_eq!(CpMap::new(&t, &tol()).err(), Some(Error::NotCP));
        // float: the swap has eigenvalue -1 on the antisymmetric vector
        let m2f = Arc::new(matrix_algebra::<Complex64>(2));
        let choi = choi_matrix(&transpose_map(&m2f), &tol()).unwrap();
        let (vals, _) = linalg::hermitian_eigen(&choi);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn compression_has_one_kraus_operator() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let p = Matrix::diag(&[q(1), q(0)]);
        let map = kraus_map(&m2, &m2, &[p], &tol()).unwrap();
        // E11 -> E11 and everything else -> 0
        let mut expected = Matrix::zeros(4, 4);
        expected[(0, 0)] = q(1);
        assert_eq!(map.matrix(), &expected);
        let cp = CpMap::new(&map, &tol()).unwrap();
        assert_eq!(cp.kraus_rank(&tol()), 1);
        assert!(!cp.is_unital());
    }

    #[test]
    fn kraus_families_compose() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let m3 = Arc::new(matrix_algebra::<Exact>(3));
        let k1 = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), Exact::imag_unit()], vec![q(1), q(1)]]).unwrap();
        let k2 = Matrix::from_rows(vec![vec![q(0), q(2)], vec![q(1), q(0)], vec![q(0), q(-1)]]).unwrap();
        let phi = CpMap::new(&kraus_map(&m3, &m2, &[k1.clone(), k2], &tol()).unwrap(), &tol()).unwrap();
        assert!(phi.kraus_rank(&tol()) <= 2);
        let back = CpMap::new(&kraus_map(&m2, &m3, &[k1.adjoint()], &tol()).unwrap(), &tol()).unwrap();
        let comp = phi.compose(&back, &tol()).unwrap();
        assert_eq!(comp.underlying().dom().dim(), 4);
    }
}
