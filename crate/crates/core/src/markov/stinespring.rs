use alloc::sync::Arc;
use alloc::vec::Vec;

use super::CpMap;
use crate::algebra::same_algebra;
use crate::gns::{gns, GnsSpace, State};
use crate::linalg::{adjoint_wrt_forms, inverse};
use crate::matrix::Matrix;
use crate::scalar::{PsdCertificate, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// `V* pi(a) V = i(Phi(a))` for a CP map `Phi : A -> B` and a positive state
/// `phi` on `B`, with `i` the GNS representation of `B`.
#[derive(Debug, Clone)]
pub struct StinespringDilation<S> {
    /// Quotient Gram matrix of `H = (A (x) B) / radical`.
    pub form: Matrix<S>,
    /// Indices `l * dim(B) + k` of the classes `[e_l (x) f_k]` spanning `H`.
    pub pivots: Vec<usize>,
    /// `GNS(phi) -> H`, `[b] -> [1 (x) b]`.
    pub v: Matrix<S>,
    /// Adjoint of `v` with respect to the two forms.
    pub v_adjoint: Matrix<S>,
    /// `pi(e_i) : [a (x) b] -> [e_i a (x) b]`.
    pub pi: Vec<Matrix<S>>,
    pub gns: Arc<GnsSpace<S>>,
    /// `i(Phi(e_i))` on `GNS(phi)`.
    pub target: Vec<Matrix<S>>,
}

impl<S: Scalar> StinespringDilation<S> {
    pub fn h_dim(&self) -> usize {
        self.pivots.len()
    }

    /// `V* pi(e_i) V`.
    pub fn compressed(&self, i: usize) -> Matrix<S> {
        self.v_adjoint.mul(&self.pi[i]).mul(&self.v)
    }

    /// Largest entry of `V* pi(a) V - i(Phi(a))` over the basis of `A`.
    pub fn residual(&self) -> f64 {
        (0..self.pi.len())
            .map(|i| self.compressed(i).residual(&self.target[i]))
            .fold(0.0, f64::max)
    }
}

/// Builds `H = A (x) B` with `<a1 (x) b1, a2 (x) b2> = phi(b2* Phi(a2* a1) b1)`
/// and quotients by its radical.
pub fn stinespring<S: Scalar>(
    map: &CpMap<S>,
    phi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<StinespringDilation<S>> {
    let phi_map = map.underlying();
    if !same_algebra(phi_map.cod(), phi.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let g = Arc::new(gns(phi, tol)?);
    if !g.is_positive() {
        return Err(Error::NotPositive);
    }
    let (a, b) = (phi_map.dom().clone(), phi_map.cod().clone());
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;

    // q[s][k] = phi(f_s f_k)
    let q = Matrix::from_fn(nb, nb, |s, k| phi.eval(&b.mul(&b.basis_vector(s), &b.basis_vector(k))));
    // t[j][t][k] = phi(f_j* f_t f_k)
    let mut t = vec3(nb);
    for j in 0..nb {
        for tt in 0..nb {
            let w = b.star_basis_product(j, tt);
            for k in 0..nb {
                let mut acc = S::zero();
                for (s, ws) in w.iter().enumerate() {
                    if !ws.is_zero() {
                        acc.mul_acc(ws, &q[(s, k)]);
                    }
                }
                t[j][tt][k] = acc;
            }
        }
    }
    let mut h = Matrix::zeros(n, n);
    for l in 0..na {
        for m in 0..na {
            let c = phi_map.apply(&a.star_basis_product(m, l));
            for k in 0..nb {
                for j in 0..nb {
                    let mut acc = S::zero();
                    for (tt, ct) in c.iter().enumerate() {
                        if !ct.is_zero() {
                            acc.mul_acc(ct, &t[j][tt][k]);
                        }
                    }
                    h[(l * nb + k, m * nb + j)] = acc;
                }
            }
        }
    }

    let pivots = S::pivot_columns(&h, tol);
    let radical = S::kernel_basis(&h.transpose(), tol);
    if radical.len() + pivots.len() != n {
        return Err(Error::DegenerateForm);
    }
    let all: Vec<usize> = (0..n).collect();
    let form = h.submatrix(&pivots, &pivots);
    if let PsdCertificate::Indefinite { .. } = S::psd_certify(&form, tol)? {
        return Err(Error::NotPositive);
    }
    let reduce_t = inverse(&form.transpose(), tol.rank_tol).map_err(|_| Error::DegenerateForm)?;
    let reduction = reduce_t.mul(&h.submatrix(&all, &pivots).transpose());
    let d = pivots.len();

    let v_cols: Vec<Vec<S>> = g
        .pivots()
        .iter()
        .map(|&p| {
            let mut x = alloc::vec![S::zero(); n];
            for (l, u) in a.unit().iter().enumerate() {
                x[l * nb + p] = u.clone();
            }
            reduction.mul_vec(&x)
        })
        .collect();
    let v = Matrix::from_columns(d, &v_cols);
    let v_adjoint = adjoint_wrt_forms(&v, g.gram(), &form, tol.rank_tol)?;

    let mut pi = Vec::with_capacity(na);
    for i in 0..na {
        let mut act: Matrix<S> = Matrix::zeros(d, d);
        for (col, &piv) in pivots.iter().enumerate() {
            let (l, k) = (piv / nb, piv % nb);
            for (m, c) in a.basis_product(i, l) {
                let src = m * nb + k;
                for r in 0..d {
                    act[(r, col)].mul_acc(c, &reduction[(r, src)]);
                }
            }
        }
        pi.push(act);
    }
    let target = (0..na).map(|i| g.action_of(&phi_map.apply(&a.basis_vector(i)))).collect();
    Ok(StinespringDilation {
        form,
        pivots,
        v,
        v_adjoint,
        pi,
        gns: g,
        target,
    })
}

fn vec3<S: Scalar>(n: usize) -> Vec<Vec<Vec<S>>> {
    alloc::vec![alloc::vec![alloc::vec![S::zero(); n]; n]; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, StarLinearMap};
    use crate::markov::kraus_map;
    use crate::scalar::Exact;
    use crate::Complex64;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    fn check_representation(d: &StinespringDilation<Exact>, alg: &crate::algebra::StarAlgebra<Exact>) {
        let unit: Matrix<Exact> = d.pi.iter().zip(alg.unit()).fold(Matrix::zeros(d.h_dim(), d.h_dim()), |acc, (p, u)| {
            acc.add(&p.scale(u))
        });
        assert_eq!(unit, Matrix::identity(d.h_dim()));
        for i in 0..alg.dim() {
            let star = alg.star_matrix().column(i);
            let pi_star = d.pi.iter().zip(&star).fold(Matrix::zeros(d.h_dim(), d.h_dim()), |acc, (p, s)| {
                acc.add(&p.scale(s))
            });
            let adj = adjoint_wrt_forms(&d.pi[i], &d.form, &d.form, 0.0).unwrap();
            assert_eq!(pi_star, adj);
        }
    }

    #[test]
    fn identity_dilation() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let id = CpMap::new(&StarLinearMap::identity(&m2), &tol()).unwrap();
        let phi = State::vectorial(&m2, &[q(1), q(2)]).unwrap();
        let d = stinespring(&id, &phi, &tol()).unwrap();
        assert_eq!(d.residual(), 0.0);
        for i in 0..4 {
            assert_eq!(d.compressed(i), d.target[i]);
        }
        // H = M2 (x) C^2 modulo the radical: a (x) b ~ a b (x) 1 leaves M2 v, which is C^2
        assert_eq!(d.h_dim(), 2);
        check_representation(&d, &m2);
    }

    #[test]
    fn compression_by_e11() {
        // Phi(a) = P a P with P = E11 and v = (1, 1)
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let p = Matrix::diag(&[q(1), q(0)]);
        let cp = CpMap::new(&kraus_map(&m2, &m2, &[p], &tol()).unwrap(), &tol()).unwrap();
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let d = stinespring(&cp, &phi, &tol()).unwrap();
        assert_eq!(d.residual(), 0.0);
        // <a1 (x) b1, a2 (x) b2> = <a1 P b1 v, a2 P b2 v>, so H = M2 e1 = C^2
        assert_eq!(d.h_dim(), 2);
        // P E_pq P vanishes unless p = q = 1
        assert_eq!(d.compressed(0), d.gns.action_of(&m2.basis_vector(0)));
        for i in 1..4 {
            assert!(d.compressed(i).is_zero());
        }
        check_representation(&d, &m2);
    }

    #[test]
    fn random_kraus_float() {
        let m2 = Arc::new(matrix_algebra::<Complex64>(2));
        let m3 = Arc::new(matrix_algebra::<Complex64>(3));
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let k1 = Matrix::from_rows(vec![vec![c(0.3, 0.1), c(-0.2, 0.5)], vec![c(0.7, 0.0), c(0.1, -0.4)], vec![c(0.0, 0.2), c(0.6, 0.3)]]).unwrap();
        let k2 = Matrix::from_rows(vec![vec![c(0.1, 0.0), c(0.0, 0.0)], vec![c(0.2, 0.2), c(-0.3, 0.1)], vec![c(0.5, -0.5), c(0.0, 0.9)]]).unwrap();
        let cp = CpMap::new(&kraus_map(&m3, &m2, &[k1, k2], &tol()).unwrap(), &tol()).unwrap();
        let phi = State::vectorial(&m2, &[c(0.8, 0.1), c(-0.3, 0.5)]).unwrap();
        let d = stinespring(&cp, &phi, &tol()).unwrap();
        assert!(d.residual() < 1e-9, "residual {}", d.residual());
    }

    #[test]
    fn rejects_wrong_state() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let m3 = Arc::new(matrix_algebra::<Exact>(3));
        let id = CpMap::new(&StarLinearMap::identity(&m2), &tol()).unwrap();
        let phi = State::vectorial(&m3, &[q(1), q(0), q(0)]).unwrap();
        assert_eq!(stinespring(&id, &phi, &tol()).err(), Some(Error::AlgebraMismatch));
        let indefinite = State::new(m2.clone(), vec![q(1), q(0), q(0), q(-1)], &tol()).unwrap();
        assert_eq!(stinespring(&id, &indefinite, &tol()).err(), Some(Error::NotPositive));
    }
}
