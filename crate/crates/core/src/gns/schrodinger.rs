use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{cyclic_embedding, gns, gns_map, CyclicModule, PhysMorphism, State};
use crate::algebra::{Representation, StarAlgebra, StarHomomorphism};
use crate::matrix::{vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// The Schrödinger-picture lift of an isometry `U : H -> K` along a state
/// vector `psi in H`.
#[derive(Debug, Clone)]
pub struct SchrodingerLift<S> {
    /// `(B, U psi) -> (A, psi)`, carried by `f : A -> B`, `f(a) = U a U*`.
    pub morphism: PhysMorphism<S>,
    /// `B = U A U*`, abstractly isomorphic to `A`.
    pub target: Arc<StarAlgebra<S>>,
    /// `GNS(A, psi) -> H`, `[a] -> a psi`.
    pub embedding_source: Matrix<S>,
    /// `GNS(B, U psi) -> K`, `[b] -> b U psi`.
    pub embedding_target: Matrix<S>,
    /// `embedding_target . GNS(f) = U . embedding_source`.
    pub verified: bool,
}

/// Lifts `U` to a morphism of states whose GNS map is `U` restricted to
/// the cyclic subspace `A psi`.
///
/// `B` carries the structure constants of `A`. When `U` is unitary its
/// representation is `U rho U*` on `K`; otherwise `U U*` is not the identity
/// and `B` keeps `rho`, while the verification uses the module `(K, U psi)`.
pub fn lift_schrodinger<S: Scalar>(
    u: &Matrix<S>,
    psi: &[S],
    a: &Arc<StarAlgebra<S>>,
    tol: &ToleranceConfig,
) -> Result<SchrodingerLift<S>> {
    let t = cmp_tol::<S>(tol);
    let rep = a.rep().ok_or(Error::NotFaithful)?;
    let (m, n) = u.shape();
    if n != rep.dim || psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: if n != rep.dim { n } else { psi.len() },
        });
    }
    if !u.adjoint().mul(u).approx_eq(&Matrix::identity(n), t) {
        return Err(Error::NotIsometric);
    }
    if psi.iter().all(|x| x.negligible(1.0, t)) {
        return Err(Error::ZeroVector);
    }
    let u_adj = u.adjoint();
    let conjugated: Vec<Matrix<S>> = rep.matrices.iter().map(|r| u.mul(r).mul(&u_adj)).collect();
    let unitary = m == n;
    let b_rep = if unitary {
        Representation {
            dim: m,
            matrices: conjugated.clone(),
        }
    } else {
        rep.clone()
    };
    let b = Arc::new(a.with_rep(Some(b_rep)));
    let f = StarHomomorphism::new_unchecked(a.clone(), b.clone(), Matrix::identity(a.dim()));

    let u_psi = u.mul_vec(psi);
    let source_module = CyclicModule::from_rep(a, psi)?;
    let target_module = CyclicModule::new(b.clone(), Matrix::identity(m), conjugated, u_psi)?;
    let phi = target_module.represented_state();
    let phi = State::new(b.clone(), phi.functional().to_vec(), tol)?;
    let dom = Arc::new(gns(&phi, tol)?);
    let morphism = PhysMorphism::pull_back_from(&f, dom, tol)?;

    let embedding_source = cyclic_embedding(morphism.cod_gns(), &source_module, tol)?;
    let embedding_target = cyclic_embedding(morphism.dom_gns(), &target_module, tol)?;
    let forward = gns_map(&morphism)?;
    let lhs = embedding_target.mul(&forward);
    let rhs = u.mul(&embedding_source);
    let verified = lhs.shape() == rhs.shape()
        && (0..lhs.cols()).all(|c| vec_approx_eq(&lhs.column(c), &rhs.column(c), t));
    Ok(SchrodingerLift {
        morphism,
        target: b,
        embedding_source,
        embedding_target,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_numbers, matrix_algebra};
    use crate::gns::gns_c;
    use crate::scalar::Exact;
    use crate::Complex64;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }
    /// `(1/5) [[3, 4i], [4i, 3]]`
    fn cayley() -> Matrix<Exact> {
        Matrix::from_rows(vec![
            vec![Exact::from_ratio(3, 5), Exact::gaussian((0, 1), (4, 5))],
            vec![Exact::gaussian((0, 1), (4, 5)), Exact::from_ratio(3, 5)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_lifts_to_identity() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let lift = lift_schrodinger(&Matrix::identity(2), &[q(1), q(2)], &m2, &tol()).unwrap();
        assert!(lift.verified);
        assert_eq!(lift.morphism.hom().matrix(), &Matrix::identity(4));
        assert_eq!(gns_map(&lift.morphism).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn unitary_lift_and_its_corollary() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let u = cayley();
        let psi = [q(1), q(0)];
        let lift = lift_schrodinger(&u, &psi, &m2, &tol()).unwrap();
        assert!(lift.verified);
        // the lifted state is vectorial at U psi on B
        let u_psi = u.mul_vec(&psi);
        assert_eq!(lift.morphism.dom_state(), &State::vectorial(&lift.target, &u_psi).unwrap());

        // lifting U* gives a morphism whose covariant map is U
        let back = lift_schrodinger(&u.adjoint(), &psi, &m2, &tol()).unwrap();
        assert!(back.verified);
        let c = gns_c(&back.morphism, &tol()).unwrap();
        assert_eq!(back.embedding_source.mul(&c), u.mul(&back.embedding_target));
    }

    #[test]
    fn inclusion_of_a_line() {
        // U : C -> C^2 onto the first coordinate, A = C acting on C
        let c = Arc::new(complex_numbers::<Exact>());
        let u = Matrix::from_rows(vec![vec![q(1)], vec![q(0)]]).unwrap();
        let lift = lift_schrodinger(&u, &[q(1)], &c, &tol()).unwrap();
        assert!(lift.verified);
        // U 1 U* = E11, and the cyclic vector U psi = e1
        assert_eq!(lift.embedding_target, u);
        assert_eq!(lift.morphism.dom_state().functional(), &[q(1)]);
    }

    #[test]
    fn preconditions() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let stretch = Matrix::diag(&[q(1), q(2)]);
        assert_eq!(
            lift_schrodinger(&stretch, &[q(1), q(0)], &m2, &tol()).err(),
            Some(Error::NotIsometric)
        );
        assert_eq!(
            lift_schrodinger(&Matrix::identity(2), &[q(0), q(0)], &m2, &tol()).err(),
            Some(Error::ZeroVector)
        );
        let bare = Arc::new(m2.without_rep());
        assert_eq!(
            lift_schrodinger(&Matrix::identity(2), &[q(1), q(0)], &bare, &tol()).err(),
            Some(Error::NotFaithful)
        );
        assert!(matches!(
            lift_schrodinger(&Matrix::identity(3), &[q(1), q(0)], &m2, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn float_unitary_lift() {
        let m2 = Arc::new(matrix_algebra::<Complex64>(2));
        let u = cayley().to_c64();
        let psi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let lift = lift_schrodinger(&u, &psi, &m2, &tol()).unwrap();
        assert!(lift.verified);
    }
}
