use alloc::sync::Arc;
use alloc::vec::Vec;

use super::morphism::check_pullback;
use super::{GnsSpace, PhysMorphism, State};
use crate::algebra::{complex_numbers, tensor_algebra, tensor_homomorphism};
use crate::matrix::{unit_vector, vec_approx_eq, vec_kron, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// `(phi (x) psi)(a (x) b) = phi(a) psi(b)` on the tensor algebra.
pub fn tensor_state<S: Scalar>(phi: &State<S>, psi: &State<S>) -> State<S> {
    let alg = Arc::new(tensor_algebra(phi.algebra(), psi.algebra()));
    State::new_unchecked(alg, vec_kron(phi.functional(), psi.functional()))
}

/// `m1 (x) m2 : phi (x) phi' -> psi (x) psi'`.
pub fn tensor_phys<S: Scalar>(
    m1: &PhysMorphism<S>,
    m2: &PhysMorphism<S>,
    tol: &ToleranceConfig,
) -> Result<PhysMorphism<S>> {
    let hom = tensor_homomorphism(m1.hom(), m2.hom());
    let phi = tensor_state(m1.dom_state(), m2.dom_state());
    let phi = State::new_unchecked(hom.cod().clone(), phi.functional().to_vec());
    PhysMorphism::pull_back(&hom, &phi, tol)
}

/// `GNS(phi) (x) GNS(psi) -> GNS(phi (x) psi)`, `[a] (x) [b] -> [a (x) b]`,
/// with the tensor basis ordered `k * dim(GNS(psi)) + l`.
pub fn monoidal_iso<S: Scalar>(
    g_phi: &GnsSpace<S>,
    g_psi: &GnsSpace<S>,
    g_tensor: &GnsSpace<S>,
    tol: &ToleranceConfig,
) -> Result<Matrix<S>> {
    let expected = tensor_state(g_phi.state(), g_psi.state());
    if !vec_approx_eq(expected.functional(), g_tensor.state().functional(), cmp_tol::<S>(tol))
        || g_tensor.algebra().dim() != expected.algebra().dim()
    {
        return Err(Error::NotSameState);
    }
    let nb = g_psi.algebra().dim();
    let n = g_tensor.algebra().dim();
    let mut cols = Vec::with_capacity(g_phi.dim() * g_psi.dim());
    for &p in g_phi.pivots() {
        for &r in g_psi.pivots() {
            cols.push(g_tensor.class_of(&unit_vector(n, p * nb + r)));
        }
    }
    Ok(Matrix::from_columns(g_tensor.dim(), &cols))
}

/// The state `I_lambda` on `C`; `lambda` must be real for *-linearity.
pub fn make_i<S: Scalar>(lambda: S, tol: &ToleranceConfig) -> Result<State<S>> {
    State::new(Arc::new(complex_numbers()), alloc::vec![lambda], tol)
}

/// `phi / phi(1)`.
pub fn normalize<S: Scalar>(phi: &State<S>, tol: &ToleranceConfig) -> Result<State<S>> {
    let norm = phi.normalization();
    if norm.negligible(1.0, cmp_tol::<S>(tol)) {
        return Err(Error::IsotropicState);
    }
    Ok(phi.scale(&S::one().div_ref(norm)))
}

pub fn check_same_normalization<S: Scalar>(phi: &State<S>, psi: &State<S>, tol: &ToleranceConfig) -> Result<()> {
    if phi.normalization().near(psi.normalization(), cmp_tol::<S>(tol)) {
        Ok(())
    } else {
        Err(Error::NormalizationMismatch)
    }
}

/// Outcome of the composite-system axioms for `phi (x) psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositeReport {
    /// `a -> a (x) 1` and `b -> 1 (x) b` pull `phi (x) psi` back to `phi`, `psi`.
    pub projections_are_morphisms: bool,
    /// `(phi (x) psi)(p(a) q(b)) = phi(a) psi(b)`.
    pub noninteraction: bool,
    /// `[p(a), q(b)] = 0`.
    pub commutation: bool,
}

impl CompositeReport {
    pub fn all_pass(&self) -> bool {
        self.projections_are_morphisms && self.noninteraction && self.commutation
    }
}

pub fn composite_axiom_check<S: Scalar>(
    phi: &State<S>,
    psi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<CompositeReport> {
    let t = cmp_tol::<S>(tol);
    if !phi.normalization().near(&S::one(), t) || !psi.normalization().near(&S::one(), t) {
        return Err(Error::NotNormalized);
    }
    let joint = tensor_state(phi, psi);
    let alg = joint.algebra();
    let (na, nb) = (phi.algebra().dim(), psi.algebra().dim());
    let p: Vec<Vec<S>> = (0..na).map(|i| vec_kron(&unit_vector(na, i), psi.algebra().unit())).collect();
    let q: Vec<Vec<S>> = (0..nb).map(|j| vec_kron(phi.algebra().unit(), &unit_vector(nb, j))).collect();
    let p_mat = Matrix::from_columns(alg.dim(), &p);
    let q_mat = Matrix::from_columns(alg.dim(), &q);
    let projections_are_morphisms =
        check_pullback(&p_mat, &joint, phi, tol).is_ok() && check_pullback(&q_mat, &joint, psi, tol).is_ok();
    let mut noninteraction = true;
    let mut commutation = true;
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let pq = alg.mul(pi, qj);
            let expected = phi.functional()[i].mul_ref(&psi.functional()[j]);
            noninteraction &= joint.eval(&pq).near(&expected, t);
            commutation &= vec_approx_eq(&pq, &alg.mul(qj, pi), t);
        }
    }
    Ok(CompositeReport {
        projections_are_morphisms,
        noninteraction,
        commutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, generated_subalgebra, matrix_algebra, Element, StarHomomorphism};
    use crate::gns::{gns, gns_map};
    use crate::scalar::Exact;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }
    fn two_points(a: &str, b: &str) -> Arc<crate::algebra::StarAlgebra<Exact>> {
        let pts: Vec<String> = [a, b].iter().map(|s| s.to_string()).collect();
        Arc::new(function_algebra(&pts).unwrap())
    }

    #[test]
    fn dirac_tensor_dirac() {
        let dx = State::new(two_points("x", "y"), vec![q(1), q(0)], &tol()).unwrap();
        let du = State::new(two_points("u", "v"), vec![q(1), q(0)], &tol()).unwrap();
        let joint = tensor_state(&dx, &du);
        let (g1, g2, g12) = (gns(&dx, &tol()).unwrap(), gns(&du, &tol()).unwrap(), gns(&joint, &tol()).unwrap());
        assert_eq!(g12.dim(), 1);
        assert_eq!(g12.radical_basis().len(), 3);
        assert_eq!(monoidal_iso(&g1, &g2, &g12, &tol()).unwrap(), Matrix::identity(1));
    }

    #[test]
    fn monoidal_unit() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(2)]).unwrap();
        let i1 = make_i(q(1), &tol()).unwrap();
        let joint = tensor_state(&phi, &i1);
        assert_eq!(joint.functional(), phi.functional());
        let (g1, g2, g12) = (gns(&phi, &tol()).unwrap(), gns(&i1, &tol()).unwrap(), gns(&joint, &tol()).unwrap());
        assert_eq!(monoidal_iso(&g1, &g2, &g12, &tol()).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn vectorial_tensor_vectorial_is_kronecker() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let (v, w) = ([q(1), q(0)], [q(0), q(1)]);
        let phi = State::vectorial(&m2, &v).unwrap();
        let psi = State::vectorial(&m2, &w).unwrap();
        let joint = tensor_state(&phi, &psi);
        // M2 (x) M2 acting on C^4 through the Kronecker representation
        assert_eq!(&joint, &State::vectorial(joint.algebra(), &vec_kron(&v, &w)).unwrap());
        let (g1, g2, g12) = (gns(&phi, &tol()).unwrap(), gns(&psi, &tol()).unwrap(), gns(&joint, &tol()).unwrap());
        assert_eq!(g12.dim(), 4);
        let iso = monoidal_iso(&g1, &g2, &g12, &tol()).unwrap();
        let kron_gram = g1.gram().kron(g2.gram());
        assert_eq!(iso.transpose().mul(g12.gram()).mul(&iso.conj()), kron_gram);
        let report = composite_axiom_check(&phi, &psi, &tol()).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn iso_is_natural() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let a = Element::new(m2.clone(), vec![q(1), q(0), q(0), q(-1)]).unwrap();
        let sub = generated_subalgebra(&m2, &[a], &tol()).unwrap();
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let chi = State::vectorial(&m2, &[q(2), Exact::imag_unit()]).unwrap();
        let m1 = PhysMorphism::pull_back(&sub.inclusion, &phi, &tol()).unwrap();
        let m2m = PhysMorphism::pull_back(&StarHomomorphism::identity(&m2), &chi, &tol()).unwrap();
        let mt = tensor_phys(&m1, &m2m, &tol()).unwrap();
        let iso_dom = monoidal_iso(m1.dom_gns(), m2m.dom_gns(), mt.dom_gns(), &tol()).unwrap();
        let iso_cod = monoidal_iso(m1.cod_gns(), m2m.cod_gns(), mt.cod_gns(), &tol()).unwrap();
        let lhs = iso_dom.mul(&gns_map(&m1).unwrap().kron(&gns_map(&m2m).unwrap()));
        let rhs = gns_map(&mt).unwrap().mul(&iso_cod);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_lemmas() {
        let i2 = make_i(q(2), &tol()).unwrap();
        let i3 = make_i(q(3), &tol()).unwrap();
        let i6 = tensor_state(&i2, &i3);
        assert_eq!(i6.functional(), make_i(q(6), &tol()).unwrap().functional());
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let zeroed = tensor_state(&make_i(q(0), &tol()).unwrap(), &phi);
        assert!(zeroed.functional().iter().all(Scalar::is_zero));
        assert_eq!(normalize(&zeroed, &tol()), Err(Error::IsotropicState));
        assert_eq!(normalize(&phi, &tol()).unwrap().normalization(), &q(1));
        assert_eq!(
            check_same_normalization(&make_i(q(1), &tol()).unwrap(), &i2, &tol()),
            Err(Error::NormalizationMismatch)
        );
        assert_eq!(make_i(Exact::imag_unit(), &tol()), Err(Error::NotStarLinear(0)));
    }

    #[test]
    fn composite_rejects_unnormalized() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let psi = State::vectorial(&m2, &[q(1), q(0)]).unwrap();
        assert_eq!(composite_axiom_check(&phi, &psi, &tol()), Err(Error::NotNormalized));
        let dx = State::new(two_points("x", "y"), vec![q(1), q(0)], &tol()).unwrap();
        let du = State::new(two_points("u", "v"), vec![q(1), q(0)], &tol()).unwrap();
        assert!(composite_axiom_check(&dx, &du, &tol()).unwrap().all_pass());
    }
}
