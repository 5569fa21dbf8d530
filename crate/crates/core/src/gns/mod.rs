//! States, their GNS spaces, and the GNS functor on homomorphisms.
//!
//! A state `phi` induces the Hermitian form `<a, b> = phi(b* a)` on its
//! algebra. In coordinates `<x, y> = sum_ij x_i conj(y_j) G_ij` with
//! `G_ij = phi(e_j* e_i)`. The radical is `{x : G^T x = 0}` and the GNS space
//! is the quotient, presented by the leftmost pivot columns `P` of `G`: the
//! classes `[e_p]`, `p in P`, form a basis and `G_PP` is the quotient Gram
//! matrix.

mod conjugate;
mod module;
mod monoidal;
mod morphism;
mod schrodinger;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

pub use conjugate::{conjugate_state, verify_conjugate_gns, ConjugateReport};
pub use module::{cyclic_embedding, cyclic_isomorphism, CyclicModule};
pub use monoidal::{
    check_same_normalization, composite_axiom_check, make_i, monoidal_iso, normalize, tensor_phys, tensor_state,
    CompositeReport,
};
pub use morphism::{dinaturality_holds, gns_c, gns_map, PhysMorphism};
pub(crate) use morphism::{admissibility_witness, transport};
pub use schrodinger::{lift_schrodinger, SchrodingerLift};

use crate::algebra::StarAlgebra;
use crate::linalg::{self, inverse};
use crate::matrix::{form, vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, PsdCertificate, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Complex64, Error, Result};

/// A *-linear functional, stored by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct State<S> {
    algebra: Arc<StarAlgebra<S>>,
    functional: Vec<S>,
    normalization: S,
}

impl<S: Scalar> State<S> {
    /// Checks `phi(e_i*) = conj(phi(e_i))` on every basis element.
    pub fn new(algebra: Arc<StarAlgebra<S>>, functional: Vec<S>, tol: &ToleranceConfig) -> Result<Self> {
        if functional.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: functional.len(),
            });
        }
        let t = cmp_tol::<S>(tol);
        let star = algebra.star_matrix();
        for i in 0..algebra.dim() {
            let mut at_star = S::zero();
            for (k, phi_k) in functional.iter().enumerate() {
                at_star.mul_acc(&star[(k, i)], phi_k);
            }
            if !at_star.near(&functional[i].conj(), t) {
                return Err(Error::NotStarLinear(i));
            }
        }
        Ok(Self::new_unchecked(algebra, functional))
    }

    pub(crate) fn new_unchecked(algebra: Arc<StarAlgebra<S>>, functional: Vec<S>) -> Self {
        let normalization = dot(&functional, algebra.unit());
        State {
            algebra,
            functional,
            normalization,
        }
    }

    pub fn zero(algebra: &Arc<StarAlgebra<S>>) -> Self {
        Self::new_unchecked(algebra.clone(), vec![S::zero(); algebra.dim()])
    }

    /// `a -> v* rho(a) v` for the faithful representation of the algebra.
    pub fn vectorial(algebra: &Arc<StarAlgebra<S>>, v: &[S]) -> Result<Self> {
        let rep = algebra.rep().ok_or(Error::NoFaithfulRep)?;
        if v.len() != rep.dim {
            return Err(Error::DimensionMismatch {
                expected: rep.dim,
                found: v.len(),
            });
        }
        let identity = Matrix::identity(rep.dim);
        let functional = rep.matrices.iter().map(|m| form(&identity, &m.mul_vec(v), v)).collect();
        Ok(Self::new_unchecked(algebra.clone(), functional))
    }

    /// `a -> tr(D rho(a))` for a density-like matrix `D`.
    pub fn from_density(algebra: &Arc<StarAlgebra<S>>, d: &Matrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        let rep = algebra.rep().ok_or(Error::NoFaithfulRep)?;
        if d.shape() != (rep.dim, rep.dim) {
            return Err(Error::ShapeMismatch("density does not match the representation".into()));
        }
        let functional = rep.matrices.iter().map(|m| d.mul(m).trace()).collect();
        Self::new(algebra.clone(), functional, tol)
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra<S>> {
        &self.algebra
    }
    pub fn functional(&self) -> &[S] {
        &self.functional
    }
    /// `phi(1)`.
    pub fn normalization(&self) -> &S {
        &self.normalization
    }

    pub fn eval(&self, x: &[S]) -> S {
        dot(&self.functional, x)
    }

    /// Pullback along a map with matrix `F` (shape `dim(self) x dim(dom)`):
    /// `(phi o F)(e_j) = sum_i F_ij phi(e_i)`.
    pub fn pullback_matrix(&self, dom: &Arc<StarAlgebra<S>>, f: &Matrix<S>) -> Self {
        let functional = f.transpose().mul_vec(&self.functional);
        Self::new_unchecked(dom.clone(), functional)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new_unchecked(self.algebra.clone(), self.functional.iter().map(|x| x.mul_ref(s)).collect())
    }

    /// `t phi + (1 - t) psi`, re-validated.
    pub fn convex(&self, other: &Self, t: &S, tol: &ToleranceConfig) -> Result<Self> {
        if !crate::algebra::same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let s = S::one().sub_ref(t);
        let functional = self
            .functional
            .iter()
            .zip(&other.functional)
            .map(|(a, b)| a.mul_ref(t).add_ref(&b.mul_ref(&s)))
            .collect();
        Self::new(self.algebra.clone(), functional, tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        crate::algebra::same_algebra(&self.algebra, &other.algebra)
            && vec_approx_eq(&self.functional, &other.functional, tol)
    }

    /// `G_ij = phi(e_j* e_i)`.
    pub fn gram_full(&self) -> Matrix<S> {
        let alg = &self.algebra;
        let n = alg.dim();
        // t[m][i] = phi(e_m e_i)
        let mut t = Matrix::zeros(n, n);
        for m in 0..n {
            for i in 0..n {
                let mut acc = S::zero();
                for (k, c) in alg.basis_product(m, i) {
                    acc.mul_acc(c, &self.functional[*k]);
                }
                t[(m, i)] = acc;
            }
        }
        let star = alg.star_matrix();
        let mut g: Matrix<S> = Matrix::zeros(n, n);
        for j in 0..n {
            for m in 0..n {
                let s = &star[(m, j)];
                if s.is_zero() {
                    continue;
                }
                for i in 0..n {
                    g[(i, j)].mul_acc(s, &t[(m, i)]);
                }
            }
        }
        g
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc.mul_acc(x, y);
    }
    acc
}

/// The GNS space of a state: the algebra modulo the radical of its form.
#[derive(Debug, Clone)]
pub struct GnsSpace<S> {
    state: State<S>,
    gram_full: Matrix<S>,
    radical: Vec<Vec<S>>,
    pivots: Vec<usize>,
    reduction: Matrix<S>,
    gram: Matrix<S>,
    actions: Vec<Matrix<S>>,
    omega: Vec<S>,
    positivity: PsdCertificate<S>,
}

/// Builds the GNS space with leftmost pivots.
pub fn gns<S: Scalar>(state: &State<S>, tol: &ToleranceConfig) -> Result<GnsSpace<S>> {
    let g = state.gram_full();
    let pivots = S::pivot_columns(&g, tol);
    GnsSpace::build(state.clone(), g, pivots, tol)
}

/// Builds the GNS space choosing pivots by scanning the basis in `order`.
pub fn gns_with_order<S: Scalar>(state: &State<S>, order: &[usize], tol: &ToleranceConfig) -> Result<GnsSpace<S>> {
    let n = state.algebra().dim();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || core::mem::replace(&mut seen[i], true)) {
        return Err(Error::ShapeMismatch("pivot order must be a permutation of the basis".into()));
    }
    let g = state.gram_full();
    let local = S::pivot_columns(&g.select_columns(order), tol);
    let pivots = local.into_iter().map(|k| order[k]).collect();
    GnsSpace::build(state.clone(), g, pivots, tol)
}

impl<S: Scalar> GnsSpace<S> {
    fn build(state: State<S>, g: Matrix<S>, pivots: Vec<usize>, tol: &ToleranceConfig) -> Result<Self> {
        let alg = state.algebra().clone();
        let n = alg.dim();
        let q = pivots.len();
        let radical: Vec<Vec<S>> = linalg::kernel_basis(&g.transpose(), tol);
        if radical.len() + q != n {
            return Err(Error::DegenerateForm);
        }
        let all: Vec<usize> = (0..n).collect();
        let gram = g.submatrix(&pivots, &pivots);
        let gram_inv_t = inverse(&gram.transpose(), tol.rank_tol).map_err(|_| Error::DegenerateForm)?;
        // R = (G_PP^T)^-1 G[:, P]^T sends x to the quotient coordinates of [x]
        let reduction = gram_inv_t.mul(&g.submatrix(&all, &pivots).transpose());
        let omega = reduction.mul_vec(alg.unit());
        let mut actions = Vec::with_capacity(n);
        for i in 0..n {
            let mut act: Matrix<S> = Matrix::zeros(q, q);
            for (k, &p) in pivots.iter().enumerate() {
                for (m, c) in alg.basis_product(i, p) {
                    for r in 0..q {
                        act[(r, k)].mul_acc(c, &reduction[(r, *m)]);
                    }
                }
            }
            actions.push(act);
        }
        let positivity = match S::psd_certify(&gram, tol)? {
            PsdCertificate::Psd => PsdCertificate::Psd,
            PsdCertificate::Indefinite { witness, value } => {
                let mut x = vec![S::zero(); n];
                for (k, &p) in pivots.iter().enumerate() {
                    x[p] = witness[k].conj();
                }
                PsdCertificate::Indefinite { witness: x, value }
            }
        };
        Ok(GnsSpace {
            state,
            gram_full: g,
            radical,
            pivots,
            reduction,
            gram,
            actions,
            omega,
            positivity,
        })
    }

    pub fn state(&self) -> &State<S> {
        &self.state
    }
    pub fn algebra(&self) -> &Arc<StarAlgebra<S>> {
        self.state.algebra()
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn gram_full(&self) -> &Matrix<S> {
        &self.gram_full
    }
    pub fn radical_basis(&self) -> &[Vec<S>] {
        &self.radical
    }
    /// Basis indices whose classes form the quotient basis.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    /// Quotient representatives as algebra coordinate vectors.
    pub fn quotient_reps(&self) -> Vec<Vec<S>> {
        let n = self.algebra().dim();
        self.pivots.iter().map(|&p| crate::matrix::unit_vector(n, p)).collect()
    }
    /// Matrix sending algebra coordinates to quotient coordinates.
    pub fn reduction(&self) -> &Matrix<S> {
        &self.reduction
    }
    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }
    pub fn actions(&self) -> &[Matrix<S>] {
        &self.actions
    }
    pub fn omega(&self) -> &[S] {
        &self.omega
    }

    /// Quotient coordinates of `[x]`.
    pub fn class_of(&self, x: &[S]) -> Vec<S> {
        self.reduction.mul_vec(x)
    }

    /// Whether `x` lies in the radical.
    pub fn in_radical(&self, x: &[S], tol: &ToleranceConfig) -> bool {
        let image = self.gram_full.transpose().mul_vec(x);
        let zero = vec![S::zero(); image.len()];
        vec_approx_eq(&image, &zero, cmp_tol::<S>(tol))
    }

    /// Action of an arbitrary element on the quotient.
    pub fn action_of(&self, x: &[S]) -> Matrix<S> {
        let q = self.dim();
        let mut out = Matrix::zeros(q, q);
        for (xi, a) in x.iter().zip(&self.actions) {
            if !xi.is_zero() {
                out = out.add(&a.scale(xi));
            }
        }
        out
    }

    /// `<x, y>` on quotient coordinates.
    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        form(&self.gram, x, y)
    }

    /// Certificate for `phi(a* a) >= 0`; a failing witness is an algebra
    /// element `a` with `phi(a* a) < 0`.
    pub fn positivity(&self) -> &PsdCertificate<S> {
        &self.positivity
    }

    pub fn is_positive(&self) -> bool {
        self.positivity.is_psd()
    }

    /// Quotient vectors orthonormal for the Gram form, as columns `W` with
    /// `W^T G conj(W) = I`. Float backend, positive states only.
    pub fn orthonormal_frame(&self) -> Result<Matrix<Complex64>> {
        if !self.is_positive() {
            return Err(Error::NotPositive);
        }
        let h = self.gram.to_c64().conj();
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        let q = self.dim();
        if vals.iter().any(|&v| v <= 0.0) {
            return Err(Error::DegenerateForm);
        }
        Ok(Matrix::from_fn(q, q, |r, c| vecs[(r, c)] / num_traits::Float::sqrt(vals[c])))
    }
}

/// `phi(a* a) >= 0` for all `a`, with a witness on failure.
pub fn is_positive<S: Scalar>(state: &State<S>, tol: &ToleranceConfig) -> Result<PsdCertificate<S>> {
    Ok(gns(state, tol)?.positivity.clone())
}

/// `a -> <a v, v>` on the GNS space.
pub fn vector_state<S: Scalar>(g: &GnsSpace<S>, v: &[S]) -> Result<State<S>> {
    if v.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: v.len(),
        });
    }
    let functional = g.actions.iter().map(|a| g.inner(&a.mul_vec(v), v)).collect();
    Ok(State::new_unchecked(g.algebra().clone(), functional))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra};
    use crate::scalar::Exact;
    use alloc::string::{String, ToString};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }
    fn cxy() -> Arc<StarAlgebra<Exact>> {
        let pts: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        Arc::new(function_algebra(&pts).unwrap())
    }

    #[test]
    fn make_state_examples() {
        let c = cxy();
        State::new(c.clone(), vec![q(0), q(0)], &tol()).unwrap();
        State::new(c.clone(), vec![q(1), q(-1)], &tol()).unwrap();
        let c1 = Arc::new(matrix_algebra::<Exact>(1));
        State::new(c1.clone(), vec![Exact::from_ratio(7, 3)], &tol()).unwrap();
        // a non-real value on the self-adjoint unit breaks *-linearity
        assert_eq!(
            State::new(c1, vec![Exact::imag_unit()], &tol()),
            Err(Error::NotStarLinear(0))
        );
        // on M2, phi(E12) must be the conjugate of phi(E21)
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        assert_eq!(
            State::new(m2, vec![q(1), Exact::imag_unit(), Exact::imag_unit(), q(1)], &tol()),
            Err(Error::NotStarLinear(1))
        );
    }

    #[test]
    fn dirac_state_has_one_dimensional_gns() {
        let c = cxy();
        let delta = State::new(c, vec![q(1), q(0)], &tol()).unwrap();
        let g = gns(&delta, &tol()).unwrap();
        // gram_full = diag(1, 0), radical = span 1_y
        assert_eq!(g.gram_full(), &Matrix::diag(&[q(1), q(0)]));
        assert_eq!(g.radical_basis(), &[vec![q(0), q(1)]]);
        assert_eq!(g.dim(), 1);
        assert_eq!(g.gram(), &Matrix::diag(&[q(1)]));
        assert_eq!(g.actions()[0], Matrix::diag(&[q(1)]));
        assert_eq!(g.actions()[1], Matrix::diag(&[q(0)]));
        assert!(g.is_positive());
    }

    #[test]
    fn vectorial_state_on_m2() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(0)]).unwrap();
        // phi(E_pq) = <E_pq v, v> = delta_p0 delta_q0
        assert_eq!(phi.functional(), &[q(1), q(0), q(0), q(0)]);
        let g = gns(&phi, &tol()).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.gram(), &Matrix::identity(2));
        assert!(g.is_positive());
    }

    #[test]
    fn indefinite_difference_state() {
        let c = cxy();
        let phi = State::new(c, vec![q(1), q(-1)], &tol()).unwrap();
        assert_eq!(phi.normalization(), &q(0));
        let g = gns(&phi, &tol()).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.gram(), &Matrix::diag(&[q(1), q(-1)]));
        match g.positivity() {
            PsdCertificate::Indefinite { witness, value } => {
                assert_eq!(witness, &vec![q(0), q(1)]);
                assert_eq!(value, &q(-1));
            }
            PsdCertificate::Psd => panic!("difference state is not positive"),
        }
    }

    #[test]
    fn gns_invariants_on_a_mixed_state() {
        // density diag(2/3, 1/3) with an off-diagonal coherence on M2
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let d = Matrix::from_rows(vec![
            vec![Exact::from_ratio(2, 3), Exact::gaussian((1, 6), (1, 6))],
            vec![Exact::gaussian((1, 6), (-1, 6)), Exact::from_ratio(1, 3)],
        ])
        .unwrap();
        let phi = State::from_density(&m2, &d, &tol()).unwrap();
        let g = gns(&phi, &tol()).unwrap();
        assert_eq!(g.dim(), 4);
        // omega represents phi
        for i in 0..4 {
            assert_eq!(g.inner(&g.actions()[i].mul_vec(g.omega()), g.omega()), phi.functional()[i]);
        }
        // star goes to the adjoint
        for i in 0..4 {
            let star_i = m2.star_matrix().column(i);
            let adj = linalg::adjoint_wrt_forms(&g.actions()[i], g.gram(), g.gram(), 0.0).unwrap();
            assert_eq!(g.action_of(&star_i), adj);
        }
        assert!(g.is_positive());
        // vector_state at omega is phi
        assert_eq!(vector_state(&g, &g.omega().to_vec()).unwrap(), phi);
    }

    #[test]
    fn zero_state_has_zero_dimensional_gns() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let g = gns(&State::zero(&m2), &tol()).unwrap();
        assert_eq!(g.dim(), 0);
        assert_eq!(g.radical_basis().len(), 4);
        assert!(g.is_positive());
    }

    #[test]
    fn reversed_pivot_order() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let g = gns_with_order(&phi, &[3, 2, 1, 0], &tol()).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.pivots(), &[3, 1]);
        assert!(gns_with_order(&phi, &[0, 0, 1, 2], &tol()).is_err());
    }

    #[test]
    fn orthonormal_frame_float() {
        let m2 = Arc::new(matrix_algebra::<Complex64>(2));
        let phi = State::vectorial(&m2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]).unwrap();
        let g = gns(&phi, &tol()).unwrap();
        let w = g.orthonormal_frame().unwrap();
        let check = w.transpose().mul(g.gram()).mul(&w.conj());
        assert!(check.approx_eq(&Matrix::identity(g.dim()), 1e-10));
    }
}
