use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{gns_m, gns_mc, MarkovMorphism};
use crate::algebra::{matrix_algebra, same_algebra, Element, StarAlgebra, StarLinearMap};
use crate::gns::{cyclic_embedding, cyclic_isomorphism, gns, normalize, vector_state, CyclicModule, State};
use crate::linalg::{adjoint_wrt_forms, inverse};
use crate::matrix::{vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// What conditioning by a projection does to a state and its GNS data.
#[derive(Debug, Clone)]
pub struct ConditioningReport<S> {
    /// `psi(1)`, the unnormalized collapse probability.
    pub probability: S,
    /// `psi(1) = phi(P)`.
    pub probability_matches: bool,
    /// `P Omega_phi` in `GNS(phi)`.
    pub p_omega: Vec<S>,
    /// `psi` is the vector state of `P Omega_phi`.
    pub represented_by_p_omega: bool,
    /// `GNS(psi) -> GNS(phi)`, `[a] -> a P Omega_phi`.
    pub inclusion: Matrix<S>,
    /// `GNS_M(Phi) = P o inclusion`.
    pub gns_m_factors: bool,
    /// `inclusion . GNS_M,c(Phi) . Omega_phi = P Omega_phi`.
    pub gns_mc_cyclic: bool,
    /// `inclusion . GNS_M,c(Phi)` is `P` followed by the orthogonal
    /// projection onto `GNS(psi)`.
    pub gns_mc_projects: bool,
    /// `psi / psi(1)` unless the outcome has probability zero.
    pub post_collapse: Option<State<S>>,
}

impl<S: Scalar> ConditioningReport<S> {
    pub fn all_pass(&self) -> bool {
        self.probability_matches
            && self.represented_by_p_omega
            && self.gns_m_factors
            && self.gns_mc_cyclic
            && self.gns_mc_projects
    }
}

/// Conditioning `Phi(a) = P a P` by a self-adjoint projection, pulled back
/// against a positive state.
pub fn conditioning<S: Scalar>(
    p: &Element<S>,
    phi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<(MarkovMorphism<S>, ConditioningReport<S>)> {
    let t = cmp_tol::<S>(tol);
    let alg = phi.algebra();
    if !same_algebra(p.algebra(), alg) {
        return Err(Error::AlgebraMismatch);
    }
    if !p.is_projection(tol) {
        return Err(Error::NotProjection);
    }
    let g = Arc::new(gns(phi, tol)?);
    if !g.is_positive() {
        return Err(Error::NotPositive);
    }
    let pc = p.coords();
    let cols: Vec<Vec<S>> = (0..alg.dim())
        .map(|i| alg.mul(&alg.mul(pc, &alg.basis_vector(i)), pc))
        .collect();
    let map = StarLinearMap::new(alg.clone(), alg.clone(), Matrix::from_columns(alg.dim(), &cols), tol)?;
    let m = MarkovMorphism::pull_back_from(&map, g.clone(), tol)?;
    let psi = m.cod_state();

    let p_act = g.action_of(pc);
    let p_omega = p_act.mul_vec(g.omega());
    let probability = psi.normalization().clone();
    let probability_matches = probability.near(&phi.eval(pc), t);
    let represented_by_p_omega = vector_state(&g, &p_omega)?.approx_eq(psi, t);

    let mut module = CyclicModule::from_gns(&g);
    module.vector = p_omega.clone();
    let inclusion = cyclic_embedding(m.cod_gns(), &module, tol)?;
    let forward = gns_m(&m)?;
    let gns_m_factors = forward.approx_eq(&p_act.mul(&inclusion), t);
    let backward = gns_mc(&m, tol)?;
    let lifted = inclusion.mul(&backward);
    let gns_mc_cyclic = vec_approx_eq(&lifted.mul_vec(g.omega()), &p_omega, t);
    let inclusion_adj = adjoint_wrt_forms(&inclusion, m.cod_gns().gram(), g.gram(), tol.rank_tol)?;
    let gns_mc_projects = lifted.approx_eq(&inclusion.mul(&inclusion_adj).mul(&p_act), t);
    let post_collapse = normalize(psi, tol).ok();
    let report = ConditioningReport {
        probability,
        probability_matches,
        p_omega,
        represented_by_p_omega,
        inclusion,
        gns_m_factors,
        gns_mc_cyclic,
        gns_mc_projects,
        post_collapse,
    };
    Ok((m, report))
}

fn check_isometry<S: Scalar>(i: &Matrix<S>, t: f64) -> Result<()> {
    if i.adjoint().mul(i).approx_eq(&Matrix::identity(i.cols()), t) {
        Ok(())
    } else {
        Err(Error::NotIsometric)
    }
}

fn check_vector<S: Scalar>(v: &[S], n: usize, t: f64) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if v.iter().all(|x| x.negligible(1.0, t)) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `a -> L* a L` from `End(C^m)` to `End(C^n)` for `L : C^n -> C^m`.
fn sandwich<S: Scalar>(
    l: &Matrix<S>,
    dom: &Arc<StarAlgebra<S>>,
    cod: &Arc<StarAlgebra<S>>,
    tol: &ToleranceConfig,
) -> Result<StarLinearMap<S>> {
    super::kraus_map(dom, cod, core::slice::from_ref(l), tol)
}

/// The collapse pair for an isometry `i : H -> H'`.
#[derive(Debug, Clone)]
pub struct CollapseComposite<S> {
    /// `(End H, phi_v) -> (End H', phi_iv)` over `a -> i* a i`.
    pub restrict: MarkovMorphism<S>,
    /// `(End H', phi_iv) -> (End H, phi_v)` over `a -> i a i*`.
    pub extend: MarkovMorphism<S>,
    /// `restrict` after `extend`, a process on `(End H', phi_iv)` over
    /// conditioning by `P = i i*`.
    pub composite: MarkovMorphism<S>,
    /// `GNS_M,c` of the composite, transported to `H'`.
    pub operator: Matrix<S>,
    pub projection: Matrix<S>,
    /// Largest entry of `operator - projection`.
    pub residual: f64,
}

/// Runs the restrict/extend pair of an isometry against the vector state at
/// `v` and compares the covariant representative of the composite with
/// `P = i i*`.
pub fn collapse_composite<S: Scalar>(
    i: &Matrix<S>,
    v: &[S],
    tol: &ToleranceConfig,
) -> Result<CollapseComposite<S>> {
    let t = cmp_tol::<S>(tol);
    check_isometry(i, t)?;
    let (big, small) = i.shape();
    check_vector(v, small, t)?;
    let end_h = Arc::new(matrix_algebra::<S>(small));
    let end_big = Arc::new(matrix_algebra::<S>(big));
    let restrict_map = sandwich(i, &end_big, &end_h, tol)?;
    let extend_map = sandwich(&i.adjoint(), &end_h, &end_big, tol)?;
    let iv = i.mul_vec(v);
    let phi_iv = State::vectorial(&end_big, &iv)?;
    let extend = MarkovMorphism::pull_back(&extend_map, &phi_iv, tol)?;
    let restrict = MarkovMorphism::pull_back_from(&restrict_map, extend.cod_gns().clone(), tol)?;
    let composite = extend.then(&restrict, tol)?;
    let module = CyclicModule::from_rep(&end_big, &iv)?;
    let e_dom = cyclic_isomorphism(composite.dom_gns(), &module, tol)?;
    let e_cod = cyclic_isomorphism(composite.cod_gns(), &module, tol)?;
    let covariant = gns_mc(&composite, tol)?;
    let e_dom_inv = inverse(&e_dom, tol.rank_tol)?;
    let operator = e_cod.mul(&covariant).mul(&e_dom_inv);
    let projection = i.mul(&i.adjoint());
    let residual = operator.residual(&projection);
    Ok(CollapseComposite {
        restrict,
        extend,
        composite,
        operator,
        projection,
        residual,
    })
}

/// Transition data of a scattering process `alpha -> beta`.
#[derive(Debug, Clone)]
pub struct ScatteringReport<S> {
    /// `K = p_beta S i_alpha : H_alpha -> H_beta`.
    pub amplitude: Matrix<S>,
    /// `psi(1) = |K v|^2`.
    pub probability: S,
    /// `phi(1) = |v|^2`.
    pub initial: S,
    /// `GNS_M,c` transported to `H_alpha -> H_beta`.
    pub operator: Matrix<S>,
    /// Largest entry of `operator - Pi K`, with `Pi` the orthogonal
    /// projection onto the image of `GNS(psi)` in `H_beta`.
    pub residual: f64,
    /// `0 <= psi(1) <= phi(1)`.
    pub probability_bounded: bool,
}

/// The process over `b -> K* b K : End(H_beta) -> End(H_alpha)` against the
/// vector state at `v in H_alpha`. `F` is an explicit finite-dimensional
/// stand-in for the Fock space.
pub fn scattering<S: Scalar>(
    s: &Matrix<S>,
    i_alpha: &Matrix<S>,
    p_beta: &Matrix<S>,
    v: &[S],
    tol: &ToleranceConfig,
) -> Result<(MarkovMorphism<S>, ScatteringReport<S>)> {
    let t = cmp_tol::<S>(tol);
    let f = s.rows();
    if !s.is_square() || !s.adjoint().mul(s).approx_eq(&Matrix::identity(f), t) {
        return Err(Error::NotUnitary);
    }
    if i_alpha.rows() != f || p_beta.cols() != f {
        return Err(Error::ShapeMismatch("subspace maps must meet the scattering space".into()));
    }
    check_isometry(i_alpha, t)?;
    check_isometry(&p_beta.adjoint(), t)?;
    let (na, nb) = (i_alpha.cols(), p_beta.rows());
    check_vector(v, na, t)?;
    let k = p_beta.mul(s).mul(i_alpha);
    let end_a = Arc::new(matrix_algebra::<S>(na));
    let end_b = Arc::new(matrix_algebra::<S>(nb));
    let map = sandwich(&k, &end_b, &end_a, tol)?;
    let phi = State::vectorial(&end_a, v)?;
    let m = MarkovMorphism::pull_back(&map, &phi, tol)?;

    let e_phi = cyclic_isomorphism(m.dom_gns(), &CyclicModule::from_rep(&end_a, v)?, tol)?;
    let kv = k.mul_vec(v);
    let e_psi = cyclic_embedding(m.cod_gns(), &CyclicModule::from_rep(&end_b, &kv)?, tol)?;
    let covariant = gns_mc(&m, tol)?;
    let operator = e_psi.mul(&covariant).mul(&inverse(&e_phi, tol.rank_tol)?);
    let projector = if e_psi.cols() == 0 {
        Matrix::zeros(nb, nb)
    } else {
        let gram = e_psi.adjoint().mul(&e_psi);
        e_psi.mul(&inverse(&gram, tol.rank_tol)?).mul(&e_psi.adjoint())
    };
    let residual = operator.residual(&projector.mul(&k));
    let probability = m.cod_state().normalization().clone();
    let initial = phi.normalization().clone();
    let (pr, ir) = (probability.re_f64(), initial.re_f64());
    let slack = t * ir.abs().max(1.0);
    let probability_bounded = pr >= -slack && pr <= ir + slack;
    let report = ScatteringReport {
        amplitude: k,
        probability,
        initial,
        operator,
        residual,
        probability_bounded,
    };
    Ok((m, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use crate::Complex64;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    #[test]
    fn conditioning_on_the_unit_is_the_identity() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(3)]).unwrap();
        let (m, report) = conditioning(&Element::unit(&m2), &phi, &tol()).unwrap();
        assert_eq!(m.cod_state(), &phi);
        assert_eq!(gns_m(&m).unwrap(), Matrix::identity(2));
        assert!(report.all_pass());
    }

    #[test]
    fn conditioning_on_e11() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        assert_eq!(phi.normalization(), &q(2));
        let p = Element::basis(&m2, 0);
        let (m, report) = conditioning(&p, &phi, &tol()).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.probability, q(1));
        // GNS(phi) = C^2 with Omega = v; the quotient basis [E11], [E21] sends v to e1, e2
        assert_eq!(report.p_omega, vec![q(1), q(0)]);
        let post = report.post_collapse.unwrap();
        assert_eq!(&post, &State::vectorial(&m2, &[q(1), q(0)]).unwrap());
        assert_eq!(m.cod_gns().dim(), 2);
    }

    #[test]
    fn conditioning_on_zero_annihilates() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let (m, report) = conditioning(&Element::zero(&m2), &phi, &tol()).unwrap();
        assert!(m.cod_state().functional().iter().all(Scalar::is_zero));
        assert_eq!(gns_m(&m).unwrap().shape(), (2, 0));
        assert!(report.post_collapse.is_none());
        assert!(report.all_pass());
    }

    #[test]
    fn conditioning_rejects_non_projections() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), q(1)]).unwrap();
        let not_p = Element::basis(&m2, 1);
        assert_eq!(conditioning(&not_p, &phi, &tol()).err(), Some(Error::NotProjection));
        let indefinite = State::new(m2.clone(), vec![q(1), q(0), q(0), q(-1)], &tol()).unwrap();
        assert_eq!(
            conditioning(&Element::unit(&m2), &indefinite, &tol()).err(),
            Some(Error::NotPositive)
        );
    }

    #[test]
    fn conditioning_is_idempotent() {
        // P = (1/2) [[1, 1], [1, 1]] against v = (2, i)
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let h = Exact::from_ratio(1, 2);
        let p = Element::new(m2.clone(), vec![h.clone(), h.clone(), h.clone(), h]).unwrap();
        let phi = State::vectorial(&m2, &[q(2), Exact::imag_unit()]).unwrap();
        let (once, report) = conditioning(&p, &phi, &tol()).unwrap();
        assert!(report.all_pass());
        let (twice, _) = conditioning(&p, once.cod_state(), &tol()).unwrap();
        assert_eq!(twice.cod_state(), once.cod_state());
        let comp = once.then(&twice, &tol()).unwrap();
        assert_eq!(comp.map().matrix(), once.map().matrix());
    }

    #[test]
    fn collapse_pair_reproduces_the_projection() {
        // i : C -> C^2 onto the first coordinate
        let i = Matrix::from_rows(vec![vec![q(1)], vec![q(0)]]).unwrap();
        let c = collapse_composite(&i, &[q(2)], &tol()).unwrap();
        assert_eq!(c.residual, 0.0);
        assert_eq!(c.operator, Matrix::diag(&[q(1), q(0)]));
        // the individual covariant maps are i and i*
        assert_eq!(gns_mc(&c.restrict, &tol()).unwrap().shape(), (2, 1));
        assert_eq!(gns_mc(&c.extend, &tol()).unwrap().shape(), (1, 2));
    }

    #[test]
    fn collapse_pair_float() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let i = Matrix::from_rows(vec![
            vec![Complex64::new(s, 0.0)],
            vec![Complex64::new(0.0, s)],
            vec![Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        let c = collapse_composite(&i, &[Complex64::new(0.4, -0.3)], &tol()).unwrap();
        assert!(c.residual < 1e-9);
    }

    #[test]
    fn trivial_scattering_is_the_identity() {
        let id = Matrix::<Exact>::identity(2);
        let v = [q(1), q(2)];
        let (m, report) = scattering(&id, &id, &id, &v, &tol()).unwrap();
        assert_eq!(m.cod_state(), m.dom_state());
        assert_eq!(report.residual, 0.0);
        assert_eq!(report.operator, id);
    }

    #[test]
    fn pauli_x_forbids_the_transition() {
        let sx = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let i = Matrix::from_rows(vec![vec![q(1)], vec![q(0)]]).unwrap();
        let (m, report) = scattering(&sx, &i, &i.adjoint(), &[q(1)], &tol()).unwrap();
        assert_eq!(report.probability, q(0));
        assert_eq!(m.cod_gns().dim(), 0);
        assert!(report.probability_bounded);
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn rotation_scatters_with_squared_amplitude() {
        // exact rotation by the 3-4-5 angle: amplitude 3/5
        let r = Matrix::from_rows(vec![
            vec![Exact::from_ratio(3, 5), Exact::from_ratio(-4, 5)],
            vec![Exact::from_ratio(4, 5), Exact::from_ratio(3, 5)],
        ])
        .unwrap();
        let i = Matrix::from_rows(vec![vec![q(1)], vec![q(0)]]).unwrap();
        let (_, report) = scattering(&r, &i, &i.adjoint(), &[q(1)], &tol()).unwrap();
        assert_eq!(report.probability, Exact::from_ratio(9, 25));
        assert_eq!(report.residual, 0.0);
        // half rotation in floats: amplitude 1/sqrt(2)
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| Complex64::new(x, 0.0);
        let h = Matrix::from_rows(vec![vec![c(s), c(-s)], vec![c(s), c(s)]]).unwrap();
        let i = Matrix::from_rows(vec![vec![c(1.0)], vec![c(0.0)]]).unwrap();
        let (_, report) = scattering(&h, &i, &i.adjoint(), &[c(1.0)], &tol()).unwrap();
        assert!((report.probability.re - 0.5).abs() < 1e-12);
        assert!(report.residual < 1e-9);
    }

    #[test]
    fn scattering_preconditions() {
        let id = Matrix::<Exact>::identity(2);
        let stretch = Matrix::diag(&[q(1), q(2)]);
        assert_eq!(scattering(&stretch, &id, &id, &[q(1), q(0)], &tol()).err(), Some(Error::NotUnitary));
        assert_eq!(scattering(&id, &stretch, &id, &[q(1), q(0)], &tol()).err(), Some(Error::NotIsometric));
        assert_eq!(scattering(&id, &id, &stretch, &[q(1), q(0)], &tol()).err(), Some(Error::NotIsometric));
    }
}
