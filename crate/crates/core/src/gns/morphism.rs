use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{gns, vector_state, GnsSpace, State};
use crate::algebra::{same_algebra, StarHomomorphism};
use crate::linalg::adjoint_wrt_forms;
use crate::matrix::Matrix;
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// First radical vector of `from` whose image under `f` leaves the radical
/// of `to`, or `None` when `f` maps radical into radical.
pub(crate) fn admissibility_witness<S: Scalar>(
    f: &Matrix<S>,
    from: &GnsSpace<S>,
    to: &GnsSpace<S>,
    tol: &ToleranceConfig,
) -> Option<Vec<S>> {
    from.radical_basis()
        .iter()
        .find(|x| !to.in_radical(&f.mul_vec(x), tol))
        .cloned()
}

/// Matrix of `[x] -> [f x]` from the quotient basis of `from` to that of `to`.
pub(crate) fn transport<S: Scalar>(f: &Matrix<S>, from: &GnsSpace<S>, to: &GnsSpace<S>) -> Matrix<S> {
    let cols: Vec<Vec<S>> = from.pivots().iter().map(|&p| to.class_of(&f.column(p))).collect();
    Matrix::from_columns(to.dim(), &cols)
}

/// Pullback law `psi = phi o f`, reporting the first failing basis element.
pub(crate) fn check_pullback<S: Scalar>(
    f: &Matrix<S>,
    phi: &State<S>,
    psi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<()> {
    let t = cmp_tol::<S>(tol);
    if !phi.normalization().near(psi.normalization(), t) {
        return Err(Error::NormalizationMismatch);
    }
    let pulled = phi.pullback_matrix(psi.algebra(), f);
    for (i, (a, b)) in pulled.functional().iter().zip(psi.functional()).enumerate() {
        if !a.near(b, t) {
            return Err(Error::PullbackMismatch(i));
        }
    }
    Ok(())
}

/// A morphism `(A, phi) -> (B, psi)`, carried by a *-homomorphism
/// `f : B -> A` with `psi = phi o f`.
#[derive(Debug, Clone)]
pub struct PhysMorphism<S> {
    dom: Arc<GnsSpace<S>>,
    cod: Arc<GnsSpace<S>>,
    hom: StarHomomorphism<S>,
    witness: Option<Vec<S>>,
}

impl<S: Scalar> PhysMorphism<S> {
    /// Pulls `phi` back along `f` and records admissibility.
    pub fn pull_back(f: &StarHomomorphism<S>, phi: &State<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !same_algebra(f.cod(), phi.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let dom = Arc::new(gns(phi, tol)?);
        Self::pull_back_from(f, dom, tol)
    }

    /// As [`PhysMorphism::pull_back`], reusing an existing GNS space of `phi`.
    pub fn pull_back_from(f: &StarHomomorphism<S>, dom: Arc<GnsSpace<S>>, tol: &ToleranceConfig) -> Result<Self> {
        if !same_algebra(f.cod(), dom.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let psi = dom.state().pullback_matrix(f.dom(), f.matrix());
        let cod = Arc::new(gns(&psi, tol)?);
        Ok(Self::assemble(f.clone(), dom, cod, tol))
    }

    /// A morphism between two given states; rejects differing normalizations
    /// and failures of the pullback law.
    pub fn new(f: &StarHomomorphism<S>, phi: &State<S>, psi: &State<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !same_algebra(f.cod(), phi.algebra()) || !same_algebra(f.dom(), psi.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        check_pullback(f.matrix(), phi, psi, tol)?;
        let dom = Arc::new(gns(phi, tol)?);
        let cod = Arc::new(gns(psi, tol)?);
        Ok(Self::assemble(f.clone(), dom, cod, tol))
    }

    pub(crate) fn assemble(
        hom: StarHomomorphism<S>,
        dom: Arc<GnsSpace<S>>,
        cod: Arc<GnsSpace<S>>,
        tol: &ToleranceConfig,
    ) -> Self {
        let witness = admissibility_witness(hom.matrix(), &cod, &dom, tol);
        PhysMorphism { dom, cod, hom, witness }
    }

    pub fn identity(g: &Arc<GnsSpace<S>>) -> Self {
        PhysMorphism {
            dom: g.clone(),
            cod: g.clone(),
            hom: StarHomomorphism::identity(g.algebra()),
            witness: None,
        }
    }

    pub fn dom_state(&self) -> &State<S> {
        self.dom.state()
    }
    pub fn cod_state(&self) -> &State<S> {
        self.cod.state()
    }
    pub fn dom_gns(&self) -> &Arc<GnsSpace<S>> {
        &self.dom
    }
    pub fn cod_gns(&self) -> &Arc<GnsSpace<S>> {
        &self.cod
    }
    pub fn hom(&self) -> &StarHomomorphism<S> {
        &self.hom
    }
    pub fn is_admissible(&self) -> bool {
        self.witness.is_none()
    }
    /// A radical vector of `psi` that `f` sends outside the radical of `phi`.
    pub fn admissibility_witness(&self) -> Option<&[S]> {
        self.witness.as_deref()
    }

    /// `self : phi -> psi` followed by `next : psi -> chi`.
    pub fn then(&self, next: &PhysMorphism<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !self.cod_state().approx_eq(next.dom_state(), cmp_tol::<S>(tol)) {
            return Err(Error::NotComposable(1));
        }
        let hom = self.hom.compose(&next.hom)?;
        Ok(Self::assemble(hom, self.dom.clone(), next.cod.clone(), tol))
    }
}

/// `GNS(f) : GNS(psi) -> GNS(phi)`, `[x] -> [f(x)]`.
pub fn gns_map<S: Scalar>(m: &PhysMorphism<S>) -> Result<Matrix<S>> {
    if !m.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    Ok(transport(m.hom.matrix(), &m.cod, &m.dom))
}

/// `GNS_c(f) : GNS(phi) -> GNS(psi)`, the adjoint of [`gns_map`].
pub fn gns_c<S: Scalar>(m: &PhysMorphism<S>, tol: &ToleranceConfig) -> Result<Matrix<S>> {
    if !m.dom.is_positive() || !m.cod.is_positive() {
        return Err(Error::NotPositive);
    }
    let forward = gns_map(m)?;
    adjoint_wrt_forms(&forward, m.cod.gram(), m.dom.gram(), tol.rank_tol)
}

/// The dinaturality square at `v in GNS(psi)`: the vector state of
/// `GNS(f) v`, pulled back along `f`, equals the vector state of `v`.
pub fn dinaturality_holds<S: Scalar>(m: &PhysMorphism<S>, v: &[S], tol: &ToleranceConfig) -> Result<bool> {
    let image = gns_map(m)?.mul_vec(v);
    let pulled = vector_state(&m.dom, &image)?.pullback_matrix(m.hom.dom(), m.hom.matrix());
    let direct = vector_state(&m.cod, v)?;
    Ok(pulled.approx_eq(&direct, cmp_tol::<S>(tol)))
}
