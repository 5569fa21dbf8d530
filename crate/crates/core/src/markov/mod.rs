//! *-linear processes that need not be multiplicative.
//!
//! A [`MarkovMorphism`] `(B, phi) -> (A, psi)` is carried by a *-linear map
//! `Phi : A -> B` with `psi = phi o Phi`, the same direction convention as
//! [`PhysMorphism`]. It is admissible when `Phi` sends the radical of `psi`
//! into the radical of `phi`, and then `[x] -> [Phi(x)]` is well defined.

mod cp;
mod process;
mod stinespring;

use alloc::sync::Arc;
use alloc::vec::Vec;

pub use cp::{choi_matrix, is_completely_positive, kraus_map, CpMap, CpVerdict};
pub use process::{
    collapse_composite, conditioning, scattering, CollapseComposite, ConditioningReport, ScatteringReport,
};
pub use stinespring::{stinespring, StinespringDilation};

use crate::algebra::{same_algebra, tensor_linear_map, StarLinearMap};
use crate::gns::{admissibility_witness, gns, tensor_state, transport, GnsSpace, PhysMorphism, State};
use crate::linalg::adjoint_wrt_forms;
use crate::matrix::Matrix;
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Radical vector of `phi o Phi` that `Phi` sends outside the radical of
/// `phi`; `None` certifies admissibility.
pub fn is_admissible_linear<S: Scalar>(
    map: &StarLinearMap<S>,
    phi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<Option<Vec<S>>> {
    Ok(MarkovMorphism::pull_back(map, phi, tol)?.witness)
}

/// A process `(B, phi) -> (A, psi)` over a *-linear `Phi : A -> B`.
#[derive(Debug, Clone)]
pub struct MarkovMorphism<S> {
    dom: Arc<GnsSpace<S>>,
    cod: Arc<GnsSpace<S>>,
    map: StarLinearMap<S>,
    witness: Option<Vec<S>>,
}

impl<S: Scalar> MarkovMorphism<S> {
    pub fn pull_back(map: &StarLinearMap<S>, phi: &State<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !same_algebra(map.cod(), phi.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        Self::pull_back_from(map, Arc::new(gns(phi, tol)?), tol)
    }

    pub fn pull_back_from(map: &StarLinearMap<S>, dom: Arc<GnsSpace<S>>, tol: &ToleranceConfig) -> Result<Self> {
        if !same_algebra(map.cod(), dom.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let psi = dom.state().pullback_matrix(map.dom(), map.matrix());
        let cod = Arc::new(gns(&psi, tol)?);
        Ok(Self::assemble(map.clone(), dom, cod, tol))
    }

    fn assemble(map: StarLinearMap<S>, dom: Arc<GnsSpace<S>>, cod: Arc<GnsSpace<S>>, tol: &ToleranceConfig) -> Self {
        let witness = admissibility_witness(map.matrix(), &cod, &dom, tol);
        MarkovMorphism { dom, cod, map, witness }
    }

    /// The same morphism viewed as a process.
    pub fn from_phys(m: &PhysMorphism<S>) -> Self {
        MarkovMorphism {
            dom: m.dom_gns().clone(),
            cod: m.cod_gns().clone(),
            map: m.hom().as_linear(),
            witness: m.admissibility_witness().map(<[S]>::to_vec),
        }
    }

    pub fn identity(g: &Arc<GnsSpace<S>>) -> Self {
        MarkovMorphism {
            dom: g.clone(),
            cod: g.clone(),
            map: StarLinearMap::identity(g.algebra()),
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
    pub fn map(&self) -> &StarLinearMap<S> {
        &self.map
    }
    pub fn is_admissible(&self) -> bool {
        self.witness.is_none()
    }
    pub fn admissibility_witness(&self) -> Option<&[S]> {
        self.witness.as_deref()
    }

    /// `self : phi -> psi` followed by `next : psi -> chi`.
    pub fn then(&self, next: &MarkovMorphism<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !self.cod_state().approx_eq(next.dom_state(), cmp_tol::<S>(tol)) {
            return Err(Error::NotComposable(1));
        }
        let map = self.map.compose(&next.map)?;
        Ok(Self::assemble(map, self.dom.clone(), next.cod.clone(), tol))
    }
}

/// `GNS_M(Phi) : GNS(psi) -> GNS(phi)`, `[x] -> [Phi(x)]`.
pub fn gns_m<S: Scalar>(m: &MarkovMorphism<S>) -> Result<Matrix<S>> {
    if !m.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    Ok(transport(m.map.matrix(), &m.cod, &m.dom))
}

/// `GNS_M,c(Phi) : GNS(phi) -> GNS(psi)`, the adjoint of [`gns_m`].
pub fn gns_mc<S: Scalar>(m: &MarkovMorphism<S>, tol: &ToleranceConfig) -> Result<Matrix<S>> {
    if !m.dom.is_positive() || !m.cod.is_positive() {
        return Err(Error::NotPositive);
    }
    adjoint_wrt_forms(&gns_m(m)?, m.cod.gram(), m.dom.gram(), tol.rank_tol)
}

/// `m1 (x) m2` over `Phi1 (x) Phi2`.
pub fn tensor_markov<S: Scalar>(
    m1: &MarkovMorphism<S>,
    m2: &MarkovMorphism<S>,
    tol: &ToleranceConfig,
) -> Result<MarkovMorphism<S>> {
    let map = tensor_linear_map(&m1.map, &m2.map);
    let phi = tensor_state(m1.dom_state(), m2.dom_state());
    let phi = State::new(map.cod().clone(), phi.functional().to_vec(), tol)?;
    MarkovMorphism::pull_back(&map, &phi, tol)
}

/// Composes a chain of processes starting at `start`. An empty chain is the
/// identity; `NotComposable(k)` names the first link that does not fit.
pub fn evolve<S: Scalar>(
    start: &Arc<GnsSpace<S>>,
    chain: &[MarkovMorphism<S>],
    tol: &ToleranceConfig,
) -> Result<MarkovMorphism<S>> {
    let t = cmp_tol::<S>(tol);
    let mut acc = MarkovMorphism::identity(start);
    for (k, m) in chain.iter().enumerate() {
        if !acc.cod_state().approx_eq(m.dom_state(), t) {
            return Err(Error::NotComposable(k));
        }
        acc = if k == 0 {
            m.clone()
        } else {
            acc.then(m, tol).map_err(|_| Error::NotComposable(k))?
        };
    }
    Ok(acc)
}
