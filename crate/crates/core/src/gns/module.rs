use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{GnsSpace, State};
use crate::algebra::{same_algebra, StarAlgebra};
use crate::linalg;
use crate::matrix::{form, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// A module over a *-algebra with a Hermitian form and a distinguished vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicModule<S> {
    pub algebra: Arc<StarAlgebra<S>>,
    pub gram: Matrix<S>,
    pub actions: Vec<Matrix<S>>,
    pub vector: Vec<S>,
}

impl<S: Scalar> CyclicModule<S> {
    pub fn new(
        algebra: Arc<StarAlgebra<S>>,
        gram: Matrix<S>,
        actions: Vec<Matrix<S>>,
        vector: Vec<S>,
    ) -> Result<Self> {
        let d = vector.len();
        if gram.shape() != (d, d) || actions.len() != algebra.dim() || actions.iter().any(|a| a.shape() != (d, d)) {
            return Err(Error::ShapeMismatch("module data do not fit together".into()));
        }
        Ok(CyclicModule {
            algebra,
            gram,
            actions,
            vector,
        })
    }

    /// The faithful representation space with its standard inner product.
    pub fn from_rep(algebra: &Arc<StarAlgebra<S>>, v: &[S]) -> Result<Self> {
        let rep = algebra.rep().ok_or(Error::NoFaithfulRep)?;
        Self::new(algebra.clone(), Matrix::identity(rep.dim), rep.matrices.clone(), v.to_vec())
    }

    pub fn from_gns(g: &GnsSpace<S>) -> Self {
        CyclicModule {
            algebra: g.algebra().clone(),
            gram: g.gram().clone(),
            actions: g.actions().to_vec(),
            vector: g.omega().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn act(&self, x: &[S]) -> Matrix<S> {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for (xi, a) in x.iter().zip(&self.actions) {
            if !xi.is_zero() {
                out = out.add(&a.scale(xi));
            }
        }
        out
    }

    /// `a -> <a m, m>`.
    pub fn represented_state(&self) -> State<S> {
        let functional = self
            .actions
            .iter()
            .map(|a| form(&self.gram, &a.mul_vec(&self.vector), &self.vector))
            .collect();
        State::new_unchecked(self.algebra.clone(), functional)
    }
}

/// The module map `GNS(phi) -> M`, `[x] -> x m`, for a module vector
/// representing the same state. It is isometric and intertwines the actions.
pub fn cyclic_embedding<S: Scalar>(g: &GnsSpace<S>, m: &CyclicModule<S>, tol: &ToleranceConfig) -> Result<Matrix<S>> {
    if !same_algebra(g.algebra(), &m.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if !m.represented_state().approx_eq(g.state(), cmp_tol::<S>(tol)) {
        return Err(Error::NotSameState);
    }
    let cols: Vec<Vec<S>> = g.pivots().iter().map(|&p| m.actions[p].mul_vec(&m.vector)).collect();
    Ok(Matrix::from_columns(m.dim(), &cols))
}

/// The unique cyclic isometry `GNS(phi) -> M` onto a cyclic representing module.
pub fn cyclic_isomorphism<S: Scalar>(
    g: &GnsSpace<S>,
    m: &CyclicModule<S>,
    tol: &ToleranceConfig,
) -> Result<Matrix<S>> {
    let e = cyclic_embedding(g, m, tol)?;
    if e.rows() != e.cols() || linalg::rank(&e, tol) != m.dim() {
        return Err(Error::NotCyclic);
    }
    Ok(e)
}
