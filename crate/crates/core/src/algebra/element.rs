use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{same_algebra, StarAlgebra};
use crate::linalg::Coordinatizer;
use crate::matrix::{vec_add, vec_approx_eq, vec_scale, vec_sub, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// An element of a shared algebra, in basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<S> {
    algebra: Arc<StarAlgebra<S>>,
    coords: Vec<S>,
}

impl<S: Scalar> Element<S> {
    pub fn new(algebra: Arc<StarAlgebra<S>>, coords: Vec<S>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: coords.len(),
            });
        }
        Ok(Element { algebra, coords })
    }

    pub fn basis(algebra: &Arc<StarAlgebra<S>>, i: usize) -> Self {
        Element {
            coords: algebra.basis_vector(i),
            algebra: algebra.clone(),
        }
    }

    pub fn unit(algebra: &Arc<StarAlgebra<S>>) -> Self {
        Element {
            coords: algebra.unit().to_vec(),
            algebra: algebra.clone(),
        }
    }

    pub fn zero(algebra: &Arc<StarAlgebra<S>>) -> Self {
        Element {
            coords: alloc::vec![S::zero(); algebra.dim()],
            algebra: algebra.clone(),
        }
    }

    /// The element whose representation matrix is `m`; fails when `m` is
    /// outside the image of the faithful representation.
    pub fn from_rep_matrix(algebra: &Arc<StarAlgebra<S>>, m: &Matrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        let rep = algebra.rep().ok_or(Error::NoFaithfulRep)?;
        if m.shape() != (rep.dim, rep.dim) {
            return Err(Error::ShapeMismatch("matrix does not match the representation".into()));
        }
        let coords = Coordinatizer::new(rep.vectorized(), tol)?
            .coords(m.as_slice())
            .ok_or_else(|| Error::ShapeMismatch("matrix is not in the represented algebra".into()))?;
        Element::new(algebra.clone(), coords)
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra<S>> {
        &self.algebra
    }
    pub fn coords(&self) -> &[S] {
        &self.coords
    }
    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn with(&self, coords: Vec<S>) -> Self {
        Element {
            algebra: self.algebra.clone(),
            coords,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.algebra.mul(&self.coords, &other.coords)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(vec_add(&self.coords, &other.coords)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(vec_sub(&self.coords, &other.coords)))
    }

    pub fn scale(&self, s: &S) -> Self {
        self.with(vec_scale(&self.coords, s))
    }

    pub fn star(&self) -> Self {
        self.with(self.algebra.star(&self.coords))
    }

    /// Representation matrix, when the algebra carries one.
    pub fn rep_matrix(&self) -> Option<Matrix<S>> {
        self.algebra.rep().map(|r| r.apply(&self.coords))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        same_algebra(&self.algebra, &other.algebra) && vec_approx_eq(&self.coords, &other.coords, tol)
    }

    pub fn is_self_adjoint(&self, tol: &ToleranceConfig) -> bool {
        self.approx_eq(&self.star(), cmp_tol::<S>(tol))
    }

    /// `[a, a*] = 0`.
    pub fn is_normal(&self, tol: &ToleranceConfig) -> bool {
        let s = self.star();
        let alg = &self.algebra;
        vec_approx_eq(
            &alg.mul(&self.coords, &s.coords),
            &alg.mul(&s.coords, &self.coords),
            cmp_tol::<S>(tol),
        )
    }

    /// `a a = a = a*`.
    pub fn is_projection(&self, tol: &ToleranceConfig) -> bool {
        let t = cmp_tol::<S>(tol);
        vec_approx_eq(&self.algebra.mul(&self.coords, &self.coords), &self.coords, t) && self.is_self_adjoint(tol)
    }
}
