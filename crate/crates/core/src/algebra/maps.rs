use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{same_algebra, tensor_algebra, StarAlgebra};
use crate::matrix::{vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

fn check_shape<S: Scalar>(dom: &StarAlgebra<S>, cod: &StarAlgebra<S>, m: &Matrix<S>) -> Result<()> {
    if m.shape() != (cod.dim(), dom.dim()) {
        return Err(Error::ShapeMismatch(alloc::format!(
            "map matrix is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            cod.dim(),
            dom.dim()
        )));
    }
    Ok(())
}

/// `F S_dom = S_cod conj(F)`, checked column by column.
fn check_star<S: Scalar>(dom: &StarAlgebra<S>, cod: &StarAlgebra<S>, m: &Matrix<S>, t: f64) -> Result<()> {
    for i in 0..dom.dim() {
        let lhs = m.mul_vec(&dom.star_matrix().column(i));
        let rhs = cod.star(&m.column(i));
        if !vec_approx_eq(&lhs, &rhs, t) {
            return Err(Error::NotStarPreserving(i));
        }
    }
    Ok(())
}

/// A unital *-homomorphism `dom -> cod` with matrix of shape `cod.dim x dom.dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarHomomorphism<S> {
    dom: Arc<StarAlgebra<S>>,
    cod: Arc<StarAlgebra<S>>,
    matrix: Matrix<S>,
}

impl<S: Scalar> StarHomomorphism<S> {
    /// Validates unitality, multiplicativity on basis pairs and star preservation,
    /// reporting the first violated law.
    pub fn new(
        dom: Arc<StarAlgebra<S>>,
        cod: Arc<StarAlgebra<S>>,
        matrix: Matrix<S>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        check_shape(&dom, &cod, &matrix)?;
        let t = cmp_tol::<S>(tol);
        if !vec_approx_eq(&matrix.mul_vec(dom.unit()), cod.unit(), t) {
            return Err(Error::NotUnital);
        }
        let images = matrix.columns();
        // A faithful representation turns each product check into a small
        // matrix product instead of a pass over the structure constants.
        let rep_images: Option<Vec<Matrix<S>>> = cod.rep().map(|r| images.iter().map(|v| r.apply(v)).collect());
        for i in 0..dom.dim() {
            for j in 0..dom.dim() {
                let ok = match &rep_images {
                    Some(reps) => {
                        let n = reps[i].rows();
                        let lhs = dom
                            .basis_product(i, j)
                            .iter()
                            .fold(Matrix::zeros(n, n), |acc, (k, c)| acc.add(&reps[*k].scale(c)));
                        lhs.approx_eq(&reps[i].mul(&reps[j]), t)
                    }
                    None => {
                        let mut lhs = alloc::vec![S::zero(); cod.dim()];
                        for (k, c) in dom.basis_product(i, j) {
                            for (r, fk) in images[*k].iter().enumerate() {
                                lhs[r].mul_acc(c, fk);
                            }
                        }
                        vec_approx_eq(&lhs, &cod.mul(&images[i], &images[j]), t)
                    }
                };
                if !ok {
                    return Err(Error::NotMultiplicative(i, j));
                }
            }
        }
        check_star(&dom, &cod, &matrix, t)?;
        Ok(StarHomomorphism { dom, cod, matrix })
    }

    pub(crate) fn new_unchecked(dom: Arc<StarAlgebra<S>>, cod: Arc<StarAlgebra<S>>, matrix: Matrix<S>) -> Self {
        StarHomomorphism { dom, cod, matrix }
    }

    pub fn identity(alg: &Arc<StarAlgebra<S>>) -> Self {
        StarHomomorphism {
            dom: alg.clone(),
            cod: alg.clone(),
            matrix: Matrix::identity(alg.dim()),
        }
    }

    /// The unit map `C -> A`.
    pub fn unit_inclusion(c: &Arc<StarAlgebra<S>>, alg: &Arc<StarAlgebra<S>>) -> Result<Self> {
        if c.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: c.dim(),
            });
        }
        let matrix = Matrix::from_columns(alg.dim(), &[alg.unit().to_vec()]);
        Ok(StarHomomorphism::new_unchecked(c.clone(), alg.clone(), matrix))
    }

    pub fn dom(&self) -> &Arc<StarAlgebra<S>> {
        &self.dom
    }
    pub fn cod(&self) -> &Arc<StarAlgebra<S>> {
        &self.cod
    }
    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StarHomomorphism<S>) -> Result<Self> {
        if !same_algebra(inner.cod(), &self.dom) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(StarHomomorphism {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }

    pub fn as_linear(&self) -> StarLinearMap<S> {
        StarLinearMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

/// A *-preserving linear map `dom -> cod`; multiplicativity is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct StarLinearMap<S> {
    dom: Arc<StarAlgebra<S>>,
    cod: Arc<StarAlgebra<S>>,
    matrix: Matrix<S>,
}

impl<S: Scalar> StarLinearMap<S> {
    pub fn new(
        dom: Arc<StarAlgebra<S>>,
        cod: Arc<StarAlgebra<S>>,
        matrix: Matrix<S>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        check_shape(&dom, &cod, &matrix)?;
        check_star(&dom, &cod, &matrix, cmp_tol::<S>(tol))?;
        Ok(StarLinearMap { dom, cod, matrix })
    }

    /// The map whose value on each basis element is given by its
    /// representation matrix, `rho_cod(Phi(e_i)) = images[i]`.
    pub fn from_rep_images(
        dom: Arc<StarAlgebra<S>>,
        cod: Arc<StarAlgebra<S>>,
        images: &[Matrix<S>],
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        if images.len() != dom.dim() {
            return Err(Error::DimensionMismatch {
                expected: dom.dim(),
                found: images.len(),
            });
        }
        let mut cols = Vec::with_capacity(images.len());
        for m in images {
            cols.push(super::Element::from_rep_matrix(&cod, m, tol)?.into_coords());
        }
        let matrix = Matrix::from_columns(cod.dim(), &cols);
        StarLinearMap::new(dom, cod, matrix, tol)
    }

    pub fn identity(alg: &Arc<StarAlgebra<S>>) -> Self {
        StarHomomorphism::identity(alg).as_linear()
    }

    pub fn dom(&self) -> &Arc<StarAlgebra<S>> {
        &self.dom
    }
    pub fn cod(&self) -> &Arc<StarAlgebra<S>> {
        &self.cod
    }
    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.mul_vec(x)
    }

    pub fn is_unital(&self, tol: &ToleranceConfig) -> bool {
        vec_approx_eq(&self.apply(self.dom.unit()), self.cod.unit(), cmp_tol::<S>(tol))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StarLinearMap<S>) -> Result<Self> {
        if !same_algebra(inner.cod(), &self.dom) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(StarLinearMap {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }

    /// Upgrades to a homomorphism when the map is multiplicative and unital.
    pub fn to_homomorphism(&self, tol: &ToleranceConfig) -> Result<StarHomomorphism<S>> {
        StarHomomorphism::new(self.dom.clone(), self.cod.clone(), self.matrix.clone(), tol)
    }
}

/// `f (x) g` between tensor algebras.
pub fn tensor_homomorphism<S: Scalar>(f: &StarHomomorphism<S>, g: &StarHomomorphism<S>) -> StarHomomorphism<S> {
    StarHomomorphism {
        dom: Arc::new(tensor_algebra(&f.dom, &g.dom)),
        cod: Arc::new(tensor_algebra(&f.cod, &g.cod)),
        matrix: f.matrix.kron(&g.matrix),
    }
}

pub fn tensor_linear_map<S: Scalar>(f: &StarLinearMap<S>, g: &StarLinearMap<S>) -> StarLinearMap<S> {
    StarLinearMap {
        dom: Arc::new(tensor_algebra(&f.dom, &g.dom)),
        cod: Arc::new(tensor_algebra(&f.cod, &g.cod)),
        matrix: f.matrix.kron(&g.matrix),
    }
}
