use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Element, Representation, StarAlgebra, StarHomomorphism};
use crate::linalg::{row_echelon, Coordinatizer};
use crate::matrix::Matrix;
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// A unital *-subalgebra, presented abstractly together with its inclusion.
#[derive(Debug, Clone)]
pub struct Subalgebra<S> {
    pub algebra: Arc<StarAlgebra<S>>,
    pub inclusion: StarHomomorphism<S>,
    coordinatizer: Coordinatizer<S>,
}

impl<S: Scalar> Subalgebra<S> {
    /// Coordinates in the subalgebra basis of an element of the ambient
    /// algebra, or `None` if it lies outside.
    pub fn coords(&self, x: &[S]) -> Option<Vec<S>> {
        self.coordinatizer.coords(x)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// Canonical basis (reduced echelon rows) of the span of `vectors`.
fn span_basis<S: Scalar>(n: usize, vectors: &[Vec<S>], t: f64) -> Vec<Vec<S>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vectors.len(), n, |r, c| vectors[r][c].clone());
    let rref = row_echelon(&m, t);
    (0..rref.pivots.len()).map(|r| rref.matrix.row(r).to_vec()).collect()
}

/// The smallest unital *-subalgebra containing `gens`, found by closing the
/// span under products and stars until the dimension stabilizes.
pub fn generated_subalgebra<S: Scalar>(
    algebra: &Arc<StarAlgebra<S>>,
    gens: &[Element<S>],
    tol: &ToleranceConfig,
) -> Result<Subalgebra<S>> {
    if gens.iter().any(|g| !super::same_algebra(g.algebra(), algebra)) {
        return Err(Error::AlgebraMismatch);
    }
    let n = algebra.dim();
    let t = cmp_tol::<S>(tol);
    let mut seed = alloc::vec![algebra.unit().to_vec()];
    for g in gens {
        seed.push(g.coords().to_vec());
        seed.push(g.star().into_coords());
    }
    let mut basis = span_basis(n, &seed, t);
    for _ in 0..n {
        let mut candidates = basis.clone();
        for x in &basis {
            for y in &basis {
                candidates.push(algebra.mul(x, y));
            }
            candidates.push(algebra.star(x));
        }
        let next = span_basis(n, &candidates, t);
        let grew = next.len() > basis.len();
        basis = next;
        if !grew {
            break;
        }
    }
    from_basis(algebra, basis, tol)
}

fn from_basis<S: Scalar>(
    algebra: &Arc<StarAlgebra<S>>,
    basis: Vec<Vec<S>>,
    tol: &ToleranceConfig,
) -> Result<Subalgebra<S>> {
    let n = algebra.dim();
    let d = basis.len();
    let incl = Matrix::from_columns(n, &basis);
    let coordinatizer = Coordinatizer::new(incl.clone(), tol)?;
    let outside = || Error::InvalidStructure("span is not closed under the algebra operations".into());
    let mut products = Vec::with_capacity(d * d);
    for x in &basis {
        for y in &basis {
            let c = coordinatizer.coords(&algebra.mul(x, y)).ok_or_else(outside)?;
            products.push(super::sparse_of(&c));
        }
    }
    let mut star_cols = Vec::with_capacity(d);
    for x in &basis {
        star_cols.push(coordinatizer.coords(&algebra.star(x)).ok_or_else(outside)?);
    }
    let unit = coordinatizer.coords(algebra.unit()).ok_or_else(outside)?;
    let labels = basis.iter().enumerate().map(|(k, v)| label_for(algebra, v, k)).collect();
    let rep = algebra.rep().map(|r| Representation {
        dim: r.dim,
        matrices: basis.iter().map(|v| r.apply(v)).collect(),
    });
    let sub = Arc::new(StarAlgebra::from_parts(
        labels,
        products,
        unit,
        Matrix::from_columns(d, &star_cols),
        rep,
    ));
    let inclusion = StarHomomorphism::new_unchecked(sub.clone(), algebra.clone(), incl);
    Ok(Subalgebra {
        algebra: sub,
        inclusion,
        coordinatizer,
    })
}

/// Reuses the ambient label when the basis vector is a single basis element.
fn label_for<S: Scalar>(algebra: &StarAlgebra<S>, v: &[S], k: usize) -> String {
    let mut nz = v.iter().enumerate().filter(|(_, c)| !c.is_zero());
    match (nz.next(), nz.next()) {
        (Some((i, c)), None) if *c == S::one() => algebra.labels()[i].clone(),
        _ => format!("s{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, group_algebra, matrix_algebra, GroupTable};
    use crate::scalar::Exact;
    use alloc::string::ToString;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn unit_generates_c() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let sub = generated_subalgebra(&m2, &[Element::unit(&m2)], &tol()).unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(sub.inclusion.matrix().column(0), m2.unit().to_vec());
        let empty = generated_subalgebra(&m2, &[], &tol()).unwrap();
        assert_eq!(empty.dim(), 1);
    }

    #[test]
    fn diagonal_generates_the_diagonals() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let a = Element::new(m2.clone(), vec![Exact::one(), Exact::zero(), Exact::zero(), -Exact::one()]).unwrap();
        let sub = generated_subalgebra(&m2, &[a], &tol()).unwrap();
        assert_eq!(sub.dim(), 2);
        assert!(sub.algebra.is_commutative());
        // both diagonal matrix units lie inside, the off-diagonal ones do not
        assert!(sub.coords(&m2.basis_vector(0)).is_some());
        assert!(sub.coords(&m2.basis_vector(3)).is_some());
        assert!(sub.coords(&m2.basis_vector(1)).is_none());
        sub.algebra.validate(&tol()).unwrap();
        StarHomomorphism::new(sub.algebra.clone(), m2, sub.inclusion.matrix().clone(), &tol()).unwrap();
    }

    #[test]
    fn off_diagonal_unit_generates_everything() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let sub = generated_subalgebra(&m2, &[Element::basis(&m2, 1)], &tol()).unwrap();
        assert_eq!(sub.dim(), 4);
        sub.algebra.validate(&tol()).unwrap();
    }

    #[test]
    fn generation_is_idempotent() {
        let g = GroupTable::symmetric3();
        let s3 = Arc::new(group_algebra::<Exact>(&g));
        let t = Element::basis(&s3, g.element_of_perm([1, 0, 2]));
        let sub = generated_subalgebra(&s3, &[t], &tol()).unwrap();
        assert_eq!(sub.dim(), 2);
        let gens: Vec<Element<Exact>> = (0..sub.dim())
            .map(|k| Element::new(s3.clone(), sub.inclusion.matrix().column(k)).unwrap())
            .collect();
        assert_eq!(generated_subalgebra(&s3, &gens, &tol()).unwrap().dim(), 2);
    }

    #[test]
    fn indicator_labels_survive() {
        let pts: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let c3 = Arc::new(function_algebra::<Exact>(&pts).unwrap());
        let sub = generated_subalgebra(&c3, &[Element::basis(&c3, 0)], &tol()).unwrap();
        assert_eq!(sub.dim(), 2);
        assert_eq!(sub.algebra.labels()[0], "x");
    }
}
