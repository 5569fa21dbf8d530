//! Finite-dimensional unital *-algebras presented by structure constants.

mod element;
mod group;
mod maps;
mod subalgebra;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

pub use element::Element;
pub use group::GroupTable;
pub use maps::{tensor_homomorphism, tensor_linear_map, StarHomomorphism, StarLinearMap};
pub use subalgebra::{generated_subalgebra, Subalgebra};

use crate::linalg;
use crate::matrix::{unit_vector, vec_approx_eq, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Sparse coordinate vector: `(basis index, coefficient)` with nonzero coefficients.
pub type Sparse<S> = Vec<(usize, S)>;

/// A *-representation on `C^dim`, one matrix per basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<S> {
    pub dim: usize,
    pub matrices: Vec<Matrix<S>>,
}

impl<S: Scalar> Representation<S> {
    /// `rho(x) = sum_i x_i rho(e_i)`.
    pub fn apply(&self, x: &[S]) -> Matrix<S> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (xi, m) in x.iter().zip(&self.matrices) {
            if !xi.is_zero() {
                out = out.add(&m.scale(xi));
            }
        }
        out
    }

    /// Vectorized representation matrices as the columns of a `dim^2 x n` matrix.
    pub fn vectorized(&self) -> Matrix<S> {
        let cols: Vec<Vec<S>> = self.matrices.iter().map(|m| m.as_slice().to_vec()).collect();
        Matrix::from_columns(self.dim * self.dim, &cols)
    }
}

/// A unital *-algebra with basis `e_0, ..., e_{n-1}`:
/// `e_i e_j = sum_k c_ijk e_k`, unit `sum_i u_i e_i`, and star
/// `(sum_i x_i e_i)* = S conj(x)`, so column `i` of `S` holds `e_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarAlgebra<S> {
    labels: Vec<String>,
    products: Vec<Sparse<S>>,
    unit: Vec<S>,
    star: Matrix<S>,
    rep: Option<Representation<S>>,
}

fn sparse_of<S: Scalar>(dense: &[S]) -> Sparse<S> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

fn dense_of<S: Scalar>(dim: usize, sparse: &[(usize, S)]) -> Vec<S> {
    let mut out = vec![S::zero(); dim];
    for (k, c) in sparse {
        out[*k] += c.clone();
    }
    out
}

impl<S: Scalar> StarAlgebra<S> {
    /// Assembles an algebra from dense structure constants `consts[i][j][k]`
    /// and checks every axiom.
    pub fn from_structure(
        labels: Vec<String>,
        consts: Vec<Vec<Vec<S>>>,
        unit: Vec<S>,
        star: Matrix<S>,
        rep: Option<Representation<S>>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let n = labels.len();
        let bad = |what: &str| Error::InvalidStructure(what.to_string());
        if consts.len() != n || consts.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(bad("structure constants must be n x n x n"));
        }
        if unit.len() != n || star.shape() != (n, n) {
            return Err(bad("unit or star has the wrong size"));
        }
        let products = consts.iter().flat_map(|row| row.iter().map(|v| sparse_of(v))).collect();
        let alg = StarAlgebra {
            labels,
            products,
            unit,
            star,
            rep,
        };
        alg.validate(tol)?;
        Ok(alg)
    }

    pub(crate) fn from_parts(
        labels: Vec<String>,
        products: Vec<Sparse<S>>,
        unit: Vec<S>,
        star: Matrix<S>,
        rep: Option<Representation<S>>,
    ) -> Self {
        StarAlgebra {
            labels,
            products,
            unit,
            star,
            rep,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[S] {
        &self.unit
    }
    pub fn star_matrix(&self) -> &Matrix<S> {
        &self.star
    }
    pub fn rep(&self) -> Option<&Representation<S>> {
        self.rep.as_ref()
    }

    /// Same structure with a different representation.
    pub(crate) fn with_rep(&self, rep: Option<Representation<S>>) -> Self {
        StarAlgebra { rep, ..self.clone() }
    }

    /// Drops the faithful representation.
    pub fn without_rep(&self) -> Self {
        StarAlgebra {
            rep: None,
            ..self.clone()
        }
    }

    /// Sparse coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.products[i * self.dim() + j]
    }

    pub fn struct_const(&self, i: usize, j: usize, k: usize) -> S {
        self.basis_product(i, j)
            .iter()
            .find(|(idx, _)| *idx == k)
            .map_or_else(S::zero, |(_, c)| c.clone())
    }

    /// Product of coordinate vectors.
    pub fn mul(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coeff = xi.mul_ref(yj);
                for (k, c) in self.basis_product(i, j) {
                    out[*k].mul_acc(&coeff, c);
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[S]) -> Vec<S> {
        let cx: Vec<S> = x.iter().map(Scalar::conj).collect();
        self.star.mul_vec(&cx)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<S> {
        unit_vector(self.dim(), i)
    }

    /// Element `e_i* e_j` as dense coordinates.
    pub fn star_basis_product(&self, i: usize, j: usize) -> Vec<S> {
        let si = self.star.column(i);
        self.mul(&si, &self.basis_vector(j))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// True when the basis consists of orthogonal self-adjoint idempotents
    /// summing to the unit, i.e. the algebra is `C(X)` in its indicator basis.
    pub fn is_function_algebra(&self) -> bool {
        let n = self.dim();
        let products_ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let p = self.basis_product(i, j);
                if i == j {
                    p.len() == 1 && p[0].0 == i && p[0].1 == S::one()
                } else {
                    p.is_empty()
                }
            })
        });
        products_ok
            && self.unit.iter().all(|u| *u == S::one())
            && self.star == Matrix::identity(n)
    }

    /// Checks associativity, the unit law, the star axioms and, when present,
    /// the representation axioms including faithfulness.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        let n = self.dim();
        let t = cmp_tol::<S>(tol);
        let bad = |what: String| Err(Error::InvalidStructure(what));
        for i in 0..n {
            for j in 0..n {
                let eij = dense_of(n, self.basis_product(i, j));
                for k in 0..n {
                    let left = self.mul(&eij, &self.basis_vector(k));
                    let ejk = dense_of(n, self.basis_product(j, k));
                    let right = self.mul(&self.basis_vector(i), &ejk);
                    if !vec_approx_eq(&left, &right, t) {
                        return bad(format!("associativity fails at ({i}, {j}, {k})"));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis_vector(i);
            if !vec_approx_eq(&self.mul(&self.unit, &e), &e, t) || !vec_approx_eq(&self.mul(&e, &self.unit), &e, t) {
                return bad(format!("unit law fails at {i}"));
            }
        }
        if !self.star.mul(&self.star.conj()).approx_eq(&Matrix::identity(n), t) {
            return bad("star is not involutive".into());
        }
        if !vec_approx_eq(&self.star(&self.unit), &self.unit, t) {
            return bad("star does not fix the unit".into());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.star(&dense_of(n, self.basis_product(i, j)));
                let rhs = self.mul(&self.star.column(j), &self.star.column(i));
                if !vec_approx_eq(&lhs, &rhs, t) {
                    return bad(format!("star is not an anti-homomorphism at ({i}, {j})"));
                }
            }
        }
        if let Some(rep) = &self.rep {
            self.validate_rep(rep, tol)?;
        }
        Ok(())
    }

    fn validate_rep(&self, rep: &Representation<S>, tol: &ToleranceConfig) -> Result<()> {
        let n = self.dim();
        let t = cmp_tol::<S>(tol);
        let bad = |what: String| Err(Error::InvalidStructure(what));
        if rep.matrices.len() != n || rep.matrices.iter().any(|m| m.shape() != (rep.dim, rep.dim)) {
            return bad("representation has the wrong shape".into());
        }
        if !rep.apply(&self.unit).approx_eq(&Matrix::identity(rep.dim), t) {
            return bad("representation is not unital".into());
        }
        for i in 0..n {
            for j in 0..n {
                let prod = rep.matrices[i].mul(&rep.matrices[j]);
                if !prod.approx_eq(&rep.apply(&dense_of(n, self.basis_product(i, j))), t) {
                    return bad(format!("representation is not multiplicative at ({i}, {j})"));
                }
            }
            if !rep.apply(&self.star.column(i)).approx_eq(&rep.matrices[i].adjoint(), t) {
                return bad(format!("representation does not preserve the star at {i}"));
            }
        }
        if linalg::rank(&rep.vectorized(), tol) != n {
            return Err(Error::NotFaithful);
        }
        Ok(())
    }
}

/// The full matrix algebra `M_n` in the matrix-unit basis `E_pq`
/// (index `p * n + q`), acting on `C^n`.
pub fn matrix_algebra<S: Scalar>(n: usize) -> StarAlgebra<S> {
    assert!(n >= 1, "matrix algebra needs n >= 1");
    let dim = n * n;
    let mut labels = Vec::with_capacity(dim);
    for p in 0..n {
        for q in 0..n {
            labels.push(format!("E{}{}", p + 1, q + 1));
        }
    }
    let mut products = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let (p, q) = (i / n, i % n);
        for j in 0..dim {
            let (r, s) = (j / n, j % n);
            if q == r {
                products.push(vec![(p * n + s, S::one())]);
            } else {
                products.push(Vec::new());
            }
        }
    }
    let unit = (0..dim).map(|i| if i / n == i % n { S::one() } else { S::zero() }).collect();
    let star = Matrix::from_fn(dim, dim, |k, i| {
        let (p, q) = (i / n, i % n);
        if k == q * n + p {
            S::one()
        } else {
            S::zero()
        }
    });
    let matrices = (0..dim)
        .map(|i| {
            let mut m = Matrix::zeros(n, n);
            m[(i / n, i % n)] = S::one();
            m
        })
        .collect();
    StarAlgebra::from_parts(labels, products, unit, star, Some(Representation { dim: n, matrices }))
}

/// Functions on a finite set in the indicator basis, represented diagonally.
pub fn function_algebra<S: Scalar>(points: &[String]) -> Result<StarAlgebra<S>> {
    if points.is_empty() {
        return Err(Error::InvalidStructure("function algebra needs at least one point".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::DuplicateLabel(p.clone()));
        }
    }
    let n = points.len();
    let mut products = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            products.push(if i == j { vec![(i, S::one())] } else { Vec::new() });
        }
    }
    let matrices = (0..n)
        .map(|i| {
            let mut m = Matrix::zeros(n, n);
            m[(i, i)] = S::one();
            m
        })
        .collect();
    Ok(StarAlgebra::from_parts(
        points.to_vec(),
        products,
        vec![S::one(); n],
        Matrix::identity(n),
        Some(Representation { dim: n, matrices }),
    ))
}

/// The group algebra of a finite group with the left regular representation.
pub fn group_algebra<S: Scalar>(group: &GroupTable) -> StarAlgebra<S> {
    let n = group.order();
    let labels = (0..n).map(|g| format!("g{g}")).collect();
    let mut products = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            products.push(vec![(group.mul(i, j), S::one())]);
        }
    }
    let unit = unit_vector(n, group.identity());
    let star = Matrix::from_fn(n, n, |k, i| if k == group.inverse(i) { S::one() } else { S::zero() });
    let matrices = (0..n)
        .map(|g| Matrix::from_fn(n, n, |r, c| if r == group.mul(g, c) { S::one() } else { S::zero() }))
        .collect();
    StarAlgebra::from_parts(labels, products, unit, star, Some(Representation { dim: n, matrices }))
}

/// `A (x) B` with basis `e_i (x) f_j` at index `i * dim(B) + j`.
pub fn tensor_algebra<S: Scalar>(a: &StarAlgebra<S>, b: &StarAlgebra<S>) -> StarAlgebra<S> {
    let (na, nb) = (a.dim(), b.dim());
    let mut labels = Vec::with_capacity(na * nb);
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(format!("{la}⊗{lb}"));
        }
    }
    let n = na * nb;
    let mut products = Vec::with_capacity(n * n);
    for x in 0..n {
        let (i, j) = (x / nb, x % nb);
        for y in 0..n {
            let (k, l) = (y / nb, y % nb);
            let mut sp = Vec::new();
            for (p, c) in a.basis_product(i, k) {
                for (q, d) in b.basis_product(j, l) {
                    sp.push((p * nb + q, c.mul_ref(d)));
                }
            }
            products.push(sp);
        }
    }
    let unit = crate::matrix::vec_kron(&a.unit, &b.unit);
    let star = a.star.kron(&b.star);
    let rep = match (&a.rep, &b.rep) {
        (Some(ra), Some(rb)) => {
            let mut matrices = Vec::with_capacity(n);
            for ma in &ra.matrices {
                for mb in &rb.matrices {
                    matrices.push(ma.kron(mb));
                }
            }
            Some(Representation {
                dim: ra.dim * rb.dim,
                matrices,
            })
        }
        _ => None,
    };
    StarAlgebra::from_parts(labels, products, unit, star, rep)
}

/// The conjugate algebra: same coordinate space with structure constants,
/// unit, star and representation conjugated entrywise.
pub fn conjugate_algebra<S: Scalar>(a: &StarAlgebra<S>) -> StarAlgebra<S> {
    let products = a
        .products
        .iter()
        .map(|sp| sp.iter().map(|(k, c)| (*k, c.conj())).collect())
        .collect();
    let rep = a.rep.as_ref().map(|r| Representation {
        dim: r.dim,
        matrices: r.matrices.iter().map(Matrix::conj).collect(),
    });
    StarAlgebra::from_parts(
        a.labels.clone(),
        products,
        a.unit.iter().map(Scalar::conj).collect(),
        a.star.conj(),
        rep,
    )
}

/// The one-dimensional algebra `C`.
pub fn complex_numbers<S: Scalar>() -> StarAlgebra<S> {
    matrix_algebra(1)
}

/// Whether two shared algebras are the same (by identity or by structure).
pub fn same_algebra<S: Scalar>(a: &Arc<StarAlgebra<S>>, b: &Arc<StarAlgebra<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn pts(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn matrix_algebra_relations() {
        let m1 = matrix_algebra::<Exact>(1);
        assert_eq!(m1.dim(), 1);
        let m2 = matrix_algebra::<Exact>(2);
        assert_eq!(m2.dim(), 4);
        m2.validate(&tol()).unwrap();
        // E12 E21 = E11
        assert_eq!(m2.mul(&m2.basis_vector(1), &m2.basis_vector(2)), m2.basis_vector(0));
        // E12* = E21
        assert_eq!(m2.star(&m2.basis_vector(1)), m2.basis_vector(2));
        matrix_algebra::<Exact>(3).validate(&tol()).unwrap();
    }

    #[test]
    fn function_algebra_examples() {
        let c1 = function_algebra::<Exact>(&pts(&["x"])).unwrap();
        assert_eq!(c1.dim(), 1);
        let c2 = function_algebra::<Exact>(&pts(&["x", "y"])).unwrap();
        assert!(c2.mul(&c2.basis_vector(0), &c2.basis_vector(1)).iter().all(|c| Scalar::is_zero(c)));
        let c3 = function_algebra::<Exact>(&pts(&["x", "y", "z"])).unwrap();
        assert_eq!(c3.unit(), &[Exact::one(), Exact::one(), Exact::one()]);
        c3.validate(&tol()).unwrap();
        assert!(c3.is_function_algebra());
        assert_eq!(
            function_algebra::<Exact>(&pts(&["x", "x"])),
            Err(Error::DuplicateLabel("x".into()))
        );
    }

    #[test]
    fn group_algebras() {
        let z2 = group_algebra::<Exact>(&GroupTable::cyclic(2));
        z2.validate(&tol()).unwrap();
        assert!(z2.is_commutative());
        let s3 = group_algebra::<Exact>(&GroupTable::symmetric3());
        assert_eq!(s3.dim(), 6);
        s3.validate(&tol()).unwrap();
        assert!(!s3.is_commutative());
        let triv = group_algebra::<Exact>(&GroupTable::cyclic(1));
        assert_eq!(triv.dim(), 1);
        assert_eq!(triv.unit(), &[Exact::one()]);
    }

    #[test]
    fn s3_transpositions_do_not_commute() {
        // hand check: (12)(23) = (123) while (23)(12) = (132)
        let g = GroupTable::symmetric3();
        let s3 = group_algebra::<Exact>(&g);
        let (a, b) = (g.element_of_perm([1, 0, 2]), g.element_of_perm([0, 2, 1]));
        assert_ne!(
            s3.mul(&s3.basis_vector(a), &s3.basis_vector(b)),
            s3.mul(&s3.basis_vector(b), &s3.basis_vector(a))
        );
    }

    #[test]
    fn tensor_products() {
        let m2 = matrix_algebra::<Exact>(2);
        let t = tensor_algebra(&m2, &m2);
        assert_eq!(t.dim(), 16);
        t.validate(&tol()).unwrap();
        // C({x,y}) (x) C({u,v}) has four orthogonal indicator idempotents
        let cx = function_algebra::<Exact>(&pts(&["x", "y"])).unwrap();
        let cu = function_algebra::<Exact>(&pts(&["u", "v"])).unwrap();
        let c4 = tensor_algebra(&cx, &cu);
        assert!(c4.is_function_algebra());
        assert_eq!(c4.labels()[1], "x⊗v");
        let with_c = tensor_algebra(&m2, &complex_numbers());
        assert_eq!(with_c.dim(), 4);
        assert_eq!(with_c.basis_product(1, 2), m2.basis_product(1, 2));
    }

    #[test]
    fn conjugation_is_involutive() {
        let m2 = matrix_algebra::<Exact>(2);
        assert_eq!(conjugate_algebra(&conjugate_algebra(&m2)), m2);
        let cx = function_algebra::<Exact>(&pts(&["x", "y"])).unwrap();
        assert_eq!(conjugate_algebra(&cx), cx);
        // C[Z4] presented with generator g mapped to i: basis 1, g with g^2 = -1
        let i = Exact::imag_unit();
        let alg = StarAlgebra::from_structure(
            pts(&["1", "j"]),
            vec![
                vec![vec![Exact::one(), Exact::zero()], vec![Exact::zero(), Exact::one()]],
                vec![vec![Exact::zero(), Exact::one()], vec![-Exact::one(), Exact::zero()]],
            ],
            vec![Exact::one(), Exact::zero()],
            Matrix::diag(&[Exact::one(), -Exact::one()]),
            None,
            &tol(),
        )
        .unwrap();
        let _ = i;
        let conj = conjugate_algebra(&alg);
        assert_eq!(conj, alg);
    }

    #[test]
    fn conjugate_flips_imaginary_structure_constants() {
        // the algebra C with basis {i*1}: e e = -e... use C x C with a twisted basis
        // basis f0 = 1, f1 = i * indicator of the second point
        let i = Exact::imag_unit();
        let one = Exact::one();
        let zero = Exact::zero();
        let alg = StarAlgebra::from_structure(
            pts(&["1", "f"]),
            vec![
                vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
                // f f = (i 1_y)^2 = -1_y = i f
                vec![vec![zero.clone(), one.clone()], vec![zero.clone(), i.clone()]],
            ],
            vec![one.clone(), zero.clone()],
            // f* = -i 1_y = -f
            Matrix::diag(&[one.clone(), -one.clone()]),
            None,
            &tol(),
        )
        .unwrap();
        let conj = conjugate_algebra(&alg);
        assert_eq!(conj.struct_const(1, 1, 1), -i);
        conj.validate(&tol()).unwrap();
    }

    #[test]
    fn from_structure_rejects_bad_axioms() {
        let one = Exact::one();
        let zero = Exact::zero();
        // non-associative: e1 e1 = e0 + e1 but unit law broken
        let res = StarAlgebra::from_structure(
            pts(&["a", "b"]),
            vec![
                vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
                vec![vec![zero.clone(), one.clone()], vec![one.clone(), one.clone()]],
            ],
            vec![zero.clone(), one.clone()],
            Matrix::identity(2),
            None,
            &tol(),
        );
        assert!(matches!(res, Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn unfaithful_rep_is_rejected() {
        let cx = function_algebra::<Exact>(&pts(&["x", "y"])).unwrap();
        let rep = Representation {
            dim: 1,
            matrices: vec![Matrix::identity(1), Matrix::zeros(1, 1)],
        };
        let consts = (0..2)
            .map(|i| (0..2).map(|j| dense_of(2, cx.basis_product(i, j))).collect())
            .collect();
        let res = StarAlgebra::from_structure(
            cx.labels().to_vec(),
            consts,
            cx.unit().to_vec(),
            cx.star_matrix().clone(),
            Some(rep),
            &tol(),
        );
        assert_eq!(res, Err(Error::NotFaithful));
    }
}
