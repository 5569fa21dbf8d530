//! Finite probability spaces, Markov kernels and their Gelfand duals, and
//! the Born rule.
//!
//! A kernel `F : X -> Y` is a row-stochastic matrix. Its dual is the map
//! `Phi_F : C(Y) -> C(X)`, `Phi_F(f)(x) = sum_y F[x][y] f(y)`. Maps are stored
//! as `cod x dom` matrices on indicator coordinates, so the matrix of
//! `Phi_F` is `F` itself.

mod born;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use born::{born_distribution, ee_link_check, has_definite_value, DefiniteValue, EeLink, SpectralDistribution};

use crate::algebra::{function_algebra, StarAlgebra, StarLinearMap};
use crate::gns::{cyclic_isomorphism, gns, monoidal_iso, tensor_state, CyclicModule, State};
use crate::markov::{gns_m, CpMap, MarkovMorphism};
use crate::matrix::{vec_kron, Matrix};
use crate::scalar::{cmp_tol, Backend, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

fn sum_tol<S: Scalar>(n: usize) -> f64 {
    match S::BACKEND {
        Backend::Exact => 0.0,
        Backend::Float => 1e-12 * (n.max(1) as f64),
    }
}

fn is_nonneg_real<S: Scalar>(x: &S, t: f64) -> bool {
    matches!(x.real_sign(t), Some(Ordering::Greater | Ordering::Equal))
}

/// Product labels, matching [`crate::algebra::tensor_algebra`].
fn product_labels(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().flat_map(|x| b.iter().map(move |y| format!("{x}⊗{y}"))).collect()
}

/// A finite set with a probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProbSpace<S> {
    points: Vec<String>,
    weights: Vec<S>,
}

impl<S: Scalar> FiniteProbSpace<S> {
    pub fn new(points: Vec<String>, weights: Vec<S>) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::InvalidProbSpace("one weight per point, at least one point".into()));
        }
        let t = sum_tol::<S>(1);
        if let Some(k) = weights.iter().position(|w| !is_nonneg_real(w, t)) {
            return Err(Error::InvalidProbSpace(format!("weight of {:?} is not a nonnegative real", points[k])));
        }
        let total = weights.iter().fold(S::zero(), |acc, w| acc.add_ref(w));
        if !total.sub_ref(&S::one()).negligible(1.0, sum_tol::<S>(weights.len())) {
            return Err(Error::InvalidProbSpace("weights do not sum to one".into()));
        }
        function_algebra::<S>(&points)?;
        Ok(FiniteProbSpace { points, weights })
    }

    pub fn uniform(points: Vec<String>) -> Result<Self> {
        let n = points.len() as i64;
        let w = S::one().div_ref(&S::from_i64(n.max(1)));
        Self::new(points, alloc::vec![w; n as usize])
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Indices of points with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }

    /// `E_mu(f) = sum_x f(x) mu(x)`.
    pub fn expectation(&self, f: &[S]) -> S {
        f.iter().zip(&self.weights).fold(S::zero(), |acc, (x, w)| acc.add_ref(&x.mul_ref(w)))
    }

    pub fn product(&self, other: &Self) -> Self {
        FiniteProbSpace {
            points: product_labels(&self.points, &other.points),
            weights: vec_kron(&self.weights, &other.weights),
        }
    }
}

/// The expectation state on `C(X)`.
pub fn c_of<S: Scalar>(x: &FiniteProbSpace<S>) -> State<S> {
    let alg = Arc::new(function_algebra::<S>(&x.points).expect("labels validated on construction"));
    State::new_unchecked(alg, x.weights.clone())
}

/// `L^2(mu)` as a cyclic module: functions on the support with
/// `<f, g> = sum_x mu(x) f(x) conj(g(x))` and the constant function one.
pub fn l2_module<S: Scalar>(x: &FiniteProbSpace<S>) -> CyclicModule<S> {
    let support = x.support();
    let alg = c_of(x).algebra().clone();
    let d = support.len();
    let gram = Matrix::diag(&support.iter().map(|&i| x.weights[i].clone()).collect::<Vec<_>>());
    let actions = (0..x.points.len())
        .map(|i| Matrix::from_fn(d, d, |r, c| if r == c && support[r] == i { S::one() } else { S::zero() }))
        .collect();
    CyclicModule {
        algebra: alg,
        gram,
        actions,
        vector: alloc::vec![S::one(); d],
    }
}

/// Comparison of `GNS(E_mu)` with `L^2(mu)`.
#[derive(Debug, Clone)]
pub struct L2Report<S> {
    pub support_size: usize,
    pub gns_dim: usize,
    /// The cyclic isometry `GNS(E_mu) -> L^2(mu)`.
    pub isomorphism: Matrix<S>,
}

impl<S> L2Report<S> {
    pub fn passes(&self) -> bool {
        self.support_size == self.gns_dim
    }
}

pub fn l2_compare<S: Scalar>(x: &FiniteProbSpace<S>, tol: &ToleranceConfig) -> Result<L2Report<S>> {
    let g = gns(&c_of(x), tol)?;
    let module = l2_module(x);
    let isomorphism = cyclic_isomorphism(&g, &module, tol)?;
    Ok(L2Report {
        support_size: module.dim(),
        gns_dim: g.dim(),
        isomorphism,
    })
}

/// `L^2(mu (x) nu) = L^2(mu) (x) L^2(nu)` compatibly with the GNS monoidal
/// isomorphism: the L2 comparison maps intertwine it with the Kronecker
/// identification.
pub fn l2_monoidal_compare<S: Scalar>(
    x: &FiniteProbSpace<S>,
    y: &FiniteProbSpace<S>,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let t = cmp_tol::<S>(tol);
    let xy = x.product(y);
    let joint = c_of(&xy);
    let tensor = tensor_state(&c_of(x), &c_of(y));
    if !joint.approx_eq(&State::new_unchecked(joint.algebra().clone(), tensor.functional().to_vec()), t) {
        return Ok(false);
    }
    let (gx, gy, gxy) = (gns(&c_of(x), tol)?, gns(&c_of(y), tol)?, gns(&joint, tol)?);
    let iso = monoidal_iso(&gx, &gy, &gxy, tol)?;
    let (lx, ly, lxy) = (l2_compare(x, tol)?, l2_compare(y, tol)?, l2_compare(&xy, tol)?);
    let lhs = lxy.isomorphism.mul(&iso);
    let rhs = lx.isomorphism.kron(&ly.isomorphism);
    let grams = l2_module(&xy).gram.approx_eq(&l2_module(x).gram.kron(&l2_module(y).gram), t);
    Ok(grams && lhs.approx_eq(&rhs, t))
}

/// A row-stochastic matrix between finite sets.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel<S> {
    dom: Vec<String>,
    cod: Vec<String>,
    matrix: Matrix<S>,
}

impl<S: Scalar> MarkovKernel<S> {
    pub fn new(dom: Vec<String>, cod: Vec<String>, matrix: Matrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        if matrix.shape() != (dom.len(), cod.len()) {
            return Err(Error::ShapeMismatch("kernel matrix must be |dom| x |cod|".into()));
        }
        let t = cmp_tol::<S>(tol);
        for r in 0..matrix.rows() {
            let row = matrix.row(r);
            if row.iter().any(|x| !is_nonneg_real(x, t)) {
                return Err(Error::NotStochastic(r));
            }
            let total = row.iter().fold(S::zero(), |acc, x| acc.add_ref(x));
            if !total.near(&S::one(), t) {
                return Err(Error::NotStochastic(r));
            }
        }
        Ok(MarkovKernel { dom, cod, matrix })
    }

    pub fn identity(points: Vec<String>) -> Self {
        let n = points.len();
        MarkovKernel {
            dom: points.clone(),
            cod: points,
            matrix: Matrix::identity(n),
        }
    }

    /// The kernel `x -> delta_g(x)` of a function, given as target indices.
    pub fn deterministic(dom: Vec<String>, cod: Vec<String>, g: &[usize]) -> Result<Self> {
        if g.len() != dom.len() || g.iter().any(|&y| y >= cod.len()) {
            return Err(Error::ShapeMismatch("function table does not fit the sets".into()));
        }
        let matrix = Matrix::from_fn(dom.len(), cod.len(), |r, c| if g[r] == c { S::one() } else { S::zero() });
        Ok(MarkovKernel { dom, cod, matrix })
    }

    pub fn dom(&self) -> &[String] {
        &self.dom
    }
    pub fn cod(&self) -> &[String] {
        &self.cod
    }
    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// `mu -> mu F`.
    pub fn push_forward(&self, mu: &FiniteProbSpace<S>) -> Result<FiniteProbSpace<S>> {
        if mu.points != self.dom {
            return Err(Error::ShapeMismatch("measure lives on a different set".into()));
        }
        let weights = self.matrix.transpose().mul_vec(&mu.weights);
        Ok(FiniteProbSpace {
            points: self.cod.clone(),
            weights,
        })
    }
}

/// `f` then `g`: the Kleisli composite, a matrix product.
pub fn kleisli_compose<S: Scalar>(f: &MarkovKernel<S>, g: &MarkovKernel<S>) -> Result<MarkovKernel<S>> {
    if f.cod != g.dom {
        return Err(Error::ShapeMismatch("kernels do not compose".into()));
    }
    Ok(MarkovKernel {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        matrix: f.matrix.mul(&g.matrix),
    })
}

pub fn kernel_tensor<S: Scalar>(f: &MarkovKernel<S>, g: &MarkovKernel<S>) -> MarkovKernel<S> {
    MarkovKernel {
        dom: product_labels(&f.dom, &g.dom),
        cod: product_labels(&f.cod, &g.cod),
        matrix: f.matrix.kron(&g.matrix),
    }
}

fn algebra_on<S: Scalar>(points: &[String]) -> Result<Arc<StarAlgebra<S>>> {
    Ok(Arc::new(function_algebra::<S>(points)?))
}

/// `Phi_F : C(Y) -> C(X)`, certified completely positive.
pub fn kernel_to_cp<S: Scalar>(f: &MarkovKernel<S>, tol: &ToleranceConfig) -> Result<CpMap<S>> {
    let map = StarLinearMap::new(algebra_on(&f.cod)?, algebra_on(&f.dom)?, f.matrix.clone(), tol)?;
    CpMap::new(&map, tol)
}

/// The kernel `x -> Phi*(delta_x)` of a positive unital map between
/// function algebras.
pub fn cp_to_kernel<S: Scalar>(map: &StarLinearMap<S>, tol: &ToleranceConfig) -> Result<MarkovKernel<S>> {
    if !map.dom().is_function_algebra() || !map.cod().is_function_algebra() {
        return Err(Error::NotFunctionAlgebra);
    }
    let t = cmp_tol::<S>(tol);
    let m = map.matrix();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !is_nonneg_real(&m[(r, c)], t) {
                return Err(Error::NotPositiveMap(r, c));
            }
        }
    }
    if !map.is_unital(tol) {
        return Err(Error::NotUnital);
    }
    Ok(MarkovKernel {
        dom: map.cod().labels().to_vec(),
        cod: map.dom().labels().to_vec(),
        matrix: m.clone(),
    })
}

/// `GNS_M(Phi_F)` against `E_mu` next to the row-averaging operator
/// `f -> (x -> sum_y F[x][y] f(y))` restricted to the supports of `mu` and
/// `mu F`.
#[derive(Debug, Clone)]
pub struct CompatibilityReport<S> {
    pub gns_m: Matrix<S>,
    pub row_averaging: Matrix<S>,
    pub matches: bool,
}

pub fn probabilistic_compatibility<S: Scalar>(
    f: &MarkovKernel<S>,
    mu: &FiniteProbSpace<S>,
    tol: &ToleranceConfig,
) -> Result<CompatibilityReport<S>> {
    let nu = f.push_forward(mu)?;
    let cp = kernel_to_cp(f, tol)?;
    let phi = State::new_unchecked(cp.underlying().cod().clone(), mu.weights.clone());
    let m = MarkovMorphism::pull_back(cp.underlying(), &phi, tol)?;
    let gm = gns_m(&m)?;
    let row_averaging = f.matrix.submatrix(&mu.support(), &nu.support());
    let matches = m.cod_gns().pivots() == nu.support().as_slice()
        && m.dom_gns().pivots() == mu.support().as_slice()
        && gm.approx_eq(&row_averaging, cmp_tol::<S>(tol));
    Ok(CompatibilityReport {
        gns_m: gm,
        row_averaging,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tensor_linear_map, StarHomomorphism};
    use crate::scalar::Exact;
    use alloc::string::ToString;
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn r(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }
    fn pts(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn prob_space_validation() {
        assert!(FiniteProbSpace::new(pts(&["x"]), vec![r(1, 1)]).is_ok());
        assert!(matches!(
            FiniteProbSpace::new(pts(&["x", "y"]), vec![r(1, 2), r(1, 3)]),
            Err(Error::InvalidProbSpace(_))
        ));
        assert!(matches!(
            FiniteProbSpace::new(pts(&["x", "y"]), vec![r(3, 2), r(-1, 2)]),
            Err(Error::InvalidProbSpace(_))
        ));
        assert_eq!(
            FiniteProbSpace::new(pts(&["x", "x"]), vec![r(1, 2), r(1, 2)]),
            Err(Error::DuplicateLabel("x".into()))
        );
    }

    #[test]
    fn expectation_states() {
        let one = FiniteProbSpace::new(pts(&["x"]), vec![r(1, 1)]).unwrap();
        assert_eq!(c_of(&one).functional(), &[r(1, 1)]);
        let uni = FiniteProbSpace::<Exact>::uniform(pts(&["x", "y"])).unwrap();
        assert_eq!(c_of(&uni).functional(), &[r(1, 2), r(1, 2)]);
        let skew = FiniteProbSpace::new(pts(&["x", "y"]), vec![r(1, 3), r(2, 3)]).unwrap();
        assert_eq!(c_of(&skew).functional(), &[r(1, 3), r(2, 3)]);
        assert_eq!(skew.expectation(&[r(3, 1), r(0, 1)]), r(1, 1));
    }

    #[test]
    fn l2_comparisons() {
        let uni = FiniteProbSpace::<Exact>::uniform(pts(&["a", "b", "c"])).unwrap();
        let rep = l2_compare(&uni, &tol()).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.gns_dim, 3);
        assert_eq!(l2_module(&uni).gram, Matrix::diag(&[r(1, 3), r(1, 3), r(1, 3)]));
        assert_eq!(rep.isomorphism, Matrix::identity(3));
        let dirac = FiniteProbSpace::new(pts(&["x", "y"]), vec![r(1, 1), r(0, 1)]).unwrap();
        let rep = l2_compare(&dirac, &tol()).unwrap();
        assert_eq!((rep.support_size, rep.gns_dim), (1, 1));
        let skew = FiniteProbSpace::new(pts(&["u", "v"]), vec![r(1, 4), r(3, 4)]).unwrap();
        assert!(l2_monoidal_compare(&uni, &skew, &tol()).unwrap());
        assert!(l2_monoidal_compare(&dirac, &skew, &tol()).unwrap());
    }

    #[test]
    fn kernel_validation() {
        let bad = Matrix::from_rows(vec![vec![r(1, 2), r(1, 3)]]).unwrap();
        assert_eq!(MarkovKernel::new(pts(&["x"]), pts(&["a", "b"]), bad, &tol()), Err(Error::NotStochastic(0)));
        let neg = Matrix::from_rows(vec![vec![r(1, 1), r(0, 1)], vec![r(3, 2), r(-1, 2)]]).unwrap();
        assert_eq!(MarkovKernel::new(pts(&["x", "y"]), pts(&["a", "b"]), neg, &tol()), Err(Error::NotStochastic(1)));
    }

    #[test]
    fn gelfand_duality_examples() {
        let xs = pts(&["x1", "x2"]);
        let id = MarkovKernel::<Exact>::identity(xs.clone());
        let cp = kernel_to_cp(&id, &tol()).unwrap();
        assert_eq!(cp.underlying().matrix(), &Matrix::identity(2));
        assert_eq!(cp_to_kernel(cp.underlying(), &tol()).unwrap(), id);

        // a function g : {x1, x2, x3} -> {y1, y2} dualizes to its pullback homomorphism
        let g = MarkovKernel::<Exact>::deterministic(pts(&["x1", "x2", "x3"]), pts(&["y1", "y2"]), &[0, 0, 1]).unwrap();
        let cp = kernel_to_cp(&g, &tol()).unwrap();
        StarHomomorphism::new(
            cp.underlying().dom().clone(),
            cp.underlying().cod().clone(),
            cp.underlying().matrix().clone(),
            &tol(),
        )
        .unwrap();

        let k = Matrix::from_rows(vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 1)]]).unwrap();
        let f = MarkovKernel::new(xs.clone(), xs.clone(), k.clone(), &tol()).unwrap();
        let cp = kernel_to_cp(&f, &tol()).unwrap();
        // Phi(1_x1) = 1/2 1_x1 and Phi(1_x2) = 1/2 1_x1 + 1_x2
        assert_eq!(cp.underlying().apply(&[r(1, 1), r(0, 1)]), vec![r(1, 2), r(0, 1)]);
        assert_eq!(cp.underlying().apply(&[r(0, 1), r(1, 1)]), vec![r(1, 2), r(1, 1)]);
        assert_eq!(cp_to_kernel(cp.underlying(), &tol()).unwrap(), f);
    }

    #[test]
    fn cp_to_kernel_rejections() {
        let xs = pts(&["x", "y"]);
        let alg = algebra_on::<Exact>(&xs).unwrap();
        let neg = Matrix::from_rows(vec![vec![r(2, 1), r(0, 1)], vec![r(-1, 1), r(1, 1)]]).unwrap();
        let map = StarLinearMap::new(alg.clone(), alg.clone(), neg, &tol()).unwrap();
        assert_eq!(cp_to_kernel(&map, &tol()).err(), Some(Error::NotPositiveMap(1, 0)));
        let half = Matrix::identity(2).scale(&r(1, 2));
        let map = StarLinearMap::new(alg.clone(), alg, half, &tol()).unwrap();
        assert_eq!(cp_to_kernel(&map, &tol()).err(), Some(Error::NotUnital));
        let m2 = Arc::new(crate::algebra::matrix_algebra::<Exact>(2));
        assert_eq!(
            cp_to_kernel(&StarLinearMap::identity(&m2), &tol()).err(),
            Some(Error::NotFunctionAlgebra)
        );
    }

    #[test]
    fn kleisli_and_tensor() {
        let xs = pts(&["x1", "x2"]);
        let k = Matrix::from_rows(vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 1)]]).unwrap();
        let f = MarkovKernel::new(xs.clone(), xs.clone(), k, &tol()).unwrap();
        let ff = kleisli_compose(&f, &f).unwrap();
        let expected = Matrix::from_rows(vec![vec![r(1, 4), r(3, 4)], vec![r(0, 1), r(1, 1)]]).unwrap();
        assert_eq!(ff.matrix(), &expected);
        assert_eq!(kleisli_compose(&f, &MarkovKernel::identity(xs.clone())).unwrap(), f);
        // contravariance of the dual
        let lhs = kernel_to_cp(&ff, &tol()).unwrap();
        let rhs = kernel_to_cp(&f, &tol()).unwrap().compose(&kernel_to_cp(&f, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!(lhs.underlying().matrix(), rhs.underlying().matrix());
        let g = MarkovKernel::<Exact>::deterministic(pts(&["u"]), xs.clone(), &[1]).unwrap();
        assert!(kleisli_compose(&f, &g).is_err());

        let fg = kernel_tensor(&f, &MarkovKernel::identity(pts(&["u", "v"])));
        assert_eq!(fg.matrix(), &f.matrix().kron(&Matrix::identity(2)));
        let dual = kernel_to_cp(&fg, &tol()).unwrap();
        let factorwise = tensor_linear_map(
            kernel_to_cp(&f, &tol()).unwrap().underlying(),
            kernel_to_cp(&MarkovKernel::identity(pts(&["u", "v"])), &tol()).unwrap().underlying(),
        );
        assert_eq!(dual.underlying(), &factorwise);
    }

    #[test]
    fn compatibility_with_row_averaging() {
        let xs = pts(&["x1", "x2", "x3"]);
        let ys = pts(&["y1", "y2", "y3"]);
        // y3 is never reached and x3 has no mass
        let k = Matrix::from_rows(vec![
            vec![r(1, 3), r(2, 3), r(0, 1)],
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(1, 1)],
        ])
        .unwrap();
        let f = MarkovKernel::new(xs.clone(), ys, k, &tol()).unwrap();
        let mu = FiniteProbSpace::new(xs, vec![r(1, 2), r(1, 2), r(0, 1)]).unwrap();
        let rep = probabilistic_compatibility(&f, &mu, &tol()).unwrap();
        assert!(rep.matches);
        let expected = Matrix::from_rows(vec![vec![r(1, 3), r(2, 3)], vec![r(1, 1), r(0, 1)]]).unwrap();
        assert_eq!(rep.gns_m, expected);
    }
}
