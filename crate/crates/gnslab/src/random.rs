//! Seeded generators for the randomized property suites.
//!
//! Everything is built from small Gaussian rationals so the same generator
//! serves both backends: over [`Exact`](gnslab_core::Exact) the instances are
//! exact, over `Complex64` they are the float images of the same numbers.

use std::sync::Arc;

use gnslab_core::algebra::{
    complex_numbers, function_algebra, group_algebra, matrix_algebra, tensor_algebra, tensor_homomorphism,
    GroupTable, StarAlgebra, StarHomomorphism,
};
use gnslab_core::gns::State;
use gnslab_core::{linalg, Matrix, Scalar, ToleranceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed of `gnslab suite`.
pub const DEFAULT_SEED: u64 = 0x6e5_1ab;

pub struct Gen {
    rng: ChaCha8Rng,
}

/// A composable pair `C --g--> B --f--> A` of *-homomorphisms with a
/// positive state on `A`.
#[derive(Debug, Clone)]
pub struct HomChain<S> {
    pub template: &'static str,
    pub f: StarHomomorphism<S>,
    pub g: StarHomomorphism<S>,
    pub phi: State<S>,
}

/// A normal element `a = U diag(d) U*` of `M_n` with its spectral data.
#[derive(Debug, Clone)]
pub struct NormalObservable<S> {
    pub matrix: Matrix<S>,
    pub unitary: Matrix<S>,
    pub eigenvalues: Vec<S>,
}

pub fn points(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("x{k}")).collect()
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A fresh generator for the `k`-th sub-stream, so suites do not shift
    /// when another suite draws more numbers.
    pub fn fork(seed: u64, stream: &str) -> Self {
        let salt = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
        });
        Gen::new(seed ^ salt)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn rational<S: Scalar>(&mut self) -> S {
        S::from_ratio(self.int(-4, 4), self.int(1, 3))
    }

    pub fn nonzero_rational<S: Scalar>(&mut self) -> S {
        let n = loop {
            let n = self.int(-4, 4);
            if n != 0 {
                break n;
            }
        };
        S::from_ratio(n, self.int(1, 3))
    }

    /// `p/q + r/s i` with small numerators and denominators.
    pub fn gaussian<S: Scalar>(&mut self) -> S {
        S::gaussian((self.int(-3, 3), self.int(1, 3)), (self.int(-3, 3), self.int(1, 3)))
    }

    pub fn vector<S: Scalar>(&mut self, n: usize) -> Vec<S> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    pub fn nonzero_vector<S: Scalar>(&mut self, n: usize) -> Vec<S> {
        loop {
            let v = self.vector::<S>(n);
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }

    pub fn matrix<S: Scalar>(&mut self, r: usize, c: usize) -> Matrix<S> {
        Matrix::from_fn(r, c, |_, _| self.gaussian())
    }

    /// Cayley transform `(I - K)(I + K)^-1` of an anti-Hermitian `K`; exact
    /// over the rationals.
    pub fn unitary<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        let x = self.matrix::<S>(n, n);
        let k = x.sub(&x.adjoint()).scale(&S::from_ratio(1, 2));
        let id = Matrix::<S>::identity(n);
        let inv = linalg::inverse(&id.add(&k), 1e-12).expect("I + K is invertible for anti-Hermitian K");
        id.sub(&k).mul(&inv)
    }

    /// The first `k` columns of a random unitary on `C^n`.
    pub fn isometry<S: Scalar>(&mut self, n: usize, k: usize) -> Matrix<S> {
        let u = self.unitary::<S>(n);
        u.select_columns(&(0..k).collect::<Vec<_>>())
    }

    /// `U diag(1..1, 0..0) U*` of the given rank.
    pub fn projection<S: Scalar>(&mut self, n: usize, rank: usize) -> Matrix<S> {
        let i = self.isometry::<S>(n, rank);
        i.mul(&i.adjoint())
    }

    /// Eigenvalues are drawn from a few Gaussian rationals so that
    /// degenerate spectra occur.
    pub fn normal<S: Scalar>(&mut self, n: usize) -> NormalObservable<S> {
        let pool: Vec<S> = (0..n.max(2) - 1).map(|_| self.gaussian()).collect();
        let eigenvalues: Vec<S> = (0..n).map(|_| pool[self.below(pool.len())].clone()).collect();
        let unitary = self.unitary::<S>(n);
        let matrix = unitary.mul(&Matrix::diag(&eigenvalues)).mul(&unitary.adjoint());
        NormalObservable {
            matrix,
            unitary,
            eigenvalues,
        }
    }

    /// Nonnegative rational weights summing to one, with at least one zero
    /// when `sparse` is set and `n > 1`.
    pub fn weights<S: Scalar>(&mut self, n: usize, sparse: bool) -> Vec<S> {
        let mut raw: Vec<i64> = (0..n).map(|_| self.int(0, 4)).collect();
        if sparse && n > 1 {
            let z = self.below(n);
            raw[z] = 0;
        }
        if raw.iter().all(|&w| w == 0) {
            let k = self.below(n);
            raw[k] = 1;
        }
        let total: i64 = raw.iter().sum();
        raw.iter().map(|&w| S::from_ratio(w, total)).collect()
    }

    /// Row-stochastic with rational entries; some rows are deterministic.
    pub fn stochastic<S: Scalar>(&mut self, rows: usize, cols: usize) -> Matrix<S> {
        let rows: Vec<Vec<S>> = (0..rows)
            .map(|_| {
                if self.coin(0.25) {
                    let j = self.below(cols);
                    (0..cols).map(|c| if c == j { S::one() } else { S::zero() }).collect()
                } else {
                    let sparse = self.coin(0.3);
                    self.weights(cols, sparse)
                }
            })
            .collect();
        Matrix::from_rows(rows).expect("rows have equal length")
    }

    /// `X X*` for a random `n x rank` matrix `X`.
    pub fn density<S: Scalar>(&mut self, n: usize, rank: usize) -> Matrix<S> {
        let x = self.matrix::<S>(n, rank);
        x.mul(&x.adjoint())
    }

    /// A positive state `a -> tr(D rho(a))` with `D >= 0` of random rank,
    /// so both faithful and degenerate states occur.
    pub fn positive_state<S: Scalar>(&mut self, alg: &Arc<StarAlgebra<S>>, tol: &ToleranceConfig) -> State<S> {
        let n = alg.rep().expect("generated algebras carry a faithful representation").dim;
        loop {
            let rank = self.range(1, n);
            let d = self.density::<S>(n, rank);
            if let Ok(phi) = State::from_density(alg, &d, tol) {
                if !phi.normalization().is_zero() {
                    return phi;
                }
            }
        }
    }

    pub fn map_between(&mut self, from: usize, to: usize) -> Vec<usize> {
        (0..from).map(|_| self.below(to)).collect()
    }

    /// One of several templates of composable *-homomorphisms covering
    /// matrix, function, group and tensor algebras.
    pub fn hom_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        match self.below(5) {
            0 => self.function_chain(tol),
            1 => self.matrix_chain(tol),
            2 => self.scalar_chain(tol),
            3 => self.group_chain(tol),
            _ => self.tensor_chain(tol),
        }
    }

    /// `C(Z) -> C(Y) -> C(X)` along random maps `X -> Y -> Z`.
    fn function_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        let (nx, ny, nz) = (self.range(1, 5), self.range(1, 5), self.range(1, 5));
        let x = function_alg::<S>(nx);
        let y = function_alg::<S>(ny);
        let z = function_alg::<S>(nz);
        let s1 = self.map_between(nx, ny);
        let s2 = self.map_between(ny, nz);
        let f = StarHomomorphism::new(y.clone(), x.clone(), pullback_matrix(&s1, ny), tol).expect("pullback");
        let g = StarHomomorphism::new(z, y, pullback_matrix(&s2, nz), tol).expect("pullback");
        let phi = self.positive_state(&x, tol);
        HomChain {
            template: "function",
            f,
            g,
            phi,
        }
    }

    /// `C(n) -> M_n` diagonally, followed by `Ad(u)` on `M_n`.
    fn matrix_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        let n = self.range(1, 3);
        let mn = Arc::new(matrix_algebra::<S>(n));
        let cn = function_alg::<S>(n);
        let diag = Matrix::from_fn(n * n, n, |r, c| if r == c * n + c { S::one() } else { S::zero() });
        let g = StarHomomorphism::new(cn, mn.clone(), diag, tol).expect("diagonal embedding");
        let f = adjoint_action(&mn, &self.unitary::<S>(n), tol);
        let phi = self.positive_state(&mn, tol);
        HomChain {
            template: "matrix",
            f,
            g,
            phi,
        }
    }

    /// `C -> C(Y) -> C(X)`.
    fn scalar_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        let (nx, ny) = (self.range(1, 5), self.range(1, 5));
        let x = function_alg::<S>(nx);
        let y = function_alg::<S>(ny);
        let s = self.map_between(nx, ny);
        let f = StarHomomorphism::new(y.clone(), x.clone(), pullback_matrix(&s, ny), tol).expect("pullback");
        let g = StarHomomorphism::unit_inclusion(&Arc::new(complex_numbers()), &y).expect("unit inclusion");
        let phi = self.positive_state(&x, tol);
        HomChain {
            template: "scalar",
            f,
            g,
            phi,
        }
    }

    /// The inclusion of a cyclic subgroup into `C[G]`, followed by an
    /// automorphism of `C[G]` (conjugation, or inversion when abelian).
    fn group_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        let group = if self.coin(0.5) {
            GroupTable::symmetric3()
        } else {
            GroupTable::cyclic(self.range(1, 6))
        };
        let cg = Arc::new(group_algebra::<S>(&group));
        let h = self.below(group.order());
        let mut powers = vec![group.identity()];
        while let Some(&last) = powers.last() {
            let next = group.mul(last, h);
            if next == group.identity() {
                break;
            }
            powers.push(next);
        }
        let ch = Arc::new(group_algebra::<S>(&GroupTable::cyclic(powers.len())));
        let incl = Matrix::from_fn(group.order(), powers.len(), |r, c| {
            if powers[c] == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let g = StarHomomorphism::new(ch, cg.clone(), incl, tol).expect("subgroup inclusion");
        let image: Vec<usize> = if group.is_abelian() && self.coin(0.5) {
            (0..group.order()).map(|x| group.inverse(x)).collect()
        } else {
            let k = self.below(group.order());
            (0..group.order())
                .map(|x| group.mul(group.mul(k, x), group.inverse(k)))
                .collect()
        };
        let auto = Matrix::from_fn(group.order(), group.order(), |r, c| {
            if image[c] == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let f = StarHomomorphism::new(cg.clone(), cg.clone(), auto, tol).expect("group automorphism");
        let phi = self.positive_state(&cg, tol);
        HomChain {
            template: "group",
            f,
            g,
            phi,
        }
    }

    /// `M_2 -> M_2 (x) C(Y) -> M_2 (x) C(X)`.
    fn tensor_chain<S: Scalar>(&mut self, tol: &ToleranceConfig) -> HomChain<S> {
        let (nx, ny) = (self.range(1, 3), self.range(1, 3));
        let m2 = Arc::new(matrix_algebra::<S>(2));
        let x = function_alg::<S>(nx);
        let y = function_alg::<S>(ny);
        let m2y = Arc::new(tensor_algebra(&m2, &y));
        let m2x = Arc::new(tensor_algebra(&m2, &x));
        let amp = Matrix::from_fn(4 * ny, 4, |r, c| if r / ny == c { S::one() } else { S::zero() });
        let g = StarHomomorphism::new(m2.clone(), m2y.clone(), amp, tol).expect("amplification");
        let s = self.map_between(nx, ny);
        let pb = StarHomomorphism::new(y, x, pullback_matrix(&s, ny), tol).expect("pullback");
        let id = StarHomomorphism::identity(&m2);
        let prod = tensor_homomorphism(&id, &pb);
        let f = StarHomomorphism::new(m2y, m2x.clone(), prod.matrix().clone(), tol).expect("tensor pullback");
        let phi = self.positive_state(&m2x, tol);
        HomChain {
            template: "tensor",
            f,
            g,
            phi,
        }
    }
}

pub fn function_alg<S: Scalar>(n: usize) -> Arc<StarAlgebra<S>> {
    Arc::new(function_algebra(&points(n)).expect("distinct labels"))
}

/// `h -> h o sigma` for `sigma : X -> Y`, an `|X| x |Y|` 0/1 matrix.
pub fn pullback_matrix<S: Scalar>(sigma: &[usize], ny: usize) -> Matrix<S> {
    Matrix::from_fn(sigma.len(), ny, |x, y| if sigma[x] == y { S::one() } else { S::zero() })
}

/// `a -> u a u*` on `M_n`, read in the matrix-unit basis.
pub fn adjoint_action<S: Scalar>(mn: &Arc<StarAlgebra<S>>, u: &Matrix<S>, tol: &ToleranceConfig) -> StarHomomorphism<S> {
    let n = u.rows();
    let cols: Vec<Vec<S>> = (0..n * n)
        .map(|i| {
            let mut e = Matrix::<S>::zeros(n, n);
            e[(i / n, i % n)] = S::one();
            u.mul(&e).mul(&u.adjoint()).as_slice().to_vec()
        })
        .collect();
    StarHomomorphism::new(mn.clone(), mn.clone(), Matrix::from_columns(n * n, &cols), tol)
        .expect("conjugation by a unitary")
}
