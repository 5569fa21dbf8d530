use crate::algebra::{conjugate_algebra, same_algebra};
use crate::gns::{gns_c, PhysMorphism};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// `v -> M v` or, when `conjugating`, `v -> M conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Semilinear<S> {
    pub matrix: Matrix<S>,
    pub conjugating: bool,
}

impl<S: Scalar> Semilinear<S> {
    pub fn linear(matrix: Matrix<S>) -> Self {
        Semilinear {
            matrix,
            conjugating: false,
        }
    }

    pub fn apply(&self, v: &[S]) -> alloc::vec::Vec<S> {
        if self.conjugating {
            self.matrix.mul_vec(&crate::matrix::vec_conj(v))
        } else {
            self.matrix.mul_vec(v)
        }
    }

    /// `self o inner`; conjugations compose by parity.
    pub fn compose(&self, inner: &Semilinear<S>) -> Self {
        let m = if self.conjugating { inner.matrix.conj() } else { inner.matrix.clone() };
        Semilinear {
            matrix: self.matrix.mul(&m),
            conjugating: self.conjugating != inner.conjugating,
        }
    }

    /// `<T v, T w> = <v, w>`, or `<w, v>` when antilinear, for the form `g`.
    pub fn preserves_form(&self, g: &Matrix<S>, tol: f64) -> bool {
        let m = &self.matrix;
        let pulled = m.transpose().mul(g).mul(&m.conj());
        let target = if self.conjugating { g.conj() } else { g.clone() };
        pulled.approx_eq(&target, tol)
    }
}

/// An antiunitary time reversal on `GNS(phi)`.
#[derive(Debug, Clone)]
pub struct TimeReversal<S> {
    pub operator: Semilinear<S>,
    /// `<T v, T w> = <w, v>`.
    pub antiunitary: bool,
    /// `T^2 = sign * 1`, when `T^2` is a sign.
    pub square: Option<i8>,
}

/// Combines `GNS_c` of an isomorphism `conj(phi) -> phi` with the
/// coordinate conjugation identifying `GNS(conj(phi))` with `GNS(phi)`.
pub fn time_reversal<S: Scalar>(iso: &PhysMorphism<S>, tol: &ToleranceConfig) -> Result<TimeReversal<S>> {
    let g_bar = iso.dom_gns();
    let g = iso.cod_gns();
    let conj_alg = alloc::sync::Arc::new(conjugate_algebra(g.algebra()));
    if !same_algebra(g_bar.algebra(), &conj_alg) {
        return Err(Error::AlgebraMismatch);
    }
    let t = cmp_tol::<S>(tol);
    let f = iso.hom().matrix();
    if !f.is_square() || linalg::inverse(f, tol.rank_tol).is_err() {
        return Err(Error::NotInvertible);
    }
    // the identification needs both spaces presented on the same pivots
    if g_bar.pivots() != g.pivots() || !g_bar.gram().approx_eq(&g.gram().conj(), t) {
        return Err(Error::NotSameState);
    }
    let m = gns_c(iso, tol)?;
    if !m.is_square() || linalg::inverse(&m, tol.rank_tol).is_err() {
        return Err(Error::NotInvertible);
    }
    let operator = Semilinear {
        matrix: m,
        conjugating: true,
    };
    let antiunitary = operator.preserves_form(g.gram(), t);
    let sq = operator.compose(&operator).matrix;
    let id = Matrix::identity(g.dim());
    let square = if sq.approx_eq(&id, t) {
        Some(1)
    } else if sq.approx_eq(&id.scale(&S::from_i64(-1)), t) {
        Some(-1)
    } else {
        None
    };
    Ok(TimeReversal {
        operator,
        antiunitary,
        square,
    })
}
