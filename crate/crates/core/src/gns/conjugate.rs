use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{gns, CyclicModule, State};
use crate::algebra::conjugate_algebra;
use crate::matrix::{vec_conj, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::Result;

/// `conj(phi)(conj(a)) = conj(phi(a))` on the conjugate algebra.
pub fn conjugate_state<S: Scalar>(phi: &State<S>) -> State<S> {
    let alg = Arc::new(conjugate_algebra(phi.algebra()));
    State::new_unchecked(alg, vec_conj(phi.functional()))
}

/// Comparison of `GNS(conj(phi))` with the conjugate of `GNS(phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugateReport {
    /// Both constructions pick the same quotient representatives.
    pub pivots_match: bool,
    /// The Gram matrix of `GNS(conj(phi))` is the entrywise conjugate.
    pub grams_match: bool,
    /// The conjugate space with conjugated actions and `conj(Omega)`
    /// represents `conj(phi)`.
    pub represents: bool,
}

impl ConjugateReport {
    pub fn all_pass(&self) -> bool {
        self.pivots_match && self.grams_match && self.represents
    }
}

pub fn verify_conjugate_gns<S: Scalar>(phi: &State<S>, tol: &ToleranceConfig) -> Result<ConjugateReport> {
    let t = cmp_tol::<S>(tol);
    let g = gns(phi, tol)?;
    let bar = conjugate_state(phi);
    let g_bar = gns(&bar, tol)?;
    let pivots_match = g.pivots() == g_bar.pivots();
    let grams_match = pivots_match
        && g_bar.gram_full().approx_eq(&g.gram_full().conj(), t)
        && g_bar.gram().approx_eq(&g.gram().conj(), t);
    let module = CyclicModule::new(
        bar.algebra().clone(),
        g.gram().conj(),
        g.actions().iter().map(Matrix::conj).collect::<Vec<_>>(),
        vec_conj(g.omega()),
    )?;
    let represents = module.represented_state().approx_eq(&bar, t);
    Ok(ConjugateReport {
        pivots_match,
        grams_match,
        represents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra};
    use crate::scalar::Exact;
    use crate::Complex64;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    #[test]
    fn real_state_on_function_algebra_is_self_conjugate() {
        let pts: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let c = Arc::new(function_algebra::<Exact>(&pts).unwrap());
        let mu = State::new(c, vec![Exact::from_ratio(1, 2), Exact::from_ratio(1, 3), q(0)], &tol()).unwrap();
        let bar = conjugate_state(&mu);
        assert_eq!(&bar, &mu);
        let report = verify_conjugate_gns(&mu, &tol()).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn vectorial_state_with_complex_vector() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[q(1), Exact::imag_unit()]).unwrap();
        // phi(E_pq) = conj(v_p) v_q, so phi(E12) = i and phi(E21) = -i
        assert_eq!(phi.functional(), &[q(1), Exact::imag_unit(), -Exact::imag_unit(), q(1)]);
        let bar = conjugate_state(&phi);
        assert_eq!(bar.functional(), &[q(1), -Exact::imag_unit(), Exact::imag_unit(), q(1)]);
        // conj(M2) is M2 again, and conj(phi) is vectorial at conj(v)
        assert_eq!(&bar, &State::vectorial(bar.algebra(), &[q(1), -Exact::imag_unit()]).unwrap());
        let g = gns(&phi, &tol()).unwrap();
        let g_bar = gns(&bar, &tol()).unwrap();
        assert_eq!(g_bar.gram_full(), &g.gram_full().conj());
        assert_eq!(g_bar.gram_full(), &g.gram_full().transpose());
        assert!(verify_conjugate_gns(&phi, &tol()).unwrap().all_pass());
    }

    #[test]
    fn double_conjugation_is_identity() {
        let m2 = Arc::new(matrix_algebra::<Exact>(2));
        let phi = State::vectorial(&m2, &[Exact::gaussian((1, 2), (1, 3)), q(2)]).unwrap();
        assert_eq!(conjugate_state(&conjugate_state(&phi)), phi);
    }

    #[test]
    fn float_backend_agrees() {
        let m2 = Arc::new(matrix_algebra::<Complex64>(2));
        let phi = State::vectorial(&m2, &[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7)]).unwrap();
        assert!(verify_conjugate_gns(&phi, &tol()).unwrap().all_pass());
    }
}
