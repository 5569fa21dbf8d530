//! The Born rule `P_phi(a)` and the eigenvalue-eigenvector links.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{generated_subalgebra, same_algebra, Element, StarAlgebra};
use crate::gns::{gns, State};
use crate::linalg::{self, float::spectral_clusters};
use crate::markov::is_admissible_linear;
use crate::matrix::{vec_approx_eq, vec_scale, vec_sub, Matrix};
use crate::scalar::{cmp_tol, Scalar};
use crate::tol::ToleranceConfig;
use crate::{Error, Result};

/// Residual allowed when re-expressing a spectral projection inside `<a>`.
const PROJECTION_GATE: f64 = 1e-8;

/// Eigenvalues of an observable with their probability weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    pub entries: Vec<(Complex64, f64)>,
    pub total: f64,
}

impl SpectralDistribution {
    /// Rescaled to total mass one.
    pub fn normalized(&self) -> Result<Self> {
        if self.total.abs() <= f64::EPSILON {
            return Err(Error::IsotropicState);
        }
        Ok(SpectralDistribution {
            entries: self.entries.iter().map(|&(l, w)| (l, w / self.total)).collect(),
            total: 1.0,
        })
    }

    /// Weight of the cluster within `radius` of `lambda`, or zero.
    pub fn weight_at(&self, lambda: Complex64, radius: f64) -> f64 {
        self.entries
            .iter()
            .filter(|(l, _)| (l - lambda).norm() <= radius)
            .map(|&(_, w)| w)
            .sum()
    }
}

fn check_normal<S: Scalar>(a: &Element<S>, phi: &State<S>, tol: &ToleranceConfig) -> Result<()> {
    if !same_algebra(a.algebra(), phi.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if !a.is_normal(tol) {
        return Err(Error::NotNormal);
    }
    Ok(())
}

fn rep_float<S: Scalar>(alg: &StarAlgebra<S>, x: &[S]) -> Result<Matrix<Complex64>> {
    Ok(alg.rep().ok_or(Error::NoFaithfulRep)?.apply(x).to_c64())
}

/// `P_phi(a)`: the spectral projections of `rho(a)` pulled back into the
/// algebra generated by `a` and weighed by `phi`.
pub fn born_distribution<S: Scalar>(a: &Element<S>, phi: &State<S>, tol: &ToleranceConfig) -> Result<SpectralDistribution> {
    check_normal(a, phi, tol)?;
    let alg = a.algebra();
    let rho_a = rep_float(alg, a.coords())?;
    if !gns(phi, tol)?.is_positive() {
        return Err(Error::NotPositive);
    }
    let sub = generated_subalgebra(alg, core::slice::from_ref(a), tol)?;
    let incl = sub.inclusion.matrix().to_c64();
    let basis: Vec<Matrix<Complex64>> = (0..sub.dim())
        .map(|k| rep_float(alg, &sub.inclusion.matrix().column(k)))
        .collect::<Result<_>>()?;
    // normal equations for the Hilbert-Schmidt least-squares fit
    let hs = |x: &Matrix<Complex64>, y: &Matrix<Complex64>| x.adjoint().mul(y).trace();
    let gram = Matrix::from_fn(basis.len(), basis.len(), |r, c| hs(&basis[r], &basis[c]));
    let gram_inv = linalg::inverse(&gram, tol.rank_tol)?;
    let functional: Vec<Complex64> = phi.functional().iter().map(|x| x.to_c64()).collect();
    let scale = 1.0f64.max(functional.iter().map(|x| x.norm()).sum());

    let mut entries = Vec::new();
    for cl in spectral_clusters(&rho_a, tol)? {
        let rhs: Vec<Complex64> = basis.iter().map(|b| hs(b, &cl.projection)).collect();
        let coeffs = gram_inv.mul_vec(&rhs);
        let fit = basis
            .iter()
            .zip(&coeffs)
            .fold(Matrix::zeros(rho_a.rows(), rho_a.rows()), |acc, (b, c)| acc.add(&b.scale(c)));
        if fit.residual(&cl.projection) > PROJECTION_GATE {
            return Err(Error::ProjectionNotInSubalgebra);
        }
        let p = incl.mul_vec(&coeffs);
        let w: f64 = functional.iter().zip(&p).map(|(f, x)| f * x).sum::<Complex64>().re;
        if w < -tol.psd_tol * scale {
            return Err(Error::NotPositive);
        }
        entries.push((cl.eigenvalue, w.max(0.0)));
    }
    let total = entries.iter().map(|e| e.1).sum();
    Ok(SpectralDistribution { entries, total })
}

/// The three equivalent readings of "a has value lambda in phi".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EeLink {
    /// `a Omega = lambda Omega` in `GNS(phi)`.
    pub eigenvector: bool,
    /// `phi((a - lambda)*(a - lambda)) = 0`.
    pub almost_everywhere: bool,
    /// The Born weight at `lambda` is all of `phi(1)`.
    pub probability_one: bool,
}

impl EeLink {
    pub fn agree(&self) -> bool {
        self.eigenvector == self.almost_everywhere && self.almost_everywhere == self.probability_one
    }
}

pub fn ee_link_check<S: Scalar>(a: &Element<S>, phi: &State<S>, lambda: &S, tol: &ToleranceConfig) -> Result<EeLink> {
    let dist = born_distribution(a, phi, tol)?;
    let g = gns(phi, tol)?;
    let t = cmp_tol::<S>(tol);
    let alg = a.algebra();
    let shifted = vec_sub(a.coords(), &vec_scale(alg.unit(), lambda));

    let a_omega = g.action_of(a.coords()).mul_vec(g.omega());
    let eigenvector = vec_approx_eq(&a_omega, &vec_scale(g.omega(), lambda), t);

    let norm_sq = phi.eval(&alg.mul(&alg.star(&shifted), &shifted));
    let scale = 1.0f64.max(phi.normalization().abs_f64()) * (1.0 + a.coords().iter().map(|x| x.abs_f64()).sum::<f64>()).powi(2);
    let almost_everywhere = norm_sq.negligible(scale, t);

    let n = rep_float(alg, a.coords())?;
    let radius = tol.spec_tol * 1.0f64.max(linalg::frobenius(&n));
    let target = phi.normalization().re_f64();
    let w = dist.weight_at(lambda.to_c64(), radius);
    let probability_one = (w - target).abs() <= 1e-9 * 1.0f64.max(target.abs());

    Ok(EeLink {
        eigenvector,
        almost_everywhere,
        probability_one,
    })
}

/// A character of `<a>` extending `phi`, witnessing a definite value.
#[derive(Debug, Clone, PartialEq)]
pub struct DefiniteValue<S> {
    pub value: S,
    /// `phi / phi(1)` on the basis of the generated subalgebra.
    pub character: Vec<S>,
    /// Whether `Omega` is a `value`-eigenvector of `a`, checked when the
    /// inclusion of `<a>` is admissible for `phi`.
    pub eigenvector: Option<bool>,
}

/// `phi` restricted to `<a>` is a multiple of a character: the raw test
/// `phi(xy) phi(1) = phi(x) phi(y)` on every pair of basis elements.
pub fn has_definite_value<S: Scalar>(
    a: &Element<S>,
    phi: &State<S>,
    tol: &ToleranceConfig,
) -> Result<Option<DefiniteValue<S>>> {
    check_normal(a, phi, tol)?;
    let t = cmp_tol::<S>(tol);
    let norm = phi.normalization().clone();
    if norm.negligible(1.0, t) {
        return Ok(None);
    }
    let alg = a.algebra();
    let sub = generated_subalgebra(alg, core::slice::from_ref(a), tol)?;
    let cols = sub.inclusion.matrix().columns();
    let chi: Vec<S> = cols.iter().map(|x| phi.eval(x)).collect();
    for (i, x) in cols.iter().enumerate() {
        for (j, y) in cols.iter().enumerate() {
            let lhs = phi.eval(&alg.mul(x, y)).mul_ref(&norm);
            let rhs = chi[i].mul_ref(&chi[j]);
            let scale = 1.0f64.max(lhs.abs_f64()).max(rhs.abs_f64());
            if !lhs.near(&rhs, t * scale) {
                return Ok(None);
            }
        }
    }
    let value = phi.eval(a.coords()).div_ref(&norm);
    let character = chi.iter().map(|c| c.div_ref(&norm)).collect();
    let eigenvector = match is_admissible_linear(&sub.inclusion.as_linear(), phi, tol)? {
        Some(_) => None,
        None => {
            let g = gns(phi, tol)?;
            let a_omega = g.action_of(a.coords()).mul_vec(g.omega());
            Some(vec_approx_eq(&a_omega, &vec_scale(g.omega(), &value), t))
        }
    };
    Ok(Some(DefiniteValue {
        value,
        character,
        eigenvector,
    }))
}
