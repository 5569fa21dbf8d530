//! Scalar backends.
//!
//! Two fields stand in for the complex numbers: exact Gaussian rationals
//! `Q(i)` and `f64` complex pairs. Every structure in the crate is generic
//! over one [`Scalar`] type, so the two can never mix inside a computation.
//! The only bridge is [`Scalar::to_c64`], which is explicit and one-way.

use core::cmp::Ordering;
use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::linalg::{exact, float};
use crate::matrix::Matrix;
use crate::tol::ToleranceConfig;
use crate::Result;

/// Exact Gaussian rational `a + b i` with `a, b` arbitrary-precision rationals.
pub type Exact = Complex<BigRational>;

/// Which arithmetic a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, PartialEq)]
pub enum PsdCertificate<S> {
    /// Nonnegative pivots (exact) or eigenvalues above `-psd_tol` (float).
    Psd,
    /// A vector with `x* g x < 0`.
    Indefinite { witness: Vec<S>, value: S },
}

impl<S> PsdCertificate<S> {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::Psd)
    }
}

/// A field with conjugation, plus the backend-specific linear algebra kernels.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// `(re_num / re_den) + (im_num / im_den) i`.
    fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::from_ratio(re.0, re.1) + Self::imag_unit() * Self::from_ratio(im.0, im.1)
    }

    fn conj(&self) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    /// `self += a * b`
    fn mul_acc(&mut self, a: &Self, b: &Self);

    /// Exact zero test (bitwise zero for floats).
    fn is_zero(&self) -> bool;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }
    /// Modulus as an `f64`, used for pivot selection and scaling.
    fn abs_f64(&self) -> f64 {
        let c = self.to_c64();
        Float::sqrt(c.re * c.re + c.im * c.im)
    }
    fn real_part(&self) -> Self;

    /// Zero up to `tol * scale` in float mode; exact zero otherwise.
    fn negligible(&self, scale: f64, tol: f64) -> bool;
    fn near(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0f64.max(self.abs_f64()).max(other.abs_f64());
        self.sub_ref(other).negligible(scale, tol)
    }
    /// Sign of the real part; imaginary parts above tolerance give `None`.
    fn real_sign(&self, tol: f64) -> Option<Ordering>;

    /// Right null space basis.
    fn kernel_basis(m: &Matrix<Self>, tol: &ToleranceConfig) -> Vec<Vec<Self>>;
    /// Leftmost maximal set of linearly independent columns.
    fn pivot_columns(m: &Matrix<Self>, tol: &ToleranceConfig) -> Vec<usize>;
    /// Positive-semidefiniteness of a Hermitian matrix.
    fn psd_certify(g: &Matrix<Self>, tol: &ToleranceConfig) -> Result<PsdCertificate<Self>>;
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: fall back to a ratio of floats
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(rat(num, den), BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if Scalar::is_zero(self) || Scalar::is_zero(rhs) {
            return <Self as Scalar>::zero();
        }
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        if Scalar::is_zero(a) || Scalar::is_zero(b) {
            return;
        }
        if a.im.is_zero() && b.im.is_zero() {
            self.re += &a.re * &b.re;
        } else {
            *self += a * b;
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn re_f64(&self) -> f64 {
        rat_to_f64(&self.re)
    }
    fn im_f64(&self) -> f64 {
        rat_to_f64(&self.im)
    }
    fn real_part(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }
    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        Scalar::is_zero(self)
    }
    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn real_sign(&self, _tol: f64) -> Option<Ordering> {
        if !self.im.is_zero() {
            return None;
        }
        Some(if self.re.is_positive() {
            Ordering::Greater
        } else if self.re.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }

    fn kernel_basis(m: &Matrix<Self>, _tol: &ToleranceConfig) -> Vec<Vec<Self>> {
        exact::kernel_basis(m)
    }
    fn pivot_columns(m: &Matrix<Self>, _tol: &ToleranceConfig) -> Vec<usize> {
        exact::rref(m).pivots
    }
    fn psd_certify(g: &Matrix<Self>, tol: &ToleranceConfig) -> Result<PsdCertificate<Self>> {
        exact::psd_ldl(g, tol)
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
    fn im_f64(&self) -> f64 {
        self.im
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn real_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs_f64() <= tol * scale
    }
    fn real_sign(&self, tol: f64) -> Option<Ordering> {
        let scale = 1.0f64.max(self.abs_f64());
        if self.im.abs() > tol * scale {
            return None;
        }
        Some(if self.re > tol * scale {
            Ordering::Greater
        } else if self.re < -tol * scale {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }

    fn kernel_basis(m: &Matrix<Self>, tol: &ToleranceConfig) -> Vec<Vec<Self>> {
        float::kernel_basis_svd(m, tol.rank_tol)
    }
    fn pivot_columns(m: &Matrix<Self>, tol: &ToleranceConfig) -> Vec<usize> {
        float::greedy_pivot_columns(m, tol.rank_tol)
    }
    fn psd_certify(g: &Matrix<Self>, tol: &ToleranceConfig) -> Result<PsdCertificate<Self>> {
        float::psd_eigen(g, tol)
    }
}

/// Builds an exact scalar from rational parts.
pub fn exact(re: BigRational, im: BigRational) -> Exact {
    Complex::new(re, im)
}

/// Tolerance to use for approximate comparisons in the given backend.
pub fn cmp_tol<S: Scalar>(tol: &ToleranceConfig) -> f64 {
    match S::BACKEND {
        Backend::Exact => 0.0,
        Backend::Float => tol.rank_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_field_ops() {
        let a = Exact::gaussian((1, 2), (1, 3));
        let b = Exact::gaussian((-2, 1), (0, 1));
        let q = a.div_ref(&b);
        assert_eq!(q.mul_ref(&b), a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Exact::imag_unit() * Exact::imag_unit(), -<Exact as Scalar>::one());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(Exact::from_ratio(-1, 3).real_sign(0.0), Some(Ordering::Less));
        assert_eq!(Exact::gaussian((1, 1), (1, 1)).real_sign(0.0), None);
        assert_eq!(<Exact as Scalar>::zero().real_sign(0.0), Some(Ordering::Equal));
    }

    #[test]
    fn float_negligible_scales() {
        let x = Complex64::new(1e-12, 0.0);
        assert!(x.negligible(1.0, 1e-10));
        assert!(!x.negligible(1.0, 1e-13));
        assert!(Complex64::new(1.0, 1e-12).near(&Complex64::new(1.0, 0.0), 1e-10));
    }
}
