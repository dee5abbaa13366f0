//! The amplitude contract shared by the exact and floating-point backends.

use std::fmt;

use num_complex::Complex64;

use crate::scalar::{ExactScalar, GaussianInt};
use crate::separability::{rank_exact, rank_float};

/// Absolute tolerance used by the floating-point backend for norms and
/// amplitude comparisons.
pub const FLOAT_TOL: f64 = 1e-12;

/// Singular-value style threshold used when deciding floating-point rank.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// Field-like operations needed by the state-vector engine.
///
/// Methods take references so the exact backend never clones big integers
/// it does not need.
pub trait Amplitude: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_exact(x: &ExactScalar) -> Self;

    /// `num / den` in this backend, `None` if the quotient is not
    /// representable (or `den` is zero).
    fn from_ratio(num: &ExactScalar, den: &ExactScalar) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    /// The exact ring element this amplitude stands for, if any.
    fn to_exact(&self) -> Option<ExactScalar>;

    /// Equality as the backend understands it: structural for exact values,
    /// within [`FLOAT_TOL`] for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Whether a squared norm counts as one.
    fn is_unit_norm(norm_sq: &Self) -> bool {
        norm_sq.close_to(&Self::one())
    }

    fn matrix_rank(m: &[Vec<Self>]) -> usize;
}

impl Amplitude for ExactScalar {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        ExactScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ExactScalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ExactScalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        ExactScalar::neg(self)
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
    fn from_ratio(num: &ExactScalar, den: &ExactScalar) -> Option<Self> {
        num.checked_div(den)
    }
    fn to_complex(&self) -> Complex64 {
        ExactScalar::to_complex(self)
    }
    fn to_exact(&self) -> Option<ExactScalar> {
        Some(self.clone())
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
    fn matrix_rank(m: &[Vec<Self>]) -> usize {
        rank_exact(m)
    }
}

impl Amplitude for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.to_complex()
    }
    fn from_ratio(num: &ExactScalar, den: &ExactScalar) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        // stay exact as long as the quotient is in the ring
        Some(match num.checked_div(den) {
            Some(q) => q.to_complex(),
            None => num.to_complex() / den.to_complex(),
        })
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_exact(&self) -> Option<ExactScalar> {
        snap_to_ring(*self)
    }
    fn close_to(&self, other: &Self) -> bool {
        (self - other).norm() <= FLOAT_TOL
    }
    fn matrix_rank(m: &[Vec<Self>]) -> usize {
        rank_float(m, RANK_TOL)
    }
}

/// Recognises floats of the form `(p + q·i) / √2^k` with small integers,
/// which covers every amplitude a short H/X/Y/Z/S circuit produces on a
/// basis state and all factors extracted from such states.
pub(crate) fn snap_to_ring(z: Complex64) -> Option<ExactScalar> {
    const MAX_K: u32 = 24;
    const MAX_COEFF: f64 = (1u64 << 24) as f64;
    if !z.re.is_finite() || !z.im.is_finite() {
        return None;
    }
    let mut scale = 1.0f64;
    for k in 0..=MAX_K {
        let w = z * scale;
        let (re, im) = (w.re.round(), w.im.round());
        if re.abs() <= MAX_COEFF
            && im.abs() <= MAX_COEFF
            && (w.re - re).abs() <= 1e-9
            && (w.im - im).abs() <= 1e-9
        {
            let candidate = ExactScalar::new(
                GaussianInt::new(re as i64, im as i64),
                GaussianInt::zero(),
                k,
            );
            if (candidate.to_complex() - z).norm() <= FLOAT_TOL {
                return Some(candidate);
            }
        }
        scale *= std::f64::consts::SQRT_2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_recognises_dyadic_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            snap_to_ring(Complex64::new(h, 0.0)),
            Some(ExactScalar::inv_sqrt2_pow(1))
        );
        assert_eq!(
            snap_to_ring(Complex64::new(0.0, -0.5)),
            Some(ExactScalar::i().neg().mul(&ExactScalar::inv_sqrt2_pow(2)))
        );
        assert_eq!(snap_to_ring(Complex64::new(0.6, 0.0)), None);
    }

    #[test]
    fn float_ratio_falls_back_to_division() {
        let q = Complex64::from_ratio(&ExactScalar::from_int(3), &ExactScalar::from_int(5)).unwrap();
        assert!((q.re - 0.6).abs() < 1e-15);
        assert!(Complex64::from_ratio(&ExactScalar::one(), &ExactScalar::zero()).is_none());
    }
}
