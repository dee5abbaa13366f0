//! Exact arithmetic in the ring ℤ[i, 1/√2].
//!
//! Every amplitude produced by the gates in this crate (H, X, Y, Z, S and
//! their controlled versions) is an element of this ring, so state equalities
//! can be decided structurally with no tolerance at all.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Both components even, i.e. the value is divisible by 2 in ℤ[i].
    pub fn is_even(&self) -> bool {
        self.re.is_even() && self.im.is_even()
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        GaussianInt {
            re: &self.re * factor,
            im: &self.im * factor,
        }
    }

    fn halve(&self) -> Self {
        debug_assert!(self.is_even());
        GaussianInt {
            re: &self.re >> 1u32,
            im: &self.im >> 1u32,
        }
    }

    fn double(&self) -> Self {
        GaussianInt {
            re: &self.re << 1u32,
            im: &self.im << 1u32,
        }
    }

    fn shl(&self, bits: u32) -> Self {
        GaussianInt {
            re: &self.re << bits,
            im: &self.im << bits,
        }
    }

    /// Exact division by a nonzero integer, if both components divide.
    fn div_exact(&self, divisor: &BigInt) -> Option<Self> {
        let (qr, rr) = self.re.div_rem(divisor);
        let (qi, ri) = self.im.div_rem(divisor);
        (rr.is_zero() && ri.is_zero()).then_some(GaussianInt { re: qr, im: qi })
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// An element `(a + b·√2) / (√2)^k` of ℤ[i, 1/√2] with Gaussian-integer
/// `a`, `b`.
///
/// Values are always kept canonical: `k = 0` or `a` has an odd component.
/// Canonical representations are unique, so the derived `PartialEq` is value
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: GaussianInt,
    b: GaussianInt,
    k: u32,
}

impl ExactScalar {
    /// Builds `(a + b√2)/√2^k` and reduces it to canonical form.
    pub fn new(a: GaussianInt, b: GaussianInt, k: u32) -> Self {
        let mut x = ExactScalar { a, b, k };
        x.canonicalize();
        x
    }

    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    pub fn i() -> Self {
        ExactScalar::new(GaussianInt::i(), GaussianInt::zero(), 0)
    }

    pub fn sqrt2() -> Self {
        ExactScalar::new(GaussianInt::zero(), GaussianInt::one(), 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ExactScalar::new(GaussianInt::new(n, 0), GaussianInt::zero(), 0)
    }

    pub fn from_gaussian(g: GaussianInt) -> Self {
        ExactScalar::new(g, GaussianInt::zero(), 0)
    }

    /// `(1/√2)^m`.
    pub fn inv_sqrt2_pow(m: u32) -> Self {
        ExactScalar::new(GaussianInt::one(), GaussianInt::zero(), m)
    }

    pub fn a(&self) -> &GaussianInt {
        &self.a
    }

    pub fn b(&self) -> &GaussianInt {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn canonicalize(&mut self) {
        // (a + b√2)/√2 = b + (a/2)√2
        while self.k > 0 && self.a.is_even() {
            let half = self.a.halve();
            self.a = std::mem::replace(&mut self.b, half);
            self.k -= 1;
        }
    }

    /// Numerator of the same value expressed over `(√2)^target`, `target >= k`.
    fn raised_to(&self, target: u32) -> (GaussianInt, GaussianInt) {
        debug_assert!(target >= self.k);
        let d = target - self.k;
        // Two steps of (a, b) -> (2b, a) multiply both parts by 2.
        let (mut a, mut b) = (self.a.shl(d / 2), self.b.shl(d / 2));
        if d % 2 == 1 {
            let new_a = b.double();
            b = a;
            a = new_a;
        }
        (a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.b.is_zero() && self.a.re.is_one() && self.a.im.is_zero()
    }

    /// True when both Gaussian components have zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }

    pub fn add(&self, rhs: &ExactScalar) -> ExactScalar {
        let k = self.k.max(rhs.k);
        let (a1, b1) = self.raised_to(k);
        let (a2, b2) = rhs.raised_to(k);
        ExactScalar::new(&a1 + &a2, &b1 + &b2, k)
    }

    pub fn sub(&self, rhs: &ExactScalar) -> ExactScalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        // negation keeps the parity pattern, so the result is already canonical
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
            k: self.k,
        }
    }

    pub fn mul(&self, rhs: &ExactScalar) -> ExactScalar {
        // (a1 + b1√2)(a2 + b2√2) = (a1a2 + 2b1b2) + (a1b2 + a2b1)√2
        let a = &(&self.a * &rhs.a) + &(&self.b * &rhs.b).double();
        let b = &(&self.a * &rhs.b) + &(&rhs.a * &self.b);
        ExactScalar::new(a, b, self.k + rhs.k)
    }

    pub fn conj(&self) -> ExactScalar {
        ExactScalar {
            a: self.a.conj(),
            b: self.b.conj(),
            k: self.k,
        }
    }

    /// Image under the ring automorphism √2 ↦ −√2.
    fn galois_conj(&self) -> ExactScalar {
        let x = ExactScalar {
            a: self.a.clone(),
            b: -&self.b,
            k: self.k,
        };
        if self.k % 2 == 1 {
            x.neg()
        } else {
            x
        }
    }

    /// `|x|²`, a real ring element.
    pub fn norm_sq(&self) -> ExactScalar {
        self.mul(&self.conj())
    }

    /// Exact quotient `self / rhs` when it lies in the ring, `None` when it
    /// does not or `rhs` is zero.
    pub fn checked_div(&self, rhs: &ExactScalar) -> Option<ExactScalar> {
        if rhs.is_zero() {
            return None;
        }
        // r = rhs·conj(rhs) = (p + q√2)/√2^k is real; r·σ(r) = (p² − 2q²)(−1)^k / 2^k.
        let r = rhs.norm_sq();
        let p = &r.a.re;
        let q = &r.b.re;
        let mut n: BigInt = p * p - (q * q) * 2;
        if r.k % 2 == 1 {
            n = -n;
        }
        // self / rhs = self·conj(rhs)·σ(r)·2^k / n
        let t = self.mul(&rhs.conj()).mul(&r.galois_conj());
        let t = ExactScalar {
            a: t.a.shl(r.k),
            b: t.b.shl(r.k),
            k: t.k,
        };
        let twos = n.trailing_zeros().unwrap_or(0);
        let odd: BigInt = &n >> twos;
        let a = t.a.div_exact(&odd)?;
        let b = t.b.div_exact(&odd)?;
        let twos = u32::try_from(twos).ok()?;
        Some(ExactScalar::new(a, b, t.k + 2 * twos))
    }

    pub fn to_complex(&self) -> Complex64 {
        let sqrt2 = std::f64::consts::SQRT_2;
        let num = self.a.to_complex() + self.b.to_complex() * sqrt2;
        // split the power so large k does not overflow the intermediate
        num / 2f64.powi((self.k / 2) as i32) / sqrt2.powi((self.k % 2) as i32)
    }

    /// Numerator monomials `(coefficient, unit)` in rendering order.
    fn monomials(&self) -> Vec<(&BigInt, &'static str)> {
        [
            (&self.a.re, ""),
            (&self.a.im, "i"),
            (&self.b.re, "sqrt2"),
            (&self.b.im, "i*sqrt2"),
        ]
        .into_iter()
        .filter(|(c, _)| !c.is_zero())
        .collect()
    }

    fn denominator_text(&self) -> Option<String> {
        if self.k == 0 {
            return None;
        }
        let pow2 = BigInt::one() << (self.k / 2);
        Some(match (self.k / 2, self.k % 2) {
            (0, _) => "sqrt2".to_string(),
            (_, 0) => pow2.to_string(),
            _ => format!("({pow2}*sqrt2)"),
        })
    }

    /// Whether the rendering is one signed monomial over an optional
    /// denominator, so a leading minus can be lifted out.
    pub(crate) fn is_monomial(&self) -> bool {
        self.monomials().len() <= 1
    }

    pub(crate) fn is_negative_monomial(&self) -> bool {
        let m = self.monomials();
        m.len() == 1 && m[0].0.is_negative()
    }

    /// Renders the value as text that the DSL expression grammar accepts
    /// (`i` denotes the imaginary unit, `sqrt2` the square root of two).
    pub(crate) fn render(&self) -> String {
        let terms = self.monomials();
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut num = String::new();
        for (idx, (coeff, unit)) in terms.iter().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    num.push('-');
                }
            } else {
                num.push_str(if negative { " - " } else { " + " });
            }
            let mag = coeff.abs();
            if unit.is_empty() {
                num.push_str(&mag.to_string());
            } else if mag.is_one() {
                num.push_str(unit);
            } else {
                num.push_str(&format!("{mag}*{unit}"));
            }
        }
        match self.denominator_text() {
            None => num,
            Some(den) if terms.len() == 1 => format!("{num}/{den}"),
            Some(den) => format!("({num})/{den}"),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::add(self, rhs)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::sub(self, rhs)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::mul(self, rhs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(a: (i64, i64), b: (i64, i64), k: u32) -> ExactScalar {
        ExactScalar::new(GaussianInt::new(a.0, a.1), GaussianInt::new(b.0, b.1), k)
    }

    fn fields(x: &ExactScalar) -> ((i64, i64), (i64, i64), u32) {
        let g = |g: &GaussianInt| (g.re.to_i64().unwrap(), g.im.to_i64().unwrap());
        (g(&x.a), g(&x.b), x.k)
    }

    #[test]
    fn from_int_fields() {
        assert_eq!(fields(&ExactScalar::from_int(0)), ((0, 0), (0, 0), 0));
        assert_eq!(fields(&ExactScalar::from_int(1)), ((1, 0), (0, 0), 0));
        assert_eq!(fields(&ExactScalar::from_int(-1)), ((-1, 0), (0, 0), 0));
    }

    #[test]
    fn inv_sqrt2_powers() {
        assert!(ExactScalar::inv_sqrt2_pow(0).is_one());
        assert_eq!(fields(&ExactScalar::inv_sqrt2_pow(1)), ((1, 0), (0, 0), 1));
        let s = ExactScalar::inv_sqrt2_pow(1);
        let sq = s.mul(&s);
        assert_eq!(sq, ExactScalar::inv_sqrt2_pow(2));
        assert_eq!(fields(&sq), ((1, 0), (0, 0), 2));
        assert!((sq.to_complex().re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_is_unique() {
        let z = raw((0, 0), (0, 0), 7);
        assert_eq!(fields(&z), ((0, 0), (0, 0), 0));
        assert_eq!(z, ExactScalar::zero());
    }

    #[test]
    fn reduction_swaps_parts() {
        // 2/√2 = √2
        assert_eq!(raw((2, 0), (0, 0), 1), ExactScalar::sqrt2());
        // (2 + 2√2)/√2^2 = (2 + √2)/√2 = 1 + √2
        assert_eq!(fields(&raw((2, 0), (2, 0), 2)), ((1, 0), (1, 0), 0));
    }

    #[test]
    fn half_plus_half_sqrt2() {
        let h = ExactScalar::inv_sqrt2_pow(1);
        let sum = h.add(&h);
        assert_eq!(fields(&sum), ((0, 0), (1, 0), 0));
        assert_eq!(sum, ExactScalar::sqrt2());
        assert!((sum.to_complex().re - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn additive_identity_and_inverse() {
        let x = raw((3, -1), (2, 5), 3);
        assert_eq!(x.add(&ExactScalar::zero()), x);
        assert!(x.add(&x.neg()).is_zero());
        assert_eq!(x.add(&x.neg()), ExactScalar::zero());
    }

    #[test]
    fn negation() {
        assert_eq!(ExactScalar::one().neg(), ExactScalar::from_int(-1));
        assert_eq!(ExactScalar::zero().neg(), ExactScalar::zero());
        assert_eq!(fields(&raw((1, 0), (1, 0), 1).neg()), ((-1, 0), (-1, 0), 1));
    }

    #[test]
    fn multiplication_basics() {
        let x = raw((3, -1), (2, 5), 3);
        assert_eq!(x.mul(&ExactScalar::one()), x);
        assert_eq!(ExactScalar::i().mul(&ExactScalar::i()), ExactScalar::from_int(-1));
        assert_eq!(ExactScalar::sqrt2().mul(&ExactScalar::sqrt2()), ExactScalar::from_int(2));
    }

    #[test]
    fn conjugation() {
        let real = raw((3, 0), (-2, 0), 5);
        assert_eq!(real.conj(), real);
        assert_eq!(ExactScalar::i().conj(), ExactScalar::i().neg());
    }

    #[test]
    fn sqrt2_over_two_equals_inv_sqrt2() {
        let half = ExactScalar::inv_sqrt2_pow(2);
        let built = ExactScalar::sqrt2().mul(&half);
        assert_eq!(built, ExactScalar::inv_sqrt2_pow(1));
        assert_ne!(ExactScalar::zero(), ExactScalar::one());
    }

    #[test]
    fn to_complex_constants() {
        let c = ExactScalar::inv_sqrt2_pow(1).to_complex();
        assert!((c.re - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-15);
        assert_eq!(ExactScalar::one().to_complex(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn checked_division() {
        let one = ExactScalar::one();
        let two = ExactScalar::from_int(2);
        assert_eq!(one.checked_div(&two), Some(ExactScalar::inv_sqrt2_pow(2)));
        assert_eq!(
            one.checked_div(&ExactScalar::sqrt2()),
            Some(ExactScalar::inv_sqrt2_pow(1))
        );
        assert_eq!(one.checked_div(&ExactScalar::from_int(3)), None);
        assert_eq!(one.checked_div(&ExactScalar::zero()), None);
        // 1/(1+i) = (1-i)/2
        let one_plus_i = raw((1, 1), (0, 0), 0);
        assert_eq!(one.checked_div(&one_plus_i), Some(raw((1, -1), (0, 0), 2)));
        // (1+√2) is a unit: 1/(1+√2) = √2 - 1
        let unit = raw((1, 0), (1, 0), 0);
        assert_eq!(one.checked_div(&unit), Some(raw((-1, 0), (1, 0), 0)));
        let x = raw((3, -1), (2, 5), 3);
        let y = raw((1, 2), (-1, 0), 2);
        assert_eq!(x.mul(&y).checked_div(&y), Some(x));
    }

    #[test]
    fn rendering() {
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(ExactScalar::one().to_string(), "1");
        assert_eq!(ExactScalar::inv_sqrt2_pow(1).to_string(), "1/sqrt2");
        assert_eq!(ExactScalar::inv_sqrt2_pow(2).to_string(), "1/2");
        assert_eq!(ExactScalar::inv_sqrt2_pow(3).to_string(), "1/(2*sqrt2)");
        assert_eq!(ExactScalar::i().neg().to_string(), "-i");
        assert_eq!(raw((1, 1), (0, 0), 2).to_string(), "(1 + i)/2");
        assert_eq!(raw((3, 0), (-1, 2), 0).to_string(), "3 - sqrt2 + 2*i*sqrt2");
    }
}
