//! Pure states over `2^n` amplitudes.
//!
//! Qubit `q` (0-based, `q = 0` is the leftmost symbol of a ket) lives at bit
//! position `n − 1 − q` of the amplitude index, so `|01⟩` is index 1 and the
//! "first particle" of a two-particle ket is qubit 0.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitude::Amplitude;
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("bitstring `{bits}` has length {found}, expected {expected}")]
    BitsLength {
        bits: String,
        expected: usize,
        found: usize,
    },
    #[error("bitstring `{0}` must be a nonempty string over {{0,1}}")]
    InvalidBits(String),
    #[error("terms mix ket widths {0} and {1}")]
    MixedWidths(usize, usize),
    #[error("state is not normalized: norm^2 = {norm_sq}")]
    NonNormalized { norm_sq: String },
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    BadLength(usize),
    #[error("a state needs at least one term")]
    Empty,
}

/// A unit-norm state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<A> {
    n_qubits: usize,
    amps: Vec<A>,
}

pub type ExactState = PureState<ExactScalar>;
pub type FloatState = PureState<Complex64>;

/// Parses a bitstring into its amplitude index under the qubit convention.
pub fn bits_to_index(bits: &str) -> Result<usize, StateError> {
    if bits.is_empty() || bits.len() >= usize::BITS as usize || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(StateError::InvalidBits(bits.to_string()));
    }
    Ok(bits
        .bytes()
        .fold(0usize, |acc, b| (acc << 1) | usize::from(b == b'1')))
}

/// Renders amplitude index `index` of an `n`-qubit register as a bitstring.
pub fn index_to_bits(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl<A: Amplitude> PureState<A> {
    /// Validates length and norm.
    pub fn from_amplitudes(amps: Vec<A>) -> Result<Self, StateError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        let state = PureState {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sq();
        if !A::is_unit_norm(&norm) {
            return Err(StateError::NonNormalized {
                norm_sq: render_amplitude(&norm),
            });
        }
        Ok(state)
    }

    /// For kernels that provably preserve the norm of a valid state.
    pub(crate) fn from_amplitudes_unchecked(amps: Vec<A>) -> Self {
        debug_assert!(amps.len().is_power_of_two() && amps.len() >= 2);
        PureState {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn basis(n: usize, bits: &str) -> Result<Self, StateError> {
        let index = bits_to_index(bits)?;
        if bits.len() != n {
            return Err(StateError::BitsLength {
                bits: bits.to_string(),
                expected: n,
                found: bits.len(),
            });
        }
        let mut amps = vec![A::zero(); 1 << n];
        amps[index] = A::one();
        Ok(PureState { n_qubits: n, amps })
    }

    /// Sums `coeff·|bits⟩` terms; repeated bitstrings accumulate.
    pub fn superpose<S: AsRef<str>>(terms: &[(A, S)]) -> Result<Self, StateError> {
        let first = terms.first().ok_or(StateError::Empty)?;
        let n = first.1.as_ref().len();
        bits_to_index(first.1.as_ref())?;
        let mut amps = vec![A::zero(); 1 << n];
        for (coeff, bits) in terms {
            let bits = bits.as_ref();
            let index = bits_to_index(bits)?;
            if bits.len() != n {
                return Err(StateError::MixedWidths(n, bits.len()));
            }
            amps[index] = amps[index].add(coeff);
        }
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[A] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [A] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<A> {
        self.amps
    }

    /// Amplitude of the basis state spelled by `bits`.
    pub fn amplitude(&self, bits: &str) -> Result<&A, StateError> {
        let index = bits_to_index(bits)?;
        if bits.len() != self.n_qubits {
            return Err(StateError::BitsLength {
                bits: bits.to_string(),
                expected: self.n_qubits,
                found: bits.len(),
            });
        }
        Ok(&self.amps[index])
    }

    /// `u ⊗ v`; `self` occupies the leftmost qubits.
    pub fn tensor(&self, other: &PureState<A>) -> PureState<A> {
        let amps = self
            .amps
            .iter()
            .flat_map(|x| other.amps.iter().map(move |y| x.mul(y)))
            .collect();
        PureState {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    fn check_dims(&self, other: &PureState<A>) -> Result<(), StateError> {
        if self.n_qubits != other.n_qubits {
            return Err(StateError::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PureState<A>) -> Result<A, StateError> {
        self.check_dims(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(A::zero(), |acc, (u, v)| acc.add(&u.conj().mul(v))))
    }

    pub fn norm_sq(&self) -> A {
        self.amps
            .iter()
            .fold(A::zero(), |acc, u| acc.add(&u.conj().mul(u)))
    }

    pub fn equals_exact(&self, other: &PureState<A>) -> Result<bool, StateError> {
        self.check_dims(other)?;
        Ok(self.amps == other.amps)
    }

    /// True iff `self = c·other` for some unit scalar `c`, decided by
    /// cross-multiplication against the first nonzero amplitude of `other`.
    pub fn equals_up_to_global_phase(&self, other: &PureState<A>) -> Result<bool, StateError> {
        self.check_dims(other)?;
        let Some(j) = other.amps.iter().position(|v| !v.is_zero()) else {
            return Ok(self.amps.iter().all(A::is_zero));
        };
        let (uj, vj) = (&self.amps[j], &other.amps[j]);
        if uj.is_zero() {
            return Ok(false);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .all(|(ul, vl)| uj.mul(vl).close_to(&ul.mul(vj))))
    }

    /// Largest amplitude-wise deviation, measured in double precision.
    pub fn max_deviation(&self, other: &PureState<A>) -> Result<f64, StateError> {
        self.check_dims(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(u, v)| (u.to_complex() - v.to_complex()).norm())
            .fold(0.0, f64::max))
    }

    pub fn to_float(&self) -> FloatState {
        PureState {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(A::to_complex).collect(),
        }
    }

    /// Dirac-notation text, parseable by the DSL.
    pub fn format_dirac(&self) -> String {
        let exact: Option<Vec<ExactScalar>> = self.amps.iter().map(A::to_exact).collect();
        match exact {
            Some(amps) => format_exact_terms(&amps, self.n_qubits),
            None => format_float_terms(&self.amps, self.n_qubits),
        }
    }
}

impl ExactState {
    /// Lifts an exact state into the floating-point backend.
    pub fn to_backend<B: Amplitude>(&self) -> PureState<B> {
        PureState {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(B::from_exact).collect(),
        }
    }
}

impl<A: Amplitude> fmt::Display for PureState<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_dirac())
    }
}

pub(crate) fn render_amplitude<A: Amplitude>(x: &A) -> String {
    match x.to_exact() {
        Some(e) => e.render(),
        None => render_complex(x.to_complex()),
    }
}

/// `±1/√2^k` for a common `k`, returning the signs and `k`.
fn common_prefactor(terms: &[(usize, &ExactScalar)]) -> Option<(Vec<bool>, u32)> {
    let k = terms.first()?.1.k();
    let mut signs = Vec::with_capacity(terms.len());
    for (_, x) in terms {
        let a = x.a();
        let unit = x.k() == k && x.b().is_zero() && a.im == 0.into() && (a.re == 1.into() || a.re == (-1).into());
        if !unit {
            return None;
        }
        signs.push(a.re == (-1).into());
    }
    Some((signs, k))
}

fn format_exact_terms(amps: &[ExactScalar], n: usize) -> String {
    let terms: Vec<(usize, &ExactScalar)> = amps
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    if let Some((signs, k)) = common_prefactor(&terms) {
        let mut body = String::new();
        for (idx, ((index, _), negative)) in terms.iter().zip(&signs).enumerate() {
            push_signed(&mut body, idx == 0, *negative);
            body.push_str(&format!("|{}>", index_to_bits(*index, n)));
        }
        if k == 0 {
            return body;
        }
        let den = ExactScalar::inv_sqrt2_pow(k).render();
        let den = den.trim_start_matches("1/");
        return if terms.len() == 1 {
            format!("{body}/{den}")
        } else {
            format!("({body})/{den}")
        };
    }
    let mut out = String::new();
    for (idx, (index, coeff)) in terms.iter().enumerate() {
        let negative = coeff.is_negative_monomial();
        let magnitude = if negative { coeff.neg() } else { (*coeff).clone() };
        push_signed(&mut out, idx == 0, negative);
        let ket = format!("|{}>", index_to_bits(*index, n));
        if magnitude.is_one() {
            out.push_str(&ket);
        } else if magnitude.is_monomial() || magnitude.k() > 0 {
            out.push_str(&format!("{magnitude}*{ket}"));
        } else {
            out.push_str(&format!("({magnitude})*{ket}"));
        }
    }
    out
}

fn push_signed(out: &mut String, first: bool, negative: bool) {
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

fn render_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn render_complex(z: Complex64) -> String {
    const EPS: f64 = 1e-15;
    match (z.re.abs() <= EPS, z.im.abs() <= EPS) {
        (_, true) => render_real(z.re),
        (true, false) => format!("{}*i", render_real(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            format!("({} {sign} {}*i)", render_real(z.re), render_real(z.im.abs()))
        }
    }
}

fn format_float_terms<A: Amplitude>(amps: &[A], n: usize) -> String {
    let mut out = String::new();
    for (index, z) in amps.iter().map(A::to_complex).enumerate() {
        if z.norm() <= 1e-15 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        out.push_str(&format!("{}*|{}>", render_complex(z), index_to_bits(index, n)));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
