//! Exact qubit state vectors with a Dirac-notation verification language.
//!
//! Amplitudes live in ℤ[i, 1/√2] ([`scalar::ExactScalar`]), which is closed
//! under H, X, Y, Z, S and their controlled forms, so identities such as
//! `H₁H₂ (|00⟩ + |11⟩)/√2 = (|00⟩ + |11⟩)/√2` are checked with no tolerance.
//! A floating-point backend ([`num_complex::Complex64`]) shares the same
//! engine through the [`amplitude::Amplitude`] trait.

pub mod amplitude;
pub mod cli;
pub mod dsl;
pub mod gates;
pub mod scalar;
pub mod separability;
pub mod statevec;

pub use amplitude::{Amplitude, Backend};
pub use gates::{apply_1q, apply_controlled, apply_matrix, lift_full, Gate1Q, GateError, LiftedMatrix};
pub use scalar::{ExactScalar, GaussianInt};
pub use separability::{
    coeff_matrix, factorize, is_entangled, is_product_rank1_exact, rank_exact, schmidt_rank, RatioScalar,
    SchmidtReport, SeparabilityError,
};
pub use statevec::{ExactState, FloatState, PureState, StateError};
