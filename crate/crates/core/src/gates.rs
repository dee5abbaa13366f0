//! Single-qubit gates and their application to one qubit of an n-qubit state.
//!
//! [`apply_1q`] is the working path: it walks the amplitude vector in index
//! pairs that differ only in the target bit, which is exactly applying the
//! operator term by term over the superposition. [`lift_full`] builds the
//! dense `I ⊗ … ⊗ G ⊗ … ⊗ I` matrix and serves as the reference the kernel is
//! tested against.
//!
//! Qubits are 0-based; particle `m` in one-based physics notation is qubit
//! `m − 1`.

use std::fmt;

use thiserror::Error;

use crate::amplitude::Amplitude;
use crate::scalar::ExactScalar;
use crate::statevec::PureState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("control and target are both qubit {0}")]
    ControlIsTarget(usize),
    #[error("matrix acts on {matrix} qubits but the state has {state}")]
    DimensionMismatch { matrix: usize, state: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
}

/// A 2×2 matrix over the exact ring; rows index the output basis state and
/// columns the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate1Q {
    entries: [[ExactScalar; 2]; 2],
    label: String,
}

fn s(x: i64) -> ExactScalar {
    ExactScalar::from_int(x)
}

impl Gate1Q {
    pub fn new(entries: [[ExactScalar; 2]; 2], label: impl Into<String>) -> Self {
        Gate1Q {
            entries,
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Gate1Q::new([[s(1), s(0)], [s(0), s(1)]], "I")
    }

    /// `H|0⟩ = (|0⟩ + |1⟩)/√2`, `H|1⟩ = (|0⟩ − |1⟩)/√2`.
    pub fn hadamard() -> Self {
        let h = ExactScalar::inv_sqrt2_pow(1);
        Gate1Q::new([[h.clone(), h.clone()], [h.clone(), h.neg()]], "H")
    }

    pub fn pauli_x() -> Self {
        Gate1Q::new([[s(0), s(1)], [s(1), s(0)]], "X")
    }

    pub fn pauli_y() -> Self {
        let i = ExactScalar::i();
        Gate1Q::new([[s(0), i.neg()], [i, s(0)]], "Y")
    }

    pub fn pauli_z() -> Self {
        Gate1Q::new([[s(1), s(0)], [s(0), s(-1)]], "Z")
    }

    pub fn phase_s() -> Self {
        Gate1Q::new([[s(1), s(0)], [s(0), ExactScalar::i()]], "S")
    }

    /// Looks up `H X Y Z S I` case-insensitively.
    pub fn by_name(name: &str) -> Result<Self, GateError> {
        match name.to_ascii_uppercase().as_str() {
            "I" => Ok(Gate1Q::identity()),
            "H" => Ok(Gate1Q::hadamard()),
            "X" => Ok(Gate1Q::pauli_x()),
            "Y" => Ok(Gate1Q::pauli_y()),
            "Z" => Ok(Gate1Q::pauli_z()),
            "S" => Ok(Gate1Q::phase_s()),
            _ => Err(GateError::UnknownGate(name.to_string())),
        }
    }

    /// The gates every property test sweeps over.
    pub fn named() -> [Gate1Q; 6] {
        [
            Gate1Q::identity(),
            Gate1Q::hadamard(),
            Gate1Q::pauli_x(),
            Gate1Q::pauli_y(),
            Gate1Q::pauli_z(),
            Gate1Q::phase_s(),
        ]
    }

    pub fn entries(&self) -> &[[ExactScalar; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &ExactScalar {
        &self.entries[row][col]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Gate1Q) -> Gate1Q {
        let e = |r: usize, c: usize| {
            self.entries[r][0]
                .mul(&other.entries[0][c])
                .add(&self.entries[r][1].mul(&other.entries[1][c]))
        };
        Gate1Q::new(
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
            format!("{}{}", self.label, other.label),
        )
    }

    pub fn dagger(&self) -> Gate1Q {
        let e = |r: usize, c: usize| self.entries[c][r].conj();
        Gate1Q::new(
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
            format!("{}^dagger", self.label),
        )
    }

    /// Exact check that `G†G = I`.
    pub fn is_unitary(&self) -> bool {
        self.dagger().compose(self).entries == Gate1Q::identity().entries
    }

    fn converted<A: Amplitude>(&self) -> [[A; 2]; 2] {
        let e = |r: usize, c: usize| A::from_exact(&self.entries[r][c]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }
}

impl fmt::Display for Gate1Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn check_qubit(qubit: usize, n_qubits: usize) -> Result<(), GateError> {
    if qubit >= n_qubits {
        return Err(GateError::QubitOutOfRange { qubit, n_qubits });
    }
    Ok(())
}

/// Applies `gate` to the pair `(j0, j1 = j0 + stride)` for every `j0` whose
/// target bit is clear and for which `select(j0)` holds.
fn pair_update<A: Amplitude>(
    amps: &mut [A],
    g: &[[A; 2]; 2],
    stride: usize,
    select: impl Fn(usize) -> bool,
) {
    let dim = amps.len();
    for block in (0..dim).step_by(2 * stride) {
        for j0 in block..block + stride {
            if !select(j0) {
                continue;
            }
            let j1 = j0 + stride;
            let (a0, a1) = (&amps[j0], &amps[j1]);
            let new0 = g[0][0].mul(a0).add(&g[0][1].mul(a1));
            let new1 = g[1][0].mul(a0).add(&g[1][1].mul(a1));
            amps[j0] = new0;
            amps[j1] = new1;
        }
    }
}

/// In-place version of [`apply_1q`].
pub fn apply_1q_in_place<A: Amplitude>(
    state: &mut PureState<A>,
    gate: &Gate1Q,
    target: usize,
) -> Result<(), GateError> {
    let n = state.n_qubits();
    check_qubit(target, n)?;
    let stride = 1usize << (n - 1 - target);
    pair_update(state.amps_mut(), &gate.converted(), stride, |_| true);
    Ok(())
}

/// Applies a single-qubit gate to qubit `target` by linearity over every
/// basis term of the state.
pub fn apply_1q<A: Amplitude>(
    state: &PureState<A>,
    gate: &Gate1Q,
    target: usize,
) -> Result<PureState<A>, GateError> {
    let mut out = state.clone();
    apply_1q_in_place(&mut out, gate, target)?;
    Ok(out)
}

pub fn apply_controlled_in_place<A: Amplitude>(
    state: &mut PureState<A>,
    gate: &Gate1Q,
    control: usize,
    target: usize,
) -> Result<(), GateError> {
    let n = state.n_qubits();
    check_qubit(control, n)?;
    check_qubit(target, n)?;
    if control == target {
        return Err(GateError::ControlIsTarget(control));
    }
    let stride = 1usize << (n - 1 - target);
    let control_mask = 1usize << (n - 1 - control);
    pair_update(state.amps_mut(), &gate.converted(), stride, |j0| {
        j0 & control_mask != 0
    });
    Ok(())
}

/// Applies `gate` to `target` on the subspace where `control` is 1.
/// `CNOT` is `apply_controlled(state, &Gate1Q::pauli_x(), c, t)`.
pub fn apply_controlled<A: Amplitude>(
    state: &PureState<A>,
    gate: &Gate1Q,
    control: usize,
    target: usize,
) -> Result<PureState<A>, GateError> {
    let mut out = state.clone();
    apply_controlled_in_place(&mut out, gate, control, target)?;
    Ok(out)
}

/// Dense `2^n × 2^n` matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedMatrix {
    n_qubits: usize,
    entries: Vec<ExactScalar>,
}

impl LiftedMatrix {
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let entries = (0..dim * dim)
            .map(|e| if e / dim == e % dim { ExactScalar::one() } else { ExactScalar::zero() })
            .collect();
        LiftedMatrix { n_qubits, entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> &ExactScalar {
        &self.entries[row * self.dim() + col]
    }

    /// Kronecker product `self ⊗ g`; `self` supplies the more significant bits.
    fn kron_gate(&self, g: &Gate1Q) -> LiftedMatrix {
        let dim = self.dim();
        let out_dim = dim * 2;
        let mut entries = vec![ExactScalar::zero(); out_dim * out_dim];
        for r in 0..dim {
            for c in 0..dim {
                let x = self.entry(r, c);
                if x.is_zero() {
                    continue;
                }
                for gr in 0..2 {
                    for gc in 0..2 {
                        entries[(2 * r + gr) * out_dim + 2 * c + gc] = x.mul(g.entry(gr, gc));
                    }
                }
            }
        }
        LiftedMatrix {
            n_qubits: self.n_qubits + 1,
            entries,
        }
    }

    pub fn dagger(&self) -> LiftedMatrix {
        let dim = self.dim();
        let entries = (0..dim * dim)
            .map(|e| self.entry(e % dim, e / dim).conj())
            .collect();
        LiftedMatrix {
            n_qubits: self.n_qubits,
            entries,
        }
    }

    pub fn matmul(&self, other: &LiftedMatrix) -> LiftedMatrix {
        let dim = self.dim();
        assert_eq!(dim, other.dim(), "matmul dimension mismatch");
        let mut entries = vec![ExactScalar::zero(); dim * dim];
        for r in 0..dim {
            for m in 0..dim {
                let x = self.entry(r, m);
                if x.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    let y = other.entry(m, c);
                    if !y.is_zero() {
                        entries[r * dim + c] = entries[r * dim + c].add(&x.mul(y));
                    }
                }
            }
        }
        LiftedMatrix {
            n_qubits: self.n_qubits,
            entries,
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.dagger().matmul(self) == LiftedMatrix::identity(self.n_qubits)
    }
}

/// `I ⊗ … ⊗ gate ⊗ … ⊗ I` with the gate in slot `target` (slot 0 leftmost).
pub fn lift_full(gate: &Gate1Q, n: usize, target: usize) -> Result<LiftedMatrix, GateError> {
    check_qubit(target, n)?;
    let identity = Gate1Q::identity();
    let mut m = LiftedMatrix::identity(0);
    for slot in 0..n {
        m = m.kron_gate(if slot == target { gate } else { &identity });
    }
    Ok(m)
}

/// Dense matrix-vector product.
pub fn apply_matrix<A: Amplitude>(
    state: &PureState<A>,
    m: &LiftedMatrix,
) -> Result<PureState<A>, GateError> {
    if m.n_qubits() != state.n_qubits() {
        return Err(GateError::DimensionMismatch {
            matrix: m.n_qubits(),
            state: state.n_qubits(),
        });
    }
    let dim = m.dim();
    let amps = state.amps();
    let out = (0..dim)
        .map(|r| {
            (0..dim).fold(A::zero(), |acc, c| {
                let x = m.entry(r, c);
                if x.is_zero() {
                    acc
                } else {
                    acc.add(&A::from_exact(x).mul(&amps[c]))
                }
            })
        })
        .collect();
    Ok(PureState::from_amplitudes_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::ExactState;

    fn h() -> ExactScalar {
        ExactScalar::inv_sqrt2_pow(1)
    }

    fn state(terms: &[(ExactScalar, &str)]) -> ExactState {
        ExactState::superpose(terms).unwrap()
    }

    fn bell() -> ExactState {
        state(&[(h(), "00"), (h(), "11")])
    }

    fn post_h1_bell() -> ExactState {
        let q = ExactScalar::inv_sqrt2_pow(2);
        state(&[(q.clone(), "00"), (q.clone(), "01"), (q.clone(), "10"), (q.neg(), "11")])
    }

    #[test]
    fn hadamard_columns() {
        let g = Gate1Q::hadamard();
        assert_eq!((g.entry(0, 0), g.entry(1, 0)), (&h(), &h()));
        assert_eq!((g.entry(0, 1), g.entry(1, 1)), (&h(), &h().neg()));
        let id = Gate1Q::identity();
        assert!(id.entry(0, 0).is_one() && id.entry(1, 1).is_one());
        assert!(id.entry(0, 1).is_zero() && id.entry(1, 0).is_zero());
    }

    #[test]
    fn hadamard_on_single_qubit() {
        let zero = ExactState::basis(1, "0").unwrap();
        let plus = state(&[(h(), "0"), (h(), "1")]);
        assert_eq!(apply_1q(&zero, &Gate1Q::hadamard(), 0).unwrap(), plus);
        assert_eq!(apply_1q(&plus, &Gate1Q::hadamard(), 0).unwrap(), zero);
    }

    #[test]
    fn hadamard_on_first_particle_of_bell() {
        let after = apply_1q(&bell(), &Gate1Q::hadamard(), 0).unwrap();
        assert_eq!(after, post_h1_bell());
        let back = apply_1q(&after, &Gate1Q::hadamard(), 1).unwrap();
        assert_eq!(back, bell());
    }

    #[test]
    fn qubit_range_errors() {
        let zero = ExactState::basis(2, "00").unwrap();
        assert_eq!(
            apply_1q(&zero, &Gate1Q::hadamard(), 2),
            Err(GateError::QubitOutOfRange { qubit: 2, n_qubits: 2 })
        );
        assert_eq!(
            apply_controlled(&zero, &Gate1Q::pauli_x(), 1, 1),
            Err(GateError::ControlIsTarget(1))
        );
        assert!(lift_full(&Gate1Q::hadamard(), 2, 2).is_err());
    }

    #[test]
    fn cnot_behaviour() {
        let x = Gate1Q::pauli_x();
        let ten = ExactState::basis(2, "10").unwrap();
        assert_eq!(
            apply_controlled(&ten, &x, 0, 1).unwrap(),
            ExactState::basis(2, "11").unwrap()
        );
        let plus0 = apply_1q(&ExactState::basis(2, "00").unwrap(), &Gate1Q::hadamard(), 0).unwrap();
        assert_eq!(apply_controlled(&plus0, &x, 0, 1).unwrap(), bell());
        let p = post_h1_bell();
        assert_eq!(apply_controlled(&p, &Gate1Q::identity(), 1, 0).unwrap(), p);
    }

    #[test]
    fn lifting() {
        let lifted = lift_full(&Gate1Q::hadamard(), 1, 0).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(lifted.entry(r, c), Gate1Q::hadamard().entry(r, c));
            }
        }
        // I ⊗ X = diag(X, X)
        let m = lift_full(&Gate1Q::pauli_x(), 2, 1).unwrap();
        let expected = [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(m.entry(r, c), &ExactScalar::from_int(v));
            }
        }
        for g in Gate1Q::named() {
            assert!(lift_full(&g, 3, 1).unwrap().is_unitary(), "{g}");
        }
    }

    #[test]
    fn matrix_path_matches_expansion() {
        let b = bell();
        let m = lift_full(&Gate1Q::hadamard(), 2, 0).unwrap();
        assert_eq!(apply_matrix(&b, &m).unwrap(), post_h1_bell());
        assert_eq!(apply_matrix(&b, &LiftedMatrix::identity(2)).unwrap(), b);
        assert!(apply_matrix(&b, &LiftedMatrix::identity(3)).is_err());
    }

    #[test]
    fn gate_algebra() {
        let hh = Gate1Q::hadamard().compose(&Gate1Q::hadamard());
        assert_eq!(hh.entries(), Gate1Q::identity().entries());
        assert_eq!(Gate1Q::hadamard().dagger().entries(), Gate1Q::hadamard().entries());
        for g in Gate1Q::named() {
            assert!(g.is_unitary(), "{g}");
        }
        let not_unitary = Gate1Q::new([[s(1), s(1)], [s(0), s(1)]], "N");
        assert!(!not_unitary.is_unitary());
    }

    #[test]
    fn lookup_is_case_insensitive() {
        assert_eq!(Gate1Q::by_name("h").unwrap(), Gate1Q::hadamard());
        assert_eq!(Gate1Q::by_name("s").unwrap(), Gate1Q::phase_s());
        assert!(matches!(Gate1Q::by_name("T"), Err(GateError::UnknownGate(_))));
    }
}
