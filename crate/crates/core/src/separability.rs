//! Bipartite separability of pure states via the Schmidt rank.
//!
//! A state is a product across a cut exactly when its coefficient matrix
//! (left-subsystem index by right-subsystem index) has rank one. For exact
//! states the rank is computed in the fraction field of the amplitude ring,
//! so the entangled/product verdict carries no tolerance.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitude::{Amplitude, FLOAT_TOL, RANK_TOL};
use crate::scalar::ExactScalar;
use crate::statevec::{FloatState, PureState, StateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparabilityError {
    #[error("left partition must be a nonempty proper subset of the {0} qubits")]
    ImproperPartition(usize),
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} listed twice in the partition")]
    DuplicateQubit(usize),
    #[error("state is not a product across the cut (Schmidt rank {0})")]
    NotProduct(usize),
    #[error(transparent)]
    State(#[from] StateError),
}

/// `num / den` in the fraction field of ℤ[i, 1/√2]. Equality is decided by
/// cross-multiplication, so no normal form is needed.
#[derive(Clone, Debug)]
pub struct RatioScalar {
    num: ExactScalar,
    den: ExactScalar,
}

impl RatioScalar {
    /// `None` when `den` is zero.
    pub fn new(num: ExactScalar, den: ExactScalar) -> Option<Self> {
        (!den.is_zero()).then(|| RatioScalar { num, den }.reduced())
    }

    pub fn num(&self) -> &ExactScalar {
        &self.num
    }

    pub fn den(&self) -> &ExactScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Collapses to `q / 1` when the quotient lies in the ring, which keeps
    /// coefficients small during elimination.
    fn reduced(self) -> Self {
        if self.den.is_one() {
            return self;
        }
        if self.num.is_zero() {
            return RatioScalar::from(ExactScalar::zero());
        }
        match self.num.checked_div(&self.den) {
            Some(q) => RatioScalar::from(q),
            None => self,
        }
    }

    pub fn add(&self, rhs: &RatioScalar) -> RatioScalar {
        if self.den == rhs.den {
            return RatioScalar {
                num: self.num.add(&rhs.num),
                den: self.den.clone(),
            }
            .reduced();
        }
        RatioScalar {
            num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
        .reduced()
    }

    pub fn neg(&self) -> RatioScalar {
        RatioScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &RatioScalar) -> RatioScalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RatioScalar) -> RatioScalar {
        RatioScalar {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        }
        .reduced()
    }

    /// `None` on division by zero.
    pub fn div(&self, rhs: &RatioScalar) -> Option<RatioScalar> {
        RatioScalar::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn conj(&self) -> RatioScalar {
        RatioScalar {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// The ring element this ratio equals, if it lies in the ring.
    pub fn to_exact(&self) -> Option<ExactScalar> {
        self.num.checked_div(&self.den)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.num.to_complex() / self.den.to_complex()
    }
}

impl From<ExactScalar> for RatioScalar {
    fn from(x: ExactScalar) -> Self {
        RatioScalar {
            num: x,
            den: ExactScalar::one(),
        }
    }
}

impl PartialEq for RatioScalar {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatioScalar {}

impl fmt::Display for RatioScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_exact() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

fn complement(left: &[usize], n: usize) -> Result<Vec<usize>, SeparabilityError> {
    let mut seen = vec![false; n];
    for &q in left {
        if q >= n {
            return Err(SeparabilityError::QubitOutOfRange { qubit: q, n_qubits: n });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(SeparabilityError::DuplicateQubit(q));
        }
    }
    if left.is_empty() || left.len() == n {
        return Err(SeparabilityError::ImproperPartition(n));
    }
    Ok((0..n).filter(|&q| !seen[q]).collect())
}

/// Index of the basis state's bits at `qubits`, first listed qubit most
/// significant.
fn gather(index: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | (index >> (n - 1 - q) & 1))
}

/// Coefficient matrix of `state` across `left_qubits | rest`. Entry `(x, y)`
/// is the amplitude whose left bits spell `x` and remaining bits spell `y`.
pub fn coeff_matrix<A: Amplitude>(
    state: &PureState<A>,
    left_qubits: &[usize],
) -> Result<Vec<Vec<A>>, SeparabilityError> {
    let n = state.n_qubits();
    let right = complement(left_qubits, n)?;
    let mut m = vec![vec![A::zero(); 1 << right.len()]; 1 << left_qubits.len()];
    for (j, amp) in state.amps().iter().enumerate() {
        m[gather(j, left_qubits, n)][gather(j, &right, n)] = amp.clone();
    }
    Ok(m)
}

/// Exact rank by Gaussian elimination over the fraction field. Pivot: first
/// remaining row with a nonzero entry, columns scanned left to right.
pub fn rank_exact(m: &[Vec<ExactScalar>]) -> usize {
    let mut rows: Vec<Vec<RatioScalar>> = m
        .iter()
        .map(|r| r.iter().cloned().map(RatioScalar::from).collect())
        .collect();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col]
                .div(&pivot_row[col])
                .expect("pivot is nonzero");
            for c in col..n_cols {
                if !pivot_row[c].is_zero() {
                    row[c] = row[c].sub(&factor.mul(&pivot_row[c]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Floating-point rank by elimination with complete pivoting; pivots of
/// magnitude at most `tol` count as zero.
pub fn rank_float(m: &[Vec<Complex64>], tol: f64) -> usize {
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    while rank < n_rows.min(n_cols) {
        let mut best = (0.0, rank, rank);
        for r in rank..n_rows {
            for c in rank..n_cols {
                let v = a[r][c].norm();
                if v > best.0 {
                    best = (v, r, c);
                }
            }
        }
        if best.0 <= tol {
            break;
        }
        a.swap(rank, best.1);
        for row in a.iter_mut() {
            row.swap(rank, best.2);
        }
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let factor = row[rank] / pivot_row[rank];
            for c in rank..n_cols {
                row[c] -= factor * pivot_row[c];
            }
        }
        rank += 1;
    }
    rank
}

pub fn schmidt_rank<A: Amplitude>(
    state: &PureState<A>,
    left_qubits: &[usize],
) -> Result<usize, SeparabilityError> {
    Ok(A::matrix_rank(&coeff_matrix(state, left_qubits)?))
}

pub fn is_entangled<A: Amplitude>(
    state: &PureState<A>,
    left_qubits: &[usize],
) -> Result<bool, SeparabilityError> {
    Ok(schmidt_rank(state, left_qubits)? >= 2)
}

/// Division-free rank-one test: the matrix is nonzero and every 2×2 minor
/// vanishes exactly.
pub fn is_product_rank1_exact(m: &[Vec<ExactScalar>]) -> bool {
    let nonzero = m.iter().flatten().any(|x| !x.is_zero());
    if !nonzero {
        return false;
    }
    let n_cols = m.first().map_or(0, Vec::len);
    for r1 in 0..m.len() {
        for r2 in r1 + 1..m.len() {
            for c1 in 0..n_cols {
                for c2 in c1 + 1..n_cols {
                    let minor = m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]));
                    if !minor.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn normalized_with_phase(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    let first = v
        .iter()
        .copied()
        .find(|z| z.norm() > FLOAT_TOL)
        .unwrap_or(Complex64::new(1.0, 0.0));
    // rotate so the first nonzero amplitude is real positive
    let phase = first.conj() / first.norm();
    v.into_iter().map(|z| z * phase / norm).collect()
}

/// Splits a product state into `(left, right)` factors in the floating
/// backend; the left factor covers `left_qubits` in the listed order, the
/// right factor the remaining qubits in ascending order.
pub fn factorize<A: Amplitude>(
    state: &PureState<A>,
    left_qubits: &[usize],
) -> Result<(FloatState, FloatState), SeparabilityError> {
    let m = coeff_matrix(state, left_qubits)?;
    let rank = A::matrix_rank(&m);
    if rank != 1 {
        return Err(SeparabilityError::NotProduct(rank));
    }
    let m: Vec<Vec<Complex64>> = m
        .iter()
        .map(|r| r.iter().map(A::to_complex).collect())
        .collect();
    // first column with a nonzero entry; the row is that column's largest entry
    let c = (0..m[0].len())
        .find(|&c| m.iter().any(|row| row[c].norm() > RANK_TOL))
        .expect("rank-one matrix has a nonzero column");
    let r = (0..m.len())
        .max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))
        .expect("matrix has rows");
    let column: Vec<Complex64> = m.iter().map(|row| row[c]).collect();
    let row = m[r].clone();
    let left = PureState::from_amplitudes(normalized_with_phase(column))?;
    let right = PureState::from_amplitudes(normalized_with_phase(row))?;
    Ok((left, right))
}

/// Everything known about one bipartition of a state.
#[derive(Clone, Debug)]
pub struct SchmidtReport<A> {
    pub left_qubits: Vec<usize>,
    pub right_qubits: Vec<usize>,
    pub coeff_matrix: Vec<Vec<A>>,
    pub rank: usize,
    pub entangled: bool,
    pub factors: Option<(FloatState, FloatState)>,
}

impl<A: Amplitude> SchmidtReport<A> {
    pub fn new(state: &PureState<A>, left_qubits: &[usize]) -> Result<Self, SeparabilityError> {
        let coeff_matrix = coeff_matrix(state, left_qubits)?;
        let rank = A::matrix_rank(&coeff_matrix);
        let factors = if rank == 1 {
            Some(factorize(state, left_qubits)?)
        } else {
            None
        };
        Ok(SchmidtReport {
            left_qubits: left_qubits.to_vec(),
            right_qubits: complement(left_qubits, state.n_qubits())?,
            coeff_matrix,
            rank,
            entangled: rank >= 2,
            factors,
        })
    }

    pub fn verdict(&self) -> &'static str {
        if self.entangled {
            "ENTANGLED"
        } else {
            "PRODUCT"
        }
    }
}

fn set_text(qubits: &[usize]) -> String {
    let items: Vec<String> = qubits.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl<A: Amplitude> fmt::Display for SchmidtReport<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "partition: {} | {}",
            set_text(&self.left_qubits),
            set_text(&self.right_qubits)
        )?;
        writeln!(f, "rank: {}", self.rank)?;
        writeln!(f, "verdict: {}", self.verdict())?;
        if let Some((left, right)) = &self.factors {
            writeln!(f, "left factor: {left}")?;
            writeln!(f, "right factor: {right}")?;
        }
        Ok(())
    }
}
