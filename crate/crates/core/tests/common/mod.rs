#![allow(dead_code)]

use braketsim::{apply_1q, apply_controlled, ExactScalar, ExactState, Gate1Q, GaussianInt};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(a + b√2)/√2^k` with every Gaussian component in `[-max_coeff, max_coeff]`.
pub fn random_scalar(rng: &mut impl Rng, max_coeff: i64, max_k: u32) -> ExactScalar {
    let mut c = || rng.gen_range(-max_coeff..=max_coeff);
    let a = GaussianInt::new(c(), c());
    let b = GaussianInt::new(c(), c());
    ExactScalar::new(a, b, rng.gen_range(0..=max_k))
}

/// H, X, Y, Z, S.
pub fn nontrivial_gates() -> Vec<Gate1Q> {
    vec![
        Gate1Q::hadamard(),
        Gate1Q::pauli_x(),
        Gate1Q::pauli_y(),
        Gate1Q::pauli_z(),
        Gate1Q::phase_s(),
    ]
}

pub fn random_gate(rng: &mut impl Rng) -> Gate1Q {
    nontrivial_gates().choose(rng).unwrap().clone()
}

/// Applies one random single-qubit gate, or with two or more qubits sometimes
/// a random controlled gate.
pub fn random_step(rng: &mut impl Rng, state: &ExactState) -> ExactState {
    let n = state.n_qubits();
    let gate = random_gate(rng);
    if n >= 2 && rng.gen_bool(0.3) {
        let control = rng.gen_range(0..n);
        let mut target = rng.gen_range(0..n - 1);
        if target >= control {
            target += 1;
        }
        apply_controlled(state, &gate, control, target).unwrap()
    } else {
        apply_1q(state, &gate, rng.gen_range(0..n)).unwrap()
    }
}

/// A random exact state: a random basis state pushed through a random
/// circuit of `depth` gates.
pub fn random_state(rng: &mut impl Rng, n: usize, depth: usize) -> ExactState {
    let bits: String = (0..n).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect();
    let mut s = ExactState::basis(n, &bits).unwrap();
    for _ in 0..depth {
        s = random_step(rng, &s);
    }
    s
}

/// A random exact state of 1..=4 qubits with a varied circuit depth.
pub fn random_small_state(rng: &mut impl Rng, max_n: usize) -> ExactState {
    let n = rng.gen_range(1..=max_n);
    let depth = rng.gen_range(0..=4 * n);
    random_state(rng, n, depth)
}

/// Random proper subset of `0..n` (n >= 2), in random order.
pub fn random_partition(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut qubits: Vec<usize> = (0..n).collect();
    qubits.shuffle(rng);
    let size = rng.gen_range(1..n);
    qubits.truncate(size);
    qubits
}

pub fn complement(left: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !left.contains(q)).collect()
}

/// Largest deviation between `a` and `b` after rotating `a` onto `b`'s
/// global phase.
pub fn phase_aligned_deviation(a: &braketsim::FloatState, b: &braketsim::FloatState) -> f64 {
    let overlap = a.inner(b).unwrap();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { overlap };
    a.amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

/// Independent rank oracle: number of singular values above `tol`.
pub fn svd_rank(m: &[Vec<num_complex::Complex64>], tol: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let dm = nalgebra::DMatrix::from_fn(rows, cols, |r, c| m[r][c]);
    dm.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs every `tests/golden/*.bkt` through `braketsim run` (exact backend)
/// and compares stdout, stderr and exit code with the stored files.
/// Returns `(script name, mismatch description)` per script.
pub fn check_golden_scripts() -> Vec<(String, Result<(), String>)> {
    let mut scripts: Vec<_> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "bkt"))
        .collect();
    scripts.sort();
    scripts
        .into_iter()
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let read = |ext: &str| std::fs::read_to_string(path.with_extension(ext)).unwrap_or_default();
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = braketsim::cli::cmd_run(&path, braketsim::Backend::Exact, false, &mut out, &mut err);
            let out = String::from_utf8(out).unwrap();
            let err = String::from_utf8(err)
                .unwrap()
                .replace(&format!("{}:", path.display()), "<script>:");
            let want_code: i32 = read("code").trim().parse().unwrap();
            let result = if code != want_code {
                Err(format!("exit code {code}, expected {want_code}"))
            } else if out != read("out") {
                Err(format!("stdout differs:\n{out}"))
            } else if err != read("err") {
                Err(format!("stderr differs:\n{err}"))
            } else {
                Ok(())
            };
            (name, result)
        })
        .collect()
}
