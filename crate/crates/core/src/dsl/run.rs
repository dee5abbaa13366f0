use std::fmt::Write as _;

use thiserror::Error;

use super::eval::{eval_expr, EvalError};
use super::parser::{Script, Spanned, Statement};
use crate::amplitude::Amplitude;
use crate::gates::{apply_1q_in_place, apply_controlled_in_place, Gate1Q, GateError};
use crate::separability::{schmidt_rank, SeparabilityError};
use crate::statevec::PureState;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { expected: String, actual: String },
}

#[derive(Clone, Debug)]
pub struct Step<A> {
    pub statement: Spanned,
    /// The current state after the statement ran.
    pub state: PureState<A>,
    pub state_text: String,
    /// `Some` for assertions only.
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug)]
pub struct RunReport<A> {
    pub steps: Vec<Step<A>>,
    pub failures: usize,
    pub final_state: PureState<A>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RunErrorKind {
    #[error("script must begin with a `state` statement")]
    NoInitialState,
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Separability(#[from] SeparabilityError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct RunError {
    pub line: usize,
    pub column: usize,
    pub kind: RunErrorKind,
}

fn gate_for(name: &str) -> Result<Gate1Q, GateError> {
    if name.eq_ignore_ascii_case("CNOT") {
        return Ok(Gate1Q::pauli_x());
    }
    Gate1Q::by_name(name)
}

fn rank_verdict<A: Amplitude>(
    state: &PureState<A>,
    qubit: usize,
    want_entangled: bool,
) -> Result<Verdict, RunErrorKind> {
    let n = state.n_qubits();
    if qubit >= n {
        return Err(GateError::QubitOutOfRange { qubit, n_qubits: n }.into());
    }
    let rank = schmidt_rank(state, &[qubit])?;
    let entangled = rank >= 2;
    if entangled == want_entangled {
        return Ok(Verdict::Pass);
    }
    let word = |e: bool| if e { "ENTANGLED" } else { "PRODUCT" };
    Ok(Verdict::Fail {
        expected: word(want_entangled).to_string(),
        actual: format!("{} (rank {rank})", word(entangled)),
    })
}

/// Executes `script`, continuing past failed assertions and stopping at the
/// first error.
pub fn run<A: Amplitude>(script: &Script) -> Result<RunReport<A>, RunError> {
    let mut current: Option<PureState<A>> = None;
    let mut steps = Vec::with_capacity(script.statements.len());
    let mut failures = 0;
    for spanned in &script.statements {
        let at = |kind: RunErrorKind| RunError {
            line: spanned.line,
            column: spanned.column,
            kind,
        };
        let mut verdict = None;
        match &spanned.stmt {
            Statement::State(e) => {
                current = Some(eval_expr(e).map_err(|e| at(e.into()))?);
            }
            stmt => {
                let state = current
                    .as_mut()
                    .ok_or_else(|| at(RunErrorKind::NoInitialState))?;
                match stmt {
                    Statement::State(_) => unreachable!(),
                    Statement::Apply { gate, target } => {
                        let g = gate_for(gate).map_err(|e| at(e.into()))?;
                        apply_1q_in_place(state, &g, *target).map_err(|e| at(e.into()))?;
                    }
                    Statement::ApplyControlled { gate, control, target } => {
                        let g = gate_for(gate).map_err(|e| at(e.into()))?;
                        apply_controlled_in_place(state, &g, *control, *target)
                            .map_err(|e| at(e.into()))?;
                    }
                    Statement::AssertState(e) => {
                        let expected: PureState<A> = eval_expr(e).map_err(|e| at(e.into()))?;
                        let same = expected.n_qubits() == state.n_qubits()
                            && expected.amps().iter().zip(state.amps()).all(|(x, y)| x.close_to(y));
                        verdict = Some(if same {
                            Verdict::Pass
                        } else {
                            Verdict::Fail {
                                expected: expected.format_dirac(),
                                actual: state.format_dirac(),
                            }
                        });
                    }
                    Statement::AssertEntangled(q) => {
                        verdict = Some(rank_verdict(state, *q, true).map_err(at)?);
                    }
                    Statement::AssertProduct(q) => {
                        verdict = Some(rank_verdict(state, *q, false).map_err(at)?);
                    }
                    Statement::Print => {}
                }
            }
        }
        if matches!(verdict, Some(Verdict::Fail { .. })) {
            failures += 1;
        }
        let state = current.clone().expect("state was set above");
        steps.push(Step {
            statement: spanned.clone(),
            state_text: state.format_dirac(),
            state,
            verdict,
        });
    }
    let final_state = current.ok_or(RunError {
        line: 1,
        column: 1,
        kind: RunErrorKind::NoInitialState,
    })?;
    Ok(RunReport {
        steps,
        failures,
        final_state,
    })
}

impl<A: Amplitude> RunReport<A> {
    /// One line per statement, then `FAILURES: <n>`. With `verbose`, the
    /// state after every `state` and `apply` statement is appended.
    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let source = &step.statement.source;
            let _ = match (&step.verdict, &step.statement.stmt) {
                (Some(Verdict::Pass), _) => writeln!(out, "PASS {source}"),
                (Some(Verdict::Fail { expected, actual }), _) => {
                    writeln!(out, "FAIL {source}: expected {expected}, got {actual}")
                }
                (None, Statement::Print) => writeln!(out, "     {source} => {}", step.state_text),
                (None, _) if verbose => writeln!(out, "     {source} => {}", step.state_text),
                (None, _) => writeln!(out, "     {source}"),
            };
        }
        let _ = writeln!(out, "FAILURES: {}", self.failures);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{lexer::tokenize, parser::parse};
    use crate::statevec::ExactState;

    fn run_text(text: &str) -> Result<RunReport<crate::scalar::ExactScalar>, RunError> {
        run(&parse(&tokenize(text).unwrap(), text).unwrap())
    }

    #[test]
    fn failing_assertion_reports_both_states() {
        let report = run_text("state (|00> + |11>)/sqrt2\napply H 0\nassert_state (|00>+|11>)/sqrt2\n").unwrap();
        assert_eq!(report.failures, 1);
        assert_eq!(
            report.steps[2].verdict,
            Some(Verdict::Fail {
                expected: "(|00> + |11>)/sqrt2".into(),
                actual: "(|00> + |01> + |10> - |11>)/2".into()
            })
        );
    }

    #[test]
    fn errors_abort_with_position() {
        let e = run_text("state |00>\napply H 5\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert_eq!(e.kind, RunErrorKind::Gate(GateError::QubitOutOfRange { qubit: 5, n_qubits: 2 }));
        let e = run_text("apply H 0\n").unwrap_err();
        assert_eq!(e.kind, RunErrorKind::NoInitialState);
        let e = run_text("state |0>\napply T 0\n").unwrap_err();
        assert_eq!(e.kind, RunErrorKind::Gate(GateError::UnknownGate("T".into())));
        let e = run_text("# nothing\n").unwrap_err();
        assert_eq!(e.kind, RunErrorKind::NoInitialState);
    }

    #[test]
    fn cnot_builds_bell() {
        let report = run_text("state |00>\napply H 0\napply cnot 0 1\nassert_entangled 0\nassert_product 1\n").unwrap();
        assert_eq!(report.failures, 1);
        let bell = ExactState::superpose(&[
            (crate::scalar::ExactScalar::inv_sqrt2_pow(1), "00"),
            (crate::scalar::ExactScalar::inv_sqrt2_pow(1), "11"),
        ])
        .unwrap();
        assert_eq!(report.final_state, bell);
        assert_eq!(
            report.steps[4].verdict,
            Some(Verdict::Fail {
                expected: "PRODUCT".into(),
                actual: "ENTANGLED (rank 2)".into()
            })
        );
    }

    #[test]
    fn rendering() {
        let report = run_text("state |0>   # start\napply H 0\nassert_state (|0> + |1>)/sqrt2\nprint\n").unwrap();
        assert_eq!(
            report.render(false),
            "     state |0>\n     apply H 0\nPASS assert_state (|0> + |1>)/sqrt2\n     print => (|0> + |1>)/sqrt2\nFAILURES: 0\n"
        );
        assert_eq!(
            report.render(true).lines().nth(1).unwrap(),
            "     apply H 0 => (|0> + |1>)/sqrt2"
        );
    }
}
