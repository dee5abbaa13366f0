use thiserror::Error;

use super::parser::Expr;
use crate::amplitude::Amplitude;
use crate::scalar::ExactScalar;
use crate::separability::RatioScalar;
use crate::statevec::{bits_to_index, PureState, StateError};

/// Widest ket the evaluator will expand into a dense vector.
pub const MAX_QUBITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("kets of different widths ({0} and {1}) in one expression")]
    MixedKetWidth(usize, usize),
    #[error("expression is not normalized: norm^2 = {norm_sq}")]
    NonNormalized { norm_sq: String },
    #[error("division by an expression containing a ket")]
    DivByKet,
    #[error("division by zero")]
    DivByZero,
    #[error("product of two ket expressions")]
    KetTimesKet,
    #[error("expression contains no ket")]
    ScalarOnly,
    #[error("a scalar cannot be added to a ket")]
    ScalarPlusKet,
    #[error("amplitude {0} is not an element of Z[i, 1/sqrt2]")]
    OutsideRing(String),
    #[error("ket width {0} exceeds the limit of {MAX_QUBITS} qubits")]
    TooWide(usize),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Intermediate values: exact scalars, or ket vectors `amps / den` that need
/// not be normalized yet.
enum Value {
    Scalar(RatioScalar),
    Vector {
        width: usize,
        amps: Vec<ExactScalar>,
        den: ExactScalar,
    },
}

fn scale(amps: &[ExactScalar], by: &ExactScalar) -> Vec<ExactScalar> {
    amps.iter().map(|a| a.mul(by)).collect()
}

fn combine(lhs: Value, rhs: Value, subtract: bool) -> Result<Value, EvalError> {
    match (lhs, rhs) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(if subtract { x.sub(&y) } else { x.add(&y) })),
        (
            Value::Vector { width: w1, amps: a1, den: d1 },
            Value::Vector { width: w2, amps: a2, den: d2 },
        ) => {
            if w1 != w2 {
                return Err(EvalError::MixedKetWidth(w1, w2));
            }
            let (a1, a2, den) = if d1 == d2 {
                (a1, a2, d1)
            } else {
                (scale(&a1, &d2), scale(&a2, &d1), d1.mul(&d2))
            };
            let amps = a1
                .iter()
                .zip(&a2)
                .map(|(x, y)| if subtract { x.sub(y) } else { x.add(y) })
                .collect();
            Ok(Value::Vector { width: w1, amps, den })
        }
        _ => Err(EvalError::ScalarPlusKet),
    }
}

fn eval(e: &Expr) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Ket(bits) => {
            if bits.len() > MAX_QUBITS {
                return Err(EvalError::TooWide(bits.len()));
            }
            let index = bits_to_index(bits)?;
            let mut amps = vec![ExactScalar::zero(); 1 << bits.len()];
            amps[index] = ExactScalar::one();
            Value::Vector {
                width: bits.len(),
                amps,
                den: ExactScalar::one(),
            }
        }
        Expr::IntLit(n) => Value::Scalar(ExactScalar::from_int(n.clone()).into()),
        Expr::Sqrt2 => Value::Scalar(ExactScalar::sqrt2().into()),
        Expr::Imag => Value::Scalar(ExactScalar::i().into()),
        Expr::Neg(inner) => match eval(inner)? {
            Value::Scalar(x) => Value::Scalar(x.neg()),
            Value::Vector { width, amps, den } => Value::Vector {
                width,
                amps: amps.iter().map(ExactScalar::neg).collect(),
                den,
            },
        },
        Expr::Add(l, r) => combine(eval(l)?, eval(r)?, false)?,
        Expr::Sub(l, r) => combine(eval(l)?, eval(r)?, true)?,
        Expr::Mul(l, r) => match (eval(l)?, eval(r)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.mul(&y)),
            (Value::Scalar(x), Value::Vector { width, amps, den })
            | (Value::Vector { width, amps, den }, Value::Scalar(x)) => Value::Vector {
                width,
                amps: scale(&amps, x.num()),
                den: den.mul(x.den()),
            },
            _ => return Err(EvalError::KetTimesKet),
        },
        Expr::Div(l, r) => match (eval(l)?, eval(r)?) {
            (_, Value::Vector { .. }) => return Err(EvalError::DivByKet),
            (_, Value::Scalar(y)) if y.is_zero() => return Err(EvalError::DivByZero),
            (Value::Scalar(x), Value::Scalar(y)) => {
                Value::Scalar(x.div(&y).ok_or(EvalError::DivByZero)?)
            }
            (Value::Vector { width, amps, den }, Value::Scalar(y)) => Value::Vector {
                width,
                amps: scale(&amps, y.den()),
                den: den.mul(y.num()),
            },
        },
    })
}

/// Evaluates a ket expression to a unit-norm state in backend `A`.
pub fn eval_expr<A: Amplitude>(e: &Expr) -> Result<PureState<A>, EvalError> {
    let Value::Vector { amps, den, .. } = eval(e)? else {
        return Err(EvalError::ScalarOnly);
    };
    let norm_num = amps
        .iter()
        .fold(ExactScalar::zero(), |acc, a| acc.add(&a.norm_sq()));
    let norm_den = den.norm_sq();
    let normalized = A::from_ratio(&norm_num, &norm_den).is_some_and(|n| A::is_unit_norm(&n));
    if !normalized {
        let ratio = RatioScalar::new(norm_num, norm_den).expect("denominator is nonzero");
        return Err(EvalError::NonNormalized {
            norm_sq: ratio.to_string(),
        });
    }
    let amps = amps
        .iter()
        .map(|a| {
            A::from_ratio(a, &den).ok_or_else(|| {
                EvalError::OutsideRing(RatioScalar::new(a.clone(), den.clone()).expect("nonzero").to_string())
            })
        })
        .collect::<Result<Vec<A>, _>>()?;
    Ok(PureState::from_amplitudes(amps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::lexer::tokenize;
    use crate::dsl::parser::{parse, Statement};
    use crate::statevec::{ExactState, FloatState};

    fn expr(text: &str) -> Expr {
        let src = format!("state {text}");
        let script = parse(&tokenize(&src).unwrap(), &src).unwrap();
        match &script.statements[0].stmt {
            Statement::State(e) => e.clone(),
            _ => unreachable!(),
        }
    }

    fn exact(text: &str) -> Result<ExactState, EvalError> {
        eval_expr(&expr(text))
    }

    fn h() -> ExactScalar {
        ExactScalar::inv_sqrt2_pow(1)
    }

    #[test]
    fn bell_and_minus_states() {
        let bell = ExactState::superpose(&[(h(), "00"), (h(), "11")]).unwrap();
        assert_eq!(exact("(|00> + |11>)/sqrt2").unwrap(), bell);
        let minus = ExactState::superpose(&[(h(), "0"), (h().neg(), "1")]).unwrap();
        assert_eq!(exact("(|0> - |1>)/sqrt2").unwrap(), minus);
        assert_eq!(exact("1/sqrt2*|00> + |11>/sqrt2").unwrap(), bell);
        assert_eq!(exact("(sqrt2/2)*(|00> + |11>)").unwrap(), bell);
    }

    #[test]
    fn normalization_errors() {
        assert_eq!(
            exact("(|00> + |11>)/2"),
            Err(EvalError::NonNormalized { norm_sq: "1/2".into() })
        );
        assert_eq!(
            exact("(|0> + |1>)/3"),
            Err(EvalError::NonNormalized { norm_sq: "(2)/(9)".into() })
        );
    }

    #[test]
    fn structural_errors() {
        assert_eq!(exact("|0> + |11>"), Err(EvalError::MixedKetWidth(1, 2)));
        assert_eq!(exact("|0> / |1>"), Err(EvalError::DivByKet));
        assert_eq!(exact("|0> / (sqrt2 - sqrt2)"), Err(EvalError::DivByZero));
        assert_eq!(exact("1 / 0 * |0>"), Err(EvalError::DivByZero));
        assert_eq!(exact("sqrt2"), Err(EvalError::ScalarOnly));
        assert_eq!(exact("|0> * |1>"), Err(EvalError::KetTimesKet));
        assert_eq!(exact("|0> + 1"), Err(EvalError::ScalarPlusKet));
    }

    #[test]
    fn ring_membership() {
        assert!(matches!(exact("(3*|0> + 4*|1>)/5"), Err(EvalError::OutsideRing(_))));
        let f: FloatState = eval_expr(&expr("(3*|0> + 4*|1>)/5")).unwrap();
        assert!((f.amps()[0].re - 0.6).abs() < 1e-15);
        // 1/(1 + i) = (1 - i)/2 stays in the ring
        let s = exact("(|0> + i*|1>) / (1 + i)").unwrap();
        assert_eq!(s.format_dirac(), "(1 - i)/2*|0> + (1 + i)/2*|1>");
    }

    #[test]
    fn float_backend_agrees() {
        let f: FloatState = eval_expr(&expr("(|00> + |11>)/sqrt2")).unwrap();
        let e = exact("(|00> + |11>)/sqrt2").unwrap();
        assert!(f.max_deviation(&e.to_float()).unwrap() <= 1e-15);
    }
}
