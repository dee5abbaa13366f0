//! A line-oriented Dirac-notation language for writing and checking state
//! derivations.
//!
//! ```text
//! # comments run to end of line
//! state (|00> + |11>) / sqrt2
//! apply H 0
//! assert_state (|00> + |01> + |10> - |11>) / 2
//! assert_entangled 0
//! ```
//!
//! Expressions use `+ - * /`, unary minus, parentheses, integers, `sqrt2`
//! and `i`. Statements: `state`, `apply GATE q` / `apply GATE c t`,
//! `assert_state`, `assert_entangled q`, `assert_product q`, `print`.

pub mod eval;
pub mod lexer;
pub mod parser;
pub mod run;

use thiserror::Error;

use crate::amplitude::Amplitude;

pub use eval::{eval_expr, EvalError};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, Expr, ParseError, Script, Spanned, Statement};
pub use run::{run, RunError, RunErrorKind, RunReport, Step, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("lex error: {0}")]
    Lex(#[from] LexError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("error: {0}")]
    Run(#[from] RunError),
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Lex(e) => (e.line, e.column),
            DslError::Parse(e) => (e.line, e.column),
            DslError::Run(e) => (e.line, e.column),
        }
    }
}

/// Tokenizes and parses script text.
pub fn parse_script(text: &str) -> Result<Script, DslError> {
    let tokens = tokenize(text)?;
    Ok(parse(&tokens, text)?)
}

/// Parses and runs script text in backend `A`.
pub fn run_source<A: Amplitude>(text: &str) -> Result<RunReport<A>, DslError> {
    Ok(run(&parse_script(text)?)?)
}

/// Parses a single ket expression, e.g. the output of `format_dirac`.
pub fn parse_expr(text: &str) -> Result<Expr, DslError> {
    let src = format!("state {text}");
    let script = parse_script(&src)?;
    match script.statements.as_slice() {
        [Spanned { stmt: Statement::State(e), .. }] => Ok(e.clone()),
        // a newline inside `text` yields more statements
        _ => Err(DslError::Parse(ParseError {
            line: 1,
            column: 1,
            what: "single expression",
            expected: vec!["expression"],
            found: "several statements".to_string(),
        })),
    }
}

/// Parses and evaluates a ket expression.
pub fn eval_text<A: Amplitude>(text: &str) -> Result<crate::statevec::PureState<A>, DslError> {
    let e = parse_expr(text)?;
    eval_expr(&e).map_err(|kind| {
        DslError::Run(RunError {
            line: 1,
            column: 1,
            kind: kind.into(),
        })
    })
}
