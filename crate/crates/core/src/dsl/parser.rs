use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::lexer::{Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ket(String),
    IntLit(BigInt),
    Sqrt2,
    /// The imaginary unit, written `i`.
    Imag,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    State(Expr),
    Apply { gate: String, target: usize },
    ApplyControlled { gate: String, control: usize, target: usize },
    AssertState(Expr),
    AssertEntangled(usize),
    AssertProduct(usize),
    Print,
}

impl Statement {
    pub fn keyword(&self) -> &'static str {
        match self {
            Statement::State(_) => "state",
            Statement::Apply { .. } | Statement::ApplyControlled { .. } => "apply",
            Statement::AssertState(_) => "assert_state",
            Statement::AssertEntangled(_) => "assert_entangled",
            Statement::AssertProduct(_) => "assert_product",
            Statement::Print => "print",
        }
    }

    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Statement::AssertState(_) | Statement::AssertEntangled(_) | Statement::AssertProduct(_)
        )
    }
}

/// A statement with the position of its keyword and its source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub stmt: Statement,
    pub line: usize,
    pub column: usize,
    /// The statement as written, comment and surrounding whitespace removed.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Spanned>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// What the parser was looking for, e.g. "expression".
    pub what: &'static str,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: expected {} ({}), found {}",
            self.line,
            self.column,
            self.what,
            self.expected.join(", "),
            self.found
        )
    }
}

const EXPR_START: &[&str] = &["`-`", "ket", "integer", "`sqrt2`", "`i`", "`(`"];
const STATEMENT_START: &[&str] = &[
    "`state`",
    "`apply`",
    "`assert_state`",
    "`assert_entangled`",
    "`assert_product`",
    "`print`",
];

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &'a Token {
        // the stream always ends with Eof; never step past it
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> &'a Token {
        let t = self.peek();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, what: &'static str, expected: &[&'static str]) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            column: t.column,
            what,
            expected: expected.to_vec(),
            found: t.kind.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                TokenKind::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.primary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let expr = match &self.peek().kind {
            TokenKind::Ket(bits) => Expr::Ket(bits.clone()),
            TokenKind::Int(n) => Expr::IntLit(n.clone()),
            TokenKind::Sqrt2 => Expr::Sqrt2,
            TokenKind::Ident(name) if name == "i" => Expr::Imag,
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().kind != TokenKind::RParen {
                    return Err(self.error("`)`", &["`)`", "`+`", "`-`", "`*`", "`/`"]));
                }
                self.bump();
                return Ok(inner);
            }
            _ => return Err(self.error("expression", EXPR_START)),
        };
        self.bump();
        Ok(expr)
    }

    fn qubit(&mut self) -> Result<usize, ParseError> {
        match &self.peek().kind {
            TokenKind::Int(n) => match n.to_usize() {
                Some(q) => {
                    self.bump();
                    Ok(q)
                }
                None => Err(self.error("qubit index", &["integer that fits a machine word"])),
            },
            _ => Err(self.error("qubit index", &["integer"])),
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let keyword = match &self.peek().kind {
            TokenKind::Ident(word) => word.as_str(),
            _ => return Err(self.error("statement", STATEMENT_START)),
        };
        let stmt = match keyword {
            "state" => {
                self.bump();
                Statement::State(self.expr()?)
            }
            "assert_state" => {
                self.bump();
                Statement::AssertState(self.expr()?)
            }
            "assert_entangled" => {
                self.bump();
                Statement::AssertEntangled(self.qubit()?)
            }
            "assert_product" => {
                self.bump();
                Statement::AssertProduct(self.qubit()?)
            }
            "print" => {
                self.bump();
                Statement::Print
            }
            "apply" => {
                self.bump();
                let gate = match &self.peek().kind {
                    TokenKind::Ident(name) => name.to_ascii_uppercase(),
                    _ => return Err(self.error("gate name", &["`H`", "`X`", "`Y`", "`Z`", "`S`", "`I`", "`CNOT`"])),
                };
                self.bump();
                let first = self.qubit()?;
                if matches!(self.peek().kind, TokenKind::Int(_)) {
                    let target = self.qubit()?;
                    Statement::ApplyControlled {
                        gate,
                        control: first,
                        target,
                    }
                } else if gate == "CNOT" {
                    return Err(self.error("target qubit index", &["integer"]));
                } else {
                    Statement::Apply { gate, target: first }
                }
            }
            _ => return Err(self.error("statement", STATEMENT_START)),
        };
        match self.peek().kind {
            TokenKind::Newline | TokenKind::Eof => Ok(stmt),
            _ => Err(self.error("end of line", &["end of line"])),
        }
    }
}

fn source_line(text: &str, line: usize) -> String {
    let raw = text.lines().nth(line - 1).unwrap_or("");
    let code = raw.split('#').next().unwrap_or("");
    code.trim().to_string()
}

/// Parses a token stream (ending in `Eof`) into a script. `text` is the
/// source the tokens came from; it is only used to record statement text.
pub fn parse(tokens: &[Token], text: &str) -> Result<Script, ParseError> {
    assert!(
        matches!(tokens.last(), Some(Token { kind: TokenKind::Eof, .. })),
        "token stream must end with Eof"
    );
    let mut p = Parser { tokens, pos: 0 };
    let mut statements = Vec::new();
    loop {
        match p.peek().kind {
            TokenKind::Eof => break,
            TokenKind::Newline => {
                p.bump();
            }
            _ => {
                let start = p.peek();
                let stmt = p.statement()?;
                statements.push(Spanned {
                    stmt,
                    line: start.line,
                    column: start.column,
                    source: source_line(text, start.line),
                });
            }
        }
    }
    Ok(Script { statements })
}
