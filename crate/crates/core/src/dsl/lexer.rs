use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// `|bits>`; the payload is a nonempty string over `{0,1}`.
    Ket(String),
    Int(BigInt),
    Sqrt2,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Ident(String),
    Newline,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ket(bits) => write!(f, "`|{bits}>`"),
            TokenKind::Int(n) => write!(f, "`{n}`"),
            TokenKind::Sqrt2 => f.write_str("`sqrt2`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Ident(name) => write!(f, "`{name}`"),
            TokenKind::Newline => f.write_str("end of line"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct LexError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }
}

/// Splits script text into tokens. Newlines are significant (they end
/// statements); other whitespace and `#` comments are skipped.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        let (line, column) = (cur.line, cur.column);
        let err = |line, column, message: String| LexError { line, column, message };
        let Some(c) = cur.peek() else {
            tokens.push(Token { kind: TokenKind::Eof, line, column });
            return Ok(tokens);
        };
        let kind = match c {
            '\n' => {
                cur.bump();
                TokenKind::Newline
            }
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '#' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            '|' => {
                cur.bump();
                let bits = cur.take_while(|c| c == '0' || c == '1');
                match cur.peek() {
                    Some('>') if !bits.is_empty() => {
                        cur.bump();
                        TokenKind::Ket(bits)
                    }
                    Some('>') => {
                        return Err(err(cur.line, cur.column, "empty ket".into()));
                    }
                    None | Some('\n') => {
                        return Err(err(line, column, "unterminated ket".into()));
                    }
                    Some(other) => {
                        return Err(err(
                            cur.line,
                            cur.column,
                            format!("unexpected `{other}` inside ket, expected `0`, `1` or `>`"),
                        ));
                    }
                }
            }
            '0'..='9' => {
                let digits = cur.take_while(|c| c.is_ascii_digit());
                TokenKind::Int(digits.parse().expect("ascii digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let word = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if word == "sqrt2" {
                    TokenKind::Sqrt2
                } else {
                    TokenKind::Ident(word)
                }
            }
            _ => {
                let kind = match c {
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '/' => TokenKind::Slash,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    other => {
                        return Err(err(line, column, format!("unexpected character `{}`", other.escape_debug())));
                    }
                };
                cur.bump();
                kind
            }
        };
        tokens.push(Token { kind, line, column });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn bell_expression() {
        assert_eq!(
            kinds("(|00> + |11>)/sqrt2"),
            vec![
                LParen,
                Ket("00".into()),
                Plus,
                Ket("11".into()),
                RParen,
                Slash,
                Sqrt2,
                Eof
            ]
        );
    }

    #[test]
    fn apply_statement() {
        assert_eq!(
            kinds("apply H 0"),
            vec![Ident("apply".into()), Ident("H".into()), Int(0.into()), Eof]
        );
    }

    #[test]
    fn comments_and_newlines() {
        assert_eq!(
            kinds("print # trailing\n\n# only comment\nprint"),
            vec![
                Ident("print".into()),
                Newline,
                Newline,
                Newline,
                Ident("print".into()),
                Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("state\n  |1>").unwrap();
        assert_eq!((t[2].line, t[2].column), (2, 3));
    }

    #[test]
    fn bad_kets() {
        let e = tokenize("|0x>").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        let e = tokenize("state |01").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(e.message.contains("unterminated"));
        let e = tokenize("|>").unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
        let e = tokenize("state |0> ^ 2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
    }
}
