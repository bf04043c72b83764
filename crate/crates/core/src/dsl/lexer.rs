use std::fmt;

use super::{Pos, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Rule,
    Condition,
    Action,
    Exists,
    In,
    Ast,
    Not,
    And,
    Or,
    Report,
    Colon,
    Comma,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn keyword(word: &str) -> Option<Tok> {
        Some(match word {
            "rule" => Tok::Rule,
            "condition" => Tok::Condition,
            "action" => Tok::Action,
            "exists" => Tok::Exists,
            "in" => Tok::In,
            "AST" => Tok::Ast,
            "not" => Tok::Not,
            "and" => Tok::And,
            "or" => Tok::Or,
            "report" => Tok::Report,
            _ => return None,
        })
    }

    /// How the token is named in "expected ..." lists.
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(_) => "IDENTIFIER".into(),
            Tok::Str(_) => "STRING".into(),
            Tok::Eof => "end of input".into(),
            other => format!("\"{other}\""),
        }
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return f.write_str(name),
            Tok::Str(text) => return write!(f, "{text:?}"),
            Tok::Rule => "rule",
            Tok::Condition => "condition",
            Tok::Action => "action",
            Tok::Exists => "exists",
            Tok::In => "in",
            Tok::Ast => "AST",
            Tok::Not => "not",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::Report => "report",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Eof => "<eof>",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_ascii_alphabetic()
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c == '_' || c.is_ascii_alphanumeric()
}

/// Splits rule text into tokens. Columns are 1-based character offsets.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    let lex_error = |pos: Pos, expected: &[&str], found: String| SyntaxError {
        line: pos.line,
        col: pos.col,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    };

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                    col += 1;
                }
            }
            ':' | ',' | '(' | ')' => {
                chars.next();
                col += 1;
                let tok = match c {
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Token { tok, pos });
            }
            '"' => {
                chars.next();
                col += 1;
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 1;
                            match chars.next() {
                                Some(e @ ('"' | '\\')) => {
                                    col += 1;
                                    value.push(e);
                                }
                                other => {
                                    let found = other.map_or("end of input".to_string(), |c| format!("{c:?}"));
                                    return Err(lex_error(Pos { line, col }, &["\"\\\"\"", "\"\\\\\""], found));
                                }
                            }
                        }
                        Some('\n') | None => {
                            return Err(lex_error(Pos { line, col }, &["closing '\"'"], "end of line".into()));
                        }
                        Some(other) => {
                            col += 1;
                            value.push(other);
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Str(value),
                    pos,
                });
            }
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(&c) = chars.peek().filter(|c| is_ident_char(**c)) {
                    word.push(c);
                    chars.next();
                    col += 1;
                }
                let tok = Tok::keyword(&word).unwrap_or(Tok::Ident(word));
                out.push(Token { tok, pos });
            }
            other => {
                return Err(lex_error(pos, &["IDENTIFIER", "STRING", "\":\"", "\"(\"", "\")\""], format!("{other:?}")));
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
