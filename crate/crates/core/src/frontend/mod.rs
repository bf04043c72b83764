//! Python source front end: parsing into the normalized tree and per-file
//! semantic context.

pub mod ast;
pub mod context;
mod lower;

use std::fmt;
use std::path::{Path, PathBuf};

use rustpython_parser::{ast as py, Parse};

pub use self::ast::{Ast, Literal, Node, NodeId, NodeKind, Op, Role, Span};
pub use self::context::{build_context, resolve_qualified_name, FileContext, TaintClass};

/// One analyzed source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
    pub loc: usize,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, text: impl Into<String>) -> Self {
        let text = text.into();
        let loc = text.lines().count();
        Self {
            path: path.into(),
            text,
            loc,
        }
    }

    /// Reads a file, substituting U+FFFD for invalid UTF-8.
    pub fn read(path: &Path) -> Result<Self, FrontendError> {
        let bytes = std::fs::read(path).map_err(|source| FrontendError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let text = match String::from_utf8(bytes) {
            Ok(text) => text,
            Err(err) => String::from_utf8_lossy(err.as_bytes()).into_owned(),
        };
        Ok(Self::new(path, text))
    }
}

/// A file that could not be parsed. Scans record it as skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxFailure {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for SyntaxFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for SyntaxFailure {}

#[derive(Debug, thiserror::Error)]
pub enum FrontendError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Syntax(#[from] SyntaxFailure),
}

pub fn parse_source(file: &SourceFile) -> Result<Ast, SyntaxFailure> {
    parse_text(&file.text, &file.path.to_string_lossy())
}

pub fn parse_text(text: &str, path: &str) -> Result<Ast, SyntaxFailure> {
    match py::Suite::parse(text, path) {
        Ok(body) => Ok(lower::lower_module(&body, text)),
        Err(err) => {
            let offset: u32 = err.offset.into();
            let span = lower::LineIndex::new(text).locate(offset.min(text.len() as u32));
            Err(SyntaxFailure {
                line: span.line,
                col: span.col,
                message: err.error.to_string(),
            })
        }
    }
}

/// Pre-order, document-order traversal.
pub fn iter_nodes(ast: &Ast) -> impl Iterator<Item = NodeId> + '_ {
    ast.iter()
}
