//! The rule language: parsing, validation, pretty-printing, compilation to
//! matchers and a reference interpreter.
//!
//! ```text
//! rule R5 "Hyperparameter Not Explicitly Set":
//!     condition:
//!         exists call in AST: (
//!             isMLMethodCall(call) and not hasExplicitHyperparameters(call)
//!         )
//!     action: report "Hyperparameter not explicitly set at line {lineno}"
//! ```

mod compile;
mod interp;
mod lexer;
mod parser;
mod printer;
mod template;
mod validate;

use std::fmt;

pub use compile::{compile_rule, CompileError, Matcher};
pub use interp::interpret_rule;
pub use parser::parse_rules;
pub use printer::{pretty_print, print_condition};
pub use template::{ActionTemplate, Placeholder, Segment};
pub use validate::{validate_rules, ValidationError};

/// 1-based line and column in rule text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Argument of a predicate call: a quantified variable or a string literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    Var(String),
    Str(String),
}

/// Condition tree. Source positions are carried for diagnostics and are
/// ignored by `==`.
#[derive(Debug, Clone)]
pub enum Condition {
    Exists {
        var: String,
        body: Box<Condition>,
        pos: Pos,
    },
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Call {
        name: String,
        args: Vec<Arg>,
        pos: Pos,
    },
}

impl PartialEq for Condition {
    fn eq(&self, other: &Self) -> bool {
        use Condition::*;
        match (self, other) {
            (Exists { var: a, body: x, .. }, Exists { var: b, body: y, .. }) => a == b && x == y,
            (Not(a), Not(b)) => a == b,
            (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) => a == c && b == d,
            (Call { name: a, args: x, .. }, Call { name: b, args: y, .. }) => a == b && x == y,
            _ => false,
        }
    }
}

impl Eq for Condition {}

impl Condition {
    pub fn exists(var: impl Into<String>, body: Condition) -> Self {
        Condition::Exists {
            var: var.into(),
            body: Box::new(body),
            pos: Pos::default(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Condition) -> Self {
        Condition::Not(Box::new(inner))
    }

    pub fn and(left: Condition, right: Condition) -> Self {
        Condition::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Condition, right: Condition) -> Self {
        Condition::Or(Box::new(left), Box::new(right))
    }

    pub fn call(name: impl Into<String>, args: Vec<Arg>) -> Self {
        Condition::Call {
            name: name.into(),
            args,
            pos: Pos::default(),
        }
    }

    /// Shorthand for a predicate applied to variables.
    pub fn pred(name: &str, vars: &[&str]) -> Self {
        Self::call(name, vars.iter().map(|v| Arg::Var(v.to_string())).collect())
    }

    pub fn pos(&self) -> Option<Pos> {
        match self {
            Condition::Exists { pos, .. } | Condition::Call { pos, .. } => Some(*pos),
            Condition::Not(inner) => inner.pos(),
            Condition::And(left, _) | Condition::Or(left, _) => left.pos(),
        }
    }

    /// Names of every predicate referenced, in pre-order.
    pub fn predicate_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.visit(&mut |c| {
            if let Condition::Call { name, .. } = c {
                out.push(name.as_str());
            }
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Condition)) {
        f(self);
        match self {
            Condition::Exists { body, .. } => body.visit(f),
            Condition::Not(inner) => inner.visit(f),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Condition::Call { .. } => {}
        }
    }
}

#[derive(Debug, Clone)]
pub struct RuleSpec {
    pub id: String,
    pub name: String,
    pub condition: Condition,
    pub action: ActionTemplate,
    pub pos: Pos,
}

impl PartialEq for RuleSpec {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.name == other.name
            && self.condition == other.condition
            && self.action == other.action
    }
}

impl Eq for RuleSpec {}

impl RuleSpec {
    pub fn new(id: impl Into<String>, name: impl Into<String>, condition: Condition, action: &str) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            condition,
            action: ActionTemplate::new(action),
            pos: Pos::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("duplicate rule id `{id}` at {pos}")]
    DuplicateRuleId { id: String, pos: Pos },
}
