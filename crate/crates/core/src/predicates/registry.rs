use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::frontend::{Ast, FileContext, NodeId};

/// Everything a predicate may look at: one file's tree and its context.
#[derive(Clone, Copy)]
pub struct FileView<'a> {
    pub path: &'a str,
    pub ast: &'a Ast,
    pub ctx: &'a FileContext,
}

impl<'a> FileView<'a> {
    pub fn new(path: &'a str, ast: &'a Ast, ctx: &'a FileContext) -> Self {
        Self { path, ast, ctx }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredArg<'a> {
    Node(NodeId),
    Str(&'a str),
}

impl PredArg<'_> {
    pub fn node(self) -> Option<NodeId> {
        match self {
            PredArg::Node(n) => Some(n),
            PredArg::Str(_) => None,
        }
    }

    pub fn text(&self) -> Option<&str> {
        match self {
            PredArg::Str(s) => Some(s),
            PredArg::Node(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// A node bound by `exists`.
    Node,
    /// A string literal written in the rule.
    Str,
}

impl fmt::Display for ParamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamKind::Node => "node",
            ParamKind::Str => "string",
        })
    }
}

/// Name and parameter list of a predicate. The file context is passed
/// implicitly and is not counted in the arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSignature {
    pub name: String,
    pub params: Vec<ParamKind>,
    pub doc: String,
}

impl PredicateSignature {
    pub fn new(name: &str, params: &[ParamKind], doc: &str) -> Self {
        Self {
            name: name.to_string(),
            params: params.to_vec(),
            doc: doc.to_string(),
        }
    }

    /// Single node parameter, the common case.
    pub fn unary(name: &str, doc: &str) -> Self {
        Self::new(name, &[ParamKind::Node], doc)
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

pub type PredicateFn = dyn Fn(&FileView<'_>, &[PredArg<'_>]) -> bool + Send + Sync;

#[derive(Clone)]
pub struct Predicate {
    pub signature: PredicateSignature,
    pub implementation: Arc<PredicateFn>,
}

impl Predicate {
    pub fn call(&self, view: &FileView<'_>, args: &[PredArg<'_>]) -> bool {
        (self.implementation)(view, args)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate").field("signature", &self.signature).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("predicate `{0}` is already registered")]
    DuplicatePredicate(String),
    #[error("predicate `{0}` must take at least one argument")]
    ZeroArity(String),
}

/// Name -> predicate. Built once, then shared read-only.
#[derive(Debug, Clone, Default)]
pub struct PredicateRegistry {
    entries: BTreeMap<String, Predicate>,
}

impl PredicateRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, signature: PredicateSignature, implementation: F) -> Result<(), RegistryError>
    where
        F: Fn(&FileView<'_>, &[PredArg<'_>]) -> bool + Send + Sync + 'static,
    {
        if self.entries.contains_key(&signature.name) {
            return Err(RegistryError::DuplicatePredicate(signature.name));
        }
        if signature.arity() == 0 {
            return Err(RegistryError::ZeroArity(signature.name));
        }
        self.entries.insert(
            signature.name.clone(),
            Predicate {
                signature,
                implementation: Arc::new(implementation),
            },
        );
        Ok(())
    }

    /// Registers a one-node predicate.
    pub fn register_unary<F>(&mut self, name: &str, doc: &str, f: F) -> Result<(), RegistryError>
    where
        F: Fn(&FileView<'_>, NodeId) -> bool + Send + Sync + 'static,
    {
        self.register(PredicateSignature::unary(name, doc), move |view, args| {
            args.first().and_then(|a| a.node()).is_some_and(|n| f(view, n))
        })
    }

    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn signatures(&self) -> impl Iterator<Item = &PredicateSignature> {
        self.entries.values().map(|p| &p.signature)
    }
}
