//! Semantic predicates: the vocabulary rules are written in.
//!
//! Every predicate is a pure function of one file's tree and context plus
//! its arguments. Names are resolved through the catalog, so aliasing an
//! import never changes a result. Wrong node kinds yield `false`.

mod data;
mod ml;
mod numeric;
mod registry;
pub(crate) mod util;

pub use data::*;
pub use ml::*;
pub use numeric::*;
pub use registry::{
    FileView, ParamKind, PredArg, Predicate, PredicateFn, PredicateRegistry, PredicateSignature, RegistryError,
};

/// Predicates the 22 catalog rules and the index-column rule are written in.
pub fn core_registry() -> PredicateRegistry {
    let mut reg = PredicateRegistry::empty();
    ml::register(&mut reg).expect("core predicate names are unique");
    numeric::register(&mut reg).expect("core predicate names are unique");
    data::register(&mut reg).expect("core predicate names are unique");
    reg
}

/// Registers the predicates added on top of the core set
/// (`hasEarlyStoppingCallback`).
pub fn register_extensions(reg: &mut PredicateRegistry) -> Result<(), RegistryError> {
    ml::register_extensions(reg)
}

/// Core predicates plus extensions: what the builtin ruleset needs.
pub fn standard_registry() -> PredicateRegistry {
    let mut reg = core_registry();
    register_extensions(&mut reg).expect("extension predicate names are unique");
    reg
}

#[cfg(test)]
mod tests;
