//! Detection of ML-specific code smells in Python sources, driven by
//! declarative rules.

pub mod catalog;
pub mod dsl;
pub mod engine;
pub mod finding;
pub mod fixtures;
pub mod frontend;
pub mod metrics;
pub mod predicates;
pub mod ruleset;

pub use finding::Finding;
