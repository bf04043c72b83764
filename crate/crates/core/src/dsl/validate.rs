use std::collections::HashMap;

use super::{Arg, Condition, Pos, RuleSpec};
use crate::predicates::{ParamKind, PredicateRegistry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("{rule} {pos}: duplicate rule id")]
    DuplicateRuleId { rule: String, pos: Pos },
    #[error("{rule} {pos}: unknown predicate `{name}`")]
    UnknownPredicate { rule: String, name: String, pos: Pos },
    #[error("{rule} {pos}: `{name}` takes {expected} argument(s), got {found}")]
    ArityMismatch {
        rule: String,
        name: String,
        expected: usize,
        found: usize,
        pos: Pos,
    },
    #[error("{rule} {pos}: argument {index} of `{name}` must be a {expected}")]
    ArgumentKind {
        rule: String,
        name: String,
        index: usize,
        expected: ParamKind,
        pos: Pos,
    },
    #[error("{rule} {pos}: variable `{var}` is not bound by an enclosing `exists`")]
    UnboundVariable { rule: String, var: String, pos: Pos },
    #[error("{rule}: unknown placeholder `{{{placeholder}}}` in report template")]
    UnknownPlaceholder { rule: String, placeholder: String },
    #[error("{rule} {pos}: condition must start with `exists <var> in AST`")]
    MissingWitness { rule: String, pos: Pos },
}

impl ValidationError {
    pub fn rule(&self) -> &str {
        match self {
            ValidationError::DuplicateRuleId { rule, .. }
            | ValidationError::UnknownPredicate { rule, .. }
            | ValidationError::ArityMismatch { rule, .. }
            | ValidationError::ArgumentKind { rule, .. }
            | ValidationError::UnboundVariable { rule, .. }
            | ValidationError::UnknownPlaceholder { rule, .. }
            | ValidationError::MissingWitness { rule, .. } => rule,
        }
    }
}

/// Checks names, arities, argument kinds, variable binding and template
/// placeholders. Returns every problem found; empty means valid.
pub fn validate_rules(rules: &[RuleSpec], registry: &PredicateRegistry) -> Vec<ValidationError> {
    let mut errors = Vec::new();
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    for rule in rules {
        if seen.insert(&rule.id, rule.pos).is_some() {
            errors.push(ValidationError::DuplicateRuleId {
                rule: rule.id.clone(),
                pos: rule.pos,
            });
        }
        validate_rule(rule, registry, &mut errors);
    }
    errors
}

pub(crate) fn validate_rule(rule: &RuleSpec, registry: &PredicateRegistry, errors: &mut Vec<ValidationError>) {
    if !matches!(rule.condition, Condition::Exists { .. }) {
        errors.push(ValidationError::MissingWitness {
            rule: rule.id.clone(),
            pos: rule.condition.pos().unwrap_or(rule.pos),
        });
    }
    let mut scope = Vec::new();
    check(&rule.id, &rule.condition, registry, &mut scope, errors);
    for placeholder in rule.action.unknown_placeholders() {
        errors.push(ValidationError::UnknownPlaceholder {
            rule: rule.id.clone(),
            placeholder: placeholder.to_string(),
        });
    }
}

fn check<'a>(
    rule: &str,
    cond: &'a Condition,
    registry: &PredicateRegistry,
    scope: &mut Vec<&'a str>,
    errors: &mut Vec<ValidationError>,
) {
    match cond {
        Condition::Exists { var, body, .. } => {
            scope.push(var);
            check(rule, body, registry, scope, errors);
            scope.pop();
        }
        Condition::Not(inner) => check(rule, inner, registry, scope, errors),
        Condition::And(a, b) | Condition::Or(a, b) => {
            check(rule, a, registry, scope, errors);
            check(rule, b, registry, scope, errors);
        }
        Condition::Call { name, args, pos } => {
            for arg in args {
                if let Arg::Var(var) = arg {
                    if !scope.contains(&var.as_str()) {
                        errors.push(ValidationError::UnboundVariable {
                            rule: rule.to_string(),
                            var: var.clone(),
                            pos: *pos,
                        });
                    }
                }
            }
            let Some(predicate) = registry.get(name) else {
                errors.push(ValidationError::UnknownPredicate {
                    rule: rule.to_string(),
                    name: name.clone(),
                    pos: *pos,
                });
                return;
            };
            let params = &predicate.signature.params;
            if params.len() != args.len() {
                errors.push(ValidationError::ArityMismatch {
                    rule: rule.to_string(),
                    name: name.clone(),
                    expected: params.len(),
                    found: args.len(),
                    pos: *pos,
                });
                return;
            }
            for (index, (kind, arg)) in params.iter().zip(args).enumerate() {
                let ok = matches!((kind, arg), (ParamKind::Node, Arg::Var(_)) | (ParamKind::Str, Arg::Str(_)));
                if !ok {
                    errors.push(ValidationError::ArgumentKind {
                        rule: rule.to_string(),
                        name: name.clone(),
                        index: index + 1,
                        expected: *kind,
                        pos: *pos,
                    });
                }
            }
        }
    }
}
