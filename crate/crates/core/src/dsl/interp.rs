//! Direct evaluation of a rule's condition tree. Slower than a compiled
//! matcher and kept deliberately naive: it is the reference the compiler is
//! tested against.

use std::collections::HashMap;

use super::validate::validate_rule;
use super::{Arg, CompileError, Condition, RuleSpec};
use crate::finding::Finding;
use crate::frontend::NodeId;
use crate::predicates::{FileView, PredArg, PredicateRegistry};

pub fn interpret_rule(
    rule: &RuleSpec,
    view: &FileView<'_>,
    registry: &PredicateRegistry,
) -> Result<Vec<Finding>, CompileError> {
    let mut errors = Vec::new();
    validate_rule(rule, registry, &mut errors);
    let Condition::Exists { var, body, .. } = &rule.condition else {
        return Err(CompileError::Invalid {
            rule: rule.id.clone(),
            errors,
        });
    };
    if !errors.is_empty() {
        return Err(CompileError::Invalid {
            rule: rule.id.clone(),
            errors,
        });
    }
    let mut findings = Vec::new();
    let mut env = HashMap::new();
    for node in view.ast.iter() {
        env.insert(var.clone(), node);
        if holds(body, view, registry, &mut env) {
            let span = view.ast.span(node);
            findings.push(Finding {
                file: view.path.to_string(),
                line: span.line,
                rule_id: rule.id.clone(),
                col: span.col,
                message: rule.action.render(span.line, &rule.id, view.ctx.qualified_name(node)),
            });
        }
    }
    Ok(findings)
}

fn holds(
    cond: &Condition,
    view: &FileView<'_>,
    registry: &PredicateRegistry,
    env: &mut HashMap<String, NodeId>,
) -> bool {
    match cond {
        Condition::Exists { var, body, .. } => {
            let shadowed = env.get(var).copied();
            let mut found = false;
            for node in view.ast.iter() {
                env.insert(var.clone(), node);
                if holds(body, view, registry, env) {
                    found = true;
                    break;
                }
            }
            match shadowed {
                Some(previous) => env.insert(var.clone(), previous),
                None => env.remove(var),
            };
            found
        }
        Condition::Not(inner) => !holds(inner, view, registry, env),
        Condition::And(a, b) => holds(a, view, registry, env) && holds(b, view, registry, env),
        Condition::Or(a, b) => holds(a, view, registry, env) || holds(b, view, registry, env),
        Condition::Call { name, args, .. } => {
            let predicate = registry.get(name).expect("validated predicate");
            let args: Vec<PredArg<'_>> = args
                .iter()
                .map(|arg| match arg {
                    Arg::Var(v) => PredArg::Node(env[v]),
                    Arg::Str(s) => PredArg::Str(s),
                })
                .collect();
            predicate.call(view, &args)
        }
    }
}
