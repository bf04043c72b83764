//! Lowering of rules into matchers.
//!
//! Variables become slot indices and predicates are resolved to their
//! implementations once, at compile time. Chains of `and` / `or` are
//! flattened into n-ary nodes that short-circuit left to right.

use std::fmt::Write as _;
use std::sync::Arc;

use super::validate::validate_rule;
use super::{print_condition, ActionTemplate, Arg, Condition, RuleSpec, ValidationError};
use crate::finding::Finding;
use crate::frontend::NodeId;
use crate::predicates::{FileView, PredArg, PredicateFn, PredicateRegistry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("rule {rule} is invalid: {}", errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { rule: String, errors: Vec<ValidationError> },
}

enum Ir {
    Pred {
        name: String,
        imp: Arc<PredicateFn>,
        args: Vec<IrArg>,
    },
    Not(Box<Ir>),
    All(Vec<Ir>),
    Any(Vec<Ir>),
    Exists {
        slot: usize,
        body: Box<Ir>,
    },
}

enum IrArg {
    Slot(usize),
    Str(String),
}

/// Executable form of one rule. Immutable and shareable across threads.
pub struct Matcher {
    rule_id: String,
    name: String,
    template: ActionTemplate,
    witness: usize,
    slots: usize,
    body: Ir,
    slot_names: Vec<String>,
    source: Condition,
}

impl std::fmt::Debug for Matcher {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matcher").field("rule_id", &self.rule_id).finish_non_exhaustive()
    }
}

pub fn compile_rule(rule: &RuleSpec, registry: &PredicateRegistry) -> Result<Matcher, CompileError> {
    let mut errors = Vec::new();
    validate_rule(rule, registry, &mut errors);
    let invalid = || CompileError::Invalid {
        rule: rule.id.clone(),
        errors: errors.clone(),
    };
    if !errors.is_empty() {
        return Err(invalid());
    }
    let Condition::Exists { var, body, .. } = &rule.condition else {
        return Err(invalid());
    };
    let mut lowering = Lowering {
        registry,
        scope: vec![(var.clone(), 0)],
        slot_names: vec![var.clone()],
    };
    let body = lowering.lower(body);
    Ok(Matcher {
        rule_id: rule.id.clone(),
        name: rule.name.clone(),
        template: rule.action.clone(),
        witness: 0,
        slots: lowering.slot_names.len(),
        body,
        slot_names: lowering.slot_names,
        source: rule.condition.clone(),
    })
}

struct Lowering<'r> {
    registry: &'r PredicateRegistry,
    scope: Vec<(String, usize)>,
    slot_names: Vec<String>,
}

impl Lowering<'_> {
    fn lower(&mut self, cond: &Condition) -> Ir {
        match cond {
            Condition::Exists { var, body, .. } => {
                let slot = self.slot_names.len();
                self.slot_names.push(var.clone());
                self.scope.push((var.clone(), slot));
                let body = self.lower(body);
                self.scope.pop();
                Ir::Exists {
                    slot,
                    body: Box::new(body),
                }
            }
            Condition::Not(inner) => Ir::Not(Box::new(self.lower(inner))),
            Condition::And(..) => {
                let mut parts = Vec::new();
                self.flatten(cond, true, &mut parts);
                Ir::All(parts)
            }
            Condition::Or(..) => {
                let mut parts = Vec::new();
                self.flatten(cond, false, &mut parts);
                Ir::Any(parts)
            }
            Condition::Call { name, args, .. } => {
                let predicate = self.registry.get(name).expect("validated predicate");
                let args = args
                    .iter()
                    .map(|arg| match arg {
                        Arg::Var(v) => {
                            let (_, slot) = self.scope.iter().rev().find(|(n, _)| n == v).expect("validated variable");
                            IrArg::Slot(*slot)
                        }
                        Arg::Str(s) => IrArg::Str(s.clone()),
                    })
                    .collect();
                Ir::Pred {
                    name: name.clone(),
                    imp: predicate.implementation.clone(),
                    args,
                }
            }
        }
    }

    fn flatten(&mut self, cond: &Condition, conjunction: bool, out: &mut Vec<Ir>) {
        match (cond, conjunction) {
            (Condition::And(a, b), true) | (Condition::Or(a, b), false) => {
                self.flatten(a, conjunction, out);
                self.flatten(b, conjunction, out);
            }
            _ => out.push(self.lower(cond)),
        }
    }
}

impl Matcher {
    pub fn rule_id(&self) -> &str {
        &self.rule_id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates the rule over every node of the file, in pre-order.
    pub fn run(&self, view: &FileView<'_>) -> Vec<Finding> {
        let mut slots = vec![NodeId(0); self.slots];
        let mut args = Vec::with_capacity(4);
        let mut findings = Vec::new();
        for node in view.ast.iter() {
            slots[self.witness] = node;
            if eval(&self.body, view, &mut slots, &mut args) {
                findings.push(witness_finding(view, &self.rule_id, &self.template, node));
            }
        }
        findings
    }

    /// Human-readable dump of the compiled traversal.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "matcher {} \"{}\"", self.rule_id, self.name);
        let _ = writeln!(out, "  # {}", print_condition(&self.source));
        let _ = writeln!(out, "  problems := []");
        let _ = writeln!(out, "  for each node {} in TraverseAST(root):", self.slot_names[self.witness]);
        let _ = writeln!(out, "    if {}:", self.render(&self.body));
        let _ = writeln!(out, "      append {:?}", self.template.raw());
        let _ = writeln!(out, "  return problems");
        out
    }

    fn render(&self, ir: &Ir) -> String {
        match ir {
            Ir::Pred { name, args, .. } => {
                let args: Vec<String> = args
                    .iter()
                    .map(|a| match a {
                        IrArg::Slot(s) => self.slot_names[*s].clone(),
                        IrArg::Str(s) => format!("{s:?}"),
                    })
                    .collect();
                format!("{name}({})", args.join(", "))
            }
            Ir::Not(inner) => format!("not {}", self.render(inner)),
            Ir::All(parts) => format!("({})", parts.iter().map(|p| self.render(p)).collect::<Vec<_>>().join(" and ")),
            Ir::Any(parts) => format!("({})", parts.iter().map(|p| self.render(p)).collect::<Vec<_>>().join(" or ")),
            Ir::Exists { slot, body } => format!(
                "any node {} in TraverseAST(root) with {}",
                self.slot_names[*slot],
                self.render(body)
            ),
        }
    }
}

pub(crate) fn witness_finding(view: &FileView<'_>, rule_id: &str, template: &ActionTemplate, node: NodeId) -> Finding {
    let span = view.ast.span(node);
    Finding {
        file: view.path.to_string(),
        line: span.line,
        rule_id: rule_id.to_string(),
        col: span.col,
        message: template.render(span.line, rule_id, view.ctx.qualified_name(node)),
    }
}

fn eval<'s>(ir: &'s Ir, view: &FileView<'_>, slots: &mut Vec<NodeId>, args: &mut Vec<PredArg<'s>>) -> bool {
    match ir {
        Ir::Pred { imp, args: spec, .. } => {
            let start = args.len();
            for a in spec {
                args.push(match a {
                    IrArg::Slot(s) => PredArg::Node(slots[*s]),
                    IrArg::Str(s) => PredArg::Str(s),
                });
            }
            let result = imp(view, &args[start..]);
            args.truncate(start);
            result
        }
        Ir::Not(inner) => !eval(inner, view, slots, args),
        Ir::All(parts) => parts.iter().all(|p| eval(p, view, slots, args)),
        Ir::Any(parts) => parts.iter().any(|p| eval(p, view, slots, args)),
        Ir::Exists { slot, body } => {
            let saved = slots[*slot];
            let found = view.ast.iter().any(|n| {
                slots[*slot] = n;
                eval(body, view, slots, args)
            });
            slots[*slot] = saved;
            found
        }
    }
}
