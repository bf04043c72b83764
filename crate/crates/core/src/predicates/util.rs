//! Small structural queries shared by the predicates.

use crate::frontend::{Ast, Literal, NodeId, NodeKind, Role, TaintClass};

use super::FileView;

pub(crate) fn is_call(ast: &Ast, node: NodeId) -> bool {
    ast.kind(node) == NodeKind::Call
}

pub(crate) fn func(ast: &Ast, call: NodeId) -> Option<NodeId> {
    if is_call(ast, call) {
        ast.child_with_role(call, Role::Func)
    } else {
        None
    }
}

/// `x.m(...)` -> `m`
pub(crate) fn method(ast: &Ast, call: NodeId) -> Option<&str> {
    let f = func(ast, call)?;
    if ast.kind(f) == NodeKind::Attribute {
        ast.ident(f)
    } else {
        None
    }
}

/// `x.m(...)` -> `x`
pub(crate) fn receiver(ast: &Ast, call: NodeId) -> Option<NodeId> {
    let f = func(ast, call)?;
    if ast.kind(f) == NodeKind::Attribute {
        ast.child_with_role(f, Role::Value)
    } else {
        None
    }
}

pub(crate) fn qname<'a>(v: &FileView<'a>, node: NodeId) -> Option<&'a str> {
    v.ctx.qualified_name(node)
}

pub(crate) fn qname_in(v: &FileView<'_>, key: &str, node: NodeId) -> bool {
    qname(v, node).is_some_and(|q| v.ctx.catalog().matches(key, q))
}

pub(crate) fn call_in(v: &FileView<'_>, key: &str, node: NodeId) -> bool {
    is_call(v.ast, node) && qname_in(v, key, node)
}

pub(crate) fn method_in(v: &FileView<'_>, key: &str, call: NodeId) -> bool {
    method(v.ast, call).is_some_and(|m| v.ctx.catalog().matches(key, m))
}

pub(crate) fn positional(ast: &Ast, call: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    ast.children_with_role(call, Role::Arg)
}

/// Value of keyword argument `name`.
pub(crate) fn keyword(ast: &Ast, call: NodeId, name: &str) -> Option<NodeId> {
    ast.children_with_role(call, Role::Keyword)
        .find(|&k| ast.ident(k) == Some(name))
        .and_then(|k| ast.child_with_role(k, Role::Value))
}

pub(crate) fn named_keywords<'a>(ast: &'a Ast, call: NodeId) -> impl Iterator<Item = &'a str> + 'a {
    ast.children_with_role(call, Role::Keyword).filter_map(|k| ast.ident(k))
}

/// `f(*args)` or `f(**kwargs)`.
pub(crate) fn has_star_args(ast: &Ast, call: NodeId) -> bool {
    positional(ast, call).any(|a| ast.kind(a) == NodeKind::Starred)
        || ast.children_with_role(call, Role::Keyword).any(|k| ast.ident(k).is_none())
}

pub(crate) fn class(v: &FileView<'_>, node: NodeId) -> TaintClass {
    v.ctx.expr_class(v.ast, node)
}

pub(crate) fn receiver_class(v: &FileView<'_>, call: NodeId) -> TaintClass {
    receiver(v.ast, call).map_or(TaintClass::Unknown, |r| class(v, r))
}

pub(crate) fn literal(ast: &Ast, node: NodeId) -> Option<&Literal> {
    if ast.kind(node) == NodeKind::Constant {
        ast.node(node).literal.as_ref()
    } else {
        None
    }
}

pub(crate) fn str_literal(ast: &Ast, node: NodeId) -> Option<&str> {
    literal(ast, node).and_then(Literal::as_str)
}

pub(crate) fn calls(ast: &Ast) -> impl Iterator<Item = NodeId> + '_ {
    ast.iter().filter(move |&n| is_call(ast, n))
}

/// Innermost `for`/`while` around `node` without crossing a function or
/// class boundary.
pub(crate) fn enclosing_loop(ast: &Ast, node: NodeId) -> Option<NodeId> {
    ast.ancestors(node)
        .take_while(|&a| !ast.kind(a).is_scope())
        .find(|&a| ast.kind(a).is_loop())
}

pub(crate) fn in_loop_or_comprehension(ast: &Ast, node: NodeId) -> bool {
    ast.ancestors(node)
        .take_while(|&a| !ast.kind(a).is_scope())
        .any(|a| ast.kind(a).is_loop() || ast.kind(a).is_comprehension())
}

/// Dotted source text of a name or attribute chain (`self.model`).
pub(crate) fn expr_text(ast: &Ast, node: NodeId) -> Option<String> {
    match ast.kind(node) {
        NodeKind::Name => ast.ident(node).map(str::to_string),
        NodeKind::Attribute => {
            let base = expr_text(ast, ast.child_with_role(node, Role::Value)?)?;
            Some(format!("{base}.{}", ast.ident(node)?))
        }
        _ => None,
    }
}

/// Name bound by the assignment whose value is exactly `node`.
pub(crate) fn assigned_name(ast: &Ast, node: NodeId) -> Option<String> {
    let parent = ast.parent(node)?;
    if ast.node(node).role != Role::Value || !matches!(ast.kind(parent), NodeKind::Assign | NodeKind::AnnAssign) {
        return None;
    }
    let target = ast.child_with_role(parent, Role::Target)?;
    expr_text(ast, target)
}

/// Whether `a` and `b` sit in the same function, class or module body.
pub(crate) fn same_scope(v: &FileView<'_>, a: NodeId, b: NodeId) -> bool {
    v.ctx.scope_of(a) == v.ctx.scope_of(b)
}
