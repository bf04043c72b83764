//! Predicates about arrays, tensors, randomness and numeric safety.

use crate::frontend::{Literal, NodeId, NodeKind, Role, TaintClass};

use super::util::*;
use super::{FileView, PredicateRegistry, RegistryError};

/// Explicit tiling/repetition (`tf.tile`, `np.repeat`, `t.repeat(...)`).
pub fn is_tile_call(v: &FileView<'_>, node: NodeId) -> bool {
    call_in(v, "tile_apis", node)
        || (method_in(v, "tile_methods", node) && receiver_class(v, node) == TaintClass::Tensor)
}

fn is_arithmetic_operand(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    ast.parent(node).is_some_and(|p| {
        ast.kind(p) == NodeKind::BinOp && ast.node(p).ops.first().is_some_and(|op| op.is_arithmetic())
    })
}

/// The value feeds elementwise arithmetic, directly or through the name it
/// is assigned to (later in the same scope).
pub fn used_in_elementwise_arithmetic(v: &FileView<'_>, node: NodeId) -> bool {
    if is_arithmetic_operand(v, node) {
        return true;
    }
    let ast = v.ast;
    let Some(name) = assigned_name(ast, node) else { return false };
    let order = v.ctx.order(node);
    ast.iter().any(|n| {
        ast.kind(n) == NodeKind::Name
            && ast.ident(n) == Some(name.as_str())
            && v.ctx.order(n) > order
            && same_scope(v, n, node)
            && is_arithmetic_operand(v, n)
    })
}

/// Inside a `for`/`while` loop or a comprehension of the same scope.
pub fn is_inside_loop_or_comprehension(v: &FileView<'_>, node: NodeId) -> bool {
    in_loop_or_comprehension(v.ast, node)
}

fn is_unseeded_random(v: &FileView<'_>, call: NodeId) -> bool {
    if !call_in(v, "random_apis", call) && !call_in(v, "seeded_generators", call) {
        return false;
    }
    if call_in(v, "seeded_generators", call) {
        let seeded = positional(v.ast, call).next().is_some()
            || keyword(v.ast, call, "seed").is_some()
            || keyword(v.ast, call, "x").is_some();
        return !seeded;
    }
    // `default_rng(0).normal()` is judged by its generator
    !receiver(v.ast, call).is_some_and(|r| call_in(v, "seeded_generators", r))
}

/// Call to a random API (generator constructors count only when unseeded).
pub fn is_random_api_call(v: &FileView<'_>, node: NodeId) -> bool {
    is_call(v.ast, node) && is_unseeded_random(v, node)
}

/// First random API call of the file.
pub fn is_first_random_api_call(v: &FileView<'_>, node: NodeId) -> bool {
    is_random_api_call(v, node) && !v.ast.iter().take_while(|&n| n < node).any(|n| is_random_api_call(v, n))
}

/// Some global seed-setting call exists anywhere in the file.
pub fn file_sets_global_seed(v: &FileView<'_>, _node: NodeId) -> bool {
    calls(v.ast).any(|c| qname_in(v, "seed_apis", c))
}

/// `x = concat([x, ...])` inside a loop: the array grows by reallocation.
pub fn is_concat_growth_in_loop(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    let is_concat = call_in(v, "concat_apis", node)
        || qname(v, node) == Some("pandas.concat")
        || (method(ast, node) == Some("append") && receiver_class(v, node) == TaintClass::DataFrame);
    if !is_concat || enclosing_loop(ast, node).is_none() {
        return false;
    }
    let Some(target) = assigned_name(ast, node) else { return false };
    ast.descendants(node).any(|d| {
        ast.node(d).role != Role::Func && expr_text(ast, d).as_deref() == Some(target.as_str())
    })
}

fn is_guarded(v: &FileView<'_>, expr: NodeId) -> bool {
    let ast = v.ast;
    if literal(ast, expr).is_some_and(Literal::is_numeric) {
        return true;
    }
    ast.subtree(expr).any(|n| match ast.kind(n) {
        NodeKind::Call => call_in(v, "guard_apis", n) || method_in(v, "guard_methods", n),
        NodeKind::BinOp => {
            ast.node(n).ops.first() == Some(&crate::frontend::Op::Add)
                && ast.children(n).iter().any(|&c| {
                    literal(ast, c).is_some_and(Literal::is_numeric)
                        || ast.ident(c).is_some_and(|name| name.to_ascii_lowercase().contains("eps"))
                })
        }
        _ => false,
    })
}

/// log/sqrt/division whose critical argument is not clipped, masked or
/// offset by an epsilon.
pub fn is_log_call_unmasked(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    let argument = if call_in(v, "unguarded_math_apis", node) {
        let q = qname(v, node).unwrap_or_default();
        let is_division = q.ends_with("div") || q.ends_with("divide") || q.ends_with("truediv");
        positional(ast, node).nth(usize::from(is_division))
    } else if method_in(v, "unguarded_math_methods", node) && receiver_class(v, node) == TaintClass::Tensor {
        receiver(ast, node)
    } else {
        None
    };
    argument.is_some_and(|a| !is_guarded(v, a))
}

/// `np.dot(a, b)` or `a.dot(b)`.
pub fn is_dot_call(v: &FileView<'_>, node: NodeId) -> bool {
    call_in(v, "dot_apis", node)
        || (method(v.ast, node) == Some("dot")
            && matches!(
                receiver_class(v, node),
                TaintClass::Tensor | TaintClass::DataFrame | TaintClass::Series
            ))
}

fn is_matrix(v: &FileView<'_>, node: NodeId, depth: u8) -> bool {
    let ast = v.ast;
    match ast.kind(node) {
        NodeKind::List | NodeKind::Tuple => {
            let elts = ast.children(node);
            !elts.is_empty() && elts.iter().all(|&e| matches!(ast.kind(e), NodeKind::List | NodeKind::Tuple))
        }
        NodeKind::Call => {
            if call_in(v, "matrix_constructors", node) {
                let mut args = positional(ast, node);
                let first = args.next();
                return args.next().is_some()
                    || first.is_some_and(|f| {
                        matches!(ast.kind(f), NodeKind::Tuple | NodeKind::List) && ast.children(f).len() == 2
                    });
            }
            if call_in(v, "tensor_constructors", node) {
                return positional(ast, node).next().is_some_and(|f| is_matrix(v, f, depth));
            }
            false
        }
        NodeKind::Name if depth > 0 => {
            class(v, node) == TaintClass::DataFrame
                || v.ctx
                    .assigned_values(ast.ident(node).unwrap_or(""))
                    .iter()
                    .any(|&value| is_matrix(v, value, depth - 1))
        }
        _ => class(v, node) == TaintClass::DataFrame,
    }
}

/// Both operands of a dot call are evidently two-dimensional.
pub fn has_matrix_operands(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    let operands: Vec<NodeId> = if call_in(v, "dot_apis", node) {
        positional(ast, node).take(2).collect()
    } else {
        receiver(ast, node).into_iter().chain(positional(ast, node).take(1)).collect()
    };
    operands.len() == 2 && operands.iter().all(|&o| is_matrix(v, o, 3))
}

pub(super) fn register(reg: &mut PredicateRegistry) -> Result<(), RegistryError> {
    reg.register_unary("isTileCall", "explicit tile/repeat of an array", is_tile_call)?;
    reg.register_unary(
        "usedInElementwiseArithmetic",
        "value flows into elementwise arithmetic",
        used_in_elementwise_arithmetic,
    )?;
    reg.register_unary(
        "isInsideLoopOrComprehension",
        "inside a loop or comprehension",
        is_inside_loop_or_comprehension,
    )?;
    reg.register_unary("isRandomApiCall", "call to an unseeded random API", is_random_api_call)?;
    reg.register_unary(
        "isFirstRandomApiCall",
        "first random API call of the file",
        is_first_random_api_call,
    )?;
    reg.register_unary("fileSetsGlobalSeed", "the file sets a global seed", file_sets_global_seed)?;
    reg.register_unary(
        "isConcatGrowthInLoop",
        "array grown by concatenation inside a loop",
        is_concat_growth_in_loop,
    )?;
    reg.register_unary(
        "isLogCallUnmasked",
        "log/sqrt/division on an unguarded argument",
        is_log_call_unmasked,
    )?;
    reg.register_unary("isDotCall", "dot product call", is_dot_call)?;
    reg.register_unary("hasMatrixOperands", "both dot operands are 2-D", has_matrix_operands)?;
    Ok(())
}
