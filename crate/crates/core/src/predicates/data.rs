//! Predicates about dataframes, reads, merges and metrics.

use crate::frontend::{Literal, NodeId, NodeKind, Op, Role, TaintClass};

use super::util::*;
use super::{FileView, PredArg, ParamKind, PredicateRegistry, PredicateSignature, RegistryError};

fn is_frame(class: TaintClass) -> bool {
    matches!(class, TaintClass::DataFrame | TaintClass::Series)
}

/// `df[col] = 0` or `df[col] = ""`: a new column filled with a placeholder.
pub fn is_empty_column_init_literal(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if ast.kind(node) != NodeKind::Assign {
        return false;
    }
    let Some(value) = ast.child_with_role(node, Role::Value) else { return false };
    let placeholder = match literal(ast, value) {
        Some(Literal::Int(text)) => text == "0",
        Some(Literal::Str(s)) => s.is_empty(),
        _ => false,
    };
    placeholder
        && ast.children_with_role(node, Role::Target).any(|t| {
            ast.kind(t) == NodeKind::Subscript
                && ast.child_with_role(t, Role::Slice).is_some_and(|s| str_literal(ast, s).is_some())
                && ast
                    .child_with_role(t, Role::Value)
                    .is_some_and(|b| class(v, b) == TaintClass::DataFrame)
        })
}

/// Reading `.values` from a dataframe or series.
pub fn is_values_attribute_on_data_frame(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    ast.kind(node) == NodeKind::Attribute
        && ast.ident(node) == Some("values")
        && ast.node(node).role != Role::Target
        && ast.node(node).role != Role::Func
        && ast.child_with_role(node, Role::Value).is_some_and(|b| is_frame(class(v, b)))
}

/// `pd.merge(...)` or `df.merge(...)`.
pub fn is_merge_call(v: &FileView<'_>, node: NodeId) -> bool {
    call_in(v, "merge_apis", node) || (method(v.ast, node) == Some("merge") && receiver_class(v, node) == TaintClass::DataFrame)
}

/// Merge keys are given through `on`, `left_on`/`right_on` or the index flags.
pub fn has_merge_keys_explicit(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    ["on", "left_on", "right_on", "left_index", "right_index"]
        .iter()
        .any(|k| keyword(ast, node, k).is_some())
        || has_star_args(ast, node)
}

/// A call such as `df.dropna()` used as a statement, so its returned copy is
/// thrown away and the receiver is left unchanged.
pub fn is_in_place_capable_call_with_unused_result(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    let discarded = ast.parent(node).is_some_and(|p| ast.kind(p) == NodeKind::ExprStmt);
    if !discarded || !method_in(v, "inplace_methods", node) || !is_frame(receiver_class(v, node)) {
        return false;
    }
    match keyword(ast, node, "inplace") {
        None => !has_star_args(ast, node),
        Some(flag) => literal(ast, flag) == Some(&Literal::Bool(false)),
    }
}

/// A `for` loop iterating dataframe rows one at a time.
pub fn is_iterrows_loop(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if ast.kind(node) != NodeKind::For {
        return false;
    }
    let Some(iter) = ast.child_with_role(node, Role::Iter) else { return false };
    if method_in(v, "row_iteration_methods", iter) && receiver_class(v, iter) == TaintClass::DataFrame {
        return true;
    }
    // for i in df.index / for i in range(len(df))
    if ast.kind(iter) == NodeKind::Attribute
        && ast.ident(iter) == Some("index")
        && ast.child_with_role(iter, Role::Value).is_some_and(|b| class(v, b) == TaintClass::DataFrame)
    {
        return true;
    }
    let is_builtin = |call: NodeId, name: &str| {
        func(ast, call).is_some_and(|f| ast.kind(f) == NodeKind::Name && ast.ident(f) == Some(name))
    };
    is_builtin(iter, "range")
        && positional(ast, iter).count() == 1
        && positional(ast, iter).next().is_some_and(|arg| {
            is_builtin(arg, "len") && positional(ast, arg).next().is_some_and(|x| class(v, x) == TaintClass::DataFrame)
        })
}

fn is_nan(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    match ast.kind(node) {
        NodeKind::Name | NodeKind::Attribute => qname_in(v, "nan_constants", node),
        NodeKind::Call => {
            func(ast, node).is_some_and(|f| ast.kind(f) == NodeKind::Name && ast.ident(f) == Some("float"))
                && positional(ast, node)
                    .next()
                    .and_then(|a| str_literal(ast, a))
                    .is_some_and(|s| s.trim().eq_ignore_ascii_case("nan"))
        }
        _ => false,
    }
}

/// `x == np.nan` / `x != np.nan`, which never hold as intended.
pub fn is_nan_equality_comparison(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    ast.kind(node) == NodeKind::Compare
        && ast.node(node).ops.iter().any(|op| matches!(op, Op::Eq | Op::NotEq))
        && ast.children(node).iter().any(|&c| is_nan(v, c))
}

pub fn is_threshold_dependent_metric_call(v: &FileView<'_>, node: NodeId) -> bool {
    call_in(v, "threshold_dependent_metrics", node)
}

/// Any reference to a threshold-independent metric (ROC AUC, PR curve, ...).
pub fn file_uses_threshold_independent_metric(v: &FileView<'_>, _node: NodeId) -> bool {
    let ast = v.ast;
    ast.iter().any(|n| {
        matches!(ast.kind(n), NodeKind::Name | NodeKind::Attribute | NodeKind::Call)
            && qname_in(v, "threshold_independent_metrics", n)
    })
}

/// `df[a][b]`: the outermost of two or more chained subscripts whose base is
/// a dataframe.
pub fn is_chained_data_frame_subscript(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if ast.kind(node) != NodeKind::Subscript {
        return false;
    }
    let outermost = !ast
        .parent(node)
        .is_some_and(|p| ast.kind(p) == NodeKind::Subscript && ast.node(node).role == Role::Value);
    let Some(inner) = ast.child_with_role(node, Role::Value) else { return false };
    outermost
        && ast.kind(inner) == NodeKind::Subscript
        && ast
            .child_with_role(inner, Role::Value)
            .is_some_and(|base| class(v, base) == TaintClass::DataFrame)
}

/// `pd.read_csv(...)` and the other tabular readers.
pub fn is_data_frame_read(v: &FileView<'_>, node: NodeId) -> bool {
    call_in(v, "tabular_reads", node)
}

/// `hasKeywordArgument(call, "name")`: the call passes keyword `name`
/// (or `**kwargs`, which may carry it).
pub fn has_keyword_argument(v: &FileView<'_>, args: &[PredArg<'_>]) -> bool {
    let (Some(call), Some(name)) = (args.first().and_then(|a| a.node()), args.get(1).and_then(|a| a.text())) else {
        return false;
    };
    is_call(v.ast, call) && (keyword(v.ast, call, name).is_some() || has_star_args(v.ast, call))
}

pub(super) fn register(reg: &mut PredicateRegistry) -> Result<(), RegistryError> {
    reg.register_unary(
        "isEmptyColumnInitLiteral",
        "new dataframe column initialized with 0 or \"\"",
        is_empty_column_init_literal,
    )?;
    reg.register_unary(
        "isValuesAttributeOnDataFrame",
        ".values read on a dataframe or series",
        is_values_attribute_on_data_frame,
    )?;
    reg.register_unary("isMergeCall", "dataframe merge", is_merge_call)?;
    reg.register_unary(
        "hasMergeKeysExplicit",
        "merge passes on/left_on/right_on or index flags",
        has_merge_keys_explicit,
    )?;
    reg.register_unary(
        "isInPlaceCapableCallWithUnusedResult",
        "dataframe method result discarded without inplace=True",
        is_in_place_capable_call_with_unused_result,
    )?;
    reg.register_unary("isIterrowsLoop", "loop over dataframe rows", is_iterrows_loop)?;
    reg.register_unary(
        "isNanEqualityComparison",
        "== or != against NaN",
        is_nan_equality_comparison,
    )?;
    reg.register_unary(
        "isThresholdDependentMetricCall",
        "f1/precision/recall style metric call",
        is_threshold_dependent_metric_call,
    )?;
    reg.register_unary(
        "fileUsesThresholdIndependentMetric",
        "the file uses ROC AUC, PR curves or similar",
        file_uses_threshold_independent_metric,
    )?;
    reg.register_unary(
        "isChainedDataFrameSubscript",
        "chained indexing on a dataframe",
        is_chained_data_frame_subscript,
    )?;
    reg.register_unary("isDataFrameRead", "tabular file read into a dataframe", is_data_frame_read)?;
    reg.register(
        PredicateSignature::new(
            "hasKeywordArgument",
            &[ParamKind::Node, ParamKind::Str],
            "call passes the named keyword argument",
        ),
        has_keyword_argument,
    )?;
    Ok(())
}
