//! Predicates about models, estimators, training loops and preprocessing.

use crate::frontend::{NodeId, NodeKind, Role, TaintClass};

use super::util::*;
use super::{FileView, PredicateRegistry, RegistryError};

/// Estimator or optimizer construction, or an ML training method (`fit`,
/// `train`, ...) on an estimator or model.
pub fn is_ml_method_call(v: &FileView<'_>, node: NodeId) -> bool {
    if !is_call(v.ast, node) {
        return false;
    }
    if is_ml_constructor(v, node) {
        return true;
    }
    method_in(v, "ml_methods", node)
        && matches!(
            receiver_class(v, node),
            TaintClass::Estimator | TaintClass::NeuralModel
        )
}

fn is_ml_constructor(v: &FileView<'_>, call: NodeId) -> bool {
    call_in(v, "estimators", call) || call_in(v, "optimizers", call)
}

/// Constructor calls pass at least one recognized hyperparameter. Calls that
/// are not constructors trivially satisfy the predicate.
pub fn has_explicit_hyperparameters(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if !is_call(ast, node) {
        return false;
    }
    if !is_ml_constructor(v, node) {
        return true;
    }
    if has_star_args(ast, node) {
        return true;
    }
    let constructor = qname(v, node).unwrap_or_default();
    let catalog = v.ctx.catalog();
    let keyword_ok = match catalog.hyperparameters(constructor) {
        Some(known) => named_keywords(ast, node).any(|k| known.iter().any(|h| h == k)),
        None => named_keywords(ast, node).next().is_some(),
    };
    let skip = usize::from(catalog.matches("data_first_constructors", constructor));
    keyword_ok || positional(ast, node).nth(skip).is_some()
}

fn is_scaler_fit(v: &FileView<'_>, call: NodeId) -> bool {
    method_in(v, "fit_methods", call) && receiver_class(v, call) == TaintClass::Scaler
}

/// A scaler/encoder fit whose statement precedes a train/test split.
pub fn used_before_train_test_split(v: &FileView<'_>, node: NodeId) -> bool {
    if !(is_scaler_fit(v, node) || call_in(v, "scaling_functions", node)) {
        return false;
    }
    let order = v.ctx.order(node);
    calls(v.ast).any(|c| qname_in(v, "splitters", c) && v.ctx.order(c) > order)
}

/// `fit` on an estimator that is sensitive to feature scale.
pub fn is_scale_sensitive_estimator(v: &FileView<'_>, node: NodeId) -> bool {
    if method(v.ast, node) != Some("fit") {
        return false;
    }
    let Some(recv) = receiver(v.ast, node) else { return false };
    v.ctx
        .expr_origin(v.ast, recv)
        .is_some_and(|o| v.ctx.catalog().matches("scale_sensitive_estimators", &o))
}

/// Some scaling transformer is fit, or a scaling function applied, before
/// `node` in statement order.
pub fn file_fits_scaler_before(v: &FileView<'_>, node: NodeId) -> bool {
    let order = v.ctx.order(node);
    calls(v.ast).any(|c| {
        v.ctx.order(c) < order
            && (call_in(v, "scaling_functions", c)
                || (method_in(v, "fit_methods", c)
                    && receiver(v.ast, c)
                        .and_then(|r| v.ctx.expr_origin(v.ast, r))
                        .is_some_and(|o| v.ctx.catalog().matches("scaling_transformers", &o))))
    })
}

/// `m.eval()` on a neural model with training operations later in the same
/// scope but no `m.train()` after it.
pub fn model_eval_without_later_train(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if method(ast, node) != Some("eval") || positional(ast, node).next().is_some() {
        return false;
    }
    if receiver_class(v, node) != TaintClass::NeuralModel {
        return false;
    }
    let Some(model) = receiver(ast, node).and_then(|r| expr_text(ast, r)) else {
        return false;
    };
    let order = v.ctx.order(node);
    let later = || calls(ast).filter(move |&c| v.ctx.order(c) > order && same_scope(v, c, node));
    let retrains = later().any(|c| {
        method(ast, c) == Some("train") && receiver(ast, c).and_then(|r| expr_text(ast, r)).as_deref() == Some(&model)
    });
    let trains_after = later().any(|c| method_in(v, "training_methods", c));
    trains_after && !retrains
}

/// Direct `.forward(...)` on a neural model.
pub fn is_forward_call_on_model(v: &FileView<'_>, node: NodeId) -> bool {
    method(v.ast, node) == Some("forward") && receiver_class(v, node) == TaintClass::NeuralModel
}

/// `.backward()` inside a loop with no `.zero_grad()` earlier in the same
/// innermost loop.
pub fn loop_contains_backward_without_zero_grad(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    if method(ast, node) != Some("backward") {
        return false;
    }
    let Some(lp) = enclosing_loop(ast, node) else { return false };
    !ast.descendants(lp)
        .take_while(|&d| d < node)
        .any(|d| method(ast, d) == Some("zero_grad"))
}

fn builds_model(v: &FileView<'_>, call: NodeId) -> bool {
    if !is_call(v.ast, call) || assigned_name(v.ast, call).is_none() {
        return false;
    }
    if call_in(v, "model_builders", call) {
        return true;
    }
    let Some(f) = func(v.ast, call) else { return false };
    v.ast.kind(f) == NodeKind::Name
        && !v.ctx.aliases().contains_key(v.ast.ident(f).unwrap_or(""))
        && class(v, call) == TaintClass::NeuralModel
}

fn loop_frees_memory(v: &FileView<'_>, lp: NodeId) -> bool {
    v.ast
        .descendants(lp)
        .any(|d| v.ast.kind(d) == NodeKind::Delete || call_in(v, "free_memory_apis", d))
}

fn builds_model_in_loop(v: &FileView<'_>, node: NodeId) -> bool {
    builds_model(v, node) && enclosing_loop(v.ast, node).is_some_and(|lp| !loop_frees_memory(v, lp))
}

/// First model construction in the file that sits in a loop which never
/// frees memory.
pub fn builds_model_inside_loop_without_free(v: &FileView<'_>, node: NodeId) -> bool {
    builds_model_in_loop(v, node) && !v.ast.iter().take_while(|&n| n < node).any(|n| builds_model_in_loop(v, n))
}

/// `fit`-style training call on a neural model.
pub fn is_neural_fit_call(v: &FileView<'_>, node: NodeId) -> bool {
    matches!(method(v.ast, node), Some("fit" | "fit_generator")) && receiver_class(v, node) == TaintClass::NeuralModel
}

fn is_early_stopping(v: &FileView<'_>, node: NodeId, depth: u8) -> bool {
    let ast = v.ast;
    match ast.kind(node) {
        NodeKind::Call => qname_in(v, "early_stopping_callbacks", node),
        NodeKind::List | NodeKind::Tuple => ast.children(node).iter().any(|&e| is_early_stopping(v, e, depth)),
        NodeKind::BinOp => ast.children(node).iter().any(|&e| is_early_stopping(v, e, depth)),
        NodeKind::Name if depth > 0 => v
            .ctx
            .assigned_values(ast.ident(node).unwrap_or(""))
            .iter()
            .any(|&value| is_early_stopping(v, value, depth - 1)),
        _ => false,
    }
}

/// The call passes an early-stopping callback through `callbacks=`.
pub fn has_early_stopping_callback(v: &FileView<'_>, node: NodeId) -> bool {
    keyword(v.ast, node, "callbacks").is_some_and(|cb| is_early_stopping(v, cb, 3))
}

/// First import of a deep-learning framework in the file.
pub fn is_first_deep_learning_import(v: &FileView<'_>, node: NodeId) -> bool {
    imports_dl_framework(v, node) && !v.ast.iter().take_while(|&n| n < node).any(|n| imports_dl_framework(v, n))
}

fn imports_dl_framework(v: &FileView<'_>, node: NodeId) -> bool {
    let ast = v.ast;
    let catalog = v.ctx.catalog();
    let top = |module: &str| catalog.matches("dl_frameworks", module.split('.').next().unwrap_or(module));
    match ast.kind(node) {
        NodeKind::Import => ast.children(node).iter().any(|&a| ast.ident(a).is_some_and(top)),
        NodeKind::ImportFrom => ast.ident(node).is_some_and(|m| !m.starts_with('.') && top(m)),
        _ => false,
    }
}

/// Any training call (`fit`, `backward`, ...) anywhere in the file.
pub fn file_trains_model(v: &FileView<'_>, _node: NodeId) -> bool {
    calls(v.ast).any(|c| method_in(v, "training_methods", c))
}

/// The file turns on deterministic execution: a determinism API call, a
/// determinism flag assignment, or a determinism environment variable.
pub fn file_enables_determinism(v: &FileView<'_>, _node: NodeId) -> bool {
    let ast = v.ast;
    let catalog = v.ctx.catalog();
    ast.iter().any(|n| match ast.kind(n) {
        NodeKind::Call => qname_in(v, "determinism_apis", n),
        NodeKind::Assign => ast
            .children_with_role(n, Role::Target)
            .any(|t| qname_in(v, "determinism_flags", t)),
        NodeKind::Constant => str_literal(ast, n).is_some_and(|s| catalog.matches("determinism_env_vars", s)),
        _ => false,
    })
}

pub(super) fn register(reg: &mut PredicateRegistry) -> Result<(), RegistryError> {
    reg.register_unary(
        "isMLMethodCall",
        "estimator/optimizer construction or fit/train on an estimator or model",
        is_ml_method_call,
    )?;
    reg.register_unary(
        "hasExplicitHyperparameters",
        "constructor passes a catalog hyperparameter (non-constructors: true)",
        has_explicit_hyperparameters,
    )?;
    reg.register_unary(
        "usedBeforeTrainTestSplit",
        "scaler/encoder fit that precedes a train/test split",
        used_before_train_test_split,
    )?;
    reg.register_unary(
        "isScaleSensitiveEstimator",
        "fit on a scale-sensitive estimator",
        is_scale_sensitive_estimator,
    )?;
    reg.register_unary(
        "fileFitsScalerBefore",
        "a scaling transformer is fit earlier in the file",
        file_fits_scaler_before,
    )?;
    reg.register_unary(
        "modelEvalWithoutLaterTrain",
        "model.eval() followed by training without model.train()",
        model_eval_without_later_train,
    )?;
    reg.register_unary("isForwardCallOnModel", "direct .forward() on a model", is_forward_call_on_model)?;
    reg.register_unary(
        "loopContainsBackwardWithoutZeroGrad",
        "backward() in a loop without an earlier zero_grad() in that loop",
        loop_contains_backward_without_zero_grad,
    )?;
    reg.register_unary(
        "buildsModelInsideLoopWithoutFree",
        "first model built in a loop that never frees memory",
        builds_model_inside_loop_without_free,
    )?;
    reg.register_unary("isNeuralFitCall", "fit/fit_generator on a neural model", is_neural_fit_call)?;
    reg.register_unary(
        "isFirstDeepLearningImport",
        "first import of a deep-learning framework",
        is_first_deep_learning_import,
    )?;
    reg.register_unary("fileTrainsModel", "the file calls a training method", file_trains_model)?;
    reg.register_unary(
        "fileEnablesDeterminism",
        "the file enables deterministic execution",
        file_enables_determinism,
    )?;
    Ok(())
}

pub(super) fn register_extensions(reg: &mut PredicateRegistry) -> Result<(), RegistryError> {
    reg.register_unary(
        "hasEarlyStoppingCallback",
        "callbacks= includes an early-stopping callback",
        has_early_stopping_callback,
    )
}
