//! Per-file semantic context: import aliases, variable taint classes,
//! statement order and resolved qualified names.
//!
//! Taints are a flow-insensitive overapproximation per scope. Each pass walks
//! the assignments in document order and the last assignment with a known
//! class wins; passes repeat until nothing changes, so names assigned from
//! later helpers or later assignments still resolve. Assignments whose value
//! has no known class leave an existing taint in place.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::ast::{Ast, Literal, NodeId, NodeKind, Role};
use crate::catalog::Catalog;

/// Marker stored in `aliases` for names bound by dynamic imports.
pub const DYNAMIC_IMPORT: &str = "<dynamic>";

const MAX_PASSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TaintClass {
    DataFrame,
    Series,
    Estimator,
    NeuralModel,
    Optimizer,
    Tensor,
    Scaler,
    SplitResult,
    Unknown,
}

impl TaintClass {
    /// Library-like prefix used to name methods on a value of this class
    /// when its constructor is not known.
    pub fn pseudo_library(self) -> Option<&'static str> {
        match self {
            TaintClass::DataFrame => Some("pandas.DataFrame"),
            TaintClass::Series => Some("pandas.Series"),
            TaintClass::Estimator => Some("sklearn.base.BaseEstimator"),
            TaintClass::Scaler => Some("sklearn.base.TransformerMixin"),
            TaintClass::NeuralModel => Some("nn.Module"),
            TaintClass::Optimizer => Some("optim.Optimizer"),
            TaintClass::Tensor => Some("tensor.Tensor"),
            TaintClass::SplitResult => Some("split.Result"),
            TaintClass::Unknown => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaintClass::DataFrame => "DATAFRAME",
            TaintClass::Series => "SERIES",
            TaintClass::Estimator => "ESTIMATOR",
            TaintClass::NeuralModel => "NEURAL_MODEL",
            TaintClass::Optimizer => "OPTIMIZER",
            TaintClass::Tensor => "TENSOR",
            TaintClass::Scaler => "SCALER",
            TaintClass::SplitResult => "SPLIT_RESULT",
            TaintClass::Unknown => "UNKNOWN",
        }
    }

    fn keeps_constructor(self) -> bool {
        matches!(
            self,
            TaintClass::Estimator | TaintClass::Scaler | TaintClass::NeuralModel | TaintClass::Optimizer
        )
    }
}

impl fmt::Display for TaintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Taint class of a variable plus, for estimators, scalers, models and
/// optimizers, the qualified constructor that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taint {
    pub class: TaintClass,
    pub origin: Option<String>,
}

impl Taint {
    fn new(class: TaintClass, origin: Option<String>) -> Self {
        let origin = if class.keeps_constructor() { origin } else { None };
        Self { class, origin }
    }

    fn known(&self) -> bool {
        self.class != TaintClass::Unknown
    }

    fn prefix(&self) -> Option<String> {
        self.origin
            .clone()
            .or_else(|| self.class.pseudo_library().map(str::to_string))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Facts {
    aliases: BTreeMap<String, String>,
    /// scope node -> variable (or `self.attr`) -> taint
    scopes: BTreeMap<NodeId, BTreeMap<String, Taint>>,
    /// helper function name -> taint of its returned value
    helpers: BTreeMap<String, Taint>,
    neural_classes: BTreeSet<String>,
}

pub struct FileContext {
    facts: Facts,
    scope_of: Vec<NodeId>,
    scope_parent: BTreeMap<NodeId, NodeId>,
    stmt_ordinal: Vec<u32>,
    qualified: Vec<Option<String>>,
    assigned_values: BTreeMap<String, Vec<NodeId>>,
    catalog: Arc<Catalog>,
    pub parse_ok: bool,
    pub error: Option<String>,
}

impl fmt::Debug for FileContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FileContext")
            .field("aliases", &self.facts.aliases)
            .field("taints", &self.facts.scopes)
            .field("parse_ok", &self.parse_ok)
            .field("error", &self.error)
            .finish_non_exhaustive()
    }
}

impl PartialEq for FileContext {
    fn eq(&self, other: &Self) -> bool {
        self.facts == other.facts
            && self.scope_of == other.scope_of
            && self.stmt_ordinal == other.stmt_ordinal
            && self.qualified == other.qualified
            && self.assigned_values == other.assigned_values
            && self.parse_ok == other.parse_ok
            && self.error == other.error
            && Arc::ptr_eq(&self.catalog, &other.catalog)
    }
}

impl FileContext {
    /// Context for a file that failed to parse.
    pub fn failed(error: impl Into<String>) -> Self {
        Self {
            facts: Facts::default(),
            scope_of: Vec::new(),
            scope_parent: BTreeMap::new(),
            stmt_ordinal: Vec::new(),
            qualified: Vec::new(),
            assigned_values: BTreeMap::new(),
            catalog: Catalog::builtin(),
            parse_ok: false,
            error: Some(error.into()),
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Local name -> fully qualified imported name.
    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.facts.aliases
    }

    /// Taints bound at module scope.
    pub fn module_taints(&self) -> BTreeMap<&str, TaintClass> {
        self.facts
            .scopes
            .get(&NodeId(0))
            .map(|m| m.iter().map(|(k, v)| (k.as_str(), v.class)).collect())
            .unwrap_or_default()
    }

    /// Every (scope, name, class) triple.
    pub fn all_taints(&self) -> impl Iterator<Item = (NodeId, &str, TaintClass)> {
        self.facts
            .scopes
            .iter()
            .flat_map(|(scope, m)| m.iter().map(move |(k, v)| (*scope, k.as_str(), v.class)))
    }

    /// Class of `name` as seen from `at`, searching enclosing scopes.
    pub fn taint(&self, name: &str, at: NodeId) -> TaintClass {
        self.taint_info(name, at).map_or(TaintClass::Unknown, |t| t.class)
    }

    pub fn taint_info(&self, name: &str, at: NodeId) -> Option<&Taint> {
        lookup(&self.facts, &self.scope_of, &self.scope_parent, name, at)
    }

    pub fn is_neural_class(&self, name: &str) -> bool {
        self.facts.neural_classes.contains(name)
    }

    /// Ordinal of the statement enclosing `node`, in document order
    /// (the module itself is 0).
    pub fn order(&self, node: NodeId) -> u32 {
        self.stmt_ordinal.get(node.index()).copied().unwrap_or(0)
    }

    pub fn scope_of(&self, node: NodeId) -> NodeId {
        self.scope_of.get(node.index()).copied().unwrap_or(NodeId(0))
    }

    /// Cached qualified name of a call, attribute or aliased name.
    pub fn qualified_name(&self, node: NodeId) -> Option<&str> {
        self.qualified.get(node.index()).and_then(|q| q.as_deref())
    }

    /// Every value assigned to `name` anywhere in the file.
    pub fn assigned_values(&self, name: &str) -> &[NodeId] {
        self.assigned_values.get(name).map_or(&[], Vec::as_slice)
    }

    /// Taint class of an arbitrary expression node.
    pub fn expr_class(&self, ast: &Ast, node: NodeId) -> TaintClass {
        self.resolver(ast)
            .classify(node)
            .map_or(TaintClass::Unknown, |t| t.class)
    }

    /// Qualified constructor behind an expression, when it is a constructor
    /// call or a variable holding one.
    pub fn expr_origin(&self, ast: &Ast, node: NodeId) -> Option<String> {
        self.resolver(ast).classify(node).and_then(|t| t.origin)
    }

    fn resolver<'a>(&'a self, ast: &'a Ast) -> Resolver<'a> {
        Resolver {
            ast,
            catalog: &self.catalog,
            facts: &self.facts,
            scope_of: &self.scope_of,
            scope_parent: &self.scope_parent,
        }
    }
}

fn lookup<'f>(
    facts: &'f Facts,
    scope_of: &[NodeId],
    scope_parent: &BTreeMap<NodeId, NodeId>,
    name: &str,
    at: NodeId,
) -> Option<&'f Taint> {
    let mut scope = scope_of.get(at.index()).copied().unwrap_or(NodeId(0));
    loop {
        if let Some(t) = facts.scopes.get(&scope).and_then(|m| m.get(name)) {
            return Some(t);
        }
        match scope_parent.get(&scope) {
            Some(&parent) if parent != scope => scope = parent,
            _ => return None,
        }
    }
}

/// Builds the context with the embedded catalog.
pub fn build_context(ast: &Ast) -> FileContext {
    build_context_with(ast, Catalog::builtin())
}

pub fn build_context_with(ast: &Ast, catalog: Arc<Catalog>) -> FileContext {
    let (scope_of, scope_parent) = compute_scopes(ast);
    let stmt_ordinal = compute_ordinals(ast);

    let mut facts = Facts::default();
    collect_imports(ast, &catalog, &scope_of, &mut facts);
    collect_neural_classes(ast, &catalog, &scope_of, &scope_parent, &mut facts);

    let assignments = collect_assignments(ast);
    let mut assigned_values: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
    for a in &assignments {
        for (name, _) in &a.targets {
            assigned_values.entry(name.clone()).or_default().push(a.value);
        }
    }

    for _ in 0..MAX_PASSES {
        let before = facts.clone();
        for a in &assignments {
            let value = {
                let r = Resolver {
                    ast,
                    catalog: &catalog,
                    facts: &facts,
                    scope_of: &scope_of,
                    scope_parent: &scope_parent,
                };
                a.targets
                    .iter()
                    .map(|(name, target)| (name.clone(), r.classify_target(a.value, *target)))
                    .collect::<Vec<_>>()
            };
            for (name, taint) in value {
                let Some(taint) = taint else { continue };
                let scope = binding_scope(ast, &scope_of, &name, a.stmt);
                facts.scopes.entry(scope).or_default().insert(name, taint);
            }
        }
        let helpers = {
            let r = Resolver {
                ast,
                catalog: &catalog,
                facts: &facts,
                scope_of: &scope_of,
                scope_parent: &scope_parent,
            };
            helper_returns(ast, &r)
        };
        facts.helpers.extend(helpers);
        if facts == before {
            break;
        }
    }

    let qualified = {
        let r = Resolver {
            ast,
            catalog: &catalog,
            facts: &facts,
            scope_of: &scope_of,
            scope_parent: &scope_parent,
        };
        ast.iter()
            .map(|n| match ast.kind(n) {
                NodeKind::Call | NodeKind::Attribute | NodeKind::Name => r.dotted(n),
                _ => None,
            })
            .collect()
    };

    FileContext {
        facts,
        scope_of,
        scope_parent,
        stmt_ordinal,
        qualified,
        assigned_values,
        catalog,
        parse_ok: true,
        error: None,
    }
}

/// Qualified dotted name of a call or attribute node, resolved through
/// import aliases and variable taints. `None` when the receiver is neither
/// imported nor tainted.
pub fn resolve_qualified_name(ast: &Ast, node: NodeId, ctx: &FileContext) -> Option<String> {
    match ast.kind(node) {
        NodeKind::Call | NodeKind::Attribute => ctx.resolver(ast).dotted(node),
        _ => None,
    }
}

fn compute_scopes(ast: &Ast) -> (Vec<NodeId>, BTreeMap<NodeId, NodeId>) {
    let mut scope_of = vec![NodeId(0); ast.len()];
    let mut scope_parent = BTreeMap::new();
    scope_parent.insert(NodeId(0), NodeId(0));
    for id in ast.iter().skip(1) {
        let parent = ast.parent(id).expect("non-root node has a parent");
        // decorators, bases and defaults evaluate in the enclosing scope
        let scope = if ast.kind(parent).is_scope()
            && !matches!(
                ast.node(id).role,
                Role::Decorator | Role::Base | Role::Default | Role::Returns
            ) {
            parent
        } else {
            scope_of[parent.index()]
        };
        scope_of[id.index()] = scope;
        if ast.kind(id).is_scope() {
            scope_parent.insert(id, scope);
        }
    }
    (scope_of, scope_parent)
}

fn compute_ordinals(ast: &Ast) -> Vec<u32> {
    let mut ordinals = vec![0u32; ast.len()];
    let mut counter = 0u32;
    for id in ast.iter() {
        if ast.kind(id).is_statement() {
            counter += 1;
            ordinals[id.index()] = counter;
        } else if let Some(parent) = ast.parent(id) {
            ordinals[id.index()] = ordinals[parent.index()];
        }
    }
    ordinals
}

fn collect_imports(ast: &Ast, catalog: &Catalog, scope_of: &[NodeId], facts: &mut Facts) {
    for id in ast.iter() {
        match ast.kind(id) {
            NodeKind::Import => {
                for &alias in ast.children(id) {
                    let node = ast.node(alias);
                    let Some(module) = node.ident.as_deref() else { continue };
                    match &node.asname {
                        Some(local) => {
                            facts.aliases.insert(local.clone(), module.to_string());
                        }
                        None => {
                            let head = module.split('.').next().unwrap_or(module);
                            facts.aliases.insert(head.to_string(), head.to_string());
                        }
                    }
                }
            }
            NodeKind::ImportFrom => {
                let module = ast.ident(id).unwrap_or("");
                for &alias in ast.children(id) {
                    let node = ast.node(alias);
                    let Some(name) = node.ident.as_deref() else { continue };
                    if name == "*" {
                        continue;
                    }
                    let qualified = if module.is_empty() || module.ends_with('.') {
                        format!("{module}{name}")
                    } else {
                        format!("{module}.{name}")
                    };
                    let local = node.asname.clone().unwrap_or_else(|| name.to_string());
                    facts.aliases.insert(local, qualified);
                }
            }
            _ => {}
        }
    }

    // `m = importlib.import_module(...)` / `m = __import__(...)`
    for id in ast.iter().filter(|&n| ast.kind(n) == NodeKind::Assign) {
        let Some(value) = ast.child_with_role(id, Role::Value) else { continue };
        if ast.kind(value) != NodeKind::Call {
            continue;
        }
        let Some(func) = ast.child_with_role(value, Role::Func) else { continue };
        let is_dynamic = match ast.kind(func) {
            NodeKind::Name => {
                ast.ident(func) == Some("__import__")
                    || facts.aliases.get(ast.ident(func).unwrap_or("")).map(String::as_str)
                        == Some("importlib.import_module")
            }
            NodeKind::Attribute => {
                let base = ast.child_with_role(func, Role::Value);
                ast.ident(func) == Some("import_module")
                    && base.is_some_and(|b| {
                        ast.ident(b).and_then(|n| facts.aliases.get(n)).map(String::as_str)
                            == Some("importlib")
                    })
            }
            _ => false,
        };
        if !is_dynamic {
            continue;
        }
        for target in ast.children_with_role(id, Role::Target) {
            if let Some(name) = ast.ident(target).filter(|_| ast.kind(target) == NodeKind::Name) {
                facts.aliases.insert(name.to_string(), DYNAMIC_IMPORT.to_string());
                facts
                    .scopes
                    .entry(scope_of[id.index()])
                    .or_default()
                    .insert(name.to_string(), Taint::new(TaintClass::Unknown, None));
            }
        }
    }
    let _ = catalog;
}

fn collect_neural_classes(
    ast: &Ast,
    catalog: &Arc<Catalog>,
    scope_of: &[NodeId],
    scope_parent: &BTreeMap<NodeId, NodeId>,
    facts: &mut Facts,
) {
    let classes: Vec<NodeId> = ast.iter().filter(|&n| ast.kind(n) == NodeKind::ClassDef).collect();
    loop {
        let mut changed = false;
        for &class in &classes {
            let Some(name) = ast.ident(class) else { continue };
            if facts.neural_classes.contains(name) {
                continue;
            }
            let is_neural = {
                let r = Resolver {
                    ast,
                    catalog,
                    facts,
                    scope_of,
                    scope_parent,
                };
                ast.children_with_role(class, Role::Base).any(|base| {
                    r.dotted(base)
                        .is_some_and(|q| catalog.matches("neural_base_classes", &q))
                        || ast
                            .ident(base)
                            .is_some_and(|b| ast.kind(base) == NodeKind::Name && facts.neural_classes.contains(b))
                })
            };
            if is_neural {
                facts.neural_classes.insert(name.to_string());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

struct Assignment {
    stmt: NodeId,
    value: NodeId,
    /// bound name (or `self.attr`) and the target node it comes from
    targets: Vec<(String, NodeId)>,
}

fn collect_assignments(ast: &Ast) -> Vec<Assignment> {
    let mut out = Vec::new();
    for id in ast.iter() {
        let (value, targets): (Option<NodeId>, Vec<NodeId>) = match ast.kind(id) {
            NodeKind::Assign | NodeKind::AnnAssign | NodeKind::NamedExpr => (
                ast.child_with_role(id, Role::Value),
                ast.children_with_role(id, Role::Target).collect(),
            ),
            NodeKind::WithItem => (
                ast.child_with_role(id, Role::ContextExpr),
                ast.children_with_role(id, Role::OptionalVars).collect(),
            ),
            _ => continue,
        };
        let Some(value) = value else { continue };
        let mut bound = Vec::new();
        for target in targets {
            bound_names(ast, target, &mut bound);
        }
        if !bound.is_empty() {
            out.push(Assignment {
                stmt: id,
                value,
                targets: bound,
            });
        }
    }
    out
}

fn bound_names(ast: &Ast, target: NodeId, out: &mut Vec<(String, NodeId)>) {
    match ast.kind(target) {
        NodeKind::Name => {
            if let Some(name) = ast.ident(target) {
                out.push((name.to_string(), target));
            }
        }
        NodeKind::Attribute => {
            if let Some(key) = self_attr_key(ast, target) {
                out.push((key, target));
            }
        }
        NodeKind::Tuple | NodeKind::List => {
            for &elt in ast.children(target) {
                bound_names(ast, elt, out);
            }
        }
        NodeKind::Starred => {
            for &v in ast.children(target) {
                bound_names(ast, v, out);
            }
        }
        _ => {}
    }
}

/// `self.encoder` -> "self.encoder"
fn self_attr_key(ast: &Ast, node: NodeId) -> Option<String> {
    if ast.kind(node) != NodeKind::Attribute {
        return None;
    }
    let base = ast.child_with_role(node, Role::Value)?;
    if ast.kind(base) == NodeKind::Name && ast.ident(base) == Some("self") {
        Some(format!("self.{}", ast.ident(node)?))
    } else {
        None
    }
}

/// `self.x` bindings go to the class scope enclosing the method.
fn binding_scope(ast: &Ast, scope_of: &[NodeId], name: &str, stmt: NodeId) -> NodeId {
    let scope = scope_of[stmt.index()];
    if name.starts_with("self.") && ast.kind(scope) == NodeKind::FunctionDef {
        let outer = scope_of[scope.index()];
        if ast.kind(outer) == NodeKind::ClassDef {
            return outer;
        }
    }
    scope
}

fn helper_returns(ast: &Ast, r: &Resolver<'_>) -> BTreeMap<String, Taint> {
    let mut out = BTreeMap::new();
    for def in ast.iter().filter(|&n| ast.kind(n) == NodeKind::FunctionDef) {
        let Some(name) = ast.ident(def) else { continue };
        for ret in ast.descendants(def) {
            if ast.kind(ret) != NodeKind::Return || r.scope_of[ret.index()] != def {
                continue;
            }
            if let Some(value) = ast.child_with_role(ret, Role::Value) {
                if let Some(t) = r.classify(value) {
                    out.insert(name.to_string(), t);
                }
            }
        }
    }
    out
}

struct Resolver<'a> {
    ast: &'a Ast,
    catalog: &'a Catalog,
    facts: &'a Facts,
    scope_of: &'a [NodeId],
    scope_parent: &'a BTreeMap<NodeId, NodeId>,
}

impl Resolver<'_> {
    fn lookup(&self, name: &str, at: NodeId) -> Option<&Taint> {
        lookup(self.facts, self.scope_of, self.scope_parent, name, at).filter(|t| t.known())
    }

    fn alias(&self, name: &str) -> Option<&str> {
        self.facts
            .aliases
            .get(name)
            .map(String::as_str)
            .filter(|a| *a != DYNAMIC_IMPORT)
    }

    fn dotted(&self, node: NodeId) -> Option<String> {
        let ast = self.ast;
        match ast.kind(node) {
            NodeKind::Call => self.dotted(ast.child_with_role(node, Role::Func)?),
            NodeKind::Name => self.alias(ast.ident(node)?).map(str::to_string),
            NodeKind::Attribute => {
                let attr = ast.ident(node)?;
                let base = ast.child_with_role(node, Role::Value)?;
                let prefix = match ast.kind(base) {
                    NodeKind::Name => {
                        let name = ast.ident(base)?;
                        if let Some(module) = self.alias(name) {
                            Some(module.to_string())
                        } else {
                            self.lookup(name, base).and_then(Taint::prefix)
                        }
                    }
                    NodeKind::Attribute => match self_attr_key(ast, base).and_then(|k| self.lookup(&k, base)) {
                        Some(t) => t.prefix(),
                        None => self.dotted(base),
                    },
                    NodeKind::Call => self
                        .dotted(base)
                        .or_else(|| self.classify(base).and_then(|t| t.prefix())),
                    _ => self.classify(base).and_then(|t| t.prefix()),
                }?;
                Some(format!("{prefix}.{attr}"))
            }
            _ => None,
        }
    }

    /// Class for one assignment target, given the assigned value.
    fn classify_target(&self, value: NodeId, target: NodeId) -> Option<Taint> {
        let ast = self.ast;
        let parent = ast.parent(target)?;
        let in_destructuring = matches!(ast.kind(parent), NodeKind::Tuple | NodeKind::List | NodeKind::Starred);
        if !in_destructuring {
            return self.classify(value);
        }
        let whole = self.classify(value);
        if whole.as_ref().is_some_and(|t| t.class == TaintClass::SplitResult) {
            return whole;
        }
        // `a, b = x, y` pairs elements positionally
        if matches!(ast.kind(value), NodeKind::Tuple | NodeKind::List) && ast.kind(parent) != NodeKind::Starred {
            let position = ast.children(parent).iter().position(|&c| c == target)?;
            let values = ast.children(value);
            if values.len() == ast.children(parent).len() {
                return self.classify(values[position]);
            }
        }
        None
    }

    fn classify(&self, node: NodeId) -> Option<Taint> {
        let ast = self.ast;
        match ast.kind(node) {
            NodeKind::Name => self.lookup(ast.ident(node)?, node).cloned(),
            NodeKind::Attribute => {
                if let Some(t) = self_attr_key(ast, node).and_then(|k| self.lookup(&k, node)) {
                    return Some(t.clone());
                }
                let base = self.classify(ast.child_with_role(node, Role::Value)?)?;
                let attr = ast.ident(node)?;
                let class = match (base.class, attr) {
                    (TaintClass::DataFrame, "loc" | "iloc" | "at" | "iat" | "T") => TaintClass::DataFrame,
                    (TaintClass::DataFrame | TaintClass::Series, "values") => TaintClass::Tensor,
                    (TaintClass::DataFrame, "columns" | "index" | "shape" | "dtypes" | "size") => return None,
                    (TaintClass::DataFrame, _) => TaintClass::Series,
                    (TaintClass::Series, "loc" | "iloc" | "str" | "dt" | "cat") => TaintClass::Series,
                    (TaintClass::Tensor, "T" | "data") => TaintClass::Tensor,
                    _ => return None,
                };
                Some(Taint::new(class, None))
            }
            NodeKind::Subscript => {
                let base = self.classify(ast.child_with_role(node, Role::Value)?)?;
                let slice = ast.child_with_role(node, Role::Slice)?;
                let class = match base.class {
                    TaintClass::DataFrame => {
                        let is_column = ast.kind(slice) == NodeKind::Constant
                            && matches!(ast.node(slice).literal, Some(Literal::Str(_)));
                        if is_column {
                            TaintClass::Series
                        } else {
                            TaintClass::DataFrame
                        }
                    }
                    TaintClass::Series => TaintClass::Series,
                    TaintClass::Tensor => TaintClass::Tensor,
                    _ => return None,
                };
                Some(Taint::new(class, None))
            }
            NodeKind::Call => self.classify_call(node),
            NodeKind::BinOp => {
                let left = ast.child_with_role(node, Role::Left).and_then(|n| self.classify(n));
                let right = ast.child_with_role(node, Role::Right).and_then(|n| self.classify(n));
                [left, right].into_iter().flatten().find(|t| {
                    matches!(
                        t.class,
                        TaintClass::Tensor | TaintClass::DataFrame | TaintClass::Series
                    )
                })
            }
            NodeKind::Await => self.classify(ast.child_with_role(node, Role::Value)?),
            _ => None,
        }
    }

    fn classify_call(&self, call: NodeId) -> Option<Taint> {
        let ast = self.ast;
        let cat = self.catalog;
        let func = ast.child_with_role(call, Role::Func)?;
        if let Some(q) = self.dotted(func) {
            let class = [
                ("splitters", TaintClass::SplitResult),
                ("estimators", TaintClass::Estimator),
                ("scalers", TaintClass::Scaler),
                ("optimizers", TaintClass::Optimizer),
                ("neural_models", TaintClass::NeuralModel),
                ("dataframe_sources", TaintClass::DataFrame),
                ("series_constructors", TaintClass::Series),
                ("tensor_constructors", TaintClass::Tensor),
            ]
            .into_iter()
            .find(|(key, _)| cat.matches(key, &q))
            .map(|(_, class)| class);
            if let Some(class) = class {
                return Some(Taint::new(class, Some(q)));
            }
        }
        match ast.kind(func) {
            NodeKind::Name => {
                let name = ast.ident(func)?;
                if self.facts.neural_classes.contains(name) {
                    return Some(Taint::new(TaintClass::NeuralModel, None));
                }
                if let Some(t) = self.facts.helpers.get(name) {
                    return Some(t.clone());
                }
                match self.lookup(name, func) {
                    Some(t) if t.class == TaintClass::NeuralModel => Some(Taint::new(TaintClass::Tensor, None)),
                    _ => None,
                }
            }
            NodeKind::Attribute => {
                let method = ast.ident(func)?;
                let receiver = self.classify(ast.child_with_role(func, Role::Value)?)?;
                if cat.matches("taint_breaking_methods", method) {
                    return None;
                }
                if receiver.class == TaintClass::SplitResult {
                    return None;
                }
                Some(receiver)
            }
            _ => None,
        }
    }
}
