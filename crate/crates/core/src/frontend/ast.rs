//! Normalized syntax tree.
//!
//! Nodes live in a flat arena and are numbered in pre-order, so the id order
//! is also the document order used by every matcher. Each node records the
//! role it plays in its parent (`Func`, `Body`, `Target`, ...) which lets
//! predicates ask structural questions without depending on child positions.

use std::fmt;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Start position of a node: 1-based line, 0-based byte column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Self { line, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Module,
    FunctionDef,
    ClassDef,
    Return,
    Delete,
    Assign,
    AugAssign,
    AnnAssign,
    For,
    While,
    If,
    With,
    WithItem,
    Match,
    MatchCase,
    Pattern,
    Raise,
    Try,
    ExceptHandler,
    Assert,
    Import,
    ImportFrom,
    Alias,
    Global,
    Nonlocal,
    ExprStmt,
    Pass,
    Break,
    Continue,
    TypeAlias,
    BoolOp,
    NamedExpr,
    BinOp,
    UnaryOp,
    Lambda,
    IfExp,
    Dict,
    Set,
    ListComp,
    SetComp,
    DictComp,
    GeneratorExp,
    Comprehension,
    Await,
    Yield,
    YieldFrom,
    Compare,
    Call,
    Keyword,
    FormattedValue,
    JoinedStr,
    Constant,
    Attribute,
    Subscript,
    Starred,
    Name,
    List,
    Tuple,
    Slice,
    Arg,
}

impl NodeKind {
    pub fn is_statement(self) -> bool {
        use NodeKind::*;
        matches!(
            self,
            FunctionDef
                | ClassDef
                | Return
                | Delete
                | Assign
                | AugAssign
                | AnnAssign
                | For
                | While
                | If
                | With
                | Match
                | Raise
                | Try
                | Assert
                | Import
                | ImportFrom
                | Global
                | Nonlocal
                | ExprStmt
                | Pass
                | Break
                | Continue
                | TypeAlias
        )
    }

    pub fn is_loop(self) -> bool {
        matches!(self, NodeKind::For | NodeKind::While)
    }

    pub fn is_comprehension(self) -> bool {
        matches!(
            self,
            NodeKind::ListComp | NodeKind::SetComp | NodeKind::DictComp | NodeKind::GeneratorExp
        )
    }

    pub fn is_scope(self) -> bool {
        matches!(
            self,
            NodeKind::Module | NodeKind::FunctionDef | NodeKind::ClassDef | NodeKind::Lambda
        )
    }

    pub fn as_str(self) -> &'static str {
        use NodeKind::*;
        match self {
            Module => "module",
            FunctionDef => "function-def",
            ClassDef => "class-def",
            Return => "return",
            Delete => "delete",
            Assign => "assignment",
            AugAssign => "aug-assignment",
            AnnAssign => "ann-assignment",
            For => "loop-for",
            While => "loop-while",
            If => "if",
            With => "with",
            WithItem => "with-item",
            Match => "match",
            MatchCase => "match-case",
            Pattern => "pattern",
            Raise => "raise",
            Try => "try",
            ExceptHandler => "except-handler",
            Assert => "assert",
            Import => "import",
            ImportFrom => "import-from",
            Alias => "alias",
            Global => "global",
            Nonlocal => "nonlocal",
            ExprStmt => "expression-statement",
            Pass => "pass",
            Break => "break",
            Continue => "continue",
            TypeAlias => "type-alias",
            BoolOp => "bool-op",
            NamedExpr => "named-expr",
            BinOp => "bin-op",
            UnaryOp => "unary-op",
            Lambda => "lambda",
            IfExp => "if-exp",
            Dict => "dict",
            Set => "set",
            ListComp => "list-comprehension",
            SetComp => "set-comprehension",
            DictComp => "dict-comprehension",
            GeneratorExp => "generator-expression",
            Comprehension => "comprehension",
            Await => "await",
            Yield => "yield",
            YieldFrom => "yield-from",
            Compare => "comparison",
            Call => "call",
            Keyword => "keyword-argument",
            FormattedValue => "formatted-value",
            JoinedStr => "f-string",
            Constant => "literal",
            Attribute => "attribute-access",
            Subscript => "subscript",
            Starred => "starred",
            Name => "name",
            List => "list",
            Tuple => "tuple",
            Slice => "slice",
            Arg => "parameter",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The slot a node occupies inside its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Root,
    Body,
    OrElse,
    FinalBody,
    Handler,
    Decorator,
    Base,
    Target,
    Value,
    Iter,
    Test,
    Func,
    Arg,
    Keyword,
    Left,
    Right,
    Comparator,
    Operand,
    Elt,
    Key,
    Generator,
    Condition,
    Slice,
    Annotation,
    Returns,
    Param,
    Default,
    Item,
    ContextExpr,
    OptionalVars,
    Case,
    Pattern,
    Guard,
    Subject,
    Exc,
    Cause,
    Msg,
    Name,
    Element,
    Lower,
    Upper,
    Step,
    FormatSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mult,
    MatMult,
    Div,
    Mod,
    Pow,
    LShift,
    RShift,
    BitOr,
    BitXor,
    BitAnd,
    FloorDiv,
    And,
    Or,
    Not,
    Invert,
    UAdd,
    USub,
    Eq,
    NotEq,
    Lt,
    LtE,
    Gt,
    GtE,
    Is,
    IsNot,
    In,
    NotIn,
}

impl Op {
    /// Elementwise arithmetic operators (the ones broadcasting applies to).
    pub fn is_arithmetic(self) -> bool {
        use Op::*;
        matches!(self, Add | Sub | Mult | Div | Mod | Pow | FloorDiv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    None,
    Bool(bool),
    Str(String),
    Bytes,
    /// Integer literal in decimal text form.
    Int(String),
    Float(f64),
    Complex,
    Ellipsis,
}

impl Literal {
    pub fn is_zero(&self) -> bool {
        match self {
            Literal::Int(text) => text == "0",
            Literal::Float(v) => *v == 0.0,
            _ => false,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Literal::Int(_) | Literal::Float(_) | Literal::Complex)
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Literal::Str(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub role: Role,
    pub span: Span,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Exclusive end of this node's subtree in pre-order numbering.
    pub subtree_end: NodeId,
    /// Identifier text: names, attribute names, keyword names, def names,
    /// imported module names.
    pub ident: Option<String>,
    /// `as` name of an import alias.
    pub asname: Option<String>,
    pub ops: Vec<Op>,
    pub literal: Option<Literal>,
}

/// A parsed file as an arena of [`Node`]s; node 0 is the module.
#[derive(Debug, Clone, PartialEq)]
pub struct Ast {
    nodes: Vec<Node>,
}

impl Ast {
    pub(crate) fn from_nodes(nodes: Vec<Node>) -> Self {
        debug_assert!(!nodes.is_empty());
        Self { nodes }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.nodes[id.index()].kind
    }

    pub fn span(&self, id: NodeId) -> Span {
        self.nodes[id.index()].span
    }

    pub fn ident(&self, id: NodeId) -> Option<&str> {
        self.nodes[id.index()].ident.as_deref()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.index()].children
    }

    /// Pre-order, document-order traversal of the whole tree.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Ids of the strict descendants of `id`, in pre-order.
    pub fn descendants(&self, id: NodeId) -> impl Iterator<Item = NodeId> {
        self.subtree(id).skip(1)
    }

    /// `id` followed by all of its descendants.
    pub fn subtree(&self, id: NodeId) -> impl Iterator<Item = NodeId> {
        let range = self.subtree_range(id);
        range.map(|i| NodeId(i as u32))
    }

    pub fn subtree_range(&self, id: NodeId) -> Range<usize> {
        id.index()..self.nodes[id.index()].subtree_end.index()
    }

    pub fn is_ancestor_of(&self, ancestor: NodeId, node: NodeId) -> bool {
        ancestor != node && self.subtree_range(ancestor).contains(&node.index())
    }

    pub fn ancestors(&self, id: NodeId) -> Ancestors<'_> {
        Ancestors {
            ast: self,
            next: self.parent(id),
        }
    }

    pub fn child_with_role(&self, id: NodeId, role: Role) -> Option<NodeId> {
        self.children(id)
            .iter()
            .copied()
            .find(|c| self.nodes[c.index()].role == role)
    }

    pub fn children_with_role(&self, id: NodeId, role: Role) -> impl Iterator<Item = NodeId> + '_ {
        self.children(id)
            .iter()
            .copied()
            .filter(move |c| self.nodes[c.index()].role == role)
    }

    /// Nearest enclosing statement (the node itself when it is one).
    pub fn enclosing_statement(&self, id: NodeId) -> Option<NodeId> {
        std::iter::once(id)
            .chain(self.ancestors(id))
            .find(|n| self.kind(*n).is_statement())
    }
}

pub struct Ancestors<'a> {
    ast: &'a Ast,
    next: Option<NodeId>,
}

impl Iterator for Ancestors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let current = self.next?;
        self.next = self.ast.parent(current);
        Some(current)
    }
}
