//! Lowering of the Python parser's tree into the normalized [`Ast`].

use rustpython_parser::ast::{self, Ranged};

use super::ast::{Ast, Literal, Node, NodeId, NodeKind, Op, Role, Span};

const NO_OFFSET: u32 = u32::MAX;

/// Owned intermediate tree; children get sorted by position before the
/// arena is numbered.
struct Tmp {
    kind: NodeKind,
    role: Role,
    start: u32,
    ident: Option<String>,
    asname: Option<String>,
    ops: Vec<Op>,
    literal: Option<Literal>,
    children: Vec<Tmp>,
}

impl Tmp {
    fn new(kind: NodeKind, role: Role, start: u32) -> Self {
        Self {
            kind,
            role,
            start,
            ident: None,
            asname: None,
            ops: Vec::new(),
            literal: None,
            children: Vec::new(),
        }
    }

    fn ident(mut self, ident: impl Into<String>) -> Self {
        self.ident = Some(ident.into());
        self
    }

    fn op(mut self, op: Op) -> Self {
        self.ops.push(op);
        self
    }

    fn child(mut self, child: Tmp) -> Self {
        self.children.push(child);
        self
    }

    fn children(mut self, children: impl IntoIterator<Item = Tmp>) -> Self {
        self.children.extend(children);
        self
    }
}

/// Maps byte offsets to (1-based line, 0-based byte column).
pub(crate) struct LineIndex {
    starts: Vec<u32>,
}

impl LineIndex {
    pub(crate) fn new(text: &str) -> Self {
        let mut starts = vec![0];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                starts.push(i as u32 + 1);
            }
        }
        Self { starts }
    }

    pub(crate) fn locate(&self, offset: u32) -> Span {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Span::new(line as u32 + 1, offset - self.starts[line])
    }
}

pub(crate) fn lower_module(body: &[ast::Stmt], text: &str) -> Ast {
    let mut root = Tmp::new(NodeKind::Module, Role::Root, 0);
    root.children = body.iter().map(|s| stmt(s, Role::Body)).collect();
    finalize(&mut root, 0);

    let index = LineIndex::new(text);
    let mut nodes = Vec::new();
    flatten(root, None, &index, &mut nodes);
    Ast::from_nodes(nodes)
}

/// Resolves missing offsets, pulls parent starts back to their earliest
/// child, and sorts siblings into document order.
fn finalize(tmp: &mut Tmp, inherited: u32) {
    let own = if tmp.start == NO_OFFSET { inherited } else { tmp.start };
    for child in &mut tmp.children {
        finalize(child, own);
    }
    tmp.children.sort_by_key(|c| c.start);
    let earliest = tmp.children.first().map_or(own, |c| c.start);
    tmp.start = if tmp.start == NO_OFFSET {
        earliest
    } else {
        tmp.start.min(earliest)
    };
}

fn flatten(tmp: Tmp, parent: Option<NodeId>, index: &LineIndex, out: &mut Vec<Node>) -> NodeId {
    let id = NodeId(out.len() as u32);
    out.push(Node {
        kind: tmp.kind,
        role: tmp.role,
        span: index.locate(tmp.start),
        parent,
        children: Vec::with_capacity(tmp.children.len()),
        subtree_end: id,
        ident: tmp.ident,
        asname: tmp.asname,
        ops: tmp.ops,
        literal: tmp.literal,
    });
    let mut children = Vec::with_capacity(tmp.children.len());
    for child in tmp.children {
        children.push(flatten(child, Some(id), index, out));
    }
    let end = NodeId(out.len() as u32);
    let node = &mut out[id.index()];
    node.children = children;
    node.subtree_end = end;
    id
}

fn start_of<T: Ranged>(node: &T) -> u32 {
    node.range().start().into()
}

fn stmts<'a>(body: &'a [ast::Stmt], role: Role) -> impl Iterator<Item = Tmp> + 'a {
    body.iter().map(move |s| stmt(s, role))
}

fn exprs<'a>(items: &'a [ast::Expr], role: Role) -> impl Iterator<Item = Tmp> + 'a {
    items.iter().map(move |e| expr(e, role))
}

fn opt_expr(item: Option<&ast::Expr>, role: Role) -> Option<Tmp> {
    item.map(|e| expr(e, role))
}

fn stmt(s: &ast::Stmt, role: Role) -> Tmp {
    use ast::Stmt as S;
    let start = start_of(s);
    match s {
        S::FunctionDef(f) => function_def(
            start,
            role,
            &f.name,
            &f.args,
            &f.body,
            &f.decorator_list,
            f.returns.as_deref(),
        ),
        S::AsyncFunctionDef(f) => function_def(
            start,
            role,
            &f.name,
            &f.args,
            &f.body,
            &f.decorator_list,
            f.returns.as_deref(),
        ),
        S::ClassDef(c) => Tmp::new(NodeKind::ClassDef, role, start)
            .ident(c.name.as_str())
            .children(exprs(&c.decorator_list, Role::Decorator))
            .children(exprs(&c.bases, Role::Base))
            .children(c.keywords.iter().map(keyword))
            .children(stmts(&c.body, Role::Body)),
        S::Return(r) => {
            Tmp::new(NodeKind::Return, role, start).children(opt_expr(r.value.as_deref(), Role::Value))
        }
        S::Delete(d) => Tmp::new(NodeKind::Delete, role, start).children(exprs(&d.targets, Role::Target)),
        S::Assign(a) => Tmp::new(NodeKind::Assign, role, start)
            .children(exprs(&a.targets, Role::Target))
            .child(expr(&a.value, Role::Value)),
        S::TypeAlias(t) => Tmp::new(NodeKind::TypeAlias, role, start)
            .child(expr(&t.name, Role::Target))
            .child(expr(&t.value, Role::Value)),
        S::AugAssign(a) => Tmp::new(NodeKind::AugAssign, role, start)
            .op(operator(&a.op))
            .child(expr(&a.target, Role::Target))
            .child(expr(&a.value, Role::Value)),
        S::AnnAssign(a) => Tmp::new(NodeKind::AnnAssign, role, start)
            .child(expr(&a.target, Role::Target))
            .child(expr(&a.annotation, Role::Annotation))
            .children(opt_expr(a.value.as_deref(), Role::Value)),
        S::For(f) => for_loop(start, role, &f.target, &f.iter, &f.body, &f.orelse),
        S::AsyncFor(f) => for_loop(start, role, &f.target, &f.iter, &f.body, &f.orelse),
        S::While(w) => Tmp::new(NodeKind::While, role, start)
            .child(expr(&w.test, Role::Test))
            .children(stmts(&w.body, Role::Body))
            .children(stmts(&w.orelse, Role::OrElse)),
        S::If(i) => Tmp::new(NodeKind::If, role, start)
            .child(expr(&i.test, Role::Test))
            .children(stmts(&i.body, Role::Body))
            .children(stmts(&i.orelse, Role::OrElse)),
        S::With(w) => with(start, role, &w.items, &w.body),
        S::AsyncWith(w) => with(start, role, &w.items, &w.body),
        S::Match(m) => Tmp::new(NodeKind::Match, role, start)
            .child(expr(&m.subject, Role::Subject))
            .children(m.cases.iter().map(match_case)),
        S::Raise(r) => Tmp::new(NodeKind::Raise, role, start)
            .children(opt_expr(r.exc.as_deref(), Role::Exc))
            .children(opt_expr(r.cause.as_deref(), Role::Cause)),
        S::Try(t) => try_stmt(start, role, &t.body, &t.handlers, &t.orelse, &t.finalbody),
        S::TryStar(t) => try_stmt(start, role, &t.body, &t.handlers, &t.orelse, &t.finalbody),
        S::Assert(a) => Tmp::new(NodeKind::Assert, role, start)
            .child(expr(&a.test, Role::Test))
            .children(opt_expr(a.msg.as_deref(), Role::Msg)),
        S::Import(i) => Tmp::new(NodeKind::Import, role, start).children(i.names.iter().map(alias)),
        S::ImportFrom(i) => {
            let level = i.level.as_ref().map_or(0, |l| l.to_u32()) as usize;
            let module = format!(
                "{}{}",
                ".".repeat(level),
                i.module.as_ref().map_or("", |m| m.as_str())
            );
            Tmp::new(NodeKind::ImportFrom, role, start)
                .ident(module)
                .children(i.names.iter().map(alias))
        }
        S::Global(g) => {
            let mut t = Tmp::new(NodeKind::Global, role, start);
            t.ident = Some(g.names.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(","));
            t
        }
        S::Nonlocal(g) => {
            let mut t = Tmp::new(NodeKind::Nonlocal, role, start);
            t.ident = Some(g.names.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(","));
            t
        }
        S::Expr(e) => Tmp::new(NodeKind::ExprStmt, role, start).child(expr(&e.value, Role::Value)),
        S::Pass(_) => Tmp::new(NodeKind::Pass, role, start),
        S::Break(_) => Tmp::new(NodeKind::Break, role, start),
        S::Continue(_) => Tmp::new(NodeKind::Continue, role, start),
    }
}

fn function_def(
    start: u32,
    role: Role,
    name: &ast::Identifier,
    args: &ast::Arguments,
    body: &[ast::Stmt],
    decorators: &[ast::Expr],
    returns: Option<&ast::Expr>,
) -> Tmp {
    Tmp::new(NodeKind::FunctionDef, role, start)
        .ident(name.as_str())
        .children(exprs(decorators, Role::Decorator))
        .children(arguments(args))
        .children(opt_expr(returns, Role::Returns))
        .children(stmts(body, Role::Body))
}

fn arguments(args: &ast::Arguments) -> Vec<Tmp> {
    let mut out = Vec::new();
    let with_defaults = args
        .posonlyargs
        .iter()
        .chain(&args.args)
        .chain(&args.kwonlyargs);
    for a in with_defaults {
        out.push(arg(&a.def));
        if let Some(default) = &a.default {
            out.push(expr(default, Role::Default));
        }
    }
    out.extend(args.vararg.as_deref().map(arg));
    out.extend(args.kwarg.as_deref().map(arg));
    out
}

fn arg(a: &ast::Arg) -> Tmp {
    Tmp::new(NodeKind::Arg, Role::Param, start_of(a))
        .ident(a.arg.as_str())
        .children(opt_expr(a.annotation.as_deref(), Role::Annotation))
}

fn for_loop(
    start: u32,
    role: Role,
    target: &ast::Expr,
    iter: &ast::Expr,
    body: &[ast::Stmt],
    orelse: &[ast::Stmt],
) -> Tmp {
    Tmp::new(NodeKind::For, role, start)
        .child(expr(target, Role::Target))
        .child(expr(iter, Role::Iter))
        .children(stmts(body, Role::Body))
        .children(stmts(orelse, Role::OrElse))
}

fn with(start: u32, role: Role, items: &[ast::WithItem], body: &[ast::Stmt]) -> Tmp {
    Tmp::new(NodeKind::With, role, start)
        .children(items.iter().map(|item| {
            Tmp::new(NodeKind::WithItem, Role::Item, NO_OFFSET)
                .child(expr(&item.context_expr, Role::ContextExpr))
                .children(opt_expr(item.optional_vars.as_deref(), Role::OptionalVars))
        }))
        .children(stmts(body, Role::Body))
}

fn try_stmt(
    start: u32,
    role: Role,
    body: &[ast::Stmt],
    handlers: &[ast::ExceptHandler],
    orelse: &[ast::Stmt],
    finalbody: &[ast::Stmt],
) -> Tmp {
    Tmp::new(NodeKind::Try, role, start)
        .children(stmts(body, Role::Body))
        .children(handlers.iter().map(|h| {
            let ast::ExceptHandler::ExceptHandler(h) = h;
            let mut t = Tmp::new(NodeKind::ExceptHandler, Role::Handler, start_of(h))
                .children(opt_expr(h.type_.as_deref(), Role::Test))
                .children(stmts(&h.body, Role::Body));
            t.ident = h.name.as_ref().map(|n| n.to_string());
            t
        }))
        .children(stmts(orelse, Role::OrElse))
        .children(stmts(finalbody, Role::FinalBody))
}

fn match_case(case: &ast::MatchCase) -> Tmp {
    Tmp::new(NodeKind::MatchCase, Role::Case, NO_OFFSET)
        .child(pattern(&case.pattern))
        .children(opt_expr(case.guard.as_deref(), Role::Guard))
        .children(stmts(&case.body, Role::Body))
}

fn pattern(p: &ast::Pattern) -> Tmp {
    use ast::Pattern as P;
    let t = Tmp::new(NodeKind::Pattern, Role::Pattern, start_of(p));
    match p {
        P::MatchValue(v) => t.child(expr(&v.value, Role::Value)),
        P::MatchSingleton(_) => t,
        P::MatchSequence(s) => t.children(s.patterns.iter().map(pattern)),
        P::MatchMapping(m) => t
            .children(exprs(&m.keys, Role::Key))
            .children(m.patterns.iter().map(pattern)),
        P::MatchClass(c) => t
            .child(expr(&c.cls, Role::Func))
            .children(c.patterns.iter().map(pattern))
            .children(c.kwd_patterns.iter().map(pattern)),
        P::MatchStar(s) => {
            let mut t = t;
            t.ident = s.name.as_ref().map(|n| n.to_string());
            t
        }
        P::MatchAs(a) => {
            let mut t = t.children(a.pattern.as_deref().map(pattern));
            t.ident = a.name.as_ref().map(|n| n.to_string());
            t
        }
        P::MatchOr(o) => t.children(o.patterns.iter().map(pattern)),
    }
}

fn alias(a: &ast::Alias) -> Tmp {
    let mut t = Tmp::new(NodeKind::Alias, Role::Name, start_of(a)).ident(a.name.as_str());
    t.asname = a.asname.as_ref().map(|n| n.to_string());
    t
}

fn keyword(k: &ast::Keyword) -> Tmp {
    let mut t = Tmp::new(NodeKind::Keyword, Role::Keyword, start_of(k)).child(expr(&k.value, Role::Value));
    t.ident = k.arg.as_ref().map(|n| n.to_string());
    t
}

fn comprehensions(generators: &[ast::Comprehension]) -> impl Iterator<Item = Tmp> + '_ {
    generators.iter().map(|g| {
        Tmp::new(NodeKind::Comprehension, Role::Generator, NO_OFFSET)
            .child(expr(&g.target, Role::Target))
            .child(expr(&g.iter, Role::Iter))
            .children(exprs(&g.ifs, Role::Condition))
    })
}

fn expr(e: &ast::Expr, role: Role) -> Tmp {
    use ast::Expr as E;
    let start = start_of(e);
    match e {
        E::BoolOp(b) => {
            let op = match b.op {
                ast::BoolOp::And => Op::And,
                ast::BoolOp::Or => Op::Or,
            };
            Tmp::new(NodeKind::BoolOp, role, start)
                .op(op)
                .children(exprs(&b.values, Role::Operand))
        }
        E::NamedExpr(n) => Tmp::new(NodeKind::NamedExpr, role, start)
            .child(expr(&n.target, Role::Target))
            .child(expr(&n.value, Role::Value)),
        E::BinOp(b) => Tmp::new(NodeKind::BinOp, role, start)
            .op(operator(&b.op))
            .child(expr(&b.left, Role::Left))
            .child(expr(&b.right, Role::Right)),
        E::UnaryOp(u) => {
            let op = match u.op {
                ast::UnaryOp::Invert => Op::Invert,
                ast::UnaryOp::Not => Op::Not,
                ast::UnaryOp::UAdd => Op::UAdd,
                ast::UnaryOp::USub => Op::USub,
            };
            Tmp::new(NodeKind::UnaryOp, role, start)
                .op(op)
                .child(expr(&u.operand, Role::Operand))
        }
        E::Lambda(l) => Tmp::new(NodeKind::Lambda, role, start)
            .children(arguments(&l.args))
            .child(expr(&l.body, Role::Body)),
        E::IfExp(i) => Tmp::new(NodeKind::IfExp, role, start)
            .child(expr(&i.body, Role::Body))
            .child(expr(&i.test, Role::Test))
            .child(expr(&i.orelse, Role::OrElse)),
        E::Dict(d) => {
            let mut t = Tmp::new(NodeKind::Dict, role, start);
            for (k, v) in d.keys.iter().zip(&d.values) {
                if let Some(k) = k {
                    t.children.push(expr(k, Role::Key));
                }
                t.children.push(expr(v, Role::Value));
            }
            t
        }
        E::Set(s) => Tmp::new(NodeKind::Set, role, start).children(exprs(&s.elts, Role::Element)),
        E::ListComp(c) => Tmp::new(NodeKind::ListComp, role, start)
            .child(expr(&c.elt, Role::Elt))
            .children(comprehensions(&c.generators)),
        E::SetComp(c) => Tmp::new(NodeKind::SetComp, role, start)
            .child(expr(&c.elt, Role::Elt))
            .children(comprehensions(&c.generators)),
        E::DictComp(c) => Tmp::new(NodeKind::DictComp, role, start)
            .child(expr(&c.key, Role::Key))
            .child(expr(&c.value, Role::Value))
            .children(comprehensions(&c.generators)),
        E::GeneratorExp(c) => Tmp::new(NodeKind::GeneratorExp, role, start)
            .child(expr(&c.elt, Role::Elt))
            .children(comprehensions(&c.generators)),
        E::Await(a) => Tmp::new(NodeKind::Await, role, start).child(expr(&a.value, Role::Value)),
        E::Yield(y) => {
            Tmp::new(NodeKind::Yield, role, start).children(opt_expr(y.value.as_deref(), Role::Value))
        }
        E::YieldFrom(y) => Tmp::new(NodeKind::YieldFrom, role, start).child(expr(&y.value, Role::Value)),
        E::Compare(c) => {
            let mut t = Tmp::new(NodeKind::Compare, role, start)
                .child(expr(&c.left, Role::Left))
                .children(exprs(&c.comparators, Role::Comparator));
            t.ops = c.ops.iter().map(cmp_op).collect();
            t
        }
        E::Call(c) => Tmp::new(NodeKind::Call, role, start)
            .child(expr(&c.func, Role::Func))
            .children(exprs(&c.args, Role::Arg))
            .children(c.keywords.iter().map(keyword)),
        E::FormattedValue(f) => Tmp::new(NodeKind::FormattedValue, role, start)
            .child(expr(&f.value, Role::Value))
            .children(opt_expr(f.format_spec.as_deref(), Role::FormatSpec)),
        E::JoinedStr(j) => Tmp::new(NodeKind::JoinedStr, role, start).children(exprs(&j.values, Role::Element)),
        E::Constant(c) => {
            let mut t = Tmp::new(NodeKind::Constant, role, start);
            t.literal = Some(literal(&c.value));
            t
        }
        E::Attribute(a) => Tmp::new(NodeKind::Attribute, role, start)
            .ident(a.attr.as_str())
            .child(expr(&a.value, Role::Value)),
        E::Subscript(s) => Tmp::new(NodeKind::Subscript, role, start)
            .child(expr(&s.value, Role::Value))
            .child(expr(&s.slice, Role::Slice)),
        E::Starred(s) => Tmp::new(NodeKind::Starred, role, start).child(expr(&s.value, Role::Value)),
        E::Name(n) => Tmp::new(NodeKind::Name, role, start).ident(n.id.as_str()),
        E::List(l) => Tmp::new(NodeKind::List, role, start).children(exprs(&l.elts, Role::Element)),
        E::Tuple(t) => Tmp::new(NodeKind::Tuple, role, start).children(exprs(&t.elts, Role::Element)),
        E::Slice(s) => Tmp::new(NodeKind::Slice, role, start)
            .children(opt_expr(s.lower.as_deref(), Role::Lower))
            .children(opt_expr(s.upper.as_deref(), Role::Upper))
            .children(opt_expr(s.step.as_deref(), Role::Step)),
    }
}

fn literal(c: &ast::Constant) -> Literal {
    match c {
        ast::Constant::None => Literal::None,
        ast::Constant::Bool(b) => Literal::Bool(*b),
        ast::Constant::Str(s) => Literal::Str(s.clone()),
        ast::Constant::Bytes(_) => Literal::Bytes,
        ast::Constant::Int(i) => Literal::Int(i.to_string()),
        ast::Constant::Tuple(_) => Literal::Ellipsis,
        ast::Constant::Float(f) => Literal::Float(*f),
        ast::Constant::Complex { .. } => Literal::Complex,
        ast::Constant::Ellipsis => Literal::Ellipsis,
    }
}

fn operator(op: &ast::Operator) -> Op {
    use ast::Operator as O;
    match op {
        O::Add => Op::Add,
        O::Sub => Op::Sub,
        O::Mult => Op::Mult,
        O::MatMult => Op::MatMult,
        O::Div => Op::Div,
        O::Mod => Op::Mod,
        O::Pow => Op::Pow,
        O::LShift => Op::LShift,
        O::RShift => Op::RShift,
        O::BitOr => Op::BitOr,
        O::BitXor => Op::BitXor,
        O::BitAnd => Op::BitAnd,
        O::FloorDiv => Op::FloorDiv,
    }
}

fn cmp_op(op: &ast::CmpOp) -> Op {
    use ast::CmpOp as C;
    match op {
        C::Eq => Op::Eq,
        C::NotEq => Op::NotEq,
        C::Lt => Op::Lt,
        C::LtE => Op::LtE,
        C::Gt => Op::Gt,
        C::GtE => Op::GtE,
        C::Is => Op::Is,
        C::IsNot => Op::IsNot,
        C::In => Op::In,
        C::NotIn => Op::NotIn,
    }
}
