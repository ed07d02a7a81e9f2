//! The core statement language: types, values, expressions, statements.

mod check;
mod ops;
mod printer;

pub use check::{check_program, check_stmt, check_stmt_unscoped, type_of_expr, CheckError, CheckErrorKind, Context};
pub use ops::{expr_vars, modified, reverse, stmt_vars, visit};
pub use printer::{print_expr, print_stmt, print_type, print_value};

use crate::span::Span;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Alias table for named (possibly recursive) types.
pub type Aliases = Arc<BTreeMap<String, CoreType>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreType {
    Unit,
    Uint,
    Bool,
    Pair(Box<CoreType>, Box<CoreType>),
    Ptr(Box<CoreType>),
    /// Reference to a type alias. Only legal where the alias table resolves it.
    Named(String),
}

impl CoreType {
    pub fn pair(a: CoreType, b: CoreType) -> Self {
        CoreType::Pair(Box::new(a), Box::new(b))
    }

    pub fn ptr(t: CoreType) -> Self {
        CoreType::Ptr(Box::new(t))
    }

    /// Unfolds aliases at the top level.
    pub fn resolve<'a>(&'a self, aliases: &'a BTreeMap<String, CoreType>) -> Option<&'a CoreType> {
        let mut t = self;
        for _ in 0..=aliases.len() {
            match t {
                CoreType::Named(n) => t = aliases.get(n)?,
                other => return Some(other),
            }
        }
        None
    }

    /// Bit width when `uint` and pointers are `k` bits wide.
    pub fn width(&self, k: u32, aliases: &BTreeMap<String, CoreType>) -> Option<u32> {
        match self.resolve(aliases)? {
            CoreType::Unit => Some(0),
            CoreType::Bool => Some(1),
            CoreType::Uint | CoreType::Ptr(_) => Some(k),
            CoreType::Pair(a, b) => Some(a.width(k, aliases)? + b.width(k, aliases)?),
            CoreType::Named(_) => None,
        }
    }

    /// Structural equality up to alias unfolding. Recursive types are
    /// compared coinductively.
    pub fn equiv(&self, other: &CoreType, aliases: &BTreeMap<String, CoreType>) -> bool {
        fn go(
            a: &CoreType,
            b: &CoreType,
            al: &BTreeMap<String, CoreType>,
            seen: &mut Vec<(CoreType, CoreType)>,
        ) -> bool {
            if a == b {
                return true;
            }
            if matches!(a, CoreType::Named(_)) || matches!(b, CoreType::Named(_)) {
                let key = (a.clone(), b.clone());
                if seen.contains(&key) {
                    return true;
                }
                seen.push(key);
            }
            let (Some(ra), Some(rb)) = (a.resolve(al), b.resolve(al)) else {
                return false;
            };
            match (ra, rb) {
                (CoreType::Unit, CoreType::Unit)
                | (CoreType::Uint, CoreType::Uint)
                | (CoreType::Bool, CoreType::Bool) => true,
                (CoreType::Pair(a1, a2), CoreType::Pair(b1, b2)) => {
                    go(a1, b1, al, seen) && go(a2, b2, al, seen)
                }
                (CoreType::Ptr(x), CoreType::Ptr(y)) => go(x, y, al, seen),
                _ => false,
            }
        }
        go(self, other, aliases, &mut Vec::new())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoreValue {
    Var(String),
    Unit,
    Pair(String, String),
    Num(u64),
    True,
    False,
    Null(CoreType),
    /// A literal heap address of a cell holding the given type.
    Addr(CoreType, u64),
    /// The all-zero value of a type.
    Zero(CoreType),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Not,
    Test,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Add,
    Sub,
    Mul,
    Eq,
    Neq,
    Lt,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "==",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoreExpr {
    Val(CoreValue),
    /// `x.1` or `x.2`.
    Proj(u8, String),
    Un(UnOp, String),
    Bin(String, BinOp, String),
}

impl CoreExpr {
    pub fn var(x: impl Into<String>) -> Self {
        CoreExpr::Val(CoreValue::Var(x.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoreStmt {
    Skip,
    Seq(Vec<CoreStmt>),
    If { guard: String, body: Box<CoreStmt>, span: Span },
    Bind { var: String, expr: CoreExpr, span: Span },
    Unbind { var: String, expr: CoreExpr, span: Span },
    Had { var: String, span: Span },
    Swap { a: String, b: String, span: Span },
    /// `*ptr <-> val`.
    MemSwap { ptr: String, val: String, span: Span },
    WithDo { with: Box<CoreStmt>, body: Box<CoreStmt>, span: Span },
}

impl CoreStmt {
    /// Builds a sequence, flattening nested sequences and dropping skips.
    pub fn seq(items: impl IntoIterator<Item = CoreStmt>) -> CoreStmt {
        let mut out = Vec::new();
        for s in items {
            match s {
                CoreStmt::Skip => {}
                CoreStmt::Seq(v) => out.extend(v),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => CoreStmt::Skip,
            1 => out.pop().unwrap(),
            _ => CoreStmt::Seq(out),
        }
    }

    pub fn if_(guard: impl Into<String>, body: CoreStmt, span: Span) -> CoreStmt {
        CoreStmt::If { guard: guard.into(), body: Box::new(body), span }
    }

    pub fn with_do(with: CoreStmt, body: CoreStmt, span: Span) -> CoreStmt {
        CoreStmt::WithDo { with: Box::new(with), body: Box::new(body), span }
    }

    pub fn bind(var: impl Into<String>, expr: CoreExpr, span: Span) -> CoreStmt {
        CoreStmt::Bind { var: var.into(), expr, span }
    }

    pub fn unbind(var: impl Into<String>, expr: CoreExpr, span: Span) -> CoreStmt {
        CoreStmt::Unbind { var: var.into(), expr, span }
    }

    /// Elements when viewed as a sequence.
    pub fn items(&self) -> &[CoreStmt] {
        match self {
            CoreStmt::Seq(v) => v,
            CoreStmt::Skip => &[],
            other => std::slice::from_ref(other),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            CoreStmt::Skip => Span::default(),
            CoreStmt::Seq(v) => v.first().map(|s| s.span()).unwrap_or_default(),
            CoreStmt::If { span, .. }
            | CoreStmt::Bind { span, .. }
            | CoreStmt::Unbind { span, .. }
            | CoreStmt::Had { span, .. }
            | CoreStmt::Swap { span, .. }
            | CoreStmt::MemSwap { span, .. }
            | CoreStmt::WithDo { span, .. } => *span,
        }
    }

    /// Number of statement nodes, used as a size bound.
    pub fn size(&self) -> usize {
        match self {
            CoreStmt::Seq(v) => v.iter().map(|s| s.size()).sum(),
            CoreStmt::If { body, .. } => 1 + body.size(),
            CoreStmt::WithDo { with, body, .. } => 1 + with.size() + body.size(),
            CoreStmt::Skip => 0,
            _ => 1,
        }
    }
}

/// Heap description for programs that allocate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapInfo {
    pub cell_type: CoreType,
    /// Component (1 or 2) holding the free-list link.
    pub link: u8,
    pub head: String,
}

/// A whole core program: ordered inputs and a body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreProgram {
    pub name: String,
    pub inputs: Vec<(String, CoreType)>,
    pub body: CoreStmt,
    pub aliases: Aliases,
    pub heap: Option<HeapInfo>,
    pub ret: Option<String>,
}

impl CoreProgram {
    pub fn initial_context(&self) -> Context {
        let mut ctx = Context::new(self.aliases.clone());
        for (x, t) in &self.inputs {
            ctx.push(x.clone(), t.clone());
        }
        ctx
    }

    pub fn with_body(&self, body: CoreStmt) -> CoreProgram {
        CoreProgram { body, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list_aliases() -> BTreeMap<String, CoreType> {
        let mut m = BTreeMap::new();
        m.insert(
            "list".into(),
            CoreType::pair(CoreType::Uint, CoreType::ptr(CoreType::Named("list".into()))),
        );
        m
    }

    #[test]
    fn widths() {
        let al = list_aliases();
        assert_eq!(CoreType::Named("list".into()).width(8, &al), Some(16));
        assert_eq!(CoreType::pair(CoreType::Bool, CoreType::Unit).width(8, &al), Some(1));
    }

    #[test]
    fn recursive_types_unfold_equal() {
        let al = list_aliases();
        let unfolded = CoreType::pair(CoreType::Uint, CoreType::ptr(CoreType::Named("list".into())));
        assert!(CoreType::Named("list".into()).equiv(&unfolded, &al));
        assert!(CoreType::ptr(CoreType::Named("list".into())).equiv(&CoreType::ptr(unfolded), &al));
        assert!(!CoreType::Uint.equiv(&CoreType::Bool, &al));
    }

    #[test]
    fn seq_flattens() {
        let b = CoreStmt::Had { var: "x".into(), span: Span::default() };
        let s = CoreStmt::seq(vec![CoreStmt::Skip, CoreStmt::seq(vec![b.clone(), b.clone()]), b.clone()]);
        assert_eq!(s.items().len(), 3);
        assert_eq!(CoreStmt::seq(vec![CoreStmt::Skip]), CoreStmt::Skip);
        assert_eq!(CoreStmt::seq(vec![b.clone()]), b);
    }
}
