use crate::core_ir::{BinOp, CoreType};
use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Var(String),
    Int(u64),
    True,
    False,
    Unit,
    /// `null` with an optional annotation. Bare `null` is only legal in comparisons.
    Null(Option<CoreType>),
    Default(CoreType),
    Alloc(CoreType),
    Pair(Box<SExpr>, Box<SExpr>),
    Proj(Box<SExpr>, u8),
    Not(Box<SExpr>),
    /// `>` is kept as its own operator so the printer round-trips.
    Bin(Box<SExpr>, SBinOp, Box<SExpr>),
    Call { func: String, statics: Vec<DepthExpr>, args: Vec<SExpr> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SBinOp {
    Core(BinOp),
    Gt,
}

impl SBinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            SBinOp::Core(op) => op.symbol(),
            SBinOp::Gt => ">",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            SBinOp::Core(BinOp::Or) => 1,
            SBinOp::Core(BinOp::And) => 2,
            SBinOp::Core(BinOp::Eq | BinOp::Neq | BinOp::Lt) | SBinOp::Gt => 3,
            SBinOp::Core(BinOp::Add | BinOp::Sub) => 4,
            SBinOp::Core(BinOp::Mul) => 5,
        }
    }
}

/// Static arithmetic over the function's static parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DepthExpr {
    Lit(i64),
    Param(String),
    Add(Box<DepthExpr>, Box<DepthExpr>),
    Sub(Box<DepthExpr>, Box<DepthExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Bind,
    Unbind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SStmt {
    Let { var: String, dir: Dir, expr: SExpr, span: Span },
    Swap { a: String, b: String, span: Span },
    MemSwap { ptr: String, val: String, span: Span },
    Had { var: String, span: Span },
    Skip { span: Span },
    If { cond: SExpr, then_: Vec<SStmt>, else_: Option<Vec<SStmt>>, span: Span },
    With { with: Vec<SStmt>, body: Vec<SStmt>, span: Span },
    /// Produced by inlining an unassigned call: the reverse of the inner block.
    Reversed { body: Vec<SStmt>, span: Span },
}

impl SStmt {
    pub fn span(&self) -> Span {
        match self {
            SStmt::Let { span, .. }
            | SStmt::Swap { span, .. }
            | SStmt::MemSwap { span, .. }
            | SStmt::Had { span, .. }
            | SStmt::Skip { span }
            | SStmt::If { span, .. }
            | SStmt::With { span, .. }
            | SStmt::Reversed { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub statics: Vec<String>,
    pub params: Vec<(String, CoreType)>,
    pub ret_type: Option<CoreType>,
    pub body: Vec<SStmt>,
    pub ret: Option<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceProgram {
    pub types: Vec<(String, CoreType)>,
    pub functions: Vec<FunctionDef>,
}

impl SurfaceProgram {
    pub fn entry(&self) -> Option<&FunctionDef> {
        self.functions.last()
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }
}
