use super::{
    expr_vars, modified, reverse, Aliases, BinOp, CoreExpr, CoreProgram, CoreStmt, CoreType,
    CoreValue, UnOp,
};
use crate::core_ir::print_type;
use crate::span::Span;
use std::collections::BTreeSet;
use std::fmt;

/// Ordered typing context. Later bindings shadow earlier ones.
#[derive(Clone, Debug)]
pub struct Context {
    bindings: Vec<(String, CoreType)>,
    aliases: Aliases,
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.bindings.len() == other.bindings.len()
            && self
                .bindings
                .iter()
                .zip(&other.bindings)
                .all(|((x, t), (y, u))| x == y && t.equiv(u, &self.aliases))
    }
}

impl Context {
    pub fn new(aliases: Aliases) -> Self {
        Context { bindings: Vec::new(), aliases }
    }

    pub fn aliases(&self) -> &Aliases {
        &self.aliases
    }

    pub fn lookup(&self, x: &str) -> Option<&CoreType> {
        self.bindings.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn push(&mut self, x: String, t: CoreType) {
        self.bindings.push((x, t));
    }

    /// Removes the most recent binding of `x`.
    pub fn remove(&mut self, x: &str) -> Option<CoreType> {
        let i = self.bindings.iter().rposition(|(y, _)| y == x)?;
        Some(self.bindings.remove(i).1)
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.bindings.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn bindings(&self) -> &[(String, CoreType)] {
        &self.bindings
    }

    /// Distinct names in binding order, each with its most recent type.
    pub fn live(&self) -> Vec<(String, CoreType)> {
        let mut seen = BTreeSet::new();
        let mut out: Vec<(String, CoreType)> = Vec::new();
        for (x, _) in self.bindings.iter() {
            if seen.insert(x.clone()) {
                out.push((x.clone(), self.lookup(x).unwrap().clone()));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckErrorKind {
    Unbound(String),
    UnbindUndeclared(String),
    Mismatch { what: String, expected: String, found: String },
    GuardModified(String),
    GuardNotBool(String),
    ScopeLeak(Vec<String>),
    SelfReference(String),
    SameOperand(String),
    BadProjection(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub kind: CheckErrorKind,
    pub span: Span,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.span)?;
        match &self.kind {
            CheckErrorKind::Unbound(x) => write!(f, "unbound variable `{x}`"),
            CheckErrorKind::UnbindUndeclared(x) => write!(f, "cannot unassign undeclared `{x}`"),
            CheckErrorKind::Mismatch { what, expected, found } => {
                write!(f, "type mismatch in {what}: expected {expected}, found {found}")
            }
            CheckErrorKind::GuardModified(x) => write!(f, "guard `{x}` is modified in its body"),
            CheckErrorKind::GuardNotBool(x) => write!(f, "guard `{x}` is not bool"),
            CheckErrorKind::ScopeLeak(xs) => {
                write!(f, "if-body removes variables from scope: {}", xs.join(", "))
            }
            CheckErrorKind::SelfReference(x) => {
                write!(f, "`{x}` appears in its own right-hand side")
            }
            CheckErrorKind::SameOperand(x) => write!(f, "`{x}` used on both sides of a swap"),
            CheckErrorKind::BadProjection(x) => write!(f, "cannot project from non-pair `{x}`"),
        }
    }
}

impl std::error::Error for CheckError {}

fn err(kind: CheckErrorKind, span: Span) -> CheckError {
    CheckError { kind, span }
}

fn var_type<'a>(ctx: &'a Context, x: &str, span: Span) -> Result<&'a CoreType, CheckError> {
    ctx.lookup(x).ok_or_else(|| err(CheckErrorKind::Unbound(x.into()), span))
}

fn mismatch(what: &str, expected: &CoreType, found: &CoreType, span: Span) -> CheckError {
    err(
        CheckErrorKind::Mismatch {
            what: what.into(),
            expected: print_type(expected),
            found: print_type(found),
        },
        span,
    )
}

fn expect(ctx: &Context, x: &str, want: &CoreType, what: &str, span: Span) -> Result<(), CheckError> {
    let t = var_type(ctx, x, span)?;
    if t.equiv(want, &ctx.aliases) {
        Ok(())
    } else {
        Err(mismatch(what, want, t, span))
    }
}

pub fn type_of_expr(ctx: &Context, e: &CoreExpr, span: Span) -> Result<CoreType, CheckError> {
    let al = &ctx.aliases;
    match e {
        CoreExpr::Val(v) => Ok(match v {
            CoreValue::Var(x) => var_type(ctx, x, span)?.clone(),
            CoreValue::Unit => CoreType::Unit,
            CoreValue::Pair(a, b) => {
                CoreType::pair(var_type(ctx, a, span)?.clone(), var_type(ctx, b, span)?.clone())
            }
            CoreValue::Num(_) => CoreType::Uint,
            CoreValue::True | CoreValue::False => CoreType::Bool,
            CoreValue::Null(t) | CoreValue::Addr(t, _) => CoreType::ptr(t.clone()),
            CoreValue::Zero(t) => t.clone(),
        }),
        CoreExpr::Proj(i, x) => {
            let t = var_type(ctx, x, span)?;
            match t.resolve(al) {
                Some(CoreType::Pair(a, b)) => Ok(if *i == 1 { (**a).clone() } else { (**b).clone() }),
                _ => Err(err(CheckErrorKind::BadProjection(x.clone()), span)),
            }
        }
        CoreExpr::Un(UnOp::Not, x) => {
            expect(ctx, x, &CoreType::Bool, "not", span)?;
            Ok(CoreType::Bool)
        }
        CoreExpr::Un(UnOp::Test, x) => {
            let t = var_type(ctx, x, span)?;
            match t.resolve(al) {
                Some(CoreType::Uint | CoreType::Ptr(_)) => Ok(CoreType::Bool),
                _ => Err(mismatch("test", &CoreType::Uint, t, span)),
            }
        }
        CoreExpr::Bin(a, op, b) => match op {
            BinOp::And | BinOp::Or => {
                expect(ctx, a, &CoreType::Bool, op.symbol(), span)?;
                expect(ctx, b, &CoreType::Bool, op.symbol(), span)?;
                Ok(CoreType::Bool)
            }
            BinOp::Add | BinOp::Sub | BinOp::Mul => {
                expect(ctx, a, &CoreType::Uint, op.symbol(), span)?;
                expect(ctx, b, &CoreType::Uint, op.symbol(), span)?;
                Ok(CoreType::Uint)
            }
            BinOp::Lt => {
                expect(ctx, a, &CoreType::Uint, "<", span)?;
                expect(ctx, b, &CoreType::Uint, "<", span)?;
                Ok(CoreType::Bool)
            }
            BinOp::Eq | BinOp::Neq => {
                let ta = var_type(ctx, a, span)?.clone();
                match ta.resolve(al) {
                    Some(CoreType::Uint | CoreType::Bool | CoreType::Ptr(_)) => {}
                    _ => return Err(mismatch(op.symbol(), &CoreType::Uint, &ta, span)),
                }
                expect(ctx, b, &ta, op.symbol(), span)?;
                Ok(CoreType::Bool)
            }
        },
    }
}

/// Checks a statement and returns the output context.
pub fn check_stmt(ctx: &Context, s: &CoreStmt) -> Result<Context, CheckError> {
    check(ctx, s, true)
}

/// `check_stmt` without the condition that an if-body keeps every outer
/// variable in scope. The reverse of a well-formed statement passes this
/// check but not always the strict one: reversing `if x { let y <- e }`
/// gives an if-body that removes `y`.
pub fn check_stmt_unscoped(ctx: &Context, s: &CoreStmt) -> Result<Context, CheckError> {
    check(ctx, s, false)
}

fn check(ctx: &Context, s: &CoreStmt, scoped: bool) -> Result<Context, CheckError> {
    match s {
        CoreStmt::Skip => Ok(ctx.clone()),
        CoreStmt::Seq(v) => {
            let mut c = ctx.clone();
            for x in v {
                c = check(&c, x, scoped)?;
            }
            Ok(c)
        }
        CoreStmt::Bind { var, expr, span } => {
            if expr_vars(expr).contains(&var.as_str()) {
                return Err(err(CheckErrorKind::SelfReference(var.clone()), *span));
            }
            let t = type_of_expr(ctx, expr, *span)?;
            let mut out = ctx.clone();
            out.push(var.clone(), t);
            Ok(out)
        }
        CoreStmt::Unbind { var, expr, span } => {
            if expr_vars(expr).contains(&var.as_str()) {
                return Err(err(CheckErrorKind::SelfReference(var.clone()), *span));
            }
            let mut out = ctx.clone();
            let tx = out
                .remove(var)
                .ok_or_else(|| err(CheckErrorKind::UnbindUndeclared(var.clone()), *span))?;
            let te = type_of_expr(&out, expr, *span)?;
            if !te.equiv(&tx, &ctx.aliases) {
                return Err(mismatch("unassignment", &tx, &te, *span));
            }
            Ok(out)
        }
        CoreStmt::Had { var, span } => {
            expect(ctx, var, &CoreType::Bool, "had", *span)?;
            Ok(ctx.clone())
        }
        CoreStmt::Swap { a, b, span } => {
            if a == b {
                return Err(err(CheckErrorKind::SameOperand(a.clone()), *span));
            }
            let ta = var_type(ctx, a, *span)?.clone();
            expect(ctx, b, &ta, "swap", *span)?;
            Ok(ctx.clone())
        }
        CoreStmt::MemSwap { ptr, val, span } => {
            if ptr == val {
                return Err(err(CheckErrorKind::SameOperand(ptr.clone()), *span));
            }
            let tp = var_type(ctx, ptr, *span)?.clone();
            match tp.resolve(&ctx.aliases) {
                Some(CoreType::Ptr(inner)) => {
                    let inner = (**inner).clone();
                    expect(ctx, val, &inner, "memory swap", *span)?;
                    Ok(ctx.clone())
                }
                _ => Err(mismatch("memory swap", &CoreType::ptr(CoreType::Unit), &tp, *span)),
            }
        }
        CoreStmt::If { guard, body, span } => {
            let tg = var_type(ctx, guard, *span)?;
            if !tg.equiv(&CoreType::Bool, &ctx.aliases) {
                return Err(err(CheckErrorKind::GuardNotBool(guard.clone()), *span));
            }
            if modified(body).contains(guard) {
                return Err(err(CheckErrorKind::GuardModified(guard.clone()), *span));
            }
            let out = check(ctx, body, scoped)?;
            let after = out.domain();
            let lost: Vec<String> = ctx.domain().difference(&after).cloned().collect();
            if scoped && !lost.is_empty() {
                return Err(err(CheckErrorKind::ScopeLeak(lost), *span));
            }
            Ok(out)
        }
        CoreStmt::WithDo { with, body, .. } => {
            let c1 = check(ctx, with, scoped)?;
            let c2 = check(&c1, body, scoped)?;
            check(&c2, &reverse(with), scoped)
        }
    }
}

/// Checks a whole program from its input context.
pub fn check_program(p: &CoreProgram) -> Result<Context, CheckError> {
    check_stmt(&p.initial_context(), &p.body)
}
