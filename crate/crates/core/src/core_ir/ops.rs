use super::{CoreExpr, CoreStmt, CoreValue};
use std::collections::BTreeSet;

/// Syntactic inverse of a statement.
pub fn reverse(s: &CoreStmt) -> CoreStmt {
    match s {
        CoreStmt::Skip => CoreStmt::Skip,
        CoreStmt::Seq(v) => CoreStmt::Seq(v.iter().rev().map(reverse).collect()),
        CoreStmt::If { guard, body, span } => {
            CoreStmt::If { guard: guard.clone(), body: Box::new(reverse(body)), span: *span }
        }
        CoreStmt::Bind { var, expr, span } => {
            CoreStmt::Unbind { var: var.clone(), expr: expr.clone(), span: *span }
        }
        CoreStmt::Unbind { var, expr, span } => {
            CoreStmt::Bind { var: var.clone(), expr: expr.clone(), span: *span }
        }
        CoreStmt::WithDo { with, body, span } => {
            CoreStmt::WithDo { with: with.clone(), body: Box::new(reverse(body)), span: *span }
        }
        CoreStmt::Had { .. } | CoreStmt::Swap { .. } | CoreStmt::MemSwap { .. } => s.clone(),
    }
}

/// Variables a statement may change.
pub fn modified(s: &CoreStmt) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_modified(s, &mut out);
    out
}

fn collect_modified(s: &CoreStmt, out: &mut BTreeSet<String>) {
    match s {
        CoreStmt::Skip => {}
        CoreStmt::Seq(v) => v.iter().for_each(|x| collect_modified(x, out)),
        CoreStmt::If { body, .. } => collect_modified(body, out),
        CoreStmt::Bind { var, .. } | CoreStmt::Unbind { var, .. } | CoreStmt::Had { var, .. } => {
            out.insert(var.clone());
        }
        CoreStmt::Swap { a, b, .. } => {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        CoreStmt::MemSwap { val, .. } => {
            out.insert(val.clone());
        }
        CoreStmt::WithDo { with, body, .. } => {
            collect_modified(with, out);
            collect_modified(body, out);
        }
    }
}

/// Calls `f` on every statement node, parents first.
pub fn visit(s: &CoreStmt, f: &mut impl FnMut(&CoreStmt)) {
    f(s);
    match s {
        CoreStmt::Seq(v) => v.iter().for_each(|x| visit(x, f)),
        CoreStmt::If { body, .. } => visit(body, f),
        CoreStmt::WithDo { with, body, .. } => {
            visit(with, f);
            visit(body, f);
        }
        _ => {}
    }
}

pub fn expr_vars(e: &CoreExpr) -> Vec<&str> {
    match e {
        CoreExpr::Val(CoreValue::Var(x)) => vec![x],
        CoreExpr::Val(CoreValue::Pair(a, b)) => vec![a, b],
        CoreExpr::Val(_) => vec![],
        CoreExpr::Proj(_, x) | CoreExpr::Un(_, x) => vec![x],
        CoreExpr::Bin(a, _, b) => vec![a, b],
    }
}

/// Every variable mentioned by a statement.
pub fn stmt_vars(s: &CoreStmt) -> BTreeSet<String> {
    fn go(s: &CoreStmt, out: &mut BTreeSet<String>) {
        match s {
            CoreStmt::Skip => {}
            CoreStmt::Seq(v) => v.iter().for_each(|x| go(x, out)),
            CoreStmt::If { guard, body, .. } => {
                out.insert(guard.clone());
                go(body, out);
            }
            CoreStmt::Bind { var, expr, .. } | CoreStmt::Unbind { var, expr, .. } => {
                out.insert(var.clone());
                out.extend(expr_vars(expr).into_iter().map(String::from));
            }
            CoreStmt::Had { var, .. } => {
                out.insert(var.clone());
            }
            CoreStmt::Swap { a: x, b: y, .. } | CoreStmt::MemSwap { ptr: x, val: y, .. } => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            CoreStmt::WithDo { with, body, .. } => {
                go(with, out);
                go(body, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(s, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Span;

    #[test]
    fn reverse_seq_and_bind() {
        let sp = Span::default();
        let s = CoreStmt::seq(vec![
            CoreStmt::bind("x", CoreExpr::Val(CoreValue::Num(1)), sp),
            CoreStmt::Had { var: "x".into(), span: sp },
        ]);
        let r = reverse(&s);
        assert_eq!(
            r,
            CoreStmt::Seq(vec![
                CoreStmt::Had { var: "x".into(), span: sp },
                CoreStmt::unbind("x", CoreExpr::Val(CoreValue::Num(1)), sp),
            ])
        );
        assert_eq!(reverse(&r), s);
    }

    #[test]
    fn modified_of_with_is_union() {
        let sp = Span::default();
        let s = CoreStmt::with_do(
            CoreStmt::bind("t", CoreExpr::var("z"), sp),
            CoreStmt::if_("z", CoreStmt::bind("a", CoreExpr::Un(super::super::UnOp::Not, "t".into()), sp), sp),
            sp,
        );
        let m: Vec<_> = modified(&s).into_iter().collect();
        assert_eq!(m, vec!["a", "t"]);
    }
}
