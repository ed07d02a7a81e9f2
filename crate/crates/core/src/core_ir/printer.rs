use super::{CoreExpr, CoreStmt, CoreType, CoreValue, UnOp};
use std::fmt::Write;

pub fn print_type(t: &CoreType) -> String {
    match t {
        CoreType::Unit => "()".into(),
        CoreType::Uint => "uint".into(),
        CoreType::Bool => "bool".into(),
        CoreType::Pair(a, b) => format!("({}, {})", print_type(a), print_type(b)),
        CoreType::Ptr(t) => format!("ptr<{}>", print_type(t)),
        CoreType::Named(n) => n.clone(),
    }
}

pub fn print_value(v: &CoreValue) -> String {
    match v {
        CoreValue::Var(x) => x.clone(),
        CoreValue::Unit => "()".into(),
        CoreValue::Pair(a, b) => format!("({a}, {b})"),
        CoreValue::Num(n) => n.to_string(),
        CoreValue::True => "true".into(),
        CoreValue::False => "false".into(),
        CoreValue::Null(t) => format!("null<{}>", print_type(t)),
        CoreValue::Addr(t, p) => format!("addr<{}>({p})", print_type(t)),
        CoreValue::Zero(t) => format!("default<{}>", print_type(t)),
    }
}

pub fn print_expr(e: &CoreExpr) -> String {
    match e {
        CoreExpr::Val(v) => print_value(v),
        CoreExpr::Proj(i, x) => format!("{x}.{i}"),
        CoreExpr::Un(UnOp::Not, x) => format!("not {x}"),
        CoreExpr::Un(UnOp::Test, x) => format!("test {x}"),
        CoreExpr::Bin(a, op, b) => format!("{a} {} {b}", op.symbol()),
    }
}

/// Renders a statement with two-space indentation.
pub fn print_stmt(s: &CoreStmt) -> String {
    let mut out = String::new();
    write_stmt(&mut out, s, 0);
    out
}

fn write_stmt(out: &mut String, s: &CoreStmt, depth: usize) {
    let pad = "  ".repeat(depth);
    match s {
        CoreStmt::Skip => {
            let _ = writeln!(out, "{pad}skip;");
        }
        CoreStmt::Seq(v) => v.iter().for_each(|x| write_stmt(out, x, depth)),
        CoreStmt::If { guard, body, .. } => {
            let _ = writeln!(out, "{pad}if {guard} {{");
            write_stmt(out, body, depth + 1);
            let _ = writeln!(out, "{pad}}}");
        }
        CoreStmt::Bind { var, expr, .. } => {
            let _ = writeln!(out, "{pad}let {var} <- {};", print_expr(expr));
        }
        CoreStmt::Unbind { var, expr, .. } => {
            let _ = writeln!(out, "{pad}let {var} -> {};", print_expr(expr));
        }
        CoreStmt::Had { var, .. } => {
            let _ = writeln!(out, "{pad}had {var};");
        }
        CoreStmt::Swap { a, b, .. } => {
            let _ = writeln!(out, "{pad}{a} <-> {b};");
        }
        CoreStmt::MemSwap { ptr, val, .. } => {
            let _ = writeln!(out, "{pad}*{ptr} <-> {val};");
        }
        CoreStmt::WithDo { with, body, .. } => {
            let _ = writeln!(out, "{pad}with {{");
            write_stmt(out, with, depth + 1);
            let _ = writeln!(out, "{pad}}} do {{");
            write_stmt(out, body, depth + 1);
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Span;

    #[test]
    fn prints_with_block() {
        let sp = Span::default();
        let s = CoreStmt::with_do(
            CoreStmt::bind("t", CoreExpr::var("z"), sp),
            CoreStmt::if_("z", CoreStmt::bind("a", CoreExpr::Un(UnOp::Not, "t".into()), sp), sp),
            sp,
        );
        assert_eq!(
            print_stmt(&s),
            "with {\n  let t <- z;\n} do {\n  if z {\n    let a <- not t;\n  }\n}\n"
        );
    }
}
