use super::ast::*;
use crate::core_ir::print_type;
use std::fmt::Write;

pub fn print_depth(d: &DepthExpr) -> String {
    match d {
        DepthExpr::Lit(n) => n.to_string(),
        DepthExpr::Param(x) => x.clone(),
        DepthExpr::Add(a, b) => format!("{} + {}", print_depth(a), print_depth(b)),
        DepthExpr::Sub(a, b) => format!("{} - {}", print_depth(a), print_depth(b)),
    }
}

pub fn print_sexpr(e: &SExpr) -> String {
    match e {
        SExpr::Var(x) => x.clone(),
        SExpr::Int(n) => n.to_string(),
        SExpr::True => "true".into(),
        SExpr::False => "false".into(),
        SExpr::Unit => "()".into(),
        SExpr::Null(None) => "null".into(),
        SExpr::Null(Some(t)) => format!("null<{}>", print_type(t)),
        SExpr::Default(t) => format!("default<{}>", print_type(t)),
        SExpr::Alloc(t) => format!("alloc<{}>", print_type(t)),
        SExpr::Pair(a, b) => format!("({}, {})", print_sexpr(a), print_sexpr(b)),
        SExpr::Proj(a, i) => match **a {
            SExpr::Bin(..) | SExpr::Not(_) => format!("({}).{i}", print_sexpr(a)),
            _ => format!("{}.{i}", print_sexpr(a)),
        },
        SExpr::Not(a) => match **a {
            SExpr::Bin(..) => format!("not ({})", print_sexpr(a)),
            _ => format!("not {}", print_sexpr(a)),
        },
        SExpr::Bin(l, op, r) => {
            let p = op.precedence();
            let side = |x: &SExpr, strict: bool| match x {
                SExpr::Bin(_, o, _) if o.precedence() < p || (strict && o.precedence() == p) => {
                    format!("({})", print_sexpr(x))
                }
                _ => print_sexpr(x),
            };
            format!("{} {} {}", side(l, false), op.symbol(), side(r, true))
        }
        SExpr::Call { func, statics, args } => {
            let mut s = func.clone();
            if !statics.is_empty() {
                let ds: Vec<_> = statics.iter().map(print_depth).collect();
                let _ = write!(s, "[{}]", ds.join(", "));
            }
            let xs: Vec<_> = args.iter().map(print_sexpr).collect();
            let _ = write!(s, "({})", xs.join(", "));
            s
        }
    }
}

pub fn print_block(b: &[SStmt], depth: usize) -> String {
    let mut out = String::new();
    for s in b {
        write_stmt(&mut out, s, depth);
    }
    out
}

fn write_stmt(out: &mut String, s: &SStmt, depth: usize) {
    let pad = "  ".repeat(depth);
    match s {
        SStmt::Let { var, dir, expr, .. } => {
            let arrow = if *dir == Dir::Bind { "<-" } else { "->" };
            let _ = writeln!(out, "{pad}let {var} {arrow} {};", print_sexpr(expr));
        }
        SStmt::Swap { a, b, .. } => {
            let _ = writeln!(out, "{pad}{a} <-> {b};");
        }
        SStmt::MemSwap { ptr, val, .. } => {
            let _ = writeln!(out, "{pad}*{ptr} <-> {val};");
        }
        SStmt::Had { var, .. } => {
            let _ = writeln!(out, "{pad}had {var};");
        }
        SStmt::Skip { .. } => {
            let _ = writeln!(out, "{pad}skip;");
        }
        SStmt::If { cond, then_, else_, .. } => {
            let _ = writeln!(out, "{pad}if {} {{", print_sexpr(cond));
            out.push_str(&print_block(then_, depth + 1));
            match else_ {
                Some(e) => {
                    let _ = writeln!(out, "{pad}}} else {{");
                    out.push_str(&print_block(e, depth + 1));
                    let _ = writeln!(out, "{pad}}}");
                }
                None => {
                    let _ = writeln!(out, "{pad}}}");
                }
            }
        }
        SStmt::With { with, body, .. } => {
            let _ = writeln!(out, "{pad}with {{");
            out.push_str(&print_block(with, depth + 1));
            let _ = writeln!(out, "{pad}}} do {{");
            out.push_str(&print_block(body, depth + 1));
            let _ = writeln!(out, "{pad}}}");
        }
        SStmt::Reversed { body, .. } => {
            // Only produced by inlining; not accepted by the parser.
            let _ = writeln!(out, "{pad}reverse {{");
            out.push_str(&print_block(body, depth + 1));
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

pub fn print_program(p: &SurfaceProgram) -> String {
    let mut out = String::new();
    for (n, t) in &p.types {
        let _ = writeln!(out, "type {n} = {};", print_type(t));
    }
    for f in &p.functions {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = write!(out, "fun {}", f.name);
        if !f.statics.is_empty() {
            let _ = write!(out, "[{}]", f.statics.join(", "));
        }
        let ps: Vec<_> = f.params.iter().map(|(x, t)| format!("{x}: {}", print_type(t))).collect();
        let _ = write!(out, "({})", ps.join(", "));
        if let Some(t) = &f.ret_type {
            let _ = write!(out, " -> {}", print_type(t));
        }
        out.push_str(" {\n");
        out.push_str(&print_block(&f.body, 1));
        if let Some(r) = &f.ret {
            let _ = writeln!(out, "  return {r};");
        }
        out.push_str("}\n");
    }
    out
}
