use crate::core_ir::{reverse, CoreStmt};

/// Replaces every `with a do b` by `a; b; reverse(a)`, innermost first.
pub fn expand_with(s: &CoreStmt) -> CoreStmt {
    match s {
        CoreStmt::Seq(v) => CoreStmt::seq(v.iter().map(expand_with)),
        CoreStmt::If { guard, body, span } => CoreStmt::if_(guard.clone(), expand_with(body), *span),
        CoreStmt::WithDo { with, body, .. } => {
            let a = expand_with(with);
            let b = expand_with(body);
            let r = reverse(&a);
            CoreStmt::seq(vec![a, b, r])
        }
        other => other.clone(),
    }
}
