//! Conditional flattening and narrowing as core IR rewrites, followed by
//! with-block normalization.

use crate::core_ir::{modified, stmt_vars, BinOp, CoreExpr, CoreStmt};
use crate::span::Fresh;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub flatten: bool,
    pub narrow: bool,
}

impl OptimizerConfig {
    pub const ALL: Self = OptimizerConfig { flatten: true, narrow: true };
    pub const NONE: Self = OptimizerConfig { flatten: false, narrow: false };

    pub fn enabled(&self) -> bool {
        self.flatten || self.narrow
    }
}

impl std::str::FromStr for OptimizerConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Self::ALL),
            "none" => Ok(Self::NONE),
            "flatten" => Ok(OptimizerConfig { flatten: true, narrow: false }),
            "narrow" => Ok(OptimizerConfig { flatten: false, narrow: true }),
            _ => Err(format!("unknown optimization `{s}` (expected all, none, flatten or narrow)")),
        }
    }
}

/// Rewrite counts from one optimizer run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OptStats {
    pub flattenings: usize,
    pub narrowings: usize,
}

struct Opt<'a> {
    cfg: OptimizerConfig,
    fresh: &'a mut Fresh,
    stats: OptStats,
}

impl Opt<'_> {
    fn stmt(&mut self, s: &CoreStmt) -> CoreStmt {
        match s {
            CoreStmt::Seq(v) => CoreStmt::seq(v.iter().map(|x| self.stmt(x))),
            CoreStmt::WithDo { with, body, span } => {
                CoreStmt::with_do(self.stmt(with), self.stmt(body), *span)
            }
            CoreStmt::If { guard, body, span } => {
                let items = body.items();
                let mut out = Vec::new();
                for seg in segments(items) {
                    out.push(match &items[seg.clone()] {
                        [e] => self.under(guard, e, *span),
                        many => match self.stmt(&CoreStmt::seq(many.iter().cloned())) {
                            CoreStmt::Skip => CoreStmt::Skip,
                            o => CoreStmt::if_(guard.clone(), o, *span),
                        },
                    });
                }
                CoreStmt::seq(out)
            }
            other => other.clone(),
        }
    }

    /// Optimizes `if x { e }` for one element `e` of the guarded sequence.
    fn under(&mut self, x: &str, e: &CoreStmt, span: crate::span::Span) -> CoreStmt {
        match e {
            CoreStmt::WithDo { with, body, span: ws } if self.cfg.narrow => {
                self.stats.narrowings += 1;
                let a = self.stmt(with);
                let b = self.stmt(&CoreStmt::if_(x, (**body).clone(), span));
                CoreStmt::with_do(a, b, *ws)
            }
            // Without narrowing the guard stays outside: guarding the header
            // would make its bindings conditional, and its reversal ill-typed.
            CoreStmt::WithDo { with, body, span: ws } => {
                let w = CoreStmt::with_do(self.stmt(with), self.stmt(body), *ws);
                CoreStmt::if_(x, w, span)
            }
            CoreStmt::If { guard: y, body, span: is } if self.cfg.flatten => {
                self.stats.flattenings += 1;
                let z = self.fresh.name("z");
                let bind = CoreStmt::bind(z.clone(), CoreExpr::Bin(x.to_string(), BinOp::And, y.clone()), *is);
                let inner = self.stmt(&CoreStmt::if_(z, (**body).clone(), *is));
                CoreStmt::with_do(bind, inner, *is)
            }
            other => match self.stmt(other) {
                CoreStmt::Skip => CoreStmt::Skip,
                o => CoreStmt::if_(x, o, span),
            },
        }
    }
}

/// Net change in binding multiplicity per variable.
fn delta(s: &CoreStmt, d: &mut BTreeMap<String, i64>) {
    match s {
        CoreStmt::Bind { var, .. } => *d.entry(var.clone()).or_default() += 1,
        CoreStmt::Unbind { var, .. } => *d.entry(var.clone()).or_default() -= 1,
        CoreStmt::Seq(v) => v.iter().for_each(|x| delta(x, d)),
        CoreStmt::If { body, .. } | CoreStmt::WithDo { body, .. } => delta(body, d),
        _ => {}
    }
}

fn le(a: &BTreeMap<String, i64>, b: &BTreeMap<String, i64>) -> bool {
    let get = |m: &BTreeMap<String, i64>, k: &String| m.get(k).copied().unwrap_or(0);
    a.keys().chain(b.keys()).all(|k| get(a, k) <= get(b, k))
}

/// Splits a guarded sequence where distributing the guard keeps every
/// piece from dropping a binding: cut points must have pointwise
/// non-decreasing multiplicities, bounded by the final ones.
fn segments(items: &[CoreStmt]) -> Vec<std::ops::Range<usize>> {
    let mut prefix = vec![BTreeMap::new()];
    for e in items {
        let mut d = prefix.last().cloned().unwrap();
        delta(e, &mut d);
        prefix.push(d);
    }
    let end = prefix.last().unwrap();
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..items.len() {
        if le(&prefix[start], &prefix[j]) && le(&prefix[j], end) {
            out.push(start..j);
            start = j;
        }
    }
    if start < items.len() {
        out.push(start..items.len());
    }
    out
}

/// Applies the enabled rewrites. Fresh guard names come from `fresh`.
pub fn optimize_stmt(s: &CoreStmt, cfg: OptimizerConfig, fresh: &mut Fresh) -> (CoreStmt, OptStats) {
    if !cfg.enabled() {
        return (s.clone(), OptStats::default());
    }
    let mut o = Opt { cfg, fresh, stats: OptStats::default() };
    let out = o.stmt(s);
    (out, o.stats)
}

fn uses_memory(s: &CoreStmt) -> bool {
    let mut m = false;
    crate::core_ir::visit(s, &mut |x| m |= matches!(x, CoreStmt::MemSwap { .. }));
    m
}

struct Footprint {
    vars: BTreeSet<String>,
    modified: BTreeSet<String>,
    memory: bool,
}

impl Footprint {
    fn of(s: &CoreStmt) -> Self {
        Footprint { vars: stmt_vars(s), modified: modified(s), memory: uses_memory(s) }
    }

    fn commutes(&self, other: &Footprint) -> bool {
        !(self.memory && other.memory)
            && self.modified.is_disjoint(&other.vars)
            && other.modified.is_disjoint(&self.vars)
    }
}

/// Merges nested with-blocks and lifts with-prefixes out of do-block
/// sequences when they commute with their siblings.
pub fn normalize_withs(s: &CoreStmt) -> CoreStmt {
    match s {
        CoreStmt::Seq(v) => CoreStmt::seq(v.iter().map(normalize_withs)),
        CoreStmt::If { guard, body, span } => CoreStmt::if_(guard.clone(), normalize_withs(body), *span),
        CoreStmt::WithDo { with, body, span } => {
            let mut header = vec![normalize_withs(with)];
            let mut items: Vec<CoreStmt> = normalize_withs(body).items().to_vec();
            loop {
                if let [CoreStmt::WithDo { with, body, .. }] = items.as_slice() {
                    header.push((**with).clone());
                    items = body.items().to_vec();
                    continue;
                }
                let prints: Vec<Footprint> = items.iter().map(Footprint::of).collect();
                let last = items.len().saturating_sub(1);
                let pick = items.iter().enumerate().find_map(|(i, it)| match it {
                    // A lifted header stays live across the later siblings, so
                    // only the last block or a one-binding header is lifted.
                    CoreStmt::WithDo { with, .. } if i == last || matches!(**with, CoreStmt::Bind { .. }) => {
                        let p = Footprint::of(with);
                        let ok = prints.iter().enumerate().all(|(j, f)| j == i || p.commutes(f));
                        ok.then_some(i)
                    }
                    _ => None,
                });
                match pick {
                    Some(i) => {
                        let CoreStmt::WithDo { with, body, .. } = items[i].clone() else { unreachable!() };
                        header.push(*with);
                        items.splice(i..=i, body.items().iter().cloned());
                    }
                    None => break,
                }
            }
            let header = CoreStmt::seq(header);
            let body = CoreStmt::seq(items);
            if header == CoreStmt::Skip {
                body
            } else {
                CoreStmt::with_do(header, body, *span)
            }
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_ir::{CoreValue, UnOp};
    use crate::span::Span;

    fn sp() -> Span {
        Span::default()
    }

    fn bind(x: &str, e: CoreExpr) -> CoreStmt {
        CoreStmt::bind(x, e, sp())
    }

    #[test]
    fn flattening_rule() {
        let s = CoreStmt::if_("x", CoreStmt::if_("y", bind("a", CoreExpr::Val(CoreValue::True)), sp()), sp());
        let (o, st) = optimize_stmt(&s, OptimizerConfig::ALL, &mut Fresh::new());
        let want = CoreStmt::with_do(
            bind("z__0", CoreExpr::Bin("x".into(), BinOp::And, "y".into())),
            CoreStmt::if_("z__0", bind("a", CoreExpr::Val(CoreValue::True)), sp()),
            sp(),
        );
        assert_eq!(o, want);
        assert_eq!(st.flattenings, 1);
    }

    #[test]
    fn rebinding_stays_under_one_guard() {
        let body = CoreStmt::seq(vec![
            bind("a", CoreExpr::Val(CoreValue::True)),
            CoreStmt::unbind("o", CoreExpr::Val(CoreValue::Num(0)), sp()),
            CoreStmt::bind("o", CoreExpr::Val(CoreValue::Num(1)), sp()),
        ]);
        let s = CoreStmt::if_("x", body, sp());
        let (o, _) = optimize_stmt(&s, OptimizerConfig::ALL, &mut Fresh::new());
        let items = o.items();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0], CoreStmt::if_("x", bind("a", CoreExpr::Val(CoreValue::True)), sp()));
        assert!(matches!(&items[1], CoreStmt::If { body, .. } if body.items().len() == 2));
    }

    #[test]
    fn single_guarded_primitive_unchanged() {
        let s = CoreStmt::if_("x", bind("y", CoreExpr::Val(CoreValue::True)), sp());
        assert_eq!(optimize_stmt(&s, OptimizerConfig::ALL, &mut Fresh::new()).0, s);
    }

    #[test]
    fn narrowing_moves_prefix_out() {
        let s = CoreStmt::if_(
            "x",
            CoreStmt::with_do(bind("t", CoreExpr::var("z")), CoreStmt::Had { var: "a".into(), span: sp() }, sp()),
            sp(),
        );
        let (o, _) = optimize_stmt(&s, OptimizerConfig::ALL, &mut Fresh::new());
        assert_eq!(
            o,
            CoreStmt::with_do(
                bind("t", CoreExpr::var("z")),
                CoreStmt::if_("x", CoreStmt::Had { var: "a".into(), span: sp() }, sp()),
                sp()
            )
        );
    }

    #[test]
    fn sequences_distribute() {
        let a = bind("a", CoreExpr::Val(CoreValue::True));
        let b = bind("b", CoreExpr::Un(UnOp::Not, "c".into()));
        let s = CoreStmt::if_("x", CoreStmt::seq(vec![a.clone(), b.clone()]), sp());
        let (o, _) = optimize_stmt(&s, OptimizerConfig::ALL, &mut Fresh::new());
        assert_eq!(o, CoreStmt::seq(vec![CoreStmt::if_("x", a, sp()), CoreStmt::if_("x", b, sp())]));
    }

    #[test]
    fn nested_with_merges() {
        let a = bind("a", CoreExpr::var("p"));
        let b = bind("b", CoreExpr::var("q"));
        let c = CoreStmt::Had { var: "h".into(), span: sp() };
        let s = CoreStmt::with_do(a.clone(), CoreStmt::with_do(b.clone(), c.clone(), sp()), sp());
        let n = normalize_withs(&s);
        assert_eq!(n, CoreStmt::with_do(CoreStmt::seq(vec![a.clone(), b]), c.clone(), sp()));
        assert_eq!(normalize_withs(&n), n);
        let plain = CoreStmt::with_do(a, c, sp());
        assert_eq!(normalize_withs(&plain), plain);
    }

    #[test]
    fn hoists_only_commuting_prefixes() {
        let h = bind("t", CoreExpr::var("p"));
        let inner_ok = CoreStmt::with_do(bind("u", CoreExpr::var("q")), CoreStmt::Had { var: "k".into(), span: sp() }, sp());
        let sibling = CoreStmt::Had { var: "h".into(), span: sp() };
        let s = CoreStmt::with_do(h.clone(), CoreStmt::seq(vec![sibling.clone(), inner_ok]), sp());
        let n = normalize_withs(&s);
        let CoreStmt::WithDo { with, body, .. } = &n else { panic!() };
        assert_eq!(with.items().len(), 2);
        assert_eq!(body.items().len(), 2);

        // The prefix reads `h`, which the sibling modifies: no hoist.
        let inner_bad = CoreStmt::with_do(bind("u", CoreExpr::var("h")), CoreStmt::Had { var: "k".into(), span: sp() }, sp());
        let s = CoreStmt::with_do(h, CoreStmt::seq(vec![sibling, inner_bad]), sp());
        let n = normalize_withs(&s);
        let CoreStmt::WithDo { with, .. } = &n else { panic!() };
        assert_eq!(with.items().len(), 1);
    }
}
