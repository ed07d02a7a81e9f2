//! MCX- and T-complexity of core statements, priced with constants taken
//! from the gate emitter.

use crate::circuits::{emit_primitive, emit_with, gate_t, redirects};
use crate::core_ir::{reverse, Context, type_of_expr, CoreExpr, CoreProgram, CoreStmt, CoreValue};
use crate::lowering::{type_width, AbstractInstr, LowerConfig, LowerError, Opcode, Selector};
use crate::span::Span;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::sync::Mutex;

const MEM_BASE: u32 = 1 << 20;
const ANC_BASE: u32 = 1 << 24;

/// Costs of one primitive in one guard context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrimCost {
    /// Gates emitted: c^MCX.
    pub mcx: u64,
    /// T gates of the primitive with its guards stripped: c^T.
    pub t_alone: u64,
    /// T gates of the primitive as emitted under its guards.
    pub t_guarded: u64,
}

/// Per-primitive constants plus the control and controlled-H costs.
///
/// The table is keyed by the instruction the emitter receives, laid out on
/// canonical wires, so any operand width, constant, memory size and guard
/// aliasing pattern the compiler can produce has an entry. Entries are filled
/// by running the emitter on first use.
pub struct CostConstants {
    pub ctrl_t: u64,
    pub ch_t: u64,
    pub config: LowerConfig,
    table: Mutex<HashMap<AbstractInstr, PrimCost>>,
}

impl CostConstants {
    pub fn new(config: LowerConfig) -> Self {
        CostConstants { ctrl_t: 14, ch_t: crate::circuits::CH_T, config, table: Mutex::new(HashMap::new()) }
    }

    pub fn lookup(&self, key: &AbstractInstr) -> PrimCost {
        if let Some(c) = self.table.lock().unwrap().get(key) {
            return *c;
        }
        let c = price(key);
        self.table.lock().unwrap().insert(key.clone(), c);
        c
    }

    /// Snapshot of the entries generated so far.
    pub fn entries(&self) -> Vec<(AbstractInstr, PrimCost)> {
        self.table.lock().unwrap().iter().map(|(k, v)| (k.clone(), *v)).collect()
    }
}

impl Default for CostConstants {
    fn default() -> Self {
        Self::new(LowerConfig::default())
    }
}

fn price(key: &AbstractInstr) -> PrimCost {
    let (gates, _) = emit_primitive(key, ANC_BASE);
    let bare = AbstractInstr { controls: Vec::new(), ..key.clone() };
    let (alone, _) = emit_with(&bare, ANC_BASE, redirects(key));
    PrimCost {
        mcx: gates.len() as u64,
        t_alone: alone.iter().map(gate_t).sum(),
        t_guarded: gates.iter().map(gate_t).sum(),
    }
}

/// Cost attributed to one primitive occurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostRecord {
    pub span: Span,
    /// Number of enclosing `if`s.
    pub depth: usize,
    pub mcx: u64,
    pub t: u64,
    /// The part of `t` charged as c^T_ctrl per gate per control bit.
    pub t_ctrl: u64,
    /// T gates this primitive actually emits after decomposition.
    pub t_exact: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostReport {
    pub records: Vec<CostRecord>,
    pub total: CostRecord,
}

impl CostReport {
    fn push(&mut self, r: CostRecord) {
        self.total.mcx += r.mcx;
        self.total.t += r.t;
        self.total.t_ctrl += r.t_ctrl;
        self.total.t_exact += r.t_exact;
        self.records.push(r);
    }

    /// Records summed per source position, in source order.
    pub fn by_span(&self) -> Vec<CostRecord> {
        let mut m: BTreeMap<(u32, u32), CostRecord> = BTreeMap::new();
        for r in &self.records {
            let e = m.entry((r.span.line, r.span.col)).or_insert(CostRecord { span: r.span, depth: r.depth, ..Default::default() });
            e.depth = e.depth.max(r.depth);
            e.mcx += r.mcx;
            e.t += r.t;
            e.t_ctrl += r.t_ctrl;
            e.t_exact += r.t_exact;
        }
        m.into_values().collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{:<10} {:>5} {:>10} {:>10} {:>10} {:>10}\n", "span", "depth", "mcx", "t", "t_ctrl", "t_exact");
        for r in self.by_span() {
            let _ = writeln!(
                s,
                "{:<10} {:>5} {:>10} {:>10} {:>10} {:>10}",
                r.span.to_string(),
                r.depth,
                r.mcx,
                r.t,
                r.t_ctrl,
                r.t_exact
            );
        }
        let t = &self.total;
        let _ = writeln!(s, "{:<10} {:>5} {:>10} {:>10} {:>10} {:>10}", "total", "", t.mcx, t.t, t.t_ctrl, t.t_exact);
        s
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = writeln!(s, "span={} mcx={} t={} t_ctrl={} t_exact={}", r.span, r.mcx, r.t, r.t_ctrl, r.t_exact);
        }
        let t = &self.total;
        let _ = writeln!(s, "total mcx={} t={} t_ctrl={} t_exact={}", t.mcx, t.t, t.t_ctrl, t.t_exact);
        s
    }
}

fn is_literal(e: &CoreExpr) -> bool {
    matches!(e, CoreExpr::Val(v) if !matches!(v, CoreValue::Var(_) | CoreValue::Pair(..)))
}

struct Walker<'a> {
    k: &'a CostConstants,
    ctx: Context,
    guards: Vec<String>,
    report: CostReport,
}

impl Walker<'_> {
    fn width_of(&self, x: &str) -> Result<usize, LowerError> {
        let t = self.ctx.lookup(x).ok_or_else(|| LowerError::Internal(format!("`{x}` is not bound")))?;
        type_width(t, &self.k.config, &self.ctx)
    }

    /// Lays the primitive out on canonical wires: guards first, then
    /// operands in the order instruction selection asks for them.
    fn key(&self, s: &CoreStmt, dst_var: Option<(&str, usize)>) -> Result<Option<AbstractInstr>, LowerError> {
        let names: RefCell<BTreeMap<String, Vec<u32>>> = RefCell::new(BTreeMap::new());
        let next = RefCell::new(0u32);
        let take = |x: &str, w: usize| {
            let mut n = next.borrow_mut();
            let v: Vec<u32> = (*n..*n + w as u32).collect();
            *n += w as u32;
            names.borrow_mut().insert(x.to_string(), v.clone());
            v
        };
        let mut controls = Vec::new();
        for g in &self.guards {
            if !names.borrow().contains_key(g) {
                controls.extend(take(g, 1));
            }
        }
        let dst = match dst_var {
            Some((x, w)) => {
                let known = names.borrow().get(x).cloned();
                known.unwrap_or_else(|| take(x, w))
            }
            None => Vec::new(),
        };
        let memory: Vec<Vec<u32>> = match s {
            CoreStmt::MemSwap { val, .. } => {
                let w = self.width_of(val)? as u32;
                (0..self.k.config.effective_cells().saturating_sub(1))
                    .map(|c| (0..w).map(|b| MEM_BASE + c * w + b).collect())
                    .collect()
            }
            _ => Vec::new(),
        };
        let wires = |x: &str| -> Result<Vec<u32>, LowerError> {
            let known = names.borrow().get(x).cloned();
            if let Some(w) = known {
                return Ok(w);
            }
            let w = self.width_of(x)?;
            Ok(take(x, w))
        };
        let sel = Selector { ctx: &self.ctx, config: &self.k.config, controls: &controls, memory: &memory };
        Ok(sel.select(s, dst, &wires)?.map(|i| AbstractInstr { span: Span::default(), ..i }))
    }

    fn record(&mut self, s: &CoreStmt, key: Option<AbstractInstr>) {
        let Some(key) = key else { return };
        let c = self.k.lookup(&key);
        let d = self.guards.len() as u64;
        let literal = matches!(s, CoreStmt::Bind { expr, .. } | CoreStmt::Unbind { expr, .. } if is_literal(expr));
        let (t, t_ctrl) = if d == 0 {
            (c.t_alone, 0)
        } else if key.op == Opcode::Had {
            let ctrl = self.k.ctrl_t * c.mcx * (d - 1);
            (self.k.ch_t + ctrl, ctrl)
        } else if literal {
            let ctrl = self.k.ctrl_t * c.mcx * (d - 1);
            (ctrl, ctrl)
        } else {
            let ctrl = self.k.ctrl_t * c.mcx * d;
            (c.t_alone + ctrl, ctrl)
        };
        self.report.push(CostRecord {
            span: s.span(),
            depth: self.guards.len(),
            mcx: c.mcx,
            t,
            t_ctrl,
            t_exact: c.t_guarded,
        });
    }

    fn stmt(&mut self, s: &CoreStmt) -> Result<(), LowerError> {
        match s {
            CoreStmt::Skip => {}
            CoreStmt::Seq(v) => {
                for x in v {
                    self.stmt(x)?;
                }
            }
            CoreStmt::If { guard, body, .. } => {
                self.guards.push(guard.clone());
                self.stmt(body)?;
                self.guards.pop();
            }
            CoreStmt::WithDo { with, body, .. } => {
                self.stmt(with)?;
                self.stmt(body)?;
                self.stmt(&reverse(with))?;
            }
            CoreStmt::Bind { var, expr, span } => {
                let t = type_of_expr(&self.ctx, expr, *span).map_err(LowerError::Check)?;
                let w = type_width(&t, &self.k.config, &self.ctx)?;
                let key = self.key(s, Some((var, w)))?;
                self.record(s, key);
                self.ctx.push(var.clone(), t);
            }
            CoreStmt::Unbind { var, .. } => {
                let w = self.width_of(var)?;
                self.ctx.remove(var);
                let key = self.key(s, Some((var, w)))?;
                self.record(s, key);
            }
            CoreStmt::Had { .. } | CoreStmt::Swap { .. } | CoreStmt::MemSwap { .. } => {
                let key = self.key(s, None)?;
                self.record(s, key);
            }
        }
        Ok(())
    }
}

/// Per-primitive cost attribution for `s` run in `p`'s input context.
pub fn cost_report(p: &CoreProgram, s: &CoreStmt, k: &CostConstants) -> Result<CostReport, LowerError> {
    let mut w = Walker { k, ctx: p.initial_context(), guards: Vec::new(), report: CostReport::default() };
    w.stmt(s)?;
    Ok(w.report)
}

pub fn mcx_complexity(p: &CoreProgram, s: &CoreStmt, k: &CostConstants) -> Result<u64, LowerError> {
    Ok(cost_report(p, s, k)?.total.mcx)
}

pub fn t_complexity(p: &CoreProgram, s: &CoreStmt, k: &CostConstants) -> Result<u64, LowerError> {
    Ok(cost_report(p, s, k)?.total.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_ir::CoreType;
    use std::sync::Arc;

    fn prog(inputs: &[(&str, CoreType)], body: CoreStmt) -> CoreProgram {
        CoreProgram {
            name: "t".into(),
            inputs: inputs.iter().map(|(x, t)| (x.to_string(), t.clone())).collect(),
            body,
            aliases: Arc::new(BTreeMap::new()),
            heap: None,
            ret: None,
        }
    }

    fn sp() -> Span {
        Span::new(1, 1)
    }

    fn t_of(inputs: &[(&str, CoreType)], s: CoreStmt) -> u64 {
        let p = prog(inputs, s.clone());
        t_complexity(&p, &s, &CostConstants::default()).unwrap()
    }

    #[test]
    fn skip_costs_nothing() {
        let p = prog(&[], CoreStmt::Skip);
        let r = cost_report(&p, &CoreStmt::Skip, &CostConstants::default()).unwrap();
        assert!(r.records.is_empty());
        assert_eq!(r.total, CostRecord::default());
    }

    #[test]
    fn guarded_literal_bind_is_free() {
        let s = CoreStmt::if_("x", CoreStmt::bind("y", CoreExpr::Val(CoreValue::True), sp()), sp());
        assert_eq!(t_of(&[("x", CoreType::Bool)], s), 0);
    }

    #[test]
    fn controlled_hadamard() {
        let s = CoreStmt::if_("x", CoreStmt::Had { var: "y".into(), span: sp() }, sp());
        assert_eq!(t_of(&[("x", CoreType::Bool), ("y", CoreType::Bool)], s), 8);
    }

    #[test]
    fn doubly_controlled_hadamard() {
        // 14 * c^MCX_had + c^T_CH with c^MCX_had = 1
        let inner = CoreStmt::if_("y", CoreStmt::Had { var: "z".into(), span: sp() }, sp());
        let s = CoreStmt::if_("x", inner, sp());
        let inputs = [("x", CoreType::Bool), ("y", CoreType::Bool), ("z", CoreType::Bool)];
        let p = prog(&inputs, s.clone());
        let r = cost_report(&p, &s, &CostConstants::default()).unwrap();
        assert_eq!((r.total.mcx, r.total.t, r.total.t_exact), (1, 22, 22));
    }

    #[test]
    fn mcx_is_transparent_to_if() {
        let b = CoreStmt::bind("z", CoreExpr::Bin("x".into(), crate::core_ir::BinOp::Add, "y".into()), sp());
        let inputs = [("g", CoreType::Bool), ("x", CoreType::Uint), ("y", CoreType::Uint)];
        let k = CostConstants::new(LowerConfig { width: 4, ..Default::default() });
        let p = prog(&inputs, b.clone());
        let plain = mcx_complexity(&p, &b, &k).unwrap();
        let g = CoreStmt::if_("g", b, sp());
        assert_eq!(mcx_complexity(&p, &g, &k).unwrap(), plain);
        assert!(t_complexity(&p, &g, &k).unwrap() >= t_complexity(&p, &g.items()[0], &k).unwrap());
    }
}
