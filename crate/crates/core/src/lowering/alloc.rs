use super::LowerError;
use crate::core_ir::{check_stmt_unscoped, reverse, stmt_vars, Context, CoreProgram, CoreStmt, CoreType};
use crate::span::Span;
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerConfig {
    /// Bits per `uint` and pointer.
    pub width: u32,
    /// Requested memory cells, including the null cell 0.
    pub cells: u32,
    /// Keep variables affected by a with-block on one range across its do-block.
    pub pin_affected: bool,
    /// Hand freed ranges to later bindings. Off gives every binding fresh wires.
    pub reuse: bool,
}

impl Default for LowerConfig {
    fn default() -> Self {
        LowerConfig { width: 8, cells: 16, pin_affected: true, reuse: true }
    }
}

impl LowerConfig {
    /// Cells addressable with `width` bits, capped by the requested count.
    pub fn effective_cells(&self) -> u32 {
        match 1u64.checked_shl(self.width) {
            Some(n) if n < self.cells as u64 => n as u32,
            _ => self.cells,
        }
    }
}

/// Ranges an affected variable holds when its do-block starts and ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffectedRange {
    pub var: String,
    pub entry: Vec<u32>,
    pub exit: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoBlockRecord {
    pub span: Span,
    pub affected: Vec<AffectedRange>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    pub config: LowerConfig,
    pub wire_names: Vec<String>,
    pub inputs: Vec<(String, Vec<u32>)>,
    /// Live variables at the end of the program.
    pub outputs: Vec<(String, Vec<u32>)>,
    /// Cells 1.. of memory, each `cell_width` wires.
    pub memory: Vec<Vec<u32>>,
    pub cell_width: u32,
    /// Wires of each fresh binding, in expanded execution order.
    pub binds: Vec<Vec<u32>>,
    pub do_blocks: Vec<DoBlockRecord>,
}

impl Allocation {
    /// Input wires in circuit order: parameters then memory.
    pub fn input_wires(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.inputs.iter().flat_map(|(_, w)| w.iter().copied()).collect();
        v.extend(self.memory.iter().flatten());
        v
    }
}

/// Register file shared by allocation and its replay during lowering.
#[derive(Default)]
pub(crate) struct RegFile {
    live: HashMap<String, (Vec<u32>, usize)>,
    free: BTreeSet<u32>,
    pub next: u32,
    pins: Vec<BTreeSet<String>>,
    reserved: HashMap<String, Vec<u32>>,
    no_reuse: bool,
}

impl RegFile {
    pub fn new(cfg: &LowerConfig) -> Self {
        RegFile { no_reuse: !cfg.reuse, ..RegFile::default() }
    }

    pub fn take(&mut self, n: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let reused = if self.no_reuse { None } else { self.free.pop_first() };
            match reused {
                Some(w) => out.push(w),
                None => {
                    out.push(self.next);
                    self.next += 1;
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn wires(&self, x: &str) -> Option<&Vec<u32>> {
        self.live.get(x).map(|(w, _)| w)
    }

    fn pinned(&self, x: &str) -> bool {
        self.pins.iter().any(|s| s.contains(x))
    }

    /// Binds `x`. A live name keeps its wires; otherwise `given` (replay) or a
    /// reserved or fresh range is used. Returns the wires and whether the
    /// binding was fresh.
    pub fn bind(
        &mut self,
        x: &str,
        width: usize,
        given: Option<Vec<u32>>,
        span: Span,
    ) -> Result<(Vec<u32>, bool), LowerError> {
        if let Some((w, n)) = self.live.get_mut(x) {
            if w.len() != width {
                return Err(LowerError::user(span, format!("`{x}` is rebound with a different width")));
            }
            *n += 1;
            return Ok((w.clone(), false));
        }
        let wires = match given {
            Some(w) => {
                self.reserved.remove(x);
                for v in &w {
                    self.free.remove(v);
                }
                w
            }
            None => match self.reserved.remove(x) {
                Some(r) if r.len() == width => r,
                Some(_) => {
                    return Err(LowerError::user(span, format!("`{x}` is rebound with a different width")))
                }
                None => self.take(width),
            },
        };
        self.live.insert(x.to_string(), (wires.clone(), 1));
        Ok((wires, true))
    }

    pub fn unbind(&mut self, x: &str) -> Result<Vec<u32>, LowerError> {
        let (w, n) = self
            .live
            .get_mut(x)
            .ok_or_else(|| LowerError::Internal(format!("unbind of `{x}` which holds no range")))?;
        let wires = w.clone();
        *n -= 1;
        if *n == 0 {
            self.live.remove(x);
            if self.pinned(x) {
                self.reserved.insert(x.to_string(), wires.clone());
            } else {
                self.free.extend(wires.iter().copied());
            }
        }
        Ok(wires)
    }

    pub fn push_pins(&mut self, names: BTreeSet<String>) {
        self.pins.push(names);
    }

    pub fn pop_pins(&mut self) {
        if let Some(names) = self.pins.pop() {
            for x in names {
                if !self.pinned(&x) {
                    if let Some(w) = self.reserved.remove(&x) {
                        self.free.extend(w);
                    }
                }
            }
        }
    }
}

pub(crate) fn type_width(t: &CoreType, cfg: &LowerConfig, ctx: &Context) -> Result<usize, LowerError> {
    t.width(cfg.width, ctx.aliases())
        .map(|w| w as usize)
        .ok_or_else(|| LowerError::Internal("unresolvable type".into()))
}

/// Widest pointee of any memory swap; zero when memory is unused.
fn cell_width(p: &CoreProgram, cfg: &LowerConfig) -> Result<u32, LowerError> {
    fn go(s: &CoreStmt, ctx: &mut Context, cfg: &LowerConfig, best: &mut u32) -> Result<(), LowerError> {
        match s {
            CoreStmt::Seq(v) => {
                for x in v {
                    go(x, ctx, cfg, best)?;
                }
            }
            CoreStmt::If { body, .. } => go(body, ctx, cfg, best)?,
            CoreStmt::WithDo { with, body, .. } => {
                go(with, ctx, cfg, best)?;
                go(body, ctx, cfg, best)?;
                go(&reverse(with), ctx, cfg, best)?;
            }
            CoreStmt::MemSwap { val, .. } => {
                let t = ctx.lookup(val).cloned().ok_or_else(|| LowerError::Internal(format!("unbound `{val}`")))?;
                *best = (*best).max(type_width(&t, cfg, ctx)? as u32);
            }
            other => {
                *ctx = check_stmt_unscoped(ctx, other).map_err(LowerError::Check)?;
            }
        }
        Ok(())
    }
    let mut best = 0;
    let mut has_mem = false;
    crate::core_ir::visit(&p.body, &mut |s| has_mem |= matches!(s, CoreStmt::MemSwap { .. }));
    if has_mem {
        go(&p.body, &mut p.initial_context(), cfg, &mut best)?;
    }
    Ok(best)
}

struct Allocator<'a> {
    cfg: &'a LowerConfig,
    regs: RegFile,
    ctx: Context,
    binds: Vec<Vec<u32>>,
    do_blocks: Vec<DoBlockRecord>,
    names: HashMap<u32, String>,
}

impl<'a> Allocator<'a> {
    fn name_wires(&mut self, x: &str, w: &[u32]) {
        for (i, v) in w.iter().enumerate() {
            self.names
                .entry(*v)
                .or_insert_with(|| if w.len() == 1 { x.to_string() } else { format!("{x}.{i}") });
        }
    }

    fn stmt(&mut self, s: &CoreStmt) -> Result<(), LowerError> {
        match s {
            CoreStmt::Skip => {}
            CoreStmt::Seq(v) => {
                for x in v {
                    self.stmt(x)?;
                }
            }
            CoreStmt::Bind { var, expr, span } => {
                let t = crate::core_ir::type_of_expr(&self.ctx, expr, *span).map_err(LowerError::Check)?;
                let width = type_width(&t, self.cfg, &self.ctx)?;
                let (w, fresh) = self.regs.bind(var, width, None, *span)?;
                if fresh {
                    self.name_wires(var, &w);
                    self.binds.push(w);
                }
                self.ctx.push(var.clone(), t);
            }
            CoreStmt::Unbind { var, .. } => {
                self.ctx.remove(var);
                self.regs.unbind(var)?;
            }
            CoreStmt::Had { .. } | CoreStmt::Swap { .. } | CoreStmt::MemSwap { .. } => {}
            CoreStmt::If { body, .. } => {
                self.regs.push_pins(self.ctx.domain());
                self.stmt(body)?;
                self.regs.pop_pins();
            }
            CoreStmt::WithDo { with, body, span } => {
                self.stmt(with)?;
                let entry_dom = self.ctx.domain();
                let exit_ctx = check_stmt_unscoped(&self.ctx, body).map_err(LowerError::Check)?;
                let exit_dom = exit_ctx.domain();
                let affected: BTreeSet<String> = stmt_vars(with)
                    .into_iter()
                    .filter(|x| entry_dom.contains(x) && exit_dom.contains(x))
                    .collect();
                let entry: Vec<(String, Vec<u32>)> = affected
                    .iter()
                    .map(|x| (x.clone(), self.regs.wires(x).cloned().unwrap_or_default()))
                    .collect();
                let pin = self.cfg.pin_affected;
                if pin {
                    self.regs.push_pins(affected.clone());
                }
                self.stmt(body)?;
                if pin {
                    self.regs.pop_pins();
                }
                let affected = entry
                    .into_iter()
                    .map(|(var, entry)| {
                        let exit = self.regs.wires(&var).cloned().unwrap_or_default();
                        AffectedRange { var, entry, exit }
                    })
                    .collect();
                self.do_blocks.push(DoBlockRecord { span: *span, affected });
                self.stmt(&reverse(with))?;
            }
        }
        Ok(())
    }
}

/// Assigns wire ranges to every binding of a well-formed program body.
pub fn allocate(p: &CoreProgram, s: &CoreStmt, cfg: &LowerConfig) -> Result<Allocation, LowerError> {
    let cw = cell_width(&p.with_body(s.clone()), cfg)?;
    let mut a = Allocator {
        cfg,
        regs: RegFile::new(cfg),
        ctx: Context::new(p.aliases.clone()),
        binds: Vec::new(),
        do_blocks: Vec::new(),
        names: HashMap::new(),
    };
    let mut inputs = Vec::new();
    for (x, t) in &p.inputs {
        let width = type_width(t, cfg, &a.ctx)?;
        let (w, _) = a.regs.bind(x, width, None, Span::default())?;
        a.name_wires(x, &w);
        a.binds.push(w.clone());
        a.ctx.push(x.clone(), t.clone());
        inputs.push((x.clone(), w));
    }
    let mut memory = Vec::new();
    if cw > 0 {
        for cell in 1..cfg.effective_cells() {
            let w = a.regs.take(cw as usize);
            for (i, v) in w.iter().enumerate() {
                a.names.insert(*v, format!("m{cell}.{i}"));
            }
            memory.push(w);
        }
    }
    a.stmt(s)?;
    let outputs = a
        .ctx
        .live()
        .into_iter()
        .map(|(x, _)| {
            let w = a.regs.wires(&x).cloned().unwrap_or_default();
            (x, w)
        })
        .collect();
    let total = a.regs.next;
    let mut used = BTreeSet::new();
    let wire_names = (0..total)
        .map(|i| {
            let base = a.names.get(&i).cloned().unwrap_or_else(|| format!("w{i}"));
            let mut name = base.clone();
            let mut k = 1;
            while !used.insert(name.clone()) {
                name = format!("{base}_{k}");
                k += 1;
            }
            name
        })
        .collect();
    Ok(Allocation {
        config: *cfg,
        wire_names,
        inputs,
        outputs,
        memory,
        cell_width: cw,
        binds: a.binds,
        do_blocks: a.do_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::OptimizerConfig;
    use crate::pipeline::{compile, CompileOptions};

    fn binds(reuse: bool) -> Vec<Vec<u32>> {
        let src = "fun f(a: bool) { let t <- a; let t -> a; let u <- a; }";
        let config = LowerConfig { width: 2, cells: 2, reuse, ..LowerConfig::default() };
        let opts = CompileOptions { params: Default::default(), config, opt: OptimizerConfig::NONE };
        let b = compile(src, &opts).unwrap().alloc.binds;
        b[b.len() - 2..].to_vec()
    }

    #[test]
    fn freed_range_is_reused() {
        let b = binds(true);
        assert_eq!(b[0], b[1]);
    }

    #[test]
    fn no_reuse_gives_fresh_wires() {
        let b = binds(false);
        assert_ne!(b[0], b[1]);
    }
}
