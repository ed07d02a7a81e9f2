use super::alloc::{type_width, Allocation, LowerConfig, RegFile};
use super::{AbstractInstr, LowerError, Opcode};
use crate::core_ir::{reverse, type_of_expr, CoreExpr, CoreProgram, CoreStmt, CoreValue, UnOp};
use crate::core_ir::{BinOp, Context};
use crate::span::Span;

struct Lowerer<'a> {
    alloc: &'a Allocation,
    regs: RegFile,
    ctx: Context,
    next_bind: usize,
    controls: Vec<u32>,
    out: Vec<AbstractInstr>,
    mirror: bool,
}

fn bits_of(v: u64, width: usize, span: Span) -> Result<Vec<bool>, LowerError> {
    if width < 64 && v >> width != 0 {
        return Err(LowerError::user(span, format!("literal {v} does not fit in {width} bits")));
    }
    Ok((0..width).map(|i| i < 64 && (v >> i) & 1 == 1).collect())
}

/// What instruction selection needs besides operand wires.
pub(crate) struct Selector<'a> {
    pub ctx: &'a Context,
    pub config: &'a LowerConfig,
    pub controls: &'a [u32],
    pub memory: &'a [Vec<u32>],
}

impl Selector<'_> {
    fn instr(&self, op: Opcode, dst: Vec<u32>, srcs: Vec<Vec<u32>>, span: Span) -> AbstractInstr {
        AbstractInstr {
            op,
            dst,
            srcs,
            konst: Vec::new(),
            mem: Vec::new(),
            controls: self.controls.to_vec(),
            inverse: false,
            span,
        }
    }

    fn expr(
        &self,
        dst: Vec<u32>,
        e: &CoreExpr,
        span: Span,
        wires: &dyn Fn(&str) -> Result<Vec<u32>, LowerError>,
    ) -> Result<Option<AbstractInstr>, LowerError> {
        let width = dst.len();
        let konst = |bits: Vec<bool>| {
            let mut i = self.instr(Opcode::XorConst, dst.clone(), vec![], span);
            i.konst = bits;
            i
        };
        let i = match e {
            CoreExpr::Val(v) => match v {
                CoreValue::Var(y) => self.instr(Opcode::XorReg, dst.clone(), vec![wires(y)?], span),
                CoreValue::Pair(a, b) => {
                    let mut w = wires(a)?;
                    w.extend(wires(b)?);
                    self.instr(Opcode::XorReg, dst.clone(), vec![w], span)
                }
                CoreValue::Num(n) | CoreValue::Addr(_, n) => konst(bits_of(*n, width, span)?),
                CoreValue::True => konst(vec![true]),
                CoreValue::False | CoreValue::Unit | CoreValue::Null(_) | CoreValue::Zero(_) => {
                    konst(vec![false; width])
                }
            },
            CoreExpr::Proj(k, y) => {
                let w = wires(y)?;
                let first = match self.ctx.lookup(y).and_then(|t| t.resolve(self.ctx.aliases())) {
                    Some(crate::core_ir::CoreType::Pair(a, _)) => type_width(a, self.config, self.ctx)?,
                    _ => return Err(LowerError::Internal(format!("projection from non-pair `{y}`"))),
                };
                let part = if *k == 1 { w[..first].to_vec() } else { w[first..].to_vec() };
                self.instr(Opcode::XorReg, dst.clone(), vec![part], span)
            }
            CoreExpr::Un(op, y) => {
                let op = if *op == UnOp::Not { Opcode::Not } else { Opcode::Test };
                self.instr(op, dst.clone(), vec![wires(y)?], span)
            }
            CoreExpr::Bin(a, op, b) => {
                let op = match op {
                    BinOp::And => Opcode::And,
                    BinOp::Or => Opcode::Or,
                    BinOp::Add => Opcode::Add,
                    BinOp::Sub => Opcode::Sub,
                    BinOp::Mul => Opcode::Mul,
                    BinOp::Eq => Opcode::Eq,
                    BinOp::Neq => Opcode::Neq,
                    BinOp::Lt => Opcode::Lt,
                };
                self.instr(op, dst.clone(), vec![wires(a)?, wires(b)?], span)
            }
        };
        Ok(if width == 0 { None } else { Some(i) })
    }

    /// The instruction for a primitive statement, if it does anything.
    /// `dst` is the bound variable's range for binds and unbinds.
    pub fn select(
        &self,
        s: &CoreStmt,
        dst: Vec<u32>,
        wires: &dyn Fn(&str) -> Result<Vec<u32>, LowerError>,
    ) -> Result<Option<AbstractInstr>, LowerError> {
        Ok(match s {
            CoreStmt::Bind { expr, span, .. } => self.expr(dst, expr, *span, wires)?,
            CoreStmt::Unbind { expr, span, .. } => self.expr(dst, expr, *span, wires)?.map(|mut i| {
                i.inverse = true;
                i
            }),
            CoreStmt::Had { var, span } => Some(self.instr(Opcode::Had, wires(var)?, vec![], *span)),
            CoreStmt::Swap { a, b, span } => {
                let i = self.instr(Opcode::Swap, wires(a)?, vec![wires(b)?], *span);
                (!i.dst.is_empty()).then_some(i)
            }
            CoreStmt::MemSwap { ptr, val, span } => {
                let v = wires(val)?;
                let mut i = self.instr(Opcode::MemSwap, v.clone(), vec![wires(ptr)?], *span);
                i.mem = self.memory.iter().map(|c| c[..v.len()].to_vec()).collect();
                (!v.is_empty() && !i.mem.is_empty()).then_some(i)
            }
            _ => None,
        })
    }
}

impl<'a> Lowerer<'a> {
    fn wires(&self, x: &str) -> Result<Vec<u32>, LowerError> {
        self.regs
            .wires(x)
            .cloned()
            .ok_or_else(|| LowerError::Internal(format!("`{x}` has no wires")))
    }

    fn fresh_bind(&mut self, x: &str, width: usize, span: Span) -> Result<Vec<u32>, LowerError> {
        let given = if self.regs.wires(x).is_none() {
            let w = self
                .alloc
                .binds
                .get(self.next_bind)
                .cloned()
                .ok_or_else(|| LowerError::Internal("allocation has fewer bindings than the program".into()))?;
            self.next_bind += 1;
            Some(w)
        } else {
            None
        };
        Ok(self.regs.bind(x, width, given, span)?.0)
    }

    fn select(&self, s: &CoreStmt, dst: Vec<u32>) -> Result<Option<AbstractInstr>, LowerError> {
        let sel = Selector {
            ctx: &self.ctx,
            config: &self.alloc.config,
            controls: &self.controls,
            memory: &self.alloc.memory,
        };
        sel.select(s, dst, &|x| self.wires(x))
    }

    fn emit(&mut self, i: AbstractInstr) {
        self.out.push(i);
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
                let t = type_of_expr(&self.ctx, expr, *span).map_err(LowerError::Check)?;
                let width = type_width(&t, &self.alloc.config, &self.ctx)?;
                let dst = self.fresh_bind(var, width, *span)?;
                if let Some(i) = self.select(s, dst)? {
                    self.emit(i);
                }
                self.ctx.push(var.clone(), t);
            }
            CoreStmt::Unbind { var, .. } => {
                self.ctx.remove(var).ok_or_else(|| LowerError::Internal(format!("unbind of unbound `{var}`")))?;
                let dst = self.wires(var)?;
                if let Some(i) = self.select(s, dst)? {
                    self.emit(i);
                }
                self.regs.unbind(var)?;
            }
            CoreStmt::Had { .. } | CoreStmt::Swap { .. } | CoreStmt::MemSwap { .. } => {
                if let Some(i) = self.select(s, Vec::new())? {
                    self.emit(i);
                }
            }
            CoreStmt::If { guard, body, .. } => {
                let g = self.wires(guard)?[0];
                let pushed = !self.controls.contains(&g);
                if pushed {
                    self.controls.push(g);
                }
                self.regs.push_pins(self.ctx.domain());
                self.stmt(body)?;
                self.regs.pop_pins();
                if pushed {
                    self.controls.pop();
                }
            }
            CoreStmt::WithDo { with, body, .. } => {
                let start = self.out.len();
                self.stmt(with)?;
                let end = self.out.len();
                self.stmt(body)?;
                if self.mirror {
                    let undo: Vec<AbstractInstr> = self.out[start..end]
                        .iter()
                        .rev()
                        .map(|i| AbstractInstr { inverse: !i.inverse, ..i.clone() })
                        .collect();
                    let mark = self.out.len();
                    self.stmt(&reverse(with))?;
                    self.out.truncate(mark);
                    self.out.extend(undo);
                } else {
                    self.stmt(&reverse(with))?;
                }
            }
        }
        Ok(())
    }
}

fn run(p: &CoreProgram, s: &CoreStmt, alloc: &Allocation, mirror: bool) -> Result<Vec<AbstractInstr>, LowerError> {
    let mut l = Lowerer {
        alloc,
        regs: RegFile::new(&alloc.config),
        ctx: Context::new(p.aliases.clone()),
        next_bind: 0,
        controls: Vec::new(),
        out: Vec::new(),
        mirror,
    };
    for (x, t) in &p.inputs {
        let width = type_width(t, &alloc.config, &l.ctx)?;
        l.fresh_bind(x, width, Span::default())?;
        l.ctx.push(x.clone(), t.clone());
    }
    l.stmt(s)?;
    if l.next_bind != alloc.binds.len() {
        return Err(LowerError::Internal("allocation has more bindings than the program".into()));
    }
    Ok(l.out)
}

/// Lowers a with-free statement to abstract instructions, replaying `alloc`.
pub fn lower(p: &CoreProgram, s: &CoreStmt, alloc: &Allocation) -> Result<Vec<AbstractInstr>, LowerError> {
    run(p, s, alloc, false)
}

/// Lowers a statement that still contains with-blocks, undoing each
/// with-prefix by mirroring its own instructions on the wires they used.
/// This is the compilation scheme whose correctness needs pinning.
pub fn lower_mirrored(p: &CoreProgram, s: &CoreStmt, alloc: &Allocation) -> Result<Vec<AbstractInstr>, LowerError> {
    run(p, s, alloc, true)
}
