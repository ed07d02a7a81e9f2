use super::ast::*;
use super::inline::InlinedProgram;
use super::FrontendError;
use crate::core_ir::{
    reverse, BinOp, CoreExpr, CoreProgram, CoreStmt, CoreType, CoreValue, HeapInfo, UnOp,
};
use crate::span::{Fresh, Span};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Name of the free-list head register.
pub const HEAP_HEAD: &str = "__heap";

struct Desugarer {
    fresh: Fresh,
    aliases: BTreeMap<String, CoreType>,
    heap: Option<HeapInfo>,
}

type DResult<T> = Result<T, FrontendError>;

/// Lowers an inlined surface program to the core language.
pub fn desugar(p: InlinedProgram) -> Result<CoreProgram, FrontendError> {
    let mut d = Desugarer {
        fresh: p.fresh.clone(),
        aliases: p.types.iter().cloned().collect(),
        heap: None,
    };
    let body = d.block(&p.body)?;
    let body = match &d.heap {
        Some(h) => CoreStmt::seq(vec![
            CoreStmt::bind(
                HEAP_HEAD,
                CoreExpr::Val(CoreValue::Addr(h.cell_type.clone(), 1)),
                Span::default(),
            ),
            body,
        ]),
        None => body,
    };
    Ok(CoreProgram {
        name: p.name,
        inputs: p.inputs,
        body,
        aliases: Arc::new(d.aliases),
        heap: d.heap,
        ret: p.ret,
    })
}

/// Literal for the all-zero value of `t`.
pub fn zero_value(t: &CoreType, aliases: &BTreeMap<String, CoreType>) -> CoreValue {
    match t.resolve(aliases) {
        Some(CoreType::Uint) => CoreValue::Num(0),
        Some(CoreType::Bool) => CoreValue::False,
        Some(CoreType::Unit) => CoreValue::Unit,
        Some(CoreType::Ptr(inner)) => CoreValue::Null((**inner).clone()),
        _ => CoreValue::Zero(t.clone()),
    }
}

impl Desugarer {
    fn block(&mut self, b: &[SStmt]) -> DResult<CoreStmt> {
        let mut out = Vec::with_capacity(b.len());
        for s in b {
            out.push(self.stmt(s)?);
        }
        Ok(CoreStmt::seq(out))
    }

    fn stmt(&mut self, s: &SStmt) -> DResult<CoreStmt> {
        match s {
            SStmt::Let { var, dir, expr: SExpr::Alloc(t), span } => {
                let seq = self.alloc(var, t, *span)?;
                Ok(if *dir == Dir::Bind { seq } else { reverse(&seq) })
            }
            SStmt::Let { var, dir, expr, span } => {
                let (prefix, e) = self.flatten(expr, *span)?;
                let core = match dir {
                    Dir::Bind => CoreStmt::bind(var.clone(), e, *span),
                    Dir::Unbind => CoreStmt::unbind(var.clone(), e, *span),
                };
                Ok(wrap(prefix, core, *span))
            }
            SStmt::Swap { a, b, span } => Ok(CoreStmt::Swap { a: a.clone(), b: b.clone(), span: *span }),
            SStmt::MemSwap { ptr, val, span } => {
                Ok(CoreStmt::MemSwap { ptr: ptr.clone(), val: val.clone(), span: *span })
            }
            SStmt::Had { var, span } => Ok(CoreStmt::Had { var: var.clone(), span: *span }),
            SStmt::Skip { .. } => Ok(CoreStmt::Skip),
            SStmt::If { cond, then_, else_, span } => {
                let mut prefix = Vec::new();
                let g = match cond {
                    SExpr::Var(x) => x.clone(),
                    other => {
                        let (p, e) = self.flatten(other, *span)?;
                        prefix.extend(p);
                        let g = self.fresh.name("g");
                        prefix.push(CoreStmt::bind(g.clone(), e, *span));
                        g
                    }
                };
                let then_ = self.block(then_)?;
                let core = match else_ {
                    None => CoreStmt::if_(g, then_, *span),
                    Some(e) => {
                        let else_ = self.block(e)?;
                        let nx = self.fresh.name("nx");
                        prefix.push(CoreStmt::bind(nx.clone(), CoreExpr::Un(UnOp::Not, g.clone()), *span));
                        CoreStmt::seq(vec![
                            CoreStmt::if_(g, then_, *span),
                            CoreStmt::if_(nx, else_, *span),
                        ])
                    }
                };
                Ok(wrap(prefix, core, *span))
            }
            SStmt::With { with, body, span } => {
                let w = self.block(with)?;
                let b = self.block(body)?;
                Ok(if w == CoreStmt::Skip { b } else { CoreStmt::with_do(w, b, *span) })
            }
            SStmt::Reversed { body, .. } => Ok(reverse(&self.block(body)?)),
        }
    }

    /// Reduces an expression to a core expression over names plus the
    /// bindings needed to compute its operands.
    fn flatten(&mut self, e: &SExpr, span: Span) -> DResult<(Vec<CoreStmt>, CoreExpr)> {
        let mut prefix = Vec::new();
        let ce = match e {
            SExpr::Var(x) => CoreExpr::var(x.clone()),
            SExpr::Int(n) => CoreExpr::Val(CoreValue::Num(*n)),
            SExpr::True => CoreExpr::Val(CoreValue::True),
            SExpr::False => CoreExpr::Val(CoreValue::False),
            SExpr::Unit => CoreExpr::Val(CoreValue::Unit),
            SExpr::Null(Some(t)) => CoreExpr::Val(CoreValue::Null(t.clone())),
            SExpr::Null(None) => {
                return Err(FrontendError::new(span, "bare `null` needs a type: write `null<T>`"))
            }
            SExpr::Default(t) => CoreExpr::Val(zero_value(t, &self.aliases)),
            SExpr::Alloc(_) => {
                return Err(FrontendError::new(span, "`alloc` must be the whole right-hand side of `let`"))
            }
            SExpr::Call { func, .. } => {
                return Err(FrontendError::new(span, format!("call to `{func}` was not inlined")))
            }
            SExpr::Pair(a, b) => {
                let x = self.atom(a, span, &mut prefix)?;
                let y = self.atom(b, span, &mut prefix)?;
                CoreExpr::Val(CoreValue::Pair(x, y))
            }
            SExpr::Proj(a, i) => CoreExpr::Proj(*i, self.atom(a, span, &mut prefix)?),
            SExpr::Not(a) => CoreExpr::Un(UnOp::Not, self.atom(a, span, &mut prefix)?),
            SExpr::Bin(a, op, b) => {
                let null_side = match (&**a, &**b) {
                    (x, SExpr::Null(None)) | (SExpr::Null(None), x) => Some(x),
                    _ => None,
                };
                if let Some(x) = null_side {
                    let p = self.atom(x, span, &mut prefix)?;
                    match op {
                        SBinOp::Core(BinOp::Neq) => CoreExpr::Un(UnOp::Test, p),
                        SBinOp::Core(BinOp::Eq) => {
                            let t = self.fresh.name("t");
                            prefix.push(CoreStmt::bind(t.clone(), CoreExpr::Un(UnOp::Test, p), span));
                            CoreExpr::Un(UnOp::Not, t)
                        }
                        _ => {
                            return Err(FrontendError::new(span, "`null` can only be compared with == or !="))
                        }
                    }
                } else {
                    let x = self.atom(a, span, &mut prefix)?;
                    let y = self.atom(b, span, &mut prefix)?;
                    match op {
                        SBinOp::Core(op) => CoreExpr::Bin(x, *op, y),
                        SBinOp::Gt => CoreExpr::Bin(y, BinOp::Lt, x),
                    }
                }
            }
        };
        Ok((prefix, ce))
    }

    fn atom(&mut self, e: &SExpr, span: Span, prefix: &mut Vec<CoreStmt>) -> DResult<String> {
        if let SExpr::Var(x) = e {
            return Ok(x.clone());
        }
        let (p, ce) = self.flatten(e, span)?;
        prefix.extend(p);
        let t = self.fresh.name("t");
        prefix.push(CoreStmt::bind(t.clone(), ce, span));
        Ok(t)
    }

    /// `let p <- alloc<T>` pops the free list whose head is `__heap`.
    fn alloc(&mut self, p: &str, t: &CoreType, span: Span) -> DResult<CoreStmt> {
        let al = &self.aliases;
        let Some(CoreType::Pair(a, b)) = t.resolve(al) else {
            return Err(FrontendError::new(span, "alloc needs a pair type with a link pointer"));
        };
        let link_ty = CoreType::ptr(t.clone());
        let link: u8 = if link_ty.equiv(a, al) {
            1
        } else if link_ty.equiv(b, al) {
            2
        } else {
            return Err(FrontendError::new(span, "alloc needs a pair type with a link pointer"));
        };
        let other = if link == 1 { (**b).clone() } else { (**a).clone() };
        match &self.heap {
            Some(h) if !h.cell_type.equiv(t, al) => {
                return Err(FrontendError::new(span, "only one allocated cell type is supported"))
            }
            Some(_) => {}
            None => {
                self.heap = Some(HeapInfo { cell_type: t.clone(), link, head: HEAP_HEAD.into() })
            }
        }
        let z = self.fresh.name("z");
        let c = self.fresh.name("cell");
        let l = self.fresh.name("link");
        let zero_other = CoreExpr::Val(zero_value(&other, al));
        let null = CoreExpr::Val(CoreValue::Null(t.clone()));
        let rebuilt = if link == 1 {
            CoreValue::Pair(HEAP_HEAD.into(), z.clone())
        } else {
            CoreValue::Pair(z.clone(), HEAP_HEAD.into())
        };
        Ok(CoreStmt::seq(vec![
            CoreStmt::bind(p, null.clone(), span),
            CoreStmt::Swap { a: p.into(), b: HEAP_HEAD.into(), span },
            CoreStmt::bind(z.clone(), zero_other.clone(), span),
            CoreStmt::bind(c.clone(), CoreExpr::Val(CoreValue::Zero(t.clone())), span),
            CoreStmt::MemSwap { ptr: p.into(), val: c.clone(), span },
            CoreStmt::bind(l.clone(), CoreExpr::Proj(link, c.clone()), span),
            CoreStmt::Swap { a: HEAP_HEAD.into(), b: l.clone(), span },
            CoreStmt::unbind(l, null, span),
            CoreStmt::unbind(c, CoreExpr::Val(rebuilt), span),
            CoreStmt::unbind(z, zero_other, span),
        ]))
    }
}

fn wrap(prefix: Vec<CoreStmt>, core: CoreStmt, span: Span) -> CoreStmt {
    if prefix.is_empty() {
        core
    } else {
        CoreStmt::with_do(CoreStmt::seq(prefix), core, span)
    }
}
