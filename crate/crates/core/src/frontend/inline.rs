use super::ast::*;
use super::FrontendError;
use crate::core_ir::{BinOp, CoreType};
use crate::span::{Fresh, Span};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A call-free program: the entry's inputs and an inlined body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InlinedProgram {
    pub name: String,
    pub types: Vec<(String, CoreType)>,
    pub inputs: Vec<(String, CoreType)>,
    pub body: Vec<SStmt>,
    pub ret: Option<String>,
    pub fresh: Fresh,
}

/// Upper bound on inlined statements, to stop runaway static arguments.
const BUDGET: usize = 2_000_000;

struct Inliner<'a> {
    prog: &'a SurfaceProgram,
    aliases: BTreeMap<String, CoreType>,
    fresh: Fresh,
    stack: Vec<(String, Option<i64>)>,
    emitted: usize,
    ret_types: HashMap<String, Option<CoreType>>,
}

/// Substitutes static values and inlines every call into the entry function.
pub fn instantiate_and_inline(
    prog: &SurfaceProgram,
    params: &BTreeMap<String, i64>,
) -> Result<InlinedProgram, FrontendError> {
    let entry = prog
        .entry()
        .ok_or_else(|| FrontendError::new(Span::new(1, 1), "program has no functions"))?;
    for k in params.keys() {
        if !entry.statics.contains(k) {
            return Err(FrontendError::new(entry.span, format!("unknown static parameter `{k}`")));
        }
    }
    let mut statics = BTreeMap::new();
    for s in &entry.statics {
        let v = *params
            .get(s)
            .ok_or_else(|| FrontendError::new(entry.span, format!("missing value for static parameter `{s}`")))?;
        if v < 0 {
            return Err(FrontendError::new(entry.span, format!("static parameter `{s}` is negative")));
        }
        statics.insert(s.clone(), v);
    }
    let mut inl = Inliner {
        prog,
        aliases: prog.types.iter().cloned().collect(),
        fresh: Fresh::new(),
        stack: vec![(entry.name.clone(), entry.statics.first().map(|s| statics[s]))],
        emitted: 0,
        ret_types: HashMap::new(),
    };
    let mut rename = Renamer { map: HashMap::new(), identity: true };
    let body = inl.block(&entry.body, &statics, &mut rename)?;
    Ok(InlinedProgram {
        name: entry.name.clone(),
        types: prog.types.clone(),
        inputs: entry.params.clone(),
        body,
        ret: entry.ret.clone(),
        fresh: inl.fresh,
    })
}

struct Renamer {
    map: HashMap<String, String>,
    identity: bool,
}

impl Renamer {
    fn name(&mut self, x: &str, fresh: &mut Fresh) -> String {
        if self.identity {
            return x.to_string();
        }
        self.map.entry(x.to_string()).or_insert_with(|| fresh.name(x)).clone()
    }
}

fn eval_depth(d: &DepthExpr, statics: &BTreeMap<String, i64>) -> i64 {
    match d {
        DepthExpr::Lit(n) => *n,
        DepthExpr::Param(x) => statics[x],
        DepthExpr::Add(a, b) => eval_depth(a, statics) + eval_depth(b, statics),
        DepthExpr::Sub(a, b) => eval_depth(a, statics) - eval_depth(b, statics),
    }
}

impl<'a> Inliner<'a> {
    fn block(
        &mut self,
        b: &[SStmt],
        statics: &BTreeMap<String, i64>,
        rn: &mut Renamer,
    ) -> Result<Vec<SStmt>, FrontendError> {
        let mut out = Vec::with_capacity(b.len());
        for s in b {
            self.emitted += 1;
            if self.emitted > BUDGET {
                return Err(FrontendError::new(s.span(), "inlining exceeds the statement budget"));
            }
            out.push(self.stmt(s, statics, rn)?);
        }
        Ok(out)
    }

    fn stmt(
        &mut self,
        s: &SStmt,
        statics: &BTreeMap<String, i64>,
        rn: &mut Renamer,
    ) -> Result<SStmt, FrontendError> {
        let f = &mut self.fresh;
        Ok(match s {
            SStmt::Let { var, dir, expr: SExpr::Call { func, statics: ds, args }, span } => {
                let target = rn.name(var, f);
                let values: Vec<i64> = ds.iter().map(|d| eval_depth(d, statics)).collect();
                let mut renamed_args = Vec::new();
                for a in args {
                    renamed_args.push(self.rename_expr(a, rn));
                }
                return self.call(&target, *dir, func, &values, renamed_args, *span);
            }
            SStmt::Let { var, dir, expr, span } => {
                let var = rn.name(var, f);
                SStmt::Let { var, dir: *dir, expr: self.rename_expr(expr, rn), span: *span }
            }
            SStmt::Swap { a, b, span } => {
                SStmt::Swap { a: rn.name(a, f), b: rn.name(b, f), span: *span }
            }
            SStmt::MemSwap { ptr, val, span } => {
                SStmt::MemSwap { ptr: rn.name(ptr, f), val: rn.name(val, f), span: *span }
            }
            SStmt::Had { var, span } => SStmt::Had { var: rn.name(var, f), span: *span },
            SStmt::Skip { span } => SStmt::Skip { span: *span },
            SStmt::If { cond, then_, else_, span } => {
                let cond = self.rename_expr(cond, rn);
                let then_ = self.block(then_, statics, rn)?;
                let else_ = match else_ {
                    Some(e) => Some(self.block(e, statics, rn)?),
                    None => None,
                };
                SStmt::If { cond, then_, else_, span: *span }
            }
            SStmt::With { with, body, span } => SStmt::With {
                with: self.block(with, statics, rn)?,
                body: self.block(body, statics, rn)?,
                span: *span,
            },
            SStmt::Reversed { body, span } => {
                SStmt::Reversed { body: self.block(body, statics, rn)?, span: *span }
            }
        })
    }

    fn rename_expr(&mut self, e: &SExpr, rn: &mut Renamer) -> SExpr {
        let f = &mut self.fresh;
        fn go(e: &SExpr, rn: &mut Renamer, f: &mut Fresh) -> SExpr {
            match e {
                SExpr::Var(x) => SExpr::Var(rn.name(x, f)),
                SExpr::Pair(a, b) => SExpr::Pair(Box::new(go(a, rn, f)), Box::new(go(b, rn, f))),
                SExpr::Proj(a, i) => SExpr::Proj(Box::new(go(a, rn, f)), *i),
                SExpr::Not(a) => SExpr::Not(Box::new(go(a, rn, f))),
                SExpr::Bin(a, op, b) => SExpr::Bin(Box::new(go(a, rn, f)), *op, Box::new(go(b, rn, f))),
                SExpr::Call { func, statics, args } => SExpr::Call {
                    func: func.clone(),
                    statics: statics.clone(),
                    args: args.iter().map(|a| go(a, rn, f)).collect(),
                },
                other => other.clone(),
            }
        }
        go(e, rn, f)
    }

    fn call(
        &mut self,
        target: &str,
        dir: Dir,
        func: &str,
        values: &[i64],
        args: Vec<SExpr>,
        span: Span,
    ) -> Result<SStmt, FrontendError> {
        let callee = self.prog.function(func).expect("validated");
        if let Some(v) = values.iter().find(|v| **v < 0) {
            return Err(FrontendError::new(span, format!("static argument {v} to `{func}` is negative")));
        }
        let depth = values.first().copied();
        for (g, d) in self.stack.iter().rev() {
            if g == func {
                match (d, depth) {
                    (Some(prev), Some(now)) if now < *prev => break,
                    _ => {
                        return Err(FrontendError::new(
                            span,
                            format!("recursive call to `{func}` does not decrease its static argument"),
                        ))
                    }
                }
            }
        }
        let Some(ret) = callee.ret.clone() else {
            return Err(FrontendError::new(span, format!("`{func}` has no return value")));
        };
        if depth == Some(0) {
            let t = self.ret_type(func).ok_or_else(|| {
                FrontendError::new(span, format!("cannot infer the return type of `{func}`; annotate it"))
            })?;
            return Ok(SStmt::Let { var: target.to_string(), dir, expr: SExpr::Default(t), span });
        }

        let mut rn = Renamer { map: HashMap::new(), identity: false };
        let mut temps = Vec::new();
        for ((p, _), a) in callee.params.iter().zip(args) {
            let name = match a {
                SExpr::Var(x) => x,
                other => {
                    let t = self.fresh.name(p);
                    temps.push(SStmt::Let { var: t.clone(), dir: Dir::Bind, expr: other, span });
                    t
                }
            };
            rn.map.insert(p.clone(), name);
        }
        rn.map.insert(ret, target.to_string());
        let statics: BTreeMap<String, i64> =
            callee.statics.iter().cloned().zip(values.iter().copied()).collect();
        self.stack.push((func.to_string(), depth));
        let body = self.block(&callee.body, &statics, &mut rn)?;
        self.stack.pop();
        let inner = match dir {
            Dir::Bind => SStmt::With { with: vec![], body, span },
            Dir::Unbind => SStmt::Reversed { body, span },
        };
        Ok(if temps.is_empty() {
            inner
        } else {
            SStmt::With { with: temps, body: vec![inner], span }
        })
    }

    fn ret_type(&mut self, func: &str) -> Option<CoreType> {
        if let Some(t) = self.ret_types.get(func) {
            return t.clone();
        }
        self.ret_types.insert(func.to_string(), None);
        let t = infer_ret_type(self.prog, &self.aliases, func, &mut BTreeSet::new());
        self.ret_types.insert(func.to_string(), t.clone());
        t
    }
}

/// Surface type inference for a function's return variable.
pub fn infer_ret_type(
    prog: &SurfaceProgram,
    aliases: &BTreeMap<String, CoreType>,
    func: &str,
    visiting: &mut BTreeSet<String>,
) -> Option<CoreType> {
    let f = prog.function(func)?;
    if let Some(t) = &f.ret_type {
        return Some(t.clone());
    }
    let ret = f.ret.as_ref()?;
    if !visiting.insert(func.to_string()) {
        return None;
    }
    let mut env: HashMap<String, CoreType> = f.params.iter().cloned().collect();
    let t = scan_block(prog, aliases, &f.body, ret, &mut env, visiting);
    visiting.remove(func);
    t
}

fn scan_block(
    prog: &SurfaceProgram,
    al: &BTreeMap<String, CoreType>,
    b: &[SStmt],
    ret: &str,
    env: &mut HashMap<String, CoreType>,
    visiting: &mut BTreeSet<String>,
) -> Option<CoreType> {
    for s in b {
        let found = match s {
            SStmt::Let { var, dir: Dir::Bind, expr, .. } => {
                let t = expr_type(prog, al, expr, env, visiting);
                if let Some(t) = t {
                    env.insert(var.clone(), t.clone());
                    (var == ret).then_some(t)
                } else {
                    None
                }
            }
            SStmt::If { then_, else_, .. } => scan_block(prog, al, then_, ret, env, visiting).or_else(|| {
                else_.as_ref().and_then(|e| scan_block(prog, al, e, ret, env, visiting))
            }),
            SStmt::With { with, body, .. } => scan_block(prog, al, with, ret, env, visiting)
                .or_else(|| scan_block(prog, al, body, ret, env, visiting)),
            _ => None,
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

fn expr_type(
    prog: &SurfaceProgram,
    al: &BTreeMap<String, CoreType>,
    e: &SExpr,
    env: &HashMap<String, CoreType>,
    visiting: &mut BTreeSet<String>,
) -> Option<CoreType> {
    match e {
        SExpr::Var(x) => env.get(x).cloned(),
        SExpr::Int(_) => Some(CoreType::Uint),
        SExpr::True | SExpr::False | SExpr::Not(_) => Some(CoreType::Bool),
        SExpr::Unit => Some(CoreType::Unit),
        SExpr::Null(t) => t.clone().map(CoreType::ptr),
        SExpr::Default(t) => Some(t.clone()),
        SExpr::Alloc(t) => Some(CoreType::ptr(t.clone())),
        SExpr::Pair(a, b) => Some(CoreType::pair(
            expr_type(prog, al, a, env, visiting)?,
            expr_type(prog, al, b, env, visiting)?,
        )),
        SExpr::Proj(a, i) => match expr_type(prog, al, a, env, visiting)?.resolve(al)? {
            CoreType::Pair(x, y) => Some(if *i == 1 { (**x).clone() } else { (**y).clone() }),
            _ => None,
        },
        SExpr::Bin(_, SBinOp::Core(BinOp::Add | BinOp::Sub | BinOp::Mul), _) => Some(CoreType::Uint),
        SExpr::Bin(..) => Some(CoreType::Bool),
        SExpr::Call { func, .. } => infer_ret_type(prog, al, func, visiting),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    fn params(kv: &[(&str, i64)]) -> BTreeMap<String, i64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn base_case_binds_default() {
        let src = "fun f[n](a: uint) { if true { let r <- a; } else { let r <- f[n-1](a); } return r; }
                   fun main(a: uint) { let x <- f[0](a); return x; }";
        let p = parse_program(src).unwrap();
        let out = instantiate_and_inline(&p, &BTreeMap::new()).unwrap();
        assert_eq!(
            out.body[0],
            SStmt::Let { var: "x".into(), dir: Dir::Bind, expr: SExpr::Default(CoreType::Uint), span: Span::default() }
        );
    }

    #[test]
    fn callee_locals_are_fresh_and_params_renamed() {
        let src = "fun g(a: uint) -> uint { let t <- a + a; let r <- t; return r; }
                   fun main(b: uint) { let y <- g(b); return y; }";
        let p = parse_program(src).unwrap();
        let out = instantiate_and_inline(&p, &BTreeMap::new()).unwrap();
        let text = super::super::printer::print_block(&out.body, 0);
        assert!(text.contains("let t__0 <- b + b;"), "{text}");
        assert!(text.contains("let y <- t__0;"), "{text}");
    }

    #[test]
    fn non_decreasing_recursion_rejected() {
        let src = "fun f[n](a: uint) -> uint { let r <- f[n](a); return r; }
                   fun main[n](a: uint) { let x <- f[n](a); return x; }";
        let p = parse_program(src).unwrap();
        let e = instantiate_and_inline(&p, &params(&[("n", 2)])).unwrap_err();
        assert!(e.message.contains("does not decrease"), "{}", e.message);
    }

    #[test]
    fn negative_static_rejected() {
        let src = "fun f[n](a: uint) -> uint { let r <- a; return r; }
                   fun main[n](a: uint) { let x <- f[n-3](a); return x; }";
        let p = parse_program(src).unwrap();
        assert!(instantiate_and_inline(&p, &params(&[("n", 2)])).is_err());
        assert!(instantiate_and_inline(&p, &params(&[("n", -1)])).is_err());
    }

    #[test]
    fn infers_return_type_through_branches() {
        let src = "fun f[n](a: uint, b: bool) { if b { let r <- a == a; } else { let r <- f[n-1](a, b); } return r; }";
        let p = parse_program(src).unwrap();
        let al = BTreeMap::new();
        assert_eq!(infer_ret_type(&p, &al, "f", &mut BTreeSet::new()), Some(CoreType::Bool));
    }
}
