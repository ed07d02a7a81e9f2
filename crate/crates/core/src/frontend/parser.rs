use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::FrontendError;
use crate::core_ir::{BinOp, CoreType};
use crate::span::Span;
use std::collections::{BTreeMap, BTreeSet};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, FrontendError>;

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Kw(k) => format!("`{k}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Kw(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, what: &str) -> PResult<T> {
        Err(FrontendError::new(
            self.span(),
            format!("expected {what}, found {}", describe(self.peek())),
        ))
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("identifier"),
        }
    }

    fn program(&mut self) -> PResult<SurfaceProgram> {
        let mut types = Vec::new();
        let mut functions = Vec::new();
        loop {
            if self.is_kw("type") {
                self.bump();
                let name = self.ident()?;
                self.expect_sym("=")?;
                let t = self.ty()?;
                self.expect_sym(";")?;
                types.push((name, t));
            } else if self.is_kw("fun") {
                functions.push(self.function()?);
            } else if *self.peek() == Tok::Eof {
                break;
            } else {
                return self.fail("`fun` or `type`");
            }
        }
        Ok(SurfaceProgram { types, functions })
    }

    fn ty(&mut self) -> PResult<CoreType> {
        match self.peek().clone() {
            Tok::Kw("uint") => {
                self.bump();
                Ok(CoreType::Uint)
            }
            Tok::Kw("bool") => {
                self.bump();
                Ok(CoreType::Bool)
            }
            Tok::Kw("ptr") => {
                self.bump();
                self.expect_sym("<")?;
                let t = self.ty()?;
                self.expect_sym(">")?;
                Ok(CoreType::ptr(t))
            }
            Tok::Sym("(") => {
                self.bump();
                if self.eat_sym(")") {
                    return Ok(CoreType::Unit);
                }
                let a = self.ty()?;
                self.expect_sym(",")?;
                let b = self.ty()?;
                self.expect_sym(")")?;
                Ok(CoreType::pair(a, b))
            }
            Tok::Ident(n) => {
                self.bump();
                Ok(CoreType::Named(n))
            }
            _ => self.fail("type"),
        }
    }

    fn function(&mut self) -> PResult<FunctionDef> {
        let span = self.span();
        self.expect_kw("fun")?;
        let name = self.ident()?;
        let mut statics = Vec::new();
        if self.eat_sym("[") {
            loop {
                statics.push(self.ident()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym("]")?;
        }
        self.expect_sym("(")?;
        let mut params = Vec::new();
        if !self.is_sym(")") {
            loop {
                let x = self.ident()?;
                self.expect_sym(":")?;
                params.push((x, self.ty()?));
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        let ret_type = if self.eat_sym("->") { Some(self.ty()?) } else { None };
        self.expect_sym("{")?;
        let mut body = Vec::new();
        let mut ret = None;
        while !self.is_sym("}") {
            if self.is_kw("return") {
                self.bump();
                ret = Some(self.ident()?);
                self.expect_sym(";")?;
                if !self.is_sym("}") {
                    return self.fail("`}` after return");
                }
                break;
            }
            body.push(self.stmt()?);
        }
        self.expect_sym("}")?;
        Ok(FunctionDef { name, statics, params, ret_type, body, ret, span })
    }

    fn block(&mut self) -> PResult<Vec<SStmt>> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        while !self.is_sym("}") {
            if *self.peek() == Tok::Eof {
                return self.fail("`}`");
            }
            out.push(self.stmt()?);
        }
        self.bump();
        Ok(out)
    }

    fn block_or_stmt(&mut self) -> PResult<Vec<SStmt>> {
        if self.is_sym("{") {
            self.block()
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> PResult<SStmt> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Kw("let") => {
                self.bump();
                let var = self.ident()?;
                let dir = if self.eat_sym("<-") {
                    Dir::Bind
                } else if self.eat_sym("->") {
                    Dir::Unbind
                } else {
                    return self.fail("`<-` or `->`");
                };
                let expr = self.expr()?;
                self.expect_sym(";")?;
                Ok(SStmt::Let { var, dir, expr, span })
            }
            Tok::Kw("had") => {
                self.bump();
                let var = self.ident()?;
                self.expect_sym(";")?;
                Ok(SStmt::Had { var, span })
            }
            Tok::Kw("skip") => {
                self.bump();
                self.expect_sym(";")?;
                Ok(SStmt::Skip { span })
            }
            Tok::Sym("*") => {
                self.bump();
                let ptr = self.ident()?;
                self.expect_sym("<->")?;
                let val = self.ident()?;
                self.expect_sym(";")?;
                Ok(SStmt::MemSwap { ptr, val, span })
            }
            Tok::Ident(_) => {
                let a = self.ident()?;
                self.expect_sym("<->")?;
                let b = self.ident()?;
                self.expect_sym(";")?;
                Ok(SStmt::Swap { a, b, span })
            }
            Tok::Kw("if") => {
                self.bump();
                let cond = self.expr()?;
                let then_ = self.block()?;
                let else_ = if self.is_kw("else") {
                    self.bump();
                    Some(self.block_or_stmt()?)
                } else {
                    None
                };
                Ok(SStmt::If { cond, then_, else_, span })
            }
            Tok::Kw("with") => {
                self.bump();
                let with = self.block()?;
                self.expect_kw("do")?;
                let body = self.block_or_stmt()?;
                Ok(SStmt::With { with, body, span })
            }
            _ => self.fail("statement"),
        }
    }

    fn binop(&self) -> Option<SBinOp> {
        Some(match self.peek() {
            Tok::Sym("||") => SBinOp::Core(BinOp::Or),
            Tok::Sym("&&") => SBinOp::Core(BinOp::And),
            Tok::Sym("==") => SBinOp::Core(BinOp::Eq),
            Tok::Sym("!=") => SBinOp::Core(BinOp::Neq),
            Tok::Sym("<") => SBinOp::Core(BinOp::Lt),
            Tok::Sym(">") => SBinOp::Gt,
            Tok::Sym("+") => SBinOp::Core(BinOp::Add),
            Tok::Sym("-") => SBinOp::Core(BinOp::Sub),
            Tok::Sym("*") => SBinOp::Core(BinOp::Mul),
            _ => return None,
        })
    }

    fn expr(&mut self) -> PResult<SExpr> {
        self.expr_prec(1)
    }

    fn expr_prec(&mut self, min: u8) -> PResult<SExpr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            let p = op.precedence();
            if p < min {
                break;
            }
            self.bump();
            let rhs = self.expr_prec(p + 1)?;
            lhs = SExpr::Bin(Box::new(lhs), op, Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<SExpr> {
        if self.is_kw("not") {
            self.bump();
            return Ok(SExpr::Not(Box::new(self.unary()?)));
        }
        let mut e = self.primary()?;
        while self.is_sym(".") {
            self.bump();
            match self.bump() {
                Tok::Int(i @ (1 | 2)) => e = SExpr::Proj(Box::new(e), i as u8),
                _ => {
                    self.pos -= 1;
                    return self.fail("projection index 1 or 2");
                }
            }
        }
        Ok(e)
    }

    fn angle_type(&mut self) -> PResult<CoreType> {
        self.expect_sym("<")?;
        let t = self.ty()?;
        self.expect_sym(">")?;
        Ok(t)
    }

    fn primary(&mut self) -> PResult<SExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(SExpr::Int(n))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(SExpr::True)
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(SExpr::False)
            }
            Tok::Kw("null") => {
                self.bump();
                if self.is_sym("<") {
                    let save = self.pos;
                    if let Ok(t) = self.angle_type() {
                        return Ok(SExpr::Null(Some(t)));
                    }
                    self.pos = save;
                }
                Ok(SExpr::Null(None))
            }
            Tok::Kw("default") => {
                self.bump();
                Ok(SExpr::Default(self.angle_type()?))
            }
            Tok::Kw("alloc") => {
                self.bump();
                Ok(SExpr::Alloc(self.angle_type()?))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.is_sym("[") || self.is_sym("(") {
                    let mut statics = Vec::new();
                    if self.eat_sym("[") {
                        loop {
                            statics.push(self.depth()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                        self.expect_sym("]")?;
                    }
                    self.expect_sym("(")?;
                    let mut args = Vec::new();
                    if !self.is_sym(")") {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                    }
                    self.expect_sym(")")?;
                    return Ok(SExpr::Call { func: name, statics, args });
                }
                Ok(SExpr::Var(name))
            }
            Tok::Sym("(") => {
                self.bump();
                if self.eat_sym(")") {
                    return Ok(SExpr::Unit);
                }
                let a = self.expr()?;
                if self.eat_sym(",") {
                    let b = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(SExpr::Pair(Box::new(a), Box::new(b)));
                }
                self.expect_sym(")")?;
                Ok(a)
            }
            _ => self.fail("expression"),
        }
    }

    fn depth(&mut self) -> PResult<DepthExpr> {
        let mut e = self.depth_atom()?;
        loop {
            if self.eat_sym("+") {
                e = DepthExpr::Add(Box::new(e), Box::new(self.depth_atom()?));
            } else if self.eat_sym("-") {
                e = DepthExpr::Sub(Box::new(e), Box::new(self.depth_atom()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn depth_atom(&mut self) -> PResult<DepthExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(DepthExpr::Lit(n as i64))
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(DepthExpr::Param(x))
            }
            _ => self.fail("static expression"),
        }
    }
}

/// Parses a source file into a surface program and validates names.
pub fn parse_program(src: &str) -> Result<SurfaceProgram, FrontendError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let prog = p.program()?;
    validate(&prog)?;
    Ok(prog)
}

fn validate(p: &SurfaceProgram) -> Result<(), FrontendError> {
    if p.functions.is_empty() {
        return Err(FrontendError::new(Span::new(1, 1), "program has no functions"));
    }
    let mut types = BTreeMap::new();
    for (n, t) in &p.types {
        if types.insert(n.clone(), t.clone()).is_some() {
            return Err(FrontendError::new(Span::new(1, 1), format!("duplicate type `{n}`")));
        }
    }
    for (n, t) in &p.types {
        check_type_names(t, &types, Span::new(1, 1))?;
        if unguarded_cycle(n, t, &types, &mut BTreeSet::new()) {
            return Err(FrontendError::new(
                Span::new(1, 1),
                format!("type `{n}` refers to itself outside a pointer"),
            ));
        }
    }
    let mut seen = BTreeSet::new();
    for f in &p.functions {
        if !seen.insert(f.name.clone()) {
            return Err(FrontendError::new(f.span, format!("duplicate function `{}`", f.name)));
        }
    }
    for f in &p.functions {
        for (_, t) in &f.params {
            check_type_names(t, &types, f.span)?;
        }
        if let Some(t) = &f.ret_type {
            check_type_names(t, &types, f.span)?;
        }
        validate_block(p, f, &f.body, &types)?;
    }
    Ok(())
}

fn unguarded_cycle(
    target: &str,
    t: &CoreType,
    types: &BTreeMap<String, CoreType>,
    visiting: &mut BTreeSet<String>,
) -> bool {
    match t {
        CoreType::Named(n) => {
            if n == target {
                return true;
            }
            if !visiting.insert(n.clone()) {
                return false;
            }
            types.get(n).is_some_and(|u| unguarded_cycle(target, u, types, visiting))
        }
        CoreType::Pair(a, b) => {
            unguarded_cycle(target, a, types, visiting) || unguarded_cycle(target, b, types, visiting)
        }
        _ => false,
    }
}

fn check_type_names(t: &CoreType, types: &BTreeMap<String, CoreType>, span: Span) -> Result<(), FrontendError> {
    match t {
        CoreType::Named(n) if !types.contains_key(n) => {
            Err(FrontendError::new(span, format!("unknown type `{n}`")))
        }
        CoreType::Pair(a, b) => {
            check_type_names(a, types, span)?;
            check_type_names(b, types, span)
        }
        CoreType::Ptr(a) => check_type_names(a, types, span),
        _ => Ok(()),
    }
}

fn validate_block(
    p: &SurfaceProgram,
    f: &FunctionDef,
    b: &[SStmt],
    types: &BTreeMap<String, CoreType>,
) -> Result<(), FrontendError> {
    for s in b {
        match s {
            SStmt::Let { expr, span, .. } => validate_expr(p, f, expr, types, *span, true)?,
            SStmt::If { cond, then_, else_, span } => {
                validate_expr(p, f, cond, types, *span, false)?;
                validate_block(p, f, then_, types)?;
                if let Some(e) = else_ {
                    validate_block(p, f, e, types)?;
                }
            }
            SStmt::With { with, body, .. } => {
                validate_block(p, f, with, types)?;
                validate_block(p, f, body, types)?;
            }
            SStmt::Reversed { body, .. } => validate_block(p, f, body, types)?,
            _ => {}
        }
    }
    Ok(())
}

fn validate_expr(
    p: &SurfaceProgram,
    f: &FunctionDef,
    e: &SExpr,
    types: &BTreeMap<String, CoreType>,
    span: Span,
    top: bool,
) -> Result<(), FrontendError> {
    match e {
        SExpr::Call { func, statics, args } => {
            if !top {
                return Err(FrontendError::new(span, "a call must be the whole right-hand side of `let`"));
            }
            let callee = p
                .function(func)
                .ok_or_else(|| FrontendError::new(span, format!("unknown function `{func}`")))?;
            if callee.statics.len() != statics.len() {
                return Err(FrontendError::new(
                    span,
                    format!("`{func}` takes {} static arguments, got {}", callee.statics.len(), statics.len()),
                ));
            }
            if callee.params.len() != args.len() {
                return Err(FrontendError::new(
                    span,
                    format!("`{func}` takes {} arguments, got {}", callee.params.len(), args.len()),
                ));
            }
            for d in statics {
                check_depth(d, f, span)?;
            }
            for a in args {
                validate_expr(p, f, a, types, span, false)?;
            }
            Ok(())
        }
        SExpr::Null(Some(t)) | SExpr::Default(t) | SExpr::Alloc(t) => {
            if matches!(e, SExpr::Alloc(_)) && !top {
                return Err(FrontendError::new(span, "`alloc` must be the whole right-hand side of `let`"));
            }
            check_type_names(t, types, span)
        }
        SExpr::Pair(a, b) | SExpr::Bin(a, _, b) => {
            validate_expr(p, f, a, types, span, false)?;
            validate_expr(p, f, b, types, span, false)
        }
        SExpr::Proj(a, _) | SExpr::Not(a) => validate_expr(p, f, a, types, span, false),
        _ => Ok(()),
    }
}

fn check_depth(d: &DepthExpr, f: &FunctionDef, span: Span) -> Result<(), FrontendError> {
    match d {
        DepthExpr::Lit(_) => Ok(()),
        DepthExpr::Param(x) if f.statics.contains(x) => Ok(()),
        DepthExpr::Param(x) => Err(FrontendError::new(span, format!("unknown static parameter `{x}`"))),
        DepthExpr::Add(a, b) | DepthExpr::Sub(a, b) => {
            check_depth(a, f, span)?;
            check_depth(b, f, span)
        }
    }
}
