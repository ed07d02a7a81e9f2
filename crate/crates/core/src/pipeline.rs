//! Source to circuit: every stage in order.

use crate::circuits::{to_level, ConcreteCircuit, Level};
use crate::core_ir::{check_program, stmt_vars, CheckError, CoreProgram, CoreStmt};
use crate::frontend::{desugar, instantiate_and_inline, parse_program, FrontendError};
use crate::lowering::{allocate, build_circuit, expand_with, lower, AbstractInstr, Allocation, LowerConfig, LowerError};
use crate::optimizer::{normalize_withs, optimize_stmt, OptStats, OptimizerConfig};
use crate::sim::WirePair;
use crate::span::Fresh;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Frontend(#[from] FrontendError),
    #[error("{0}")]
    Check(CheckError),
    #[error("{0}")]
    Lower(#[from] LowerError),
    #[error("optimizer produced an ill-typed program: {0}")]
    Optimizer(CheckError),
    #[error("{0}")]
    Interface(String),
}

impl PipelineError {
    /// Defects in the compiler rather than in the program.
    pub fn is_internal(&self) -> bool {
        matches!(self, PipelineError::Optimizer(_) | PipelineError::Lower(LowerError::Internal(_)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct CompileOptions {
    pub params: BTreeMap<String, i64>,
    pub config: LowerConfig,
    pub opt: OptimizerConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig::ALL
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    /// The desugared program before optimization.
    pub program: CoreProgram,
    /// The body after optimization and with-normalization.
    pub body: CoreStmt,
    pub stats: OptStats,
    pub alloc: Allocation,
    pub instrs: Vec<AbstractInstr>,
    /// The MCX-level circuit.
    pub circuit: ConcreteCircuit,
}

impl Compiled {
    pub fn at(&self, level: Level) -> ConcreteCircuit {
        to_level(&self.circuit, level)
    }

    /// The optimized program as a core program.
    pub fn optimized(&self) -> CoreProgram {
        self.program.with_body(self.body.clone())
    }
}

/// Parses, inlines, desugars and type-checks.
pub fn front(source: &str, params: &BTreeMap<String, i64>) -> Result<CoreProgram, PipelineError> {
    let ast = parse_program(source)?;
    let inlined = instantiate_and_inline(&ast, params)?;
    let p = desugar(inlined)?;
    check_program(&p).map_err(PipelineError::Check)?;
    Ok(p)
}

/// Optimizes a checked core program and normalizes its with-blocks.
pub fn optimize_program(p: &CoreProgram, opt: OptimizerConfig) -> Result<(CoreStmt, OptStats), PipelineError> {
    if !opt.enabled() {
        return Ok((p.body.clone(), OptStats::default()));
    }
    let used = stmt_vars(&p.body);
    let mut fresh = Fresh::avoiding(used.iter().map(|s| s.as_str()).chain(p.inputs.iter().map(|(x, _)| x.as_str())));
    let (s, stats) = optimize_stmt(&p.body, opt, &mut fresh);
    let s = normalize_withs(&s);
    check_program(&p.with_body(s.clone())).map_err(PipelineError::Optimizer)?;
    Ok((s, stats))
}

/// Lowers a checked core program.
pub fn compile_core(p: &CoreProgram, opts: &CompileOptions) -> Result<Compiled, PipelineError> {
    let (body, stats) = optimize_program(p, opts.opt)?;
    let alloc = allocate(p, &body, &opts.config)?;
    let instrs = lower(p, &expand_with(&body), &alloc)?;
    let circuit = build_circuit(&instrs, &alloc);
    Ok(Compiled { program: p.clone(), body, stats, alloc, instrs, circuit })
}

pub fn compile(source: &str, opts: &CompileOptions) -> Result<Compiled, PipelineError> {
    compile_core(&front(source, &opts.params)?, opts)
}

fn ports(a: &[(String, Vec<u32>)], b: &[(String, Vec<u32>)], what: &str) -> Result<Vec<WirePair>, PipelineError> {
    let mb: BTreeMap<&str, &Vec<u32>> = b.iter().map(|(x, w)| (x.as_str(), w)).collect();
    if a.len() != mb.len() {
        return Err(PipelineError::Interface(format!("the programs declare different {what} variables")));
    }
    let mut v = Vec::new();
    for (x, wa) in a {
        let wb = mb
            .get(x.as_str())
            .ok_or_else(|| PipelineError::Interface(format!("{what} variable `{x}` is missing from the second program")))?;
        if wa.len() != wb.len() {
            return Err(PipelineError::Interface(format!("{what} variable `{x}` has different widths")));
        }
        for (i, (p, q)) in wa.iter().zip(wb.iter()).enumerate() {
            let name = if wa.len() == 1 { x.clone() } else { format!("{x}.{i}") };
            v.push(WirePair { name, a: *p, b: *q });
        }
    }
    Ok(v)
}

/// Input and observed wires matched by variable name, memory included.
pub fn io_pairs(a: &Allocation, b: &Allocation) -> Result<(Vec<WirePair>, Vec<WirePair>), PipelineError> {
    let mut ins = ports(&a.inputs, &b.inputs, "input")?;
    let mut outs = ports(&a.outputs, &b.outputs, "output")?;
    if a.memory.len() != b.memory.len() || a.cell_width != b.cell_width {
        return Err(PipelineError::Interface("the programs use different memory layouts".into()));
    }
    for (c, (ca, cb)) in a.memory.iter().zip(&b.memory).enumerate() {
        for (i, (p, q)) in ca.iter().zip(cb).enumerate() {
            let m = WirePair { name: format!("m{}.{i}", c + 1), a: *p, b: *q };
            ins.push(m.clone());
            outs.push(m);
        }
    }
    Ok((ins, outs))
}
