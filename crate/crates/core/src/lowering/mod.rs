//! Expansion of with-blocks, register allocation, and instruction selection.

mod alloc;
mod expand;
mod instr;
mod lower;

pub use alloc::{allocate, AffectedRange, Allocation, DoBlockRecord, LowerConfig};
pub use expand::expand_with;
pub use instr::{AbstractInstr, Opcode};
pub use lower::{lower, lower_mirrored};
pub(crate) use alloc::type_width;
pub(crate) use lower::Selector;

use crate::circuits::{emit_primitive, ConcreteCircuit, Level};
use crate::core_ir::CheckError;
use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LowerError {
    #[error("{span}: {message}")]
    User { span: Span, message: String },
    #[error("{0}")]
    Check(CheckError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl LowerError {
    pub fn user(span: Span, message: impl Into<String>) -> Self {
        LowerError::User { span, message: message.into() }
    }
}

/// Expands instructions into an MCX-level circuit. Template ancillas are
/// shared across instructions and appended after the allocated wires.
pub fn build_circuit(instrs: &[AbstractInstr], alloc: &Allocation) -> ConcreteCircuit {
    let base = alloc.wire_names.len() as u32;
    let mut gates = Vec::new();
    let mut anc = 0;
    for i in instrs {
        let (g, used) = emit_primitive(i, base);
        anc = anc.max(used);
        gates.extend(g);
    }
    let mut wires = alloc.wire_names.clone();
    for k in 0..anc {
        let mut name = format!("anc{k}");
        while alloc.wire_names.contains(&name) {
            name.push('_');
        }
        wires.push(name);
    }
    ConcreteCircuit { level: Level::Mcx, wires, inputs: alloc.input_wires(), gates }
}
