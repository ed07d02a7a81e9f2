use crate::span::Span;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opcode {
    XorConst,
    XorReg,
    Not,
    Test,
    And,
    Or,
    Add,
    Sub,
    Mul,
    Eq,
    Neq,
    Lt,
    Swap,
    MemSwap,
    Had,
}

impl Opcode {
    pub fn name(self) -> &'static str {
        match self {
            Opcode::XorConst => "xor_const",
            Opcode::XorReg => "xor_reg",
            Opcode::Not => "not",
            Opcode::Test => "test",
            Opcode::And => "and",
            Opcode::Or => "or",
            Opcode::Add => "add",
            Opcode::Sub => "sub",
            Opcode::Mul => "mul",
            Opcode::Eq => "eq",
            Opcode::Neq => "neq",
            Opcode::Lt => "lt",
            Opcode::Swap => "swap",
            Opcode::MemSwap => "mem_swap",
            Opcode::Had => "had",
        }
    }

    /// Index of a source operand that the template writes temporarily.
    pub fn scratch_src(self) -> Option<usize> {
        match self {
            Opcode::Not | Opcode::Test | Opcode::Eq | Opcode::Neq => Some(0),
            Opcode::Sub | Opcode::Lt => Some(1),
            _ => None,
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(
            self,
            Opcode::And | Opcode::Or | Opcode::Add | Opcode::Sub | Opcode::Mul | Opcode::Eq | Opcode::Neq | Opcode::Lt
        )
    }
}

/// One primitive operation on wire ranges with its guard controls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractInstr {
    pub op: Opcode,
    /// The register written: the bound variable, the first swap operand, the
    /// swapped value of a memory swap, or the Hadamard target.
    pub dst: Vec<u32>,
    /// Operands: one for copies, tests, swaps and memory swaps (the address),
    /// two for binary operators.
    pub srcs: Vec<Vec<u32>>,
    /// Bits of a constant for `xor_const`, least significant first.
    pub konst: Vec<bool>,
    /// Memory cells 1.. for `mem_swap`, each restricted to the value width.
    pub mem: Vec<Vec<u32>>,
    pub controls: Vec<u32>,
    /// Emit the template in reverse (unassignment).
    pub inverse: bool,
    pub span: Span,
}

impl fmt::Display for AbstractInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let range = |w: &[u32]| {
            let v: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("[{}]", v.join(","))
        };
        write!(f, "{}{} {}", self.op.name(), if self.inverse { "^-1" } else { "" }, range(&self.dst))?;
        for s in &self.srcs {
            write!(f, " {}", range(s))?;
        }
        if self.op == Opcode::XorConst {
            let bits: String = self.konst.iter().rev().map(|b| if *b { '1' } else { '0' }).collect();
            write!(f, " #{bits}")?;
        }
        if !self.mem.is_empty() {
            write!(f, " cells={}", self.mem.len())?;
        }
        write!(f, " @ctrl{}", range(&self.controls))
    }
}
