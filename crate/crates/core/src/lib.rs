//! Compiler from a reversible language with bounded recursion to
//! multi-controlled-gate and Clifford+T circuits.

pub mod core_ir;
pub mod frontend;
pub mod span;

pub use core_ir::{CoreExpr, CoreProgram, CoreStmt, CoreType, CoreValue};
pub use span::Span;
pub mod circuits;
pub mod lowering;
pub mod sim;
pub mod optimizer;
pub mod costmodel;
pub mod pipeline;
