//! Gates, primitive templates, decompositions, gate counting and `.qc` I/O.

mod counts;
mod decompose;
mod gate;
mod primitives;
mod qc;

pub use counts::{controlled_h_t, count_gates, gate_t, mcx_t, mcx_toffolis, GateCounts, CH_T};
pub use decompose::{decompose_mcx, decompose_toffoli, qubits_at, to_level, toffoli_gates};
pub use gate::{ConcreteCircuit, Gate, GateKind, Level};
pub use primitives::{emit_primitive, redirects};
pub(crate) use primitives::emit_with;
pub use qc::{read_qc, write_qc, QcError};
