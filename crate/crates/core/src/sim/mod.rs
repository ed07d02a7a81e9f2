//! Basis-state and state-vector simulation, and circuit equivalence.

mod basis;
mod equiv;
mod state;
mod statevector;

pub use basis::{run_basis, run_basis_sliced, SimError};
pub use equiv::{check_equivalence, input_set, EquivError, EquivReport, WirePair, EXHAUSTIVE_LIMIT, SAMPLE_SEED};
pub use state::MachineState;
pub use statevector::{run_statevector, StateVector, MAX_WIRES};
