use crate::circuits::{ConcreteCircuit, Gate, GateKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("basis simulation cannot run gate {0:?}; use the state-vector simulator")]
    NotClassical(GateKind),
    #[error("circuit has {0} wires; the state-vector simulator is limited to {1}")]
    TooManyWires(usize, usize),
    #[error("state has {0} wires but the circuit has {1}")]
    WidthMismatch(usize, usize),
}

/// Hadamards have no basis-state semantics; phase gates act as identity.
fn classical(gates: &[Gate]) -> Result<(), SimError> {
    match gates.iter().find(|g| matches!(g.kind, GateKind::H | GateKind::Ch)) {
        Some(g) => Err(SimError::NotClassical(g.kind)),
        None => Ok(()),
    }
}

/// Runs an X-family circuit on one basis state.
pub fn run_basis(c: &ConcreteCircuit, state: &[bool]) -> Result<Vec<bool>, SimError> {
    if state.len() != c.num_wires() {
        return Err(SimError::WidthMismatch(state.len(), c.num_wires()));
    }
    classical(&c.gates)?;
    let mut s = state.to_vec();
    for g in c.gates.iter().filter(|g| g.kind == GateKind::X) {
        if g.controls.iter().all(|w| s[*w as usize]) {
            s[g.target as usize] ^= true;
        }
    }
    Ok(s)
}

/// Runs an X-family circuit on 64 basis states at once; `lanes[w]` holds
/// wire `w` across the 64 states.
pub fn run_basis_sliced(c: &ConcreteCircuit, lanes: &mut [u64]) -> Result<(), SimError> {
    if lanes.len() != c.num_wires() {
        return Err(SimError::WidthMismatch(lanes.len(), c.num_wires()));
    }
    classical(&c.gates)?;
    for g in c.gates.iter().filter(|g| g.kind == GateKind::X) {
        let mut m = u64::MAX;
        for w in &g.controls {
            m &= lanes[*w as usize];
        }
        lanes[g.target as usize] ^= m;
    }
    Ok(())
}
