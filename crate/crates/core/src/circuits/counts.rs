use super::{ConcreteCircuit, Gate, GateKind};
use std::fmt::Write;

/// T-cost recorded for one controlled Hadamard.
pub const CH_T: u64 = 8;

/// T gates in the decomposition of an X with `c` controls.
pub fn mcx_t(c: usize) -> u64 {
    if c < 2 {
        0
    } else {
        7 * (2 * (c as u64 - 2) + 1)
    }
}

/// Toffolis in the decomposition of an X with `c` controls.
pub fn mcx_toffolis(c: usize) -> u64 {
    if c < 2 {
        0
    } else {
        2 * (c as u64 - 2) + 1
    }
}

/// T gates in the decomposition of an H with `c` controls.
pub fn controlled_h_t(c: usize) -> u64 {
    match c {
        0 => 0,
        1 => CH_T,
        _ => CH_T + 14 * (c as u64 - 1),
    }
}

/// T gates a single MCX-level gate costs once fully decomposed.
pub fn gate_t(g: &Gate) -> u64 {
    match g.kind {
        GateKind::X => mcx_t(g.controls.len()),
        GateKind::H => controlled_h_t(g.controls.len()),
        GateKind::T | GateKind::Tdg => 1,
        GateKind::Ch => CH_T,
        GateKind::S | GateKind::Sdg | GateKind::Z => 0,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub t: u64,
    pub toffoli: u64,
    pub mcx_ge2: u64,
    pub cnot: u64,
    pub x: u64,
    pub h: u64,
    pub s: u64,
    pub z: u64,
    pub ch: u64,
    pub qubits: u64,
    /// T-count after full decomposition, computed from control counts.
    pub t_formula: u64,
}

impl GateCounts {
    /// Gates of the X family plus Hadamards: the MCX-level gate count.
    pub fn mcx_gates(&self) -> u64 {
        self.mcx_ge2 + self.cnot + self.x + self.h + self.ch
    }

    pub fn get(&self, metric: &str) -> Option<u64> {
        Some(match metric {
            "mcx_ge2" => self.mcx_ge2,
            "cnot" => self.cnot,
            "x" => self.x,
            "toffoli" => self.toffoli,
            "t" => self.t,
            "h" => self.h,
            "s" => self.s,
            "z" => self.z,
            "ch" => self.ch,
            "qubits" => self.qubits,
            "t_formula" => self.t_formula,
            _ => return None,
        })
    }

    pub const METRICS: [&'static str; 11] =
        ["mcx_ge2", "cnot", "x", "toffoli", "t", "h", "s", "z", "ch", "qubits", "t_formula"];

    /// `metric value` lines.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for m in Self::METRICS {
            let _ = writeln!(s, "{m} {}", self.get(m).unwrap());
        }
        s
    }
}

pub fn count_gates(c: &ConcreteCircuit) -> GateCounts {
    let mut n = GateCounts { qubits: c.wires.len() as u64, ..Default::default() };
    for g in &c.gates {
        n.t_formula += gate_t(g);
        let k = g.controls.len();
        match g.kind {
            GateKind::X => {
                match k {
                    0 => n.x += 1,
                    1 => n.cnot += 1,
                    _ => n.mcx_ge2 += 1,
                }
                if k == 2 {
                    n.toffoli += 1;
                }
            }
            GateKind::H => {
                if k == 0 {
                    n.h += 1;
                } else {
                    n.ch += 1;
                }
            }
            GateKind::T | GateKind::Tdg => {
                n.t += 1;
            }
            GateKind::S | GateKind::Sdg => n.s += 1,
            GateKind::Z => n.z += 1,
            GateKind::Ch => {
                n.ch += 1;
                n.t += CH_T;
            }
        }
    }
    n
}
