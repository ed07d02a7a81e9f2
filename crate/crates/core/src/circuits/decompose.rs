use super::{ConcreteCircuit, Gate, GateKind, Level};

fn push_mcx(out: &mut Vec<Gate>, controls: &[u32], target: u32, anc: &[u32]) {
    let n = controls.len();
    if n <= 2 {
        out.push(Gate::x(controls.to_vec(), target));
        return;
    }
    let a = anc[0];
    let pair = vec![controls[n - 2], controls[n - 1]];
    out.push(Gate::x(pair.clone(), a));
    let mut inner = controls[..n - 2].to_vec();
    inner.push(a);
    push_mcx(out, &inner, target, &anc[1..]);
    out.push(Gate::x(pair, a));
}

fn ancillas_needed(g: &Gate) -> usize {
    let n = g.controls.len();
    match g.kind {
        GateKind::X => n.saturating_sub(2),
        GateKind::H if n >= 2 => n - 1,
        _ => 0,
    }
}

/// Rewrites every X with three or more controls into Toffolis and every
/// multiply-controlled H into a Toffoli ladder around one controlled-H macro. Ancillas are appended
/// as a shared pool that is returned to zero after each gate.
pub fn decompose_mcx(c: &ConcreteCircuit) -> ConcreteCircuit {
    let need = c.gates.iter().map(ancillas_needed).max().unwrap_or(0);
    let mut wires = c.wires.clone();
    let base = wires.len() as u32;
    let anc: Vec<u32> = (0..need as u32).map(|i| base + i).collect();
    for i in 0..need {
        let mut name = format!("danc{i}");
        while c.wires.contains(&name) {
            name.push('_');
        }
        wires.push(name);
    }
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match g.kind {
            GateKind::X => push_mcx(&mut gates, &g.controls, g.target, &anc),
            GateKind::H => match g.controls.len() {
                0 => gates.push(g.clone()),
                1 => gates.push(Gate::ch(g.controls[0], g.target)),
                n => {
                    // AND ladder into ancillas, CH, then undo the ladder.
                    let mut ladder = vec![Gate::x(vec![g.controls[0], g.controls[1]], anc[0])];
                    for i in 2..n {
                        ladder.push(Gate::x(vec![anc[i - 2], g.controls[i]], anc[i - 1]));
                    }
                    gates.extend(ladder.iter().cloned());
                    gates.push(Gate::ch(anc[n - 2], g.target));
                    gates.extend(ladder.into_iter().rev());
                }
            },
            _ => gates.push(g.clone()),
        }
    }
    ConcreteCircuit { level: Level::Toffoli, wires, inputs: c.inputs.clone(), gates }
}

/// The fixed seven-T expansion of a Toffoli with controls `a`, `b` and target `t`.
pub fn toffoli_gates(a: u32, b: u32, t: u32) -> Vec<Gate> {
    use GateKind::*;
    let one = Gate::single;
    vec![
        one(H, t),
        Gate::x(vec![b], t),
        one(Tdg, t),
        Gate::x(vec![a], t),
        one(T, t),
        Gate::x(vec![b], t),
        one(Tdg, b),
        one(Tdg, t),
        Gate::x(vec![a], t),
        Gate::x(vec![a], b),
        one(T, t),
        one(Tdg, b),
        one(H, t),
        Gate::x(vec![a], b),
        one(T, a),
        one(S, b),
    ]
}

/// Expands Toffolis into Clifford+T. Larger X gates are first reduced.
pub fn decompose_toffoli(c: &ConcreteCircuit) -> ConcreteCircuit {
    let src = if c.gates.iter().any(|g| ancillas_needed(g) > 0 || g.kind == GateKind::H && !g.controls.is_empty()) {
        decompose_mcx(c)
    } else {
        c.clone()
    };
    let mut gates = Vec::with_capacity(src.gates.len() * 4);
    for g in &src.gates {
        if g.kind == GateKind::X && g.controls.len() == 2 {
            gates.extend(toffoli_gates(g.controls[0], g.controls[1], g.target));
        } else {
            gates.push(g.clone());
        }
    }
    ConcreteCircuit { level: Level::CliffordT, wires: src.wires, inputs: src.inputs, gates }
}

/// Wire count of `to_level(c, level)` without building it.
pub fn qubits_at(c: &ConcreteCircuit, level: Level) -> u64 {
    let extra = match level {
        Level::Mcx => 0,
        _ => c.gates.iter().map(ancillas_needed).max().unwrap_or(0),
    };
    (c.wires.len() + extra) as u64
}

/// Brings a circuit down to the requested level.
pub fn to_level(c: &ConcreteCircuit, level: Level) -> ConcreteCircuit {
    match level {
        Level::Mcx => c.clone(),
        Level::Toffoli => decompose_mcx(c),
        Level::CliffordT => decompose_toffoli(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::count_gates;

    fn mcx_circuit(c: usize) -> ConcreteCircuit {
        let wires = (0..=c).map(|i| format!("w{i}")).collect();
        let mut k = ConcreteCircuit::new(Level::Mcx, wires, (0..=c as u32).collect());
        k.gates.push(Gate::x((0..c as u32).collect(), c as u32));
        k
    }

    #[test]
    fn three_controls_three_toffolis() {
        let d = decompose_mcx(&mcx_circuit(3));
        assert_eq!(d.gates.len(), 3);
        assert!(d.level_ok());
        assert_eq!(d.wires.len(), 5);
    }

    #[test]
    fn qubits_at_matches_decomposition() {
        for c in 1..6 {
            let k = mcx_circuit(c);
            for level in [Level::Mcx, Level::Toffoli, Level::CliffordT] {
                assert_eq!(qubits_at(&k, level), to_level(&k, level).wires.len() as u64);
            }
        }
    }

    #[test]
    fn cnot_unchanged() {
        let d = decompose_mcx(&mcx_circuit(1));
        assert_eq!(d.gates, mcx_circuit(1).gates);
    }

    #[test]
    fn toffoli_template_has_seven_t() {
        let g = toffoli_gates(0, 1, 2);
        assert_eq!(g.len(), 16);
        assert_eq!(g.iter().filter(|g| matches!(g.kind, GateKind::T | GateKind::Tdg)).count(), 7);
    }

    #[test]
    fn multiply_controlled_h_uses_macro() {
        let mut k = mcx_circuit(3);
        k.gates[0].kind = GateKind::H;
        let d = decompose_toffoli(&k);
        assert!(d.level_ok());
        assert_eq!(count_gates(&d).t, count_gates(&k).t_formula);
    }
}
