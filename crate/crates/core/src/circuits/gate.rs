use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    H,
    T,
    Tdg,
    S,
    Sdg,
    Z,
    /// Controlled Hadamard kept as a macro with a fixed T-cost.
    Ch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<u32>,
    pub target: u32,
}

impl Gate {
    pub fn x(controls: Vec<u32>, target: u32) -> Self {
        Gate { kind: GateKind::X, controls, target }
    }

    pub fn single(kind: GateKind, target: u32) -> Self {
        Gate { kind, controls: Vec::new(), target }
    }

    pub fn ch(control: u32, target: u32) -> Self {
        Gate { kind: GateKind::Ch, controls: vec![control], target }
    }

    pub fn wires(&self) -> impl Iterator<Item = u32> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Mcx,
    Toffoli,
    CliffordT,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Mcx => "mcx",
            Level::Toffoli => "toffoli",
            Level::CliffordT => "cliffordt",
        })
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mcx" => Ok(Level::Mcx),
            "toffoli" => Ok(Level::Toffoli),
            "cliffordt" => Ok(Level::CliffordT),
            _ => Err(format!("unknown gate level `{s}` (expected mcx, toffoli or cliffordt)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteCircuit {
    pub level: Level,
    pub wires: Vec<String>,
    /// Wires that carry input (listed on the `.i` line).
    pub inputs: Vec<u32>,
    pub gates: Vec<Gate>,
}

impl ConcreteCircuit {
    pub fn new(level: Level, wires: Vec<String>, inputs: Vec<u32>) -> Self {
        ConcreteCircuit { level, wires, inputs, gates: Vec::new() }
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn has_hadamard(&self) -> bool {
        self.gates.iter().any(|g| matches!(g.kind, GateKind::H | GateKind::Ch))
    }

    /// Whether every gate is allowed at the circuit's level.
    pub fn level_ok(&self) -> bool {
        self.gates.iter().all(|g| match self.level {
            Level::Mcx => matches!(g.kind, GateKind::X | GateKind::H),
            Level::Toffoli => match g.kind {
                GateKind::X => g.controls.len() <= 2,
                GateKind::H => g.controls.is_empty(),
                GateKind::Ch => g.controls.len() == 1,
                _ => false,
            },
            Level::CliffordT => match g.kind {
                GateKind::X => g.controls.len() <= 1,
                GateKind::Ch => g.controls.len() == 1,
                _ => g.controls.is_empty(),
            },
        })
    }
}
