use super::{ConcreteCircuit, Gate, GateKind, Level};
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct QcError {
    pub line: usize,
    pub message: String,
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

pub fn write_qc(c: &ConcreteCircuit) -> String {
    let mut s = String::new();
    let name = |w: u32| c.wires[w as usize].as_str();
    let _ = writeln!(s, ".v {}", c.wires.join(" "));
    let ins: Vec<&str> = c.inputs.iter().map(|w| name(*w)).collect();
    let _ = writeln!(s, ".i {}", ins.join(" "));
    s.push_str("BEGIN\n");
    for g in &c.gates {
        let op = match g.kind {
            GateKind::X => "tof",
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::Tdg => "T*",
            GateKind::S => "S",
            GateKind::Sdg => "S*",
            GateKind::Z => "Z",
            GateKind::Ch => "ch",
        };
        s.push_str(op);
        for w in g.wires() {
            s.push(' ');
            s.push_str(name(w));
        }
        s.push('\n');
    }
    s.push_str("END\n");
    s
}

/// Parses `.qc` text. The level is inferred from the gates present.
pub fn read_qc(text: &str) -> Result<ConcreteCircuit, QcError> {
    let err = |line: usize, m: &str| QcError { line, message: m.to_string() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, v) = lines.next().ok_or_else(|| err(1, "missing `.v` header"))?;
    let wires: Vec<String> = match v.strip_prefix(".v") {
        Some(rest) => rest.split_whitespace().map(String::from).collect(),
        None => return Err(err(ln, "expected `.v` header")),
    };
    let mut index = HashMap::new();
    for (i, w) in wires.iter().enumerate() {
        if !valid_name(w) {
            return Err(err(ln, &format!("invalid wire name `{w}`")));
        }
        if index.insert(w.clone(), i as u32).is_some() {
            return Err(err(ln, &format!("duplicate wire `{w}`")));
        }
    }
    let lookup = |ln: usize, w: &str| index.get(w).copied().ok_or_else(|| err(ln, &format!("unknown wire `{w}`")));
    let (ln, i) = lines.next().ok_or_else(|| err(ln + 1, "missing `.i` header"))?;
    let inputs = match i.strip_prefix(".i") {
        Some(rest) => rest.split_whitespace().map(|w| lookup(ln, w)).collect::<Result<Vec<_>, _>>()?,
        None => return Err(err(ln, "expected `.i` header")),
    };
    match lines.next() {
        Some((_, "BEGIN")) => {}
        Some((ln, _)) => return Err(err(ln, "expected BEGIN")),
        None => return Err(err(ln + 1, "expected BEGIN")),
    }
    let mut gates = Vec::new();
    let mut ended = false;
    for (ln, l) in lines.by_ref() {
        if l == "END" {
            ended = true;
            break;
        }
        let mut parts = l.split_whitespace();
        let op = parts.next().unwrap();
        let ws = parts.map(|w| lookup(ln, w)).collect::<Result<Vec<_>, _>>()?;
        let Some((&target, controls)) = ws.split_last() else {
            return Err(err(ln, "gate without wires"));
        };
        let kind = match op {
            "tof" => GateKind::X,
            "H" => GateKind::H,
            "T" => GateKind::T,
            "T*" => GateKind::Tdg,
            "S" => GateKind::S,
            "S*" => GateKind::Sdg,
            "Z" => GateKind::Z,
            "ch" => GateKind::Ch,
            _ => return Err(err(ln, &format!("unknown gate `{op}`"))),
        };
        let arity_ok = match kind {
            GateKind::X | GateKind::H => true,
            GateKind::Ch => controls.len() == 1,
            _ => controls.is_empty(),
        };
        if !arity_ok {
            return Err(err(ln, &format!("wrong number of wires for `{op}`")));
        }
        if controls.contains(&target) {
            return Err(err(ln, "target repeated among controls"));
        }
        gates.push(Gate { kind, controls: controls.to_vec(), target });
    }
    if !ended {
        return Err(err(text.lines().count() + 1, "missing END"));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "text after END"));
    }
    let level = if gates.iter().any(|g| g.kind == GateKind::X && g.controls.len() > 2
        || g.kind == GateKind::H && !g.controls.is_empty())
    {
        Level::Mcx
    } else if gates.iter().any(|g| g.kind == GateKind::X && g.controls.len() == 2) {
        Level::Toffoli
    } else {
        Level::CliffordT
    };
    Ok(ConcreteCircuit { level, wires, inputs, gates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cnot() {
        let mut c = ConcreteCircuit::new(Level::Mcx, vec!["x".into(), "y".into()], vec![0, 1]);
        c.gates.push(Gate::x(vec![0], 1));
        assert_eq!(write_qc(&c), ".v x y\n.i x y\nBEGIN\ntof x y\nEND\n");
    }

    #[test]
    fn toffoli_line() {
        let mut c = ConcreteCircuit::new(Level::Toffoli, vec!["a".into(), "b".into(), "c".into()], vec![]);
        c.gates.push(Gate::x(vec![0, 1], 2));
        assert!(write_qc(&c).contains("\ntof a b c\n"));
    }

    #[test]
    fn read_errors_name_the_line() {
        let e = read_qc(".v a b\n.i a\nBEGIN\ntof a q\nEND\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(read_qc(".v a\n.i a\nBEGIN\nT a\n").is_err());
        assert!(read_qc(".v 1a\n.i\nBEGIN\nEND\n").is_err());
    }

    #[test]
    fn round_trip_mixed() {
        let names: Vec<String> = ["a", "b.0", "anc0"].iter().map(|s| s.to_string()).collect();
        let mut c = ConcreteCircuit::new(Level::CliffordT, names, vec![0]);
        c.gates = vec![
            Gate::single(GateKind::H, 2),
            Gate::single(GateKind::Tdg, 1),
            Gate::single(GateKind::Sdg, 0),
            Gate::ch(0, 1),
            Gate::x(vec![], 0),
        ];
        let back = read_qc(&write_qc(&c)).unwrap();
        assert_eq!(back.gates, c.gates);
        assert_eq!(back.wires, c.wires);
        assert_eq!(back.inputs, c.inputs);
    }
}
