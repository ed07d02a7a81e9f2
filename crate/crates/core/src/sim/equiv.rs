use super::{run_basis_sliced, run_statevector, SimError, StateVector};
use crate::circuits::ConcreteCircuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

pub const SAMPLE_SEED: u64 = 0xC0FFEE;
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// One observed bit: a label and its wire in each circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirePair {
    pub name: String,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EquivError {
    #[error("wire {0} is outside the circuit")]
    Layout(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub equivalent: bool,
    pub tried: usize,
    pub exhaustive: bool,
    /// First failing input, as input wire names and bits.
    pub counterexample: Option<Vec<(String, bool)>>,
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict {}", if self.equivalent { "equivalent" } else { "different" })?;
        writeln!(f, "inputs_tried {}", self.tried)?;
        writeln!(f, "exhaustive {}", self.exhaustive)?;
        if let Some(cx) = &self.counterexample {
            let v: Vec<String> = cx.iter().map(|(n, b)| format!("{n}={}", *b as u8)).collect();
            writeln!(f, "counterexample {}", v.join(" "))?;
        }
        Ok(())
    }
}

/// The inputs to try: every assignment when there are at most
/// `EXHAUSTIVE_LIMIT` input bits, otherwise all zeros plus `budget - 1`
/// seeded random assignments.
pub fn input_set(bits: usize, budget: usize) -> (Vec<Vec<bool>>, bool) {
    if bits <= EXHAUSTIVE_LIMIT {
        let v = (0..1u64 << bits).map(|x| (0..bits).map(|i| (x >> i) & 1 == 1).collect()).collect();
        return (v, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut v = vec![vec![false; bits]];
    for _ in 1..budget.max(1) {
        v.push((0..bits).map(|_| rng.gen::<bool>()).collect());
    }
    (v, false)
}

fn check_layout(c: &ConcreteCircuit, wires: impl Iterator<Item = u32>) -> Result<(), EquivError> {
    for w in wires {
        if w as usize >= c.num_wires() {
            return Err(EquivError::Layout(w.to_string()));
        }
    }
    Ok(())
}

/// Runs both circuits on each tried assignment of `inputs` (all other wires
/// zero) and compares the `outputs` wires.
pub fn check_equivalence(
    a: &ConcreteCircuit,
    b: &ConcreteCircuit,
    inputs: &[WirePair],
    outputs: &[WirePair],
    budget: usize,
) -> Result<EquivReport, EquivError> {
    check_layout(a, inputs.iter().chain(outputs).map(|p| p.a))?;
    check_layout(b, inputs.iter().chain(outputs).map(|p| p.b))?;
    let (set, exhaustive) = input_set(inputs.len(), budget);
    let quantum = a.has_hadamard() || b.has_hadamard();
    let failure = if quantum {
        first_failure_statevector(a, b, inputs, outputs, &set)?
    } else {
        first_failure_basis(a, b, inputs, outputs, &set)?
    };
    Ok(EquivReport {
        equivalent: failure.is_none(),
        tried: set.len(),
        exhaustive,
        counterexample: failure.map(|i| inputs.iter().map(|p| p.name.clone()).zip(set[i].iter().copied()).collect()),
    })
}

fn first_failure_basis(
    a: &ConcreteCircuit,
    b: &ConcreteCircuit,
    inputs: &[WirePair],
    outputs: &[WirePair],
    set: &[Vec<bool>],
) -> Result<Option<usize>, EquivError> {
    let chunks: Vec<Result<Option<usize>, SimError>> = set
        .par_chunks(64)
        .enumerate()
        .map(|(ci, chunk)| {
            let mut la = vec![0u64; a.num_wires()];
            let mut lb = vec![0u64; b.num_wires()];
            for (j, bits) in chunk.iter().enumerate() {
                for (p, bit) in inputs.iter().zip(bits) {
                    if *bit {
                        la[p.a as usize] |= 1 << j;
                        lb[p.b as usize] |= 1 << j;
                    }
                }
            }
            run_basis_sliced(a, &mut la)?;
            run_basis_sliced(b, &mut lb)?;
            let used = if chunk.len() == 64 { u64::MAX } else { (1u64 << chunk.len()) - 1 };
            let diff = outputs.iter().fold(0u64, |d, p| d | (la[p.a as usize] ^ lb[p.b as usize])) & used;
            Ok((diff != 0).then(|| ci * 64 + diff.trailing_zeros() as usize))
        })
        .collect();
    let mut first = None;
    for c in chunks {
        if let Some(i) = c? {
            first = Some(first.map_or(i, |f: usize| f.min(i)));
        }
    }
    Ok(first)
}

/// Amplitudes keyed by output bits. Weight on a state with any other wire
/// set lands under `None`.
fn project(s: &StateVector, outs: &[u32], tol: f64) -> BTreeMap<Option<Vec<bool>>, num_complex::Complex64> {
    let mask: usize = outs.iter().fold(0, |m, w| m | (1 << w));
    let mut m = BTreeMap::new();
    for (i, amp) in s.amps.iter().enumerate() {
        if amp.norm() <= tol {
            continue;
        }
        let key = (i & !mask == 0).then(|| outs.iter().map(|w| (i >> w) & 1 == 1).collect());
        *m.entry(key).or_insert(num_complex::Complex64::new(0.0, 0.0)) += amp;
    }
    m
}

fn first_failure_statevector(
    a: &ConcreteCircuit,
    b: &ConcreteCircuit,
    inputs: &[WirePair],
    outputs: &[WirePair],
    set: &[Vec<bool>],
) -> Result<Option<usize>, EquivError> {
    const TOL: f64 = 1e-9;
    let oa: Vec<u32> = outputs.iter().map(|p| p.a).collect();
    let ob: Vec<u32> = outputs.iter().map(|p| p.b).collect();
    for (k, bits) in set.iter().enumerate() {
        let mut sa = vec![false; a.num_wires()];
        let mut sb = vec![false; b.num_wires()];
        for (p, bit) in inputs.iter().zip(bits) {
            sa[p.a as usize] = *bit;
            sb[p.b as usize] = *bit;
        }
        let ra = project(&run_statevector(a, &StateVector::basis(&sa)?)?, &oa, TOL);
        let rb = project(&run_statevector(b, &StateVector::basis(&sb)?)?, &ob, TOL);
        let phase = match ra.iter().next() {
            Some((key, x)) => rb.get(key).map(|y| y / x),
            None => None,
        };
        let same = ra.len() == rb.len()
            && !ra.contains_key(&None)
            && phase.is_some_and(|ph| ra.iter().all(|(key, x)| rb.get(key).is_some_and(|y| (x * ph - y).norm() <= TOL)));
        if !same {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{Gate, GateKind, Level};

    fn circ(n: usize, gates: Vec<Gate>) -> ConcreteCircuit {
        let mut c = ConcreteCircuit::new(Level::Mcx, (0..n).map(|i| format!("w{i}")).collect(), (0..n as u32).collect());
        c.gates = gates;
        c
    }

    fn pairs(ws: &[u32]) -> Vec<WirePair> {
        ws.iter().map(|w| WirePair { name: format!("w{w}"), a: *w, b: *w }).collect()
    }

    #[test]
    fn self_equivalent() {
        let c = circ(3, vec![Gate::x(vec![0, 1], 2)]);
        let r = check_equivalence(&c, &c, &pairs(&[0, 1, 2]), &pairs(&[0, 1, 2]), 1000).unwrap();
        assert!(r.equivalent && r.exhaustive);
        assert_eq!(r.tried, 8);
    }

    #[test]
    fn extra_flip_is_caught() {
        let c = circ(2, vec![Gate::x(vec![0], 1)]);
        let mut d = c.clone();
        d.gates.push(Gate::x(vec![], 1));
        let r = check_equivalence(&c, &d, &pairs(&[0, 1]), &pairs(&[0, 1]), 1000).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.counterexample.unwrap(), vec![("w0".to_string(), false), ("w1".to_string(), false)]);
    }

    #[test]
    fn sampled_when_wide() {
        let c = circ(30, vec![Gate::x(vec![0, 1], 29)]);
        let r = check_equivalence(&c, &c, &pairs(&(0..30).collect::<Vec<_>>()), &pairs(&[29]), 1000).unwrap();
        assert!(r.equivalent && !r.exhaustive);
        assert_eq!(r.tried, 1000);
    }

    #[test]
    fn hadamard_up_to_phase() {
        let h = Gate::single(GateKind::H, 0);
        let a = circ(1, vec![h.clone()]);
        // X after H leaves |+> alone and negates |->.
        let b = circ(1, vec![h.clone(), Gate::x(vec![], 0)]);
        assert!(check_equivalence(&a, &b, &pairs(&[0]), &pairs(&[0]), 10).unwrap().equivalent);
        let c = circ(1, vec![h.clone(), h]);
        assert!(!check_equivalence(&a, &c, &pairs(&[0]), &pairs(&[0]), 10).unwrap().equivalent);
    }
}
