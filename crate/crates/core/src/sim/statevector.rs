use super::SimError;
use crate::circuits::{ConcreteCircuit, Gate, GateKind};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

pub const MAX_WIRES: usize = 22;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amps: Vec<Complex64>,
    pub wires: usize,
}

impl StateVector {
    /// The basis state whose bit `w` is `bits[w]`.
    pub fn basis(bits: &[bool]) -> Result<Self, SimError> {
        if bits.len() > MAX_WIRES {
            return Err(SimError::TooManyWires(bits.len(), MAX_WIRES));
        }
        let idx = bits.iter().enumerate().fold(0usize, |a, (i, b)| a | ((*b as usize) << i));
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << bits.len()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amps, wires: bits.len() })
    }

    fn apply(&mut self, g: &Gate) {
        let cmask: usize = g.controls.iter().fold(0, |m, w| m | (1 << w));
        let t = 1usize << g.target;
        let phase = |z: Complex64| match g.kind {
            GateKind::T => z * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            GateKind::Tdg => z * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            GateKind::S => z * Complex64::new(0.0, 1.0),
            GateKind::Sdg => z * Complex64::new(0.0, -1.0),
            GateKind::Z => -z,
            _ => z,
        };
        for i in 0..self.amps.len() {
            if i & t != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | t;
            let (a, b) = (self.amps[i], self.amps[j]);
            match g.kind {
                GateKind::X => {
                    self.amps[i] = b;
                    self.amps[j] = a;
                }
                GateKind::H | GateKind::Ch => {
                    self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                    self.amps[j] = (a - b) * FRAC_1_SQRT_2;
                }
                _ => self.amps[j] = phase(b),
            }
        }
    }

    /// Inner product magnitude test up to a global phase.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.amps.len() != other.amps.len() {
            return false;
        }
        let Some(k) = self.amps.iter().position(|a| a.norm() > tol) else {
            return other.amps.iter().all(|a| a.norm() <= tol);
        };
        if other.amps[k].norm() <= tol {
            return false;
        }
        let ph = other.amps[k] / self.amps[k];
        self.amps.iter().zip(&other.amps).all(|(a, b)| (a * ph - b).norm() <= tol)
    }
}

pub fn run_statevector(c: &ConcreteCircuit, init: &StateVector) -> Result<StateVector, SimError> {
    if c.num_wires() > MAX_WIRES {
        return Err(SimError::TooManyWires(c.num_wires(), MAX_WIRES));
    }
    if init.wires != c.num_wires() {
        return Err(SimError::WidthMismatch(init.wires, c.num_wires()));
    }
    let mut s = init.clone();
    for g in &c.gates {
        s.apply(g);
    }
    Ok(s)
}
