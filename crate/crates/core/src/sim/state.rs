//! Basis assignments addressed by variable name and memory cell.

use crate::lowering::Allocation;

/// One bit per wire. Multi-bit values are little-endian over their wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    pub bits: Vec<bool>,
}

impl MachineState {
    pub fn zeros(wires: usize) -> Self {
        MachineState { bits: vec![false; wires] }
    }

    pub fn set(&mut self, wires: &[u32], v: u64) {
        for (i, w) in wires.iter().enumerate() {
            self.bits[*w as usize] = i < 64 && (v >> i) & 1 == 1;
        }
    }

    pub fn get(&self, wires: &[u32]) -> u64 {
        wires.iter().enumerate().filter(|(_, w)| self.bits[**w as usize]).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Sets an input variable; false if `x` is not an input.
    pub fn set_input(&mut self, a: &Allocation, x: &str, v: u64) -> bool {
        match a.inputs.iter().find(|(y, _)| y == x) {
            Some((_, w)) => {
                self.set(w, v);
                true
            }
            None => false,
        }
    }

    /// Reads a variable live at the end of the program.
    pub fn output(&self, a: &Allocation, x: &str) -> Option<u64> {
        a.outputs.iter().find(|(y, _)| y == x).map(|(_, w)| self.get(w))
    }

    /// Cell `addr` (1-based; 0 is null).
    pub fn set_cell(&mut self, a: &Allocation, addr: usize, v: u64) {
        self.set(&a.memory[addr - 1], v);
    }

    pub fn cell(&self, a: &Allocation, addr: usize) -> u64 {
        self.get(&a.memory[addr - 1])
    }

    /// Wires that are neither outputs nor memory and hold a one.
    pub fn dirty_ancillas(&self, a: &Allocation) -> Vec<u32> {
        let mut keep = vec![false; self.bits.len()];
        for w in a.outputs.iter().flat_map(|(_, w)| w).chain(a.memory.iter().flatten()) {
            keep[*w as usize] = true;
        }
        (0..self.bits.len() as u32).filter(|w| self.bits[*w as usize] && !keep[*w as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn little_endian_round_trip() {
        let mut s = MachineState::zeros(6);
        s.set(&[4, 1, 2], 0b011);
        assert_eq!(s.bits, vec![false, true, false, false, true, false]);
        assert_eq!(s.get(&[4, 1, 2]), 3);
    }
}
