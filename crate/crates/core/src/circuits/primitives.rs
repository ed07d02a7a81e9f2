use super::Gate;
use crate::lowering::{AbstractInstr, Opcode};

/// Collects template gates, tracking which ones receive the guard controls.
struct Builder {
    gates: Vec<(Gate, bool)>,
    next_anc: u32,
    anc_base: u32,
}

impl Builder {
    fn x(&mut self, controls: &[u32], t: u32) {
        self.gates.push((Gate::x(controls.to_vec(), t), true));
    }

    /// A gate that stays unguarded because it is undone later in the template.
    fn x_raw(&mut self, controls: &[u32], t: u32) {
        self.gates.push((Gate::x(controls.to_vec(), t), false));
    }

    fn anc(&mut self, n: usize) -> Vec<u32> {
        let v: Vec<u32> = (0..n as u32).map(|i| self.anc_base + self.next_anc + i).collect();
        self.next_anc += n as u32;
        v
    }

    fn mark(&self) -> usize {
        self.gates.len()
    }

    /// Appends the inverse of the gates emitted in `from..to`.
    fn undo(&mut self, from: usize, to: usize) {
        let tail: Vec<_> = self.gates[from..to].iter().rev().cloned().collect();
        self.gates.extend(tail);
    }
}

/// `dst ^= y + z + cin`, carries in fresh ancillas.
fn adder(b: &mut Builder, y: &[u32], z: &[u32], dst: &[u32], cin: Option<u32>) {
    let k = y.len();
    if k == 0 {
        return;
    }
    let mut carry: Vec<Option<u32>> = vec![cin];
    carry.extend(b.anc(k - 1).into_iter().map(Some));
    let m = b.mark();
    carries(b, y, z, &carry);
    let comp_end = b.mark();
    for i in 0..k {
        b.x(&[y[i]], dst[i]);
        b.x(&[z[i]], dst[i]);
        if let Some(c) = carry[i] {
            b.x(&[c], dst[i]);
        }
    }
    b.undo(m, comp_end);
}

/// Computes `carry[i+1] = maj(y_i, z_i, carry[i])` for each available slot.
fn carries(b: &mut Builder, y: &[u32], z: &[u32], carry: &[Option<u32>]) {
    for i in 0..carry.len() - 1 {
        let out = carry[i + 1].unwrap();
        b.x(&[y[i], z[i]], out);
        if let Some(c) = carry[i] {
            b.x(&[y[i], c], out);
            b.x(&[z[i], c], out);
        }
    }
}

fn template(b: &mut Builder, i: &AbstractInstr, srcs: &[Vec<u32>], guarded: bool) {
    let d = &i.dst;
    match i.op {
        Opcode::XorConst => {
            for (w, bit) in d.iter().zip(&i.konst) {
                if *bit {
                    b.x(&[], *w);
                }
            }
        }
        Opcode::XorReg => {
            for (t, s) in d.iter().zip(&srcs[0]) {
                b.x(&[*s], *t);
            }
        }
        Opcode::Not => {
            let s = srcs[0][0];
            b.x(&[], s);
            b.x(&[s], d[0]);
            b.x(&[], s);
        }
        Opcode::Test => {
            let s = &srcs[0];
            s.iter().for_each(|w| b.x(&[], *w));
            b.x(s, d[0]);
            s.iter().for_each(|w| b.x(&[], *w));
            b.x(&[], d[0]);
        }
        Opcode::And => b.x(&[srcs[0][0], srcs[1][0]], d[0]),
        Opcode::Or => {
            let (y, z) = (srcs[0][0], srcs[1][0]);
            b.x(&[y], d[0]);
            b.x(&[z], d[0]);
            b.x(&[y, z], d[0]);
        }
        Opcode::Add => adder(b, &srcs[0], &srcs[1], d, None),
        Opcode::Sub => {
            // y - z = y + !z + 1
            let z = &srcs[1];
            let cin = b.anc(1)[0];
            let m = b.mark();
            z.iter().for_each(|w| b.x(&[], *w));
            b.x(&[], cin);
            let pre: Vec<_> = b.gates[m..].to_vec();
            adder(b, &srcs[0], z, d, Some(cin));
            b.gates.extend(pre.into_iter().rev());
        }
        Opcode::Mul => {
            let (y, z) = (&srcs[0], &srcs[1]);
            let k = y.len();
            if k == 0 {
                return;
            }
            let m = b.mark();
            let mut partial = Vec::with_capacity(k);
            for j in 0..k {
                let p = b.anc(k);
                for i2 in 0..k - j {
                    b.x(&[z[j], y[i2]], p[i2 + j]);
                }
                partial.push(p);
            }
            let mut acc = partial[0].clone();
            for p in partial.iter().skip(1) {
                let s = b.anc(k);
                adder(b, &acc, p, &s, None);
                acc = s;
            }
            let comp_end = b.mark();
            for (t, s) in d.iter().zip(&acc) {
                b.x(&[*s], *t);
            }
            b.undo(m, comp_end);
        }
        Opcode::Eq | Opcode::Neq => {
            let (y, z) = (&srcs[0], &srcs[1]);
            let m = b.mark();
            for (a, c) in y.iter().zip(z) {
                b.x(&[*c], *a);
            }
            y.iter().for_each(|w| b.x(&[], *w));
            let comp_end = b.mark();
            b.x(y, d[0]);
            b.undo(m, comp_end);
            if i.op == Opcode::Neq {
                b.x(&[], d[0]);
            }
        }
        Opcode::Lt => {
            let (y, z) = (&srcs[0], &srcs[1]);
            let k = y.len();
            let mut carry: Vec<Option<u32>> = b.anc(k + 1).into_iter().map(Some).collect();
            let cin = carry[0].unwrap();
            let m = b.mark();
            z.iter().for_each(|w| b.x(&[], *w));
            b.x(&[], cin);
            carry[0] = Some(cin);
            carries(b, y, z, &carry);
            let comp_end = b.mark();
            b.x(&[carry[k].unwrap()], d[0]);
            b.x(&[], d[0]);
            b.undo(m, comp_end);
        }
        Opcode::Swap => {
            for (x, y) in d.iter().zip(&srcs[0]) {
                if guarded {
                    b.x_raw(&[*y], *x);
                    b.x(&[*x], *y);
                    b.x_raw(&[*y], *x);
                } else {
                    b.x(&[*x], *y);
                    b.x(&[*y], *x);
                    b.x(&[*x], *y);
                }
            }
        }
        Opcode::MemSwap => {
            let addr = &srcs[0];
            for (a, cell) in i.mem.iter().enumerate() {
                let a = a as u64 + 1;
                let zeros: Vec<u32> =
                    addr.iter().enumerate().filter(|(j, _)| (a >> j) & 1 == 0).map(|(_, w)| *w).collect();
                zeros.iter().for_each(|w| b.x_raw(&[], *w));
                for (v, m) in d.iter().zip(cell) {
                    let mut ctl = addr.clone();
                    ctl.push(*m);
                    b.x_raw(&[*v], *m);
                    b.x(&ctl, *v);
                    b.x_raw(&[*v], *m);
                }
                zeros.iter().for_each(|w| b.x_raw(&[], *w));
            }
        }
        Opcode::Had => {
            b.gates.push((Gate::single(super::GateKind::H, d[0]), true));
        }
    }
}

/// Which operands must be copied to an ancilla before the template runs:
/// a scratch operand that is also a guard, or a second operand that aliases
/// the first.
pub fn redirects(i: &AbstractInstr) -> [bool; 2] {
    let mut r = [false, false];
    if let Some(k) = i.op.scratch_src() {
        if i.srcs[k].iter().any(|w| i.controls.contains(w)) {
            r[k] = true;
        }
    }
    if i.op.is_binary() && i.srcs[0].iter().any(|w| i.srcs[1].contains(w)) {
        r[1] = true;
    }
    r
}

/// Expands an instruction into MCX-level gates. Ancillas are numbered from
/// `anc_base`; the second result is how many were used.
pub fn emit_primitive(i: &AbstractInstr, anc_base: u32) -> (Vec<Gate>, u32) {
    emit_with(i, anc_base, redirects(i))
}

pub(crate) fn emit_with(i: &AbstractInstr, anc_base: u32, redirect: [bool; 2]) -> (Vec<Gate>, u32) {
    let mut b = Builder { gates: Vec::new(), next_anc: 0, anc_base };
    let mut srcs = i.srcs.clone();
    let mut copies = Vec::new();
    for (k, r) in redirect.iter().enumerate() {
        if *r && k < srcs.len() {
            let t = b.anc(srcs[k].len());
            for (s, a) in srcs[k].iter().zip(&t) {
                copies.push(Gate::x(vec![*s], *a));
            }
            srcs[k] = t;
        }
    }
    template(&mut b, i, &srcs, !i.controls.is_empty());
    let mut out = Vec::with_capacity(b.gates.len() + 2 * copies.len());
    out.extend(copies.iter().cloned());
    for (mut g, guarded) in b.gates {
        if guarded && !i.controls.is_empty() {
            let mut ctl = i.controls.clone();
            for c in g.controls {
                if !ctl.contains(&c) {
                    ctl.push(c);
                }
            }
            g.controls = ctl;
        }
        out.push(g);
    }
    out.extend(copies.into_iter().rev());
    if i.inverse {
        out.reverse();
    }
    (out, b.next_anc)
}
