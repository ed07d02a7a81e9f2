//! Corpus programs run on concrete lists against plain Rust references.

mod common;

use common::{corpus, opts, BOTH};
use qflow_core::optimizer::OptimizerConfig;
use qflow_core::pipeline::{compile, Compiled};
use qflow_core::sim::{run_basis, MachineState};

const W: u32 = 3;
const CELLS: u32 = 8;

struct World {
    c: Compiled,
    s: MachineState,
    next: usize,
}

impl World {
    /// Cells 1..=free form the free list; data goes after them.
    fn new(name: &str, depth: i64, free: usize, opt: OptimizerConfig) -> World {
        let src = corpus().into_iter().find(|(n, _)| n == name).unwrap().1;
        let c = compile(&src, &opts(&src, depth, W, CELLS, opt)).unwrap();
        let mut s = MachineState::zeros(c.circuit.num_wires());
        let shift = match c.program.heap.as_ref().map(|h| h.link) {
            Some(2) => W,
            _ => 0,
        };
        for addr in 1..=free {
            let next = if addr < free { addr + 1 } else { 0 };
            s.set_cell(&c.alloc, addr, (next as u64) << shift);
        }
        World { c, s, next: free + 1 }
    }

    fn cell(&mut self, v: u64) -> u64 {
        let a = self.next;
        self.next += 1;
        self.s.set_cell(&self.c.alloc, a, v);
        a as u64
    }

    fn list(&mut self, vals: &[u64]) -> u64 {
        let first = self.next as u64;
        for (i, v) in vals.iter().enumerate() {
            let next = if i + 1 < vals.len() { first + i as u64 + 1 } else { 0 };
            self.cell(v | next << W);
        }
        if vals.is_empty() {
            0
        } else {
            first
        }
    }

    fn set(&mut self, x: &str, v: u64) {
        assert!(self.s.set_input(&self.c.alloc, x, v), "no input {x}");
    }

    fn run(&self) -> MachineState {
        let out = MachineState { bits: run_basis(&self.c.circuit, &self.s.bits).unwrap() };
        assert!(out.dirty_ancillas(&self.c.alloc).is_empty());
        out
    }

    fn out(&self) -> (u64, MachineState) {
        let st = self.run();
        (st.output(&self.c.alloc, "out").unwrap(), st)
    }

    fn read_list(&self, st: &MachineState, mut p: u64) -> Vec<u64> {
        let mask = (1 << W) - 1;
        let mut v = Vec::new();
        while p != 0 && v.len() < CELLS as usize {
            let c = st.cell(&self.c.alloc, p as usize);
            v.push(c & mask);
            p = (c >> W) & mask;
        }
        v
    }
}

fn lists() -> Vec<Vec<u64>> {
    vec![vec![], vec![5], vec![1, 2], vec![7, 0, 3], vec![2, 2, 6, 1]]
}

#[test]
fn length_counts_nodes() {
    for opt in BOTH {
        for l in lists() {
            let mut w = World::new("length", 5, 2, opt);
            let h = w.list(&l);
            w.set("xs", h);
            w.set("acc", 2);
            assert_eq!(w.out().0, 2 + l.len() as u64, "{l:?}");
        }
    }
}

#[test]
fn sum_adds_modulo_width() {
    for opt in BOTH {
        for l in lists() {
            let mut w = World::new("sum", 5, 2, opt);
            let h = w.list(&l);
            w.set("xs", h);
            w.set("acc", 1);
            assert_eq!(w.out().0, (1 + l.iter().sum::<u64>()) % 8, "{l:?}");
        }
    }
}

#[test]
fn find_pos_finds_first_match() {
    for opt in BOTH {
        for key in 0..8 {
            let l = [2, 6, 2, 1];
            let mut w = World::new("find_pos", 5, 2, opt);
            let h = w.list(&l);
            w.set("xs", h);
            w.set("key", key);
            let want = l.iter().position(|v| *v == key).unwrap_or(l.len());
            assert_eq!(w.out().0, want as u64, "key {key}");
        }
    }
}

#[test]
fn pop_front_splits_head() {
    for opt in BOTH {
        for l in lists() {
            let mut w = World::new("pop_front", 1, 2, opt);
            let h = w.list(&l);
            w.set("xs", h);
            let want = match l.first() {
                None => 0,
                Some(v) => v | (if l.len() > 1 { h + 1 } else { 0 }) << W,
            };
            assert_eq!(w.out().0, want, "{l:?}");
        }
    }
}

fn string_pairs() -> Vec<(Vec<u64>, Vec<u64>)> {
    let s = [vec![], vec![1], vec![1, 2], vec![1, 3], vec![2], vec![1, 2, 0]];
    let mut v = Vec::new();
    for a in &s {
        for b in &s {
            v.push((a.clone(), b.clone()));
        }
    }
    v
}

#[test]
fn two_string_programs() {
    for opt in BOTH {
        for (a, b) in string_pairs() {
            let run = |name: &str, extra: Option<u64>| {
                let mut w = World::new(name, 4, 0, opt);
                let ha = w.list(&a);
                let hb = w.list(&b);
                w.set("xs", ha);
                w.set("ys", hb);
                if let Some(acc) = extra {
                    w.set("acc", acc);
                }
                w.out().0
            };
            let cmp = match a.cmp(&b) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => 2,
            };
            assert_eq!(run("compare", None), cmp, "{a:?} {b:?}");
            assert_eq!(run("is_prefix", None), b.starts_with(&a) as u64, "{a:?} {b:?}");
            let same = a.iter().zip(&b).filter(|(x, y)| x == y).count() as u64;
            assert_eq!(run("num_matching", Some(0)), same, "{a:?} {b:?}");
        }
    }
}

#[test]
fn push_back_copies_the_spine() {
    for opt in BOTH {
        for l in [vec![], vec![4], vec![1, 2]] {
            let mut w = World::new("push_back", 3, 3, opt);
            let h = w.list(&l);
            w.set("xs", h);
            w.set("x", 6);
            let (out, st) = w.out();
            let mut want = l.clone();
            want.push(6);
            assert_eq!(w.read_list(&st, out), want);
            assert_eq!(w.read_list(&st, h), l, "input list changed");
        }
    }
}

#[test]
fn remove_drops_first_match() {
    for opt in BOTH {
        for key in [1, 2, 5] {
            let l = vec![1, 2, 1];
            let mut w = World::new("remove", 4, 3, opt);
            let h = w.list(&l);
            w.set("xs", h);
            w.set("key", key);
            let (out, st) = w.out();
            let mut want = l.clone();
            if let Some(i) = l.iter().position(|v| *v == key) {
                want.remove(i);
            }
            assert_eq!(w.read_list(&st, out), want, "key {key}");
            assert_eq!(w.read_list(&st, h), l);
        }
    }
}

#[test]
fn tree_membership_and_insertion() {
    // root "b" with left child "a"; keys are one-character strings.
    for opt in BOTH {
        for key in 0..4u64 {
            let mut w = World::new("contains", 2, 0, opt);
            let a = w.list(&[1]);
            let b = w.list(&[2]);
            let k = w.list(&[key]);
            let left = w.cell(a << W);
            let root = w.cell(left | b << W);
            w.set("t", root);
            w.set("key", k);
            assert_eq!(w.out().0, (key == 1 || key == 2) as u64, "key {key}");
        }
        let mut w = World::new("insert", 2, 2, opt);
        let k = w.list(&[3]);
        w.set("t", 0);
        w.set("key", k);
        let (out, st) = w.out();
        assert_eq!(out, 1);
        assert_eq!(st.cell(&w.c.alloc, 1), k << W);
    }
}

fn read_tree(w: &World, st: &MachineState, p: u64, out: &mut Vec<u64>) {
    if p == 0 || out.len() > CELLS as usize {
        return;
    }
    let mask = (1 << W) - 1;
    let c = st.cell(&w.c.alloc, p as usize);
    read_tree(w, st, c & mask, out);
    out.extend(w.read_list(st, (c >> W) & mask).first());
    read_tree(w, st, (c >> (2 * W)) & mask, out);
}

#[test]
fn insert_into_nonempty_trees() {
    for opt in BOTH {
        // Single node "b": smaller keys go left, larger right.
        for key in 0..4u64 {
            let mut w = World::new("insert", 3, 2, opt);
            let b = w.list(&[2]);
            // compare swaps both cells out, so the key must not alias a label.
            let k = w.list(&[key]);
            let root = w.cell(b << W);
            w.set("t", root);
            w.set("key", k);
            let (out, st) = w.out();
            let mut want = std::collections::BTreeSet::from([2]);
            want.insert(key);
            let mut got = Vec::new();
            read_tree(&w, &st, out, &mut got);
            assert_eq!(got, want.into_iter().collect::<Vec<_>>(), "key {key} {opt:?}");
            if key == 2 {
                assert_eq!(out, root);
            }
            let mut before = Vec::new();
            read_tree(&w, &st, root, &mut before);
            assert_eq!(before, vec![2], "input tree changed");
        }
        // "b" with left child "a"; inserting "c" copies only the root.
        let mut w = World::new("insert", 3, 2, opt);
        let a = w.list(&[1]);
        let b = w.list(&[2]);
        let k = w.list(&[3]);
        let left = w.cell(a << W);
        let root = w.cell(left | b << W);
        w.set("t", root);
        w.set("key", k);
        let (out, st) = w.out();
        let mut got = Vec::new();
        read_tree(&w, &st, out, &mut got);
        assert_eq!(got, vec![1, 2, 3]);
        assert_eq!(st.cell(&w.c.alloc, out as usize) & ((1 << W) - 1), left, "left subtree shared");
    }
}
