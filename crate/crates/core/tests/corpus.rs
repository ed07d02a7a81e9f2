mod common;

use common::{corpus, opts, BOTH};
use qflow_core::circuits::{count_gates, read_qc, write_qc, Level};
use qflow_core::core_ir::{check_stmt, check_stmt_unscoped, reverse};
use qflow_core::costmodel::{cost_report, mcx_complexity, t_complexity, CostConstants};
use qflow_core::frontend::{parse_program, print_program};
use qflow_core::optimizer::{normalize_withs, optimize_stmt, OptimizerConfig};
use qflow_core::pipeline::{compile, front};
use qflow_core::sim::{run_basis, MachineState};
use qflow_core::span::Fresh;
use std::collections::BTreeMap;

#[test]
fn every_program_compiles_and_conserves_t() {
    let mut failures = Vec::new();
    for (name, src) in corpus() {
        for width in [2, 8] {
            for opt in BOTH {
                match compile(&src, &opts(&src, 2, width, 16, opt)) {
                    Ok(c) => {
                        let formula = count_gates(&c.circuit).t_formula;
                        let tally = count_gates(&c.at(Level::CliffordT));
                        assert_eq!(tally.t, formula, "{name} width {width} {opt:?}");
                        assert_eq!(tally.mcx_ge2, 0);
                    }
                    Err(e) => failures.push(format!("{name} (width {width}, {opt:?}): {e}")),
                }
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn corpus_has_twelve_programs() {
    assert_eq!(corpus().len(), 12);
}

#[test]
fn cost_report_agrees_with_counted_gates() {
    for (name, src) in corpus() {
        for width in [2, 8] {
            for opt in BOTH {
                let o = opts(&src, 2, width, 16, opt);
                let c = compile(&src, &o).unwrap();
                let k = CostConstants::new(o.config);
                let r = cost_report(&c.program, &c.body, &k).unwrap();
                let counted = count_gates(&c.circuit);
                assert_eq!(r.total.mcx, counted.mcx_gates(), "{name}");
                assert_eq!(mcx_complexity(&c.program, &c.body, &k).unwrap(), r.total.mcx);
                assert_eq!(t_complexity(&c.program, &c.body, &k).unwrap(), r.total.t);
                assert_eq!(r.total.t_exact, counted.t_formula, "{name}");
                assert!(r.total.t >= r.total.t_exact, "{name}: model below count");
                let sum: u64 = r.by_span().iter().map(|x| x.t).sum();
                assert_eq!(sum, r.total.t);
            }
        }
    }
}

#[test]
fn qc_round_trip() {
    for (name, src) in corpus() {
        let c = compile(&src, &opts(&src, 2, 2, 4, OptimizerConfig::ALL)).unwrap();
        for level in [Level::Mcx, Level::Toffoli, Level::CliffordT] {
            let circ = c.at(level);
            let back = read_qc(&write_qc(&circ)).unwrap();
            assert_eq!(back.gates, circ.gates, "{name} at {level}");
            assert_eq!(back.wires, circ.wires);
        }
    }
}

#[test]
fn parse_print_parse_is_stable() {
    for (name, src) in corpus() {
        let a = parse_program(&src).unwrap();
        let b = parse_program(&print_program(&a)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(print_program(&a), print_program(&b), "{name}");
    }
}

#[test]
fn optimizer_and_normalization_are_idempotent() {
    for (name, src) in corpus() {
        let p = front(&src, &BTreeMap::from([(common::depth_var(&src).to_string(), 3)])).unwrap();
        let c = compile(&src, &opts(&src, 3, 2, 4, OptimizerConfig::ALL)).unwrap();
        assert_eq!(normalize_withs(&c.body), c.body, "{name}");
        let mut fresh = Fresh::avoiding(qflow_core::core_ir::stmt_vars(&c.body).iter().map(|s| s.as_str()));
        let (again, _) = optimize_stmt(&c.body, OptimizerConfig::ALL, &mut fresh);
        assert_eq!(normalize_withs(&again), c.body, "{name}");
        assert!(c.body.size() > 0 && p.body.size() > 0);
    }
}

#[test]
fn reverse_restores_the_context() {
    for (name, src) in corpus() {
        let p = front(&src, &BTreeMap::from([(common::depth_var(&src).to_string(), 2)])).unwrap();
        let g = p.initial_context();
        let out = check_stmt(&g, &p.body).unwrap();
        assert_eq!(check_stmt_unscoped(&out, &reverse(&p.body)).unwrap(), g, "{name}");
    }
}

#[test]
fn affected_variables_keep_their_range() {
    for (name, src) in corpus() {
        for opt in BOTH {
            let c = compile(&src, &opts(&src, 3, 2, 4, opt)).unwrap();
            for d in &c.alloc.do_blocks {
                for r in &d.affected {
                    assert_eq!(r.entry, r.exit, "{name}: `{}` moved in do-block at {}", r.var, d.span);
                }
            }
        }
    }
}

#[test]
fn ancillas_return_to_zero() {
    // Pointer inputs null, every cell on the free list.
    for (name, src) in corpus() {
        for opt in BOTH {
            let c = compile(&src, &opts(&src, 2, 2, 4, opt)).unwrap();
            let a = &c.alloc;
            let mut s = MachineState::zeros(c.circuit.num_wires());
            for addr in 1..=a.memory.len() {
                let next = if addr < a.memory.len() { addr + 1 } else { 0 };
                let link = c.program.heap.as_ref().map_or(1, |h| h.link);
                let shift = if link == 1 { 0 } else { a.config.width };
                s.set_cell(a, addr, (next as u64) << shift);
            }
            let out = MachineState { bits: run_basis(&c.circuit, &s.bits).unwrap() };
            assert!(out.dirty_ancillas(a).is_empty(), "{name} {opt:?}: {:?}", out.dirty_ancillas(a));
        }
    }
}
