//! Shared inputs for the benchmarks.

use qflow_core::lowering::LowerConfig;
use qflow_core::optimizer::OptimizerConfig;
use qflow_core::pipeline::CompileOptions;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Source of a corpus program by name.
pub fn program(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.twr"));
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Options for `name` at recursion depth `depth`, word width 4 and 8 cells.
pub fn options(src: &str, depth: i64, opt: OptimizerConfig) -> CompileOptions {
    let var = if src.contains("[d]") { "d" } else { "n" };
    CompileOptions {
        params: BTreeMap::from([(var.to_string(), depth)]),
        config: LowerConfig { width: 4, cells: 8, ..LowerConfig::default() },
        opt,
    }
}
