#![allow(dead_code)]

use qflow_core::lowering::LowerConfig;
use qflow_core::optimizer::OptimizerConfig;
use qflow_core::pipeline::CompileOptions;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read_dir(dir: PathBuf) -> Vec<(String, String)> {
    let mut v: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "twr").then(|| {
                (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
            })
        })
        .collect();
    v.sort();
    v
}

/// The benchmark programs as (name, source).
pub fn corpus() -> Vec<(String, String)> {
    read_dir(root().join("corpus"))
}

pub fn example(name: &str) -> String {
    std::fs::read_to_string(root().join("corpus/small").join(format!("{name}.twr"))).unwrap()
}

/// Name of the static depth parameter: `d` for the tree programs.
pub fn depth_var(src: &str) -> &'static str {
    if src.contains("[d]") {
        "d"
    } else {
        "n"
    }
}

pub fn opts(src: &str, depth: i64, width: u32, cells: u32, opt: OptimizerConfig) -> CompileOptions {
    CompileOptions {
        params: if src.contains('[') { BTreeMap::from([(depth_var(src).to_string(), depth)]) } else { BTreeMap::new() },
        config: LowerConfig { width, cells, ..LowerConfig::default() },
        opt,
    }
}

pub const BOTH: [OptimizerConfig; 2] = [OptimizerConfig::NONE, OptimizerConfig::ALL];
