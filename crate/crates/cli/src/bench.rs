//! Depth sweeps with exact polynomial fits per metric.

use crate::fit::{fit_polynomial, Fit};
use qflow_core::circuits::{count_gates, qubits_at, Level};
use qflow_core::pipeline::{compile, CompileOptions, PipelineError};
use rayon::prelude::*;
use std::fmt::Write;
use std::str::FromStr;

pub const METRICS: [&str; 4] = ["t", "mcx", "mcx_ge2", "qubits"];

/// `n=2..10`: a static parameter and an inclusive range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad sweep `{s}` (expected name=lo..hi)");
        let (var, range) = s.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if var.trim().is_empty() || hi <= lo {
            return Err(format!("sweep `{s}` needs a name and at least two points"));
        }
        Ok(Sweep { var: var.trim().to_string(), lo, hi })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchPoint {
    pub depth: i64,
    pub t: u64,
    pub mcx: u64,
    pub mcx_ge2: u64,
    pub qubits: u64,
    pub flattenings: usize,
}

impl BenchPoint {
    pub fn metric(&self, m: &str) -> u64 {
        match m {
            "t" => self.t,
            "mcx" => self.mcx,
            "mcx_ge2" => self.mcx_ge2,
            "qubits" => self.qubits,
            _ => panic!("unknown metric {m}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub program: String,
    pub var: String,
    pub points: Vec<BenchPoint>,
    pub fits: Vec<(String, Fit)>,
}

impl BenchResult {
    pub fn fit(&self, metric: &str) -> &Fit {
        &self.fits.iter().find(|(m, _)| m == metric).expect("metric").1
    }

    pub fn degree(&self, metric: &str) -> Option<usize> {
        self.fit(metric).degree.value()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("program {}\n", self.program);
        let _ = writeln!(s, "{:>4} {:>10} {:>10} {:>10} {:>10}", self.var, "t", "mcx", "mcx_ge2", "qubits");
        for p in &self.points {
            let _ = writeln!(s, "{:>4} {:>10} {:>10} {:>10} {:>10}", p.depth, p.t, p.mcx, p.mcx_ge2, p.qubits);
        }
        for (m, f) in &self.fits {
            let _ = writeln!(s, "fit {m} degree {} : {}", f.degree, f.render(&self.var));
        }
        s
    }
}

/// Measures one compiled point. `t` comes from control counts at MCX level,
/// which equals the Clifford+T count; qubits are taken at `level`.
pub fn measure(source: &str, opts: &CompileOptions, level: Level) -> Result<(BenchPoint, qflow_core::pipeline::Compiled), PipelineError> {
    let c = compile(source, opts)?;
    let m = count_gates(&c.circuit);
    let p = BenchPoint {
        depth: 0,
        t: m.t_formula,
        mcx: m.mcx_gates(),
        mcx_ge2: m.mcx_ge2,
        qubits: qubits_at(&c.circuit, level),
        flattenings: c.stats.flattenings,
    };
    Ok((p, c))
}

/// Compiles every depth of the sweep (in parallel) and fits each metric.
pub fn run_bench(program: &str, source: &str, sweep: &Sweep, opts: &CompileOptions, level: Level) -> Result<BenchResult, PipelineError> {
    let points = (sweep.lo..=sweep.hi)
        .into_par_iter()
        .map(|d| {
            let mut o = opts.clone();
            o.params.insert(sweep.var.clone(), d);
            measure(source, &o, level).map(|(p, _)| BenchPoint { depth: d, ..p })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fits = METRICS
        .iter()
        .map(|m| {
            let ys: Vec<u64> = points.iter().map(|p| p.metric(m)).collect();
            (m.to_string(), fit_polynomial(sweep.lo, &ys))
        })
        .collect();
    Ok(BenchResult { program: program.to_string(), var: sweep.var.clone(), points, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parses() {
        assert_eq!("n=2..10".parse::<Sweep>().unwrap(), Sweep { var: "n".into(), lo: 2, hi: 10 });
        assert!("n=3..3".parse::<Sweep>().is_err());
        assert!("n:2..4".parse::<Sweep>().is_err());
    }
}
