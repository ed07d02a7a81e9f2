//! The `qflow` command line: check, compile, analyze, bench and equiv.

pub mod bench;
pub mod fit;

use bench::{measure, run_bench, Sweep};
use clap::{Args, Parser, Subcommand};
use qflow_core::circuits::{count_gates, write_qc, Level};
use qflow_core::costmodel::{cost_report, CostConstants};
use qflow_core::lowering::LowerConfig;
use qflow_core::optimizer::OptimizerConfig;
use qflow_core::pipeline::{compile, front, io_pairs, CompileOptions, PipelineError};
use qflow_core::sim::check_equivalence;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "qflow", version, about = "Compiler and cost analyzer for a reversible quantum language")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, inline and type-check.
    Check(Common),
    /// Write `<stem>.qc` and `<stem>.counts` into the directory given by --out.
    Compile(CompileArgs),
    /// Per-statement cost report with totals and counted gates.
    Analyze(CompileArgs),
    /// Sweep a static parameter and fit each metric exactly.
    Bench(BenchArgs),
    /// Compare two compiled programs on basis inputs.
    Equiv(EquivArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    pub file: PathBuf,
    /// Static parameter binding, `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Bits per unsigned integer.
    #[arg(long, default_value_t = 8)]
    pub width: u32,
    /// Memory cells including the null address.
    #[arg(long, default_value_t = 16)]
    pub cells: u32,
    #[arg(long, default_value_t = Level::CliffordT)]
    pub level: Level,
}

#[derive(Args, Debug, Clone)]
pub struct CompileArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value = "all")]
    pub opt: OptimizerConfig,
    /// Output directory for compile, output file otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[command(flatten)]
    pub compile: CompileArgs,
    /// Sweep such as `n=2..10`.
    #[arg(long)]
    pub sweep: Sweep,
}

#[derive(Args, Debug, Clone)]
pub struct EquivArgs {
    pub file_a: PathBuf,
    pub file_b: PathBuf,
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
    #[command(flatten)]
    pub target: Target,
    #[arg(long = "opt-a", default_value = "all")]
    pub opt_a: OptimizerConfig,
    #[arg(long = "opt-b", default_value = "all")]
    pub opt_b: OptimizerConfig,
    /// Sampled inputs when exhaustive enumeration is too large.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

/// A failure with its exit code: 1 for problems in the input, 2 for defects.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = if e.is_internal() { 2 } else { 1 };
        let message = if code == 2 { format!("internal error: {e}") } else { e.to_string() };
        Failure { code, message }
    }
}

fn user(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| user(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| user(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

impl CompileArgs {
    pub fn options(&self) -> CompileOptions {
        CompileOptions {
            params: self.common.params.iter().cloned().collect(),
            config: LowerConfig { width: self.target.width, cells: self.target.cells, ..LowerConfig::default() },
            opt: self.opt,
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<String, Failure> {
    match out {
        Some(p) => write(p, text).map(|_| String::new()),
        None => Ok(text.to_string()),
    }
}

pub fn cmd_check(a: &Common) -> Result<String, Failure> {
    let params: BTreeMap<String, i64> = a.params.iter().cloned().collect();
    front(&read(&a.file)?, &params)?;
    Ok(format!("{}: ok\n", a.file.display()))
}

pub fn cmd_compile(a: &CompileArgs) -> Result<String, Failure> {
    let c = compile(&read(&a.common.file)?, &a.options())?;
    let circuit = c.at(a.target.level);
    let counts = count_gates(&circuit);
    let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| user(format!("{}: {e}", dir.display())))?;
    let base = dir.join(stem(&a.common.file));
    let qc = base.with_extension("qc");
    let kv = base.with_extension("counts");
    write(&qc, &write_qc(&circuit))?;
    write(&kv, &counts.to_kv())?;
    Ok(format!("wrote {} and {}\n", qc.display(), kv.display()))
}

pub fn cmd_analyze(a: &CompileArgs) -> Result<String, Failure> {
    let opts = a.options();
    let c = compile(&read(&a.common.file)?, &opts)?;
    let report = cost_report(&c.program, &c.body, &CostConstants::new(opts.config)).map_err(PipelineError::from)?;
    let m = count_gates(&c.circuit);
    let t = count_gates(&c.at(Level::CliffordT)).t;
    let text = format!("{}counted mcx {}\ncounted t {}\n", report.to_text(), m.mcx_gates(), t);
    emit(&a.out, &text)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<String, Failure> {
    let src = read(&a.compile.common.file)?;
    let r = run_bench(&stem(&a.compile.common.file), &src, &a.sweep, &a.compile.options(), a.compile.target.level)?;
    emit(&a.compile.out, &r.to_text())
}

/// Returns the report text and whether the programs were equivalent.
pub fn cmd_equiv(a: &EquivArgs) -> Result<(String, bool), Failure> {
    let params: BTreeMap<String, i64> = a.params.iter().cloned().collect();
    let config = LowerConfig { width: a.target.width, cells: a.target.cells, ..LowerConfig::default() };
    let build = |file: &Path, opt| -> Result<_, Failure> {
        let opts = CompileOptions { params: params.clone(), config, opt };
        Ok(measure(&read(file)?, &opts, Level::Mcx)?.1)
    };
    let ca = build(&a.file_a, a.opt_a)?;
    let cb = build(&a.file_b, a.opt_b)?;
    let (ins, outs) = io_pairs(&ca.alloc, &cb.alloc)?;
    let r = check_equivalence(&ca.circuit, &cb.circuit, &ins, &outs, a.budget)
        .map_err(|e| Failure { code: 2, message: format!("internal error: {e}") })?;
    Ok((emit(&a.out, &r.to_string())?, r.equivalent))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a).map(|s| (s, true)),
        Command::Compile(a) => cmd_compile(a).map(|s| (s, true)),
        Command::Analyze(a) => cmd_analyze(a).map(|s| (s, true)),
        Command::Bench(a) => cmd_bench(a).map(|s| (s, true)),
        Command::Equiv(a) => cmd_equiv(a),
    };
    match result {
        Ok((text, ok)) => {
            let _ = write!(stdout, "{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
