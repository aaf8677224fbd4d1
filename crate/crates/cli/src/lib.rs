//! Command-line front end for `wirecalc`.
//!
//! Exit codes: 0 success, 1 identity check failure, 2 usage, parse or bind
//! error, 3 evaluation budget or dense-size cap exceeded. Every flag can also
//! be set through a `WIRECALC_*` environment variable; flags win.

pub mod fuzz;
pub mod program;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;
use wirecalc::convolution::{conv1d, conv_nd, linear_conv, AxisConv};
use wirecalc::diagram::{self, simplify_traced};
use wirecalc::identities::{check_all, CheckOptions, Profile};
use wirecalc::json::{read_tensor, tensor_from_str, tensor_to_string, ReadOptions};
use wirecalc::products::{self, KronLayout};
use wirecalc::{einsum_eval_with, EvalOptions, Signature, Tensor};

use program::{Builtin, EinsumProgram, ProgramError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wirecalc::Error),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} identities failed")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use wirecalc::Error as E;
        match self {
            CliError::CheckFailed { .. } => EXIT_CHECK_FAILED,
            CliError::Core(E::BudgetExceeded { .. } | E::CapExceeded { .. })
            | CliError::Program(ProgramError::Core(E::BudgetExceeded { .. } | E::CapExceeded { .. })) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "wirecalc", version, about = "Tensor contractions through δ, γ and χ")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Residual below which an identity passes
    #[arg(long, global = true, env = "WIRECALC_TOLERANCE", default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Maximum estimated multiply-adds for one evaluation
    #[arg(long, global = true, env = "WIRECALC_BUDGET", default_value_t = wirecalc::einsum::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for random operands
    #[arg(long, global = true, env = "WIRECALC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write a machine-readable report of the run to this path
    #[arg(long, global = true, env = "WIRECALC_JSON_REPORT")]
    pub json_report: Option<PathBuf>,
    /// Accept NaN and infinite entries in input tensors
    #[arg(long, global = true, env = "WIRECALC_PERMISSIVE")]
    pub permissive: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an einsum program
    Eval(EvalArgs),
    /// Check the identity catalog on random operands
    Check(CheckArgs),
    /// Signed circular convolution of two tensors
    Conv(ConvArgs),
    /// Simplify a diagram with the rewrite rules
    Simplify(SimplifyArgs),
    /// Kronecker product
    Kron(ProductArgs),
    /// Matrix product
    Dot(ProductArgs),
    /// Elementwise product
    Hadamard(ProductArgs),
    /// Khatri-Rao product (column-wise unless --row)
    Kr(ProductArgs),
    /// Tracy-Singh product of rank-4 block tensors
    Ts(ProductArgs),
    /// Write a mediator such as delta[3,4], gamma[2,3], chi[++-,5] or fourier[4,forward]
    Mediator(MediatorArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Program text (omit with --program-file), then operand tensor files
    pub args: Vec<String>,
    /// Integer-list program as a JSON array
    #[arg(long, env = "WIRECALC_PROGRAM_FILE")]
    pub program_file: Option<PathBuf>,
    /// Bind operand N (1-based) to a builtin, a tensor file or inline tensor JSON: N=VALUE
    #[arg(long = "bind", value_name = "N=VALUE")]
    pub binds: Vec<String>,
    /// Output path; stdout when absent
    #[arg(short, long, env = "WIRECALC_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Trials per identity
    #[arg(long, env = "WIRECALC_TRIALS", default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "WIRECALC_MIN_EXTENT", default_value_t = 2)]
    pub min_extent: usize,
    #[arg(long, env = "WIRECALC_MAX_EXTENT", default_value_t = 5)]
    pub max_extent: usize,
    /// Perturb one identity's right-hand side
    #[arg(long, hide = true, env = "WIRECALC_INJECT_FAULT")]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConvArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Signature, or a comma-separated list with one per axis
    #[arg(long, env = "WIRECALC_SIG", default_value = "++-")]
    pub sig: String,
    /// Zero-padded convolution of vectors of any lengths
    #[arg(long)]
    pub linear: bool,
    #[arg(short, long, env = "WIRECALC_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimplifyArgs {
    pub input: PathBuf,
    #[arg(short, long, env = "WIRECALC_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Also write the simplified diagram in Graphviz DOT format
    #[arg(long, env = "WIRECALC_DOT")]
    pub dot: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum LayoutArg {
    Gamma,
    Textbook,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Pair serialization for kron and kr
    #[arg(long, value_enum, env = "WIRECALC_LAYOUT", default_value = "gamma")]
    pub layout: LayoutArg,
    /// Row-wise Khatri-Rao
    #[arg(long)]
    pub row: bool,
    #[arg(short, long, env = "WIRECALC_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MediatorArgs {
    pub spec: String,
    #[arg(short, long, env = "WIRECALC_OUTPUT")]
    pub output: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    let read = ReadOptions {
        permissive: g.permissive,
    };
    let (report, result) = match &cli.command {
        Command::Eval(a) => eval(a, g, read, out, err),
        Command::Check(a) => check(a, g, out),
        Command::Conv(a) => conv(a, read, out, err),
        Command::Simplify(a) => simplify(a, out, err),
        Command::Kron(a) => product("kron", a, read, out, err),
        Command::Dot(a) => product("dot", a, read, out, err),
        Command::Hadamard(a) => product("hadamard", a, read, out, err),
        Command::Kr(a) => product("kr", a, read, out, err),
        Command::Ts(a) => product("ts", a, read, out, err),
        Command::Mediator(a) => mediator(a, out, err),
    };
    if let Some(path) = &g.json_report {
        let mut report = report;
        if let Err(e) = &result {
            report["error"] = json!(e.to_string());
        }
        report["exit_code"] = json!(result.as_ref().err().map_or(EXIT_OK, CliError::exit_code));
        write_text(path, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
    }
    result
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

/// Writes `t` as JSON to `path` or `out`, and a shape summary to `out` (or
/// `err` when the tensor itself went to `out`).
fn emit(t: &Tensor, path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<Value> {
    let text = tensor_to_string(t);
    let summary = format!("shape {:?} dtype {}", t.shape(), t.dtype());
    match path {
        Some(p) => {
            write_text(p, &(text + "\n"))?;
            writeln!(out, "{summary} -> {}", p.display()).map_err(io)?;
        }
        None => {
            writeln!(out, "{text}").map_err(io)?;
            writeln!(err, "{summary}").map_err(io)?;
        }
    }
    Ok(json!({"shape": t.shape(), "dtype": t.dtype().to_string(), "output": path}))
}

fn load(path: &Path, read: ReadOptions) -> CliResult<Tensor> {
    Ok(read_tensor(path, read)?)
}

/// A `--bind` value: builtin, inline tensor JSON or tensor file.
fn bound_tensor(value: &str, read: ReadOptions) -> CliResult<Tensor> {
    let v = value.trim();
    if v.starts_with('{') {
        Ok(tensor_from_str(v, read)?)
    } else if v.contains('[') && !Path::new(v).exists() {
        Ok(Builtin::parse(v)?.to_dense()?)
    } else {
        load(Path::new(v), read)
    }
}

fn eval(a: &EvalArgs, g: &Global, read: ReadOptions, out: &mut dyn Write, err: &mut dyn Write) -> (Value, CliResult<()>) {
    let mut report = json!({"command": "eval"});
    let result = (|| {
        let (program, files) = match &a.program_file {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let v: Value = serde_json::from_str(&text).map_err(wirecalc::Error::from)?;
                (EinsumProgram::from_integer_list(&v)?.0, &a.args[..])
            }
            None => {
                let text = a
                    .args
                    .first()
                    .ok_or_else(|| CliError::Usage("eval needs a program or --program-file".into()))?;
                (EinsumProgram::parse(text)?, &a.args[1..])
            }
        };
        report["program"] = json!(program.to_string());
        let mut slots: Vec<Option<Tensor>> = vec![None; program.operand_count()];
        for (&k, b) in &program.builtins {
            slots[k - 1] = Some(b.to_dense()?);
        }
        for bind in &a.binds {
            let (n, value) = bind
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--bind expects N=VALUE, got '{bind}'")))?;
            let k: usize = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--bind operand '{n}' is not a number")))?;
            if k == 0 || k > slots.len() {
                return Err(ProgramError::NoSuchOperand {
                    operand: k,
                    count: slots.len(),
                }
                .into());
            }
            if slots[k - 1].is_some() {
                return Err(ProgramError::DuplicateBinding { operand: k }.into());
            }
            slots[k - 1] = Some(bound_tensor(value, read)?);
        }
        let open: Vec<usize> = (0..slots.len()).filter(|&k| slots[k].is_none()).collect();
        if open.len() != files.len() {
            return Err(CliError::Usage(format!(
                "program has {} unbound operands but {} tensor files were given",
                open.len(),
                files.len()
            )));
        }
        for (k, f) in open.into_iter().zip(files) {
            slots[k] = Some(load(Path::new(f), read)?);
        }
        let operands: Vec<Tensor> = slots.into_iter().map(Option::unwrap).collect();
        let refs: Vec<&Tensor> = operands.iter().collect();
        let t = einsum_eval_with(&program.spec, &refs, EvalOptions { budget: Some(g.budget) })?;
        report["result"] = emit(&t, a.output.as_deref(), out, err)?;
        Ok(())
    })();
    (report, result)
}

fn check(a: &CheckArgs, g: &Global, out: &mut dyn Write) -> (Value, CliResult<()>) {
    let profile = Profile {
        min_extent: a.min_extent,
        max_extent: a.max_extent,
    };
    let mut report = json!({
        "command": "check",
        "trials": a.trials,
        "seed": g.seed,
        "tolerance": g.tolerance,
        "profile": {"min_extent": a.min_extent, "max_extent": a.max_extent},
    });
    let result = (|| {
        let opts = CheckOptions {
            inject_fault: a.inject_fault.clone(),
        };
        let cases = check_all(profile, a.trials, g.seed, &opts)?;
        writeln!(out, "{:<22} {:<34} {:>10}  status", "identity", "worst dims", "residual").map_err(io)?;
        let mut rows = Vec::new();
        let mut failed = 0;
        for c in &cases {
            let pass = c.passed(g.tolerance);
            failed += usize::from(!pass);
            let dims: Vec<String> = c.dims.iter().map(|(s, e)| format!("{s}={e}")).collect();
            writeln!(
                out,
                "{:<22} {:<34} {:>10.3e}  {}",
                c.name,
                dims.join(" "),
                c.residual,
                if pass { "pass" } else { "FAIL" }
            )
            .map_err(io)?;
            let mut row = serde_json::to_value(c).unwrap();
            row["passed"] = json!(pass);
            rows.push(row);
        }
        writeln!(out, "{} of {} identities pass", cases.len() - failed, cases.len()).map_err(io)?;
        report["cases"] = Value::Array(rows);
        report["passed"] = json!(failed == 0);
        if failed > 0 {
            return Err(CliError::CheckFailed {
                failed,
                total: cases.len(),
            });
        }
        Ok(())
    })();
    (report, result)
}

fn conv(a: &ConvArgs, read: ReadOptions, out: &mut dyn Write, err: &mut dyn Write) -> (Value, CliResult<()>) {
    let mut report = json!({"command": "conv", "sig": a.sig, "linear": a.linear});
    let result = (|| {
        let sigs: Vec<Signature> = a.sig.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
        let x = load(&a.a, read)?;
        let y = load(&a.b, read)?;
        let t = if a.linear {
            if sigs != [Signature::CONVOLUTION] {
                return Err(CliError::Usage("--linear supports only the (++-) signature".into()));
            }
            linear_conv(&x, &y)?
        } else if x.rank() == 1 && sigs.len() == 1 {
            conv1d(&x, &y, sigs[0])?
        } else {
            let sigs = if sigs.len() == 1 { vec![sigs[0]; x.rank()] } else { sigs };
            if sigs.len() != x.rank() {
                return Err(CliError::Usage(format!(
                    "{} signatures given for rank-{} tensors",
                    sigs.len(),
                    x.rank()
                )));
            }
            let axes: Vec<AxisConv> = sigs
                .iter()
                .zip(x.shape())
                .map(|(&s, &d)| AxisConv::new(s, d))
                .collect::<Result<_, _>>()?;
            conv_nd(&x, &y, &axes)?
        };
        report["result"] = emit(&t, a.output.as_deref(), out, err)?;
        Ok(())
    })();
    (report, result)
}

fn simplify(a: &SimplifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> (Value, CliResult<()>) {
    let mut report = json!({"command": "simplify"});
    let result = (|| {
        let d = diagram::json::read(&a.input)?;
        let (s, steps) = simplify_traced(&d);
        let text = diagram::json::to_string_pretty(&s) + "\n";
        match &a.output {
            Some(p) => write_text(p, &text)?,
            None => out.write_all(text.as_bytes()).map_err(io)?,
        }
        if let Some(p) = &a.dot {
            write_text(p, &diagram::dot::to_dot(&s))?;
        }
        writeln!(
            err,
            "{} rewrites: {} -> {} nodes, scale {}",
            steps.len(),
            d.node_count(),
            s.node_count(),
            s.scale()
        )
        .map_err(io)?;
        report["steps"] = steps
            .iter()
            .map(|st| json!({"rule": format!("{:?}", st.rule), "nodes_before": st.nodes_before, "nodes_after": st.nodes_after}))
            .collect();
        report["nodes_before"] = json!(d.node_count());
        report["nodes_after"] = json!(s.node_count());
        report["scale"] = json!(s.scale());
        Ok(())
    })();
    (report, result)
}

fn product(name: &str, a: &ProductArgs, read: ReadOptions, out: &mut dyn Write, err: &mut dyn Write) -> (Value, CliResult<()>) {
    let mut report = json!({"command": name});
    let result = (|| {
        let x = load(&a.a, read)?;
        let y = load(&a.b, read)?;
        let layout = match a.layout {
            LayoutArg::Gamma => KronLayout::Gamma,
            LayoutArg::Textbook => KronLayout::Textbook,
        };
        let t = match name {
            "kron" => products::kronecker_with(&x, &y, layout)?,
            "dot" => products::dot(&x, &y)?,
            "hadamard" => products::hadamard(&x, &y)?,
            "kr" if a.row => products::khatri_rao_row_with(&x, &y, layout)?,
            "kr" => products::khatri_rao_col_with(&x, &y, layout)?,
            _ => products::tracy_singh(&x, &y)?,
        };
        report["result"] = emit(&t, a.output.as_deref(), out, err)?;
        Ok(())
    })();
    (report, result)
}

fn mediator(a: &MediatorArgs, out: &mut dyn Write, err: &mut dyn Write) -> (Value, CliResult<()>) {
    let mut report = json!({"command": "mediator", "spec": a.spec});
    let result = (|| {
        let t = Builtin::parse(&a.spec)?.to_dense()?;
        report["result"] = emit(&t, a.output.as_deref(), out, err)?;
        Ok(())
    })();
    (report, result)
}
