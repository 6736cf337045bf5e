//! Command-line front end for the `weyl` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 domain-validation error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::channels::{
    apply_channel, channel_from_dilation, choi_matrix, is_trace_preserving, weyl_channel, QuantumChannel,
};
use crate::dilation::{env_vector, evolve_density, evolve_pure, weyl_form_of_joint};
use crate::error::Error;
use crate::io::{
    choi_doc, from_json, matrix_table, to_json, BasisDoc, BasisElementDoc, ChannelDoc, CoefficientDoc,
    GammaDoc, MatrixDoc, WeightsDoc, L_MAJOR,
};
use crate::numerics::{ComplexMatrix, DensityMatrix, Ket, Tolerances};
use crate::random::DEFAULT_SEED;
use crate::verify::{self, VerifyConfig, VerifyReport};
use crate::weyl::{decompose, reconstruct, weyl_element, CoefficientTable, WeylIndex};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 32;
const DENSITY_WARN_DIM: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "weyl", version, about = "Weyl-Heisenberg operator basis and qudit channel toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Override a named tolerance (norm, herm, psd, jacobi, cptp, prune).
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit Weyl basis elements X_l Z_k.
    Basis {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_negative_numbers = true)]
        l: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Expand a matrix file in the Weyl basis.
    Decompose {
        #[arg(long)]
        input: String,
        /// Expected dimension; checked against the input when given.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild a matrix from a coefficient file.
    Reconstruct {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve a state through the γ dilation.
    Dilate {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        state: String,
        /// Treat the state as a density matrix and emit the d³×d³ joint density.
        #[arg(long)]
        density: bool,
        /// Add the Weyl-form term norms to the summary.
        #[arg(long)]
        weyl_terms: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a dilation channel or a Weyl channel to a density matrix.
    Channel {
        #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
        gamma: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        rho: String,
        #[command(flatten)]
        common: Common,
    },
    /// Export the Choi matrix of a channel.
    Choi {
        #[arg(long, group = "source", required = true)]
        channel: Option<String>,
        #[arg(long, group = "source")]
        gamma: Option<String>,
        #[arg(long, group = "source")]
        weights: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suite.
    Verify {
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(Error::Shape(_) | Error::Parse(_)) => EXIT_USAGE,
            CliError::Lib(Error::Domain(_) | Error::Validation(_) | Error::Internal(_)) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(cli)
}

fn check_dim(d: usize) -> CliResult<usize> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(CliError::Usage(format!("d must lie in [{MIN_DIM}, {MAX_DIM}], got {d}")));
    }
    Ok(d)
}

fn tolerances(common: &Common) -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    for spec in &common.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got {spec:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--tol {name}: {value:?} is not a number")))?;
        tol.set(name.trim(), value).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(tol)
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(PathBuf::from(path)).map_err(|e| CliError::Usage(format!("reading {path}: {e}")))
}

fn write_output(path: &str, text: &str) -> CliResult<()> {
    if path == "-" {
        io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("writing standard output: {e}")))
    } else {
        fs::write(path, text).map_err(|e| CliError::Usage(format!("writing {path}: {e}")))
    }
}

fn load_matrix(path: &str) -> CliResult<ComplexMatrix> {
    let doc: MatrixDoc = from_json(&read_input(path)?, path)?;
    Ok(ComplexMatrix::try_from(&doc)?)
}

fn load_density(path: &str, tol: &Tolerances) -> CliResult<DensityMatrix> {
    Ok(DensityMatrix::with_tolerances(load_matrix(path)?, tol)?)
}

fn load_gamma(path: &str, tol: &Tolerances) -> CliResult<crate::dilation::GammaTable> {
    let doc: GammaDoc = from_json(&read_input(path)?, path)?;
    check_dim(doc.d)?;
    Ok(doc.to_table(tol)?)
}

fn load_weights_channel(path: &str, tol: &Tolerances) -> CliResult<QuantumChannel> {
    let doc: WeightsDoc = from_json(&read_input(path)?, path)?;
    check_dim(doc.d)?;
    Ok(weyl_channel(&doc.to_weights(tol)?)?)
}

fn matrix_output(m: &ComplexMatrix, summary: Option<Value>, format: Format) -> String {
    match format {
        Format::Json => to_json(&MatrixDoc { summary, ..MatrixDoc::from(m) }),
        Format::Table => {
            let mut out = matrix_table(m);
            if let Some(s) = summary {
                out.push_str(&format!("summary: {}", to_json(&s)));
            }
            out
        }
    }
}

fn coefficient_table_text(t: &CoefficientTable) -> String {
    let mut out = format!("d = {} ({L_MAJOR})\n", t.d());
    for idx in WeylIndex::all(t.d()).expect("table dimension is valid") {
        let z = t.get(idx);
        out.push_str(&format!("{:>3} {:>3}  {:+.12e}  {:+.12e}\n", idx.l(), idx.k(), z.re + 0.0, z.im + 0.0));
    }
    out
}

/// Runs a parsed command, reporting any error on stderr; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run_inner(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Basis { d, l, k, common } => cmd_basis(d, l, k, &common),
        Command::Decompose { input, d, common } => cmd_decompose(&input, d, &common),
        Command::Reconstruct { input, common } => cmd_reconstruct(&input, &common),
        Command::Dilate { gamma, state, density, weyl_terms, common } => {
            cmd_dilate(&gamma, &state, density, weyl_terms, &common)
        }
        Command::Channel { gamma, weights, rho, common } => {
            cmd_channel(gamma.as_deref(), weights.as_deref(), &rho, &common)
        }
        Command::Choi { channel, gamma, weights, common } => {
            cmd_choi(channel.as_deref(), gamma.as_deref(), weights.as_deref(), &common)
        }
        Command::Verify { d, seed, inject_fault, common } => cmd_verify(d, seed, inject_fault, &common),
    }
}

fn cmd_basis(d: usize, l: Option<i64>, k: Option<i64>, common: &Common) -> CliResult<i32> {
    let d = check_dim(d)?;
    tolerances(common)?;
    let selected: Vec<WeylIndex> = WeylIndex::all(d)?
        .filter(|i| l.is_none_or(|l| i.l() == crate::weyl::reduce(l, d)))
        .filter(|i| k.is_none_or(|k| i.k() == crate::weyl::reduce(k, d)))
        .collect();
    let text = if let ([only], Some(_), Some(_)) = (selected.as_slice(), l, k) {
        matrix_output(&weyl_element(*only), None, common.format)
    } else {
        match common.format {
            Format::Json => to_json(&BasisDoc {
                d,
                order: L_MAJOR.into(),
                elements: selected
                    .iter()
                    .map(|i| BasisElementDoc { l: i.l(), k: i.k(), matrix: MatrixDoc::from(&weyl_element(*i)) })
                    .collect(),
            }),
            Format::Table => selected
                .iter()
                .map(|i| format!("(l={}, k={}) {}", i.l(), i.k(), matrix_table(&weyl_element(*i))))
                .collect(),
        }
    };
    write_output(&common.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_decompose(input: &str, d: Option<usize>, common: &Common) -> CliResult<i32> {
    tolerances(common)?;
    let a = load_matrix(input)?;
    if !a.is_square() {
        return Err(CliError::Usage(format!("{input}: expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    check_dim(a.rows())?;
    if let Some(d) = d {
        if d != a.rows() {
            return Err(CliError::Usage(format!("--d {d} does not match the {0}x{0} input", a.rows())));
        }
    }
    let table = decompose(&a)?;
    let residual = reconstruct(&table).frobenius_distance(&a)?;
    let text = match common.format {
        Format::Json => to_json(&CoefficientDoc { roundtrip_residual: Some(residual), ..CoefficientDoc::from(&table) }),
        Format::Table => format!("{}roundtrip_residual: {residual:e}\n", coefficient_table_text(&table)),
    };
    write_output(&common.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_reconstruct(input: &str, common: &Common) -> CliResult<i32> {
    tolerances(common)?;
    let doc: CoefficientDoc = from_json(&read_input(input)?, input)?;
    check_dim(doc.d)?;
    let table = CoefficientTable::try_from(&doc)?;
    write_output(&common.out, &matrix_output(&reconstruct(&table), None, common.format))?;
    Ok(EXIT_OK)
}

fn cmd_dilate(gamma: &str, state: &str, density: bool, weyl_terms: bool, common: &Common) -> CliResult<i32> {
    let tol = tolerances(common)?;
    let g = load_gamma(gamma, &tol)?;
    let d = g.d();
    let input = load_matrix(state)?;
    let mut summary = json!({ "d": d, "mode": if density { "density" } else { "pure" } });

    let joint = if density {
        if d > DENSITY_WARN_DIM {
            eprintln!("warning: joint density for d = {d} has {} entries", d.pow(6));
        }
        let rho = if input.cols() == 1 {
            Ket::with_tolerances(input.to_vector()?, &tol)?.projector()
        } else {
            DensityMatrix::with_tolerances(input, &tol)?
        };
        let joint = evolve_density(&rho, &g)?;
        let tr = joint.trace()?;
        summary["trace"] = json!([tr.re, tr.im]);
        summary["hermiticity_defect"] = json!(joint.hermiticity_defect());
        joint
    } else {
        let psi = Ket::with_tolerances(input.to_vector()?, &tol)?;
        let out = evolve_pure(&psi, &g)?;
        summary["input_norm"] = json!(psi.vector().norm());
        summary["joint_norm"] = json!(out.vec.norm());
        if weyl_terms {
            let terms = weyl_form_of_joint(&psi, &g)?;
            summary["weyl_terms"] = Value::Array(
                terms
                    .iter()
                    .map(|t| json!({ "l": t.idx.l(), "k": t.idx.k(), "sys_norm": t.sys.norm(), "env_norm": t.env.norm() }))
                    .collect(),
            );
        }
        out.vec.to_column()
    };
    if density && weyl_terms {
        let norms: Vec<Value> = WeylIndex::all(d)?
            .map(|i| Ok(json!({ "l": i.l(), "k": i.k(), "env_norm": env_vector(&g, i)?.norm() })))
            .collect::<Result<_, Error>>()?;
        summary["weyl_terms"] = Value::Array(norms);
    }
    write_output(&common.out, &matrix_output(&joint, Some(summary), common.format))?;
    Ok(EXIT_OK)
}

fn cmd_channel(gamma: Option<&str>, weights: Option<&str>, rho: &str, common: &Common) -> CliResult<i32> {
    let tol = tolerances(common)?;
    let (source, ch) = match (gamma, weights) {
        (Some(g), None) => ("gamma", channel_from_dilation(&load_gamma(g, &tol)?)?),
        (None, Some(w)) => ("weights", load_weights_channel(w, &tol)?),
        _ => return Err(CliError::Usage("give exactly one of --gamma or --weights".into())),
    };
    let rho = load_density(rho, &tol)?;
    if rho.dim() != ch.d() {
        return Err(CliError::Usage(format!("state is {0}x{0} but the channel acts on d = {1}", rho.dim(), ch.d())));
    }
    let report = is_trace_preserving(&ch);
    if report.deficit >= tol.cptp {
        return Err(CliError::Lib(Error::Validation(format!(
            "channel is not trace preserving: deficit {:e}",
            report.deficit
        ))));
    }
    let out = apply_channel(&ch, &rho)?;
    let summary = json!({
        "source": source,
        "kraus_count": ch.kraus().len(),
        "trace_deficit": report.deficit,
        "unital_deficit": report.unital_deficit,
    });
    write_output(&common.out, &matrix_output(out.matrix(), Some(summary), common.format))?;
    Ok(EXIT_OK)
}

fn cmd_choi(channel: Option<&str>, gamma: Option<&str>, weights: Option<&str>, common: &Common) -> CliResult<i32> {
    let tol = tolerances(common)?;
    let ch = match (channel, gamma, weights) {
        (Some(c), None, None) => {
            let doc: ChannelDoc = from_json(&read_input(c)?, c)?;
            check_dim(doc.d)?;
            doc.to_channel(&tol)?
        }
        (None, Some(g), None) => channel_from_dilation(&load_gamma(g, &tol)?)?,
        (None, None, Some(w)) => load_weights_channel(w, &tol)?,
        _ => return Err(CliError::Usage("give exactly one of --channel, --gamma or --weights".into())),
    };
    let j = choi_matrix(&ch);
    let tr = j.mat.trace()?;
    let summary = json!({ "d": ch.d(), "trace": [tr.re, tr.im] });
    let text = match common.format {
        Format::Json => to_json(&MatrixDoc { summary: Some(summary), ..choi_doc(&j.mat) }),
        Format::Table => matrix_output(&j.mat, Some(summary), Format::Table),
    };
    write_output(&common.out, &text)?;
    Ok(EXIT_OK)
}

fn report_table(r: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &r.checks {
        out.push_str(&format!(
            "{:<4} {:<24} d={:<3} residual={:.3e} tol={:.0e} time={:.3}s\n",
            c.status.to_uppercase(),
            c.name,
            c.d,
            c.residual,
            c.tolerance,
            c.wall_time_s
        ));
    }
    out.push_str(&format!("overall: {} (seed {})\n", r.status, r.seed));
    out
}

fn cmd_verify(dims: Vec<usize>, seed: u64, inject_fault: bool, common: &Common) -> CliResult<i32> {
    tolerances(common)?;
    let mut dims = dims.into_iter().map(check_dim).collect::<CliResult<Vec<_>>>()?;
    dims.sort_unstable();
    dims.dedup();
    let mut cfg = VerifyConfig::new(dims, seed);
    cfg.inject_fault = inject_fault;
    let report = verify::run(&cfg)?;
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Table => report_table(&report),
    };
    write_output(&common.out, &text)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
