//! `cocycle` — compute irreducible representations, Fourier transforms,
//! functional-equation residuals, solution sets, and quasi-eigenvector
//! reports for finite groups given by Cayley tables.
//!
//! JSON output is byte-deterministic: the same command with the same seed
//! produces identical bytes regardless of thread count. `--format table` is
//! a human-oriented view with no stability guarantee.

use clap::{Parser, Subcommand, ValueEnum};
use cocycle::equations;
use cocycle::formats::{self, JsonValue};
use cocycle::fourier;
use cocycle::group::Group;
use cocycle::lemma::{self, LemmaConclusion, LemmaError};
use cocycle::repr::{decompose_irreps, IrrepBasis};
use cocycle::solver::{self, Equation, SolutionCertificate, Witness};
use cocycle::Complex64;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Magnitudes below this print as zero in `--format table` views; JSON
/// always carries exact values.
const TABLE_ZERO: f64 = 1e-12;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "cocycle",
    version,
    about = "Harmonic analysis and functional equations on finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format; only `json` has byte-stability guarantees.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for representation computation and the solver oracle
    /// (overrides the COCYCLE_SEED environment variable; default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Residual tolerance for verification and lemma checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Worker threads for parallel search (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the complete list of irreducible unitary representations.
    Irreps {
        /// Built-in spec (`builtin:q8`, `builtin:z2xd4`, ...) or a
        /// Cayley-table JSON file path.
        #[arg(long)]
        group: String,
    },
    /// Fourier-transform a function into its matrix blocks, one per irrep.
    Fourier {
        #[arg(long)]
        group: String,
        /// Function JSON file ({"values": [[re, im], ...]}).
        #[arg(long)]
        function: PathBuf,
        /// Reuse a previously exported irrep basis instead of recomputing.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Evaluate a functional-equation residual over all argument pairs.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        equation: EquationArg,
        #[arg(long)]
        function: PathBuf,
        /// Companion function g, required by the wilson equation.
        #[arg(long)]
        companion: Option<PathBuf>,
    },
    /// Construct the complete solution set of an equation, with optional
    /// independent cross-validation.
    Solve {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        equation: EquationArg,
        /// Also run the Gauss-Newton search and report the match.
        #[arg(long)]
        oracle: bool,
        /// Random starts for the oracle.
        #[arg(long, default_value_t = 500)]
        starts: usize,
    },
    /// Report common quasi-eigenvectors of one irrep and the conclusion
    /// they force.
    Lemma {
        #[arg(long)]
        group: String,
        /// Index of the irrep in the computed basis.
        #[arg(long)]
        irrep: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum EquationArg {
    Dalembert,
    Wilson,
    Long,
}

impl EquationArg {
    fn name(self) -> &'static str {
        match self {
            EquationArg::Dalembert => "dalembert",
            EquationArg::Wilson => "wilson",
            EquationArg::Long => "long",
        }
    }
}

#[derive(Debug)]
enum CliError {
    BadArgs(String),
    FileNotFound(String),
    Validation(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::BadArgs(_) => 64,
            CliError::FileNotFound(_) => 66,
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::BadArgs(m) => write!(f, "{m}"),
            CliError::FileNotFound(m) => write!(f, "file not found: {m}"),
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    // Any panic past this point is an internal error by contract.
    let outcome = std::panic::catch_unwind(|| run(cli))
        .unwrap_or_else(|_| Err(CliError::Internal("unexpected internal failure".into())));
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.tol <= 0.0 || cli.tol.is_nan() {
        return Err(CliError::BadArgs("--tol must be positive".into()));
    }
    if cli.threads > 0 {
        // A second build_global in one process is harmless: the pool is
        // already running and results do not depend on thread count.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let seed = resolve_seed(cli.seed)?;
    let rendered = match &cli.command {
        Command::Irreps { group } => cmd_irreps(group, seed, cli.format)?,
        Command::Fourier {
            group,
            function,
            basis,
        } => cmd_fourier(group, function, basis.as_deref(), seed, cli.format)?,
        Command::Verify {
            group,
            equation,
            function,
            companion,
        } => cmd_verify(
            group,
            *equation,
            function,
            companion.as_deref(),
            cli.tol,
            cli.format,
        )?,
        Command::Solve {
            group,
            equation,
            oracle,
            starts,
        } => cmd_solve(group, *equation, *oracle, *starts, seed, cli.tol, cli.format)?,
        Command::Lemma { group, irrep } => cmd_lemma(group, *irrep, seed, cli.tol, cli.format)?,
    };
    write_output(cli.output.as_deref(), &rendered)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("COCYCLE_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::BadArgs(format!(
                "COCYCLE_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Builtin specs fail as bad arguments; file contents fail as validation
/// errors.
fn load_group(source: &str) -> Result<Arc<Group>, CliError> {
    if let Some(spec) = source.strip_prefix("builtin:") {
        let group =
            formats::parse_group_spec(spec).map_err(|e| CliError::BadArgs(e.to_string()))?;
        return Ok(Arc::new(group));
    }
    let text = read_file(Path::new(source))?;
    let group = formats::parse_group_json(&text).map_err(validation)?;
    Ok(Arc::new(group))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::FileNotFound(path.display().to_string())
        } else {
            CliError::Internal(format!("cannot read {}: {e}", path.display()))
        }
    })
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn compute_basis(group: &Arc<Group>, seed: u64) -> Result<IrrepBasis, CliError> {
    decompose_irreps(group, seed).map_err(|e| CliError::Internal(e.to_string()))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", p.display()))),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_irreps(source: &str, seed: u64, format: Format) -> Result<String, CliError> {
    let group = load_group(source)?;
    let basis = compute_basis(&group, seed)?;
    match format {
        Format::Json => Ok(render_json(&formats::basis_to_json(&basis))),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "group of order {}: {} irreducible representations, dims {:?}",
                group.order(),
                basis.len(),
                basis.dims()
            );
            for (k, rep) in basis.irreps().iter().enumerate() {
                let chi = rep.character();
                let values: Vec<String> =
                    chi.values().iter().map(|&z| fmt_complex(z)).collect();
                let _ = writeln!(out, "irrep {k} (dim {}): character {}", rep.dim(), values.join(" "));
            }
            Ok(out)
        }
    }
}

fn cmd_fourier(
    source: &str,
    function: &Path,
    basis_path: Option<&Path>,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    let group = load_group(source)?;
    let f = formats::parse_function_json(&read_file(function)?, &group).map_err(validation)?;
    let basis = match basis_path {
        Some(p) => formats::parse_basis_json(&read_file(p)?, &group).map_err(validation)?,
        None => compute_basis(&group, seed)?,
    };
    let basis = Arc::new(basis);
    let coeffs =
        fourier::transform(&f, &basis).map_err(|e| CliError::Internal(e.to_string()))?;
    match format {
        Format::Json => {
            let blocks = JsonValue::Array(coeffs.blocks().iter().map(JsonValue::matrix).collect());
            Ok(render_json(&JsonValue::Object(vec![(
                "blocks".into(),
                blocks,
            )])))
        }
        Format::Table => {
            let mut out = String::new();
            for (k, block) in coeffs.blocks().iter().enumerate() {
                let _ = writeln!(out, "block {k} (dim {}):", block.rows());
                for i in 0..block.rows() {
                    let row: Vec<String> = (0..block.cols())
                        .map(|j| {
                            let z = block[(i, j)];
                            // Small magnitudes render as zero for
                            // readability; JSON keeps exact values.
                            let z = if z.norm() < TABLE_ZERO {
                                Complex64::new(0.0, 0.0)
                            } else {
                                z
                            };
                            fmt_complex(z)
                        })
                        .collect();
                    let _ = writeln!(out, "  [{}]", row.join(" "));
                }
            }
            Ok(out)
        }
    }
}

fn cmd_verify(
    source: &str,
    equation: EquationArg,
    function: &Path,
    companion: Option<&Path>,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let group = load_group(source)?;
    let f = formats::parse_function_json(&read_file(function)?, &group).map_err(validation)?;
    let report = match equation {
        EquationArg::Dalembert => {
            reject_companion(companion, equation)?;
            equations::dalembert_residual(&f, tol)
        }
        EquationArg::Long => {
            reject_companion(companion, equation)?;
            equations::long_residual(&f, tol)
        }
        EquationArg::Wilson => {
            let path = companion.ok_or_else(|| {
                CliError::BadArgs("the wilson equation needs --companion <g.json>".into())
            })?;
            let g =
                formats::parse_function_json(&read_file(path)?, &group).map_err(validation)?;
            equations::wilson_residual(&f, &g, tol)
                .map_err(|e| CliError::Internal(e.to_string()))?
        }
    };
    match format {
        Format::Json => Ok(render_json(&JsonValue::Object(vec![
            ("max_residual".into(), JsonValue::Float(report.max_residual)),
            (
                "argmax".into(),
                JsonValue::Array(vec![
                    JsonValue::Int(report.argmax_pair.0 as i64),
                    JsonValue::Int(report.argmax_pair.1 as i64),
                ]),
            ),
            ("satisfied".into(), JsonValue::Bool(report.satisfied)),
        ]))),
        Format::Table => Ok(format!(
            "max residual {:.3e} at ({}, {}): {}\n",
            report.max_residual,
            report.argmax_pair.0,
            report.argmax_pair.1,
            if report.satisfied { "satisfied" } else { "violated" }
        )),
    }
}

fn reject_companion(companion: Option<&Path>, equation: EquationArg) -> Result<(), CliError> {
    if companion.is_some() {
        return Err(CliError::BadArgs(format!(
            "--companion only applies to the wilson equation, not {}",
            equation.name()
        )));
    }
    Ok(())
}

fn witness_json(witness: Witness) -> JsonValue {
    let (kind, index) = match witness {
        Witness::CharacterPair(i) => ("character_pair", i),
        Witness::Su2Irrep(i) => ("su2_irrep", i),
    };
    JsonValue::Object(vec![
        ("kind".into(), JsonValue::Str(kind.into())),
        ("index".into(), JsonValue::Int(index as i64)),
    ])
}

fn certificate_json(cert: &SolutionCertificate, tol: f64) -> JsonValue {
    let residual = match cert.equation {
        Equation::Dalembert | Equation::Wilson => {
            equations::dalembert_residual(&cert.f, tol).max_residual
        }
        Equation::Long => equations::long_residual(&cert.f, tol).max_residual,
    };
    JsonValue::Object(vec![
        ("values".into(), JsonValue::complex_vector(cert.f.values())),
        ("witness".into(), witness_json(cert.witness)),
        ("residual".into(), JsonValue::Float(residual)),
    ])
}

fn cmd_solve(
    source: &str,
    equation: EquationArg,
    oracle: bool,
    starts: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    if starts == 0 {
        return Err(CliError::BadArgs("--starts must be at least 1".into()));
    }
    if oracle && equation == EquationArg::Wilson {
        return Err(CliError::BadArgs(
            "--oracle supports the dalembert and long equations".into(),
        ));
    }
    let group = load_group(source)?;
    let basis = compute_basis(&group, seed)?;
    let certificates = match equation {
        EquationArg::Dalembert | EquationArg::Wilson => solver::solve_dalembert(&group, &basis),
        EquationArg::Long => solver::solve_long(&group, &basis),
    };
    let mut fields = vec![
        (
            "equation".into(),
            JsonValue::Str(equation.name().to_string()),
        ),
        ("group".into(), JsonValue::Str(source.to_string())),
        (
            "solutions".into(),
            JsonValue::Array(
                certificates
                    .iter()
                    .map(|c| certificate_json(c, tol))
                    .collect(),
            ),
        ),
    ];
    let mut wilson_spaces = Vec::new();
    if equation == EquationArg::Wilson {
        wilson_spaces = solver::solve_wilson(&group, &basis);
        fields.push((
            "wilson_spaces".into(),
            JsonValue::Array(
                wilson_spaces
                    .iter()
                    .enumerate()
                    .map(|(i, space)| {
                        JsonValue::Object(vec![
                            ("g_index".into(), JsonValue::Int(i as i64)),
                            ("dimension".into(), JsonValue::Int(space.dimension as i64)),
                            (
                                "basis".into(),
                                JsonValue::Array(
                                    space
                                        .f_basis
                                        .iter()
                                        .map(|f| JsonValue::complex_vector(f.values()))
                                        .collect(),
                                ),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ));
    }
    let mut oracle_summary = None;
    if oracle {
        let eq = match equation {
            EquationArg::Dalembert => Equation::Dalembert,
            EquationArg::Long => Equation::Long,
            EquationArg::Wilson => unreachable!("rejected above"),
        };
        let run = solver::gauss_newton_oracle_detailed(&group, eq, starts, seed);
        let report = solver::match_solutions(&run.solutions, &certificates, 1e-6);
        let unmatched = report.unmatched_found.len() + report.unmatched_constructed.len();
        fields.push((
            "oracle".into(),
            JsonValue::Object(vec![
                ("starts".into(), JsonValue::Int(starts as i64)),
                ("found".into(), JsonValue::Int(run.solutions.len() as i64)),
                (
                    "matched".into(),
                    JsonValue::Int(report.matches.len() as i64),
                ),
                ("unmatched".into(), JsonValue::Int(unmatched as i64)),
            ]),
        ));
        oracle_summary = Some((run.solutions.len(), report.matches.len(), unmatched));
    }
    match format {
        Format::Json => Ok(render_json(&JsonValue::Object(fields))),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{} nonzero solutions of the {} equation",
                certificates.len(),
                equation.name()
            );
            for (i, cert) in certificates.iter().enumerate() {
                let (kind, index) = match cert.witness {
                    Witness::CharacterPair(k) => ("character_pair", k),
                    Witness::Su2Irrep(k) => ("su2_irrep", k),
                };
                let values: Vec<String> =
                    cert.f.values().iter().map(|&z| fmt_complex(z)).collect();
                let _ = writeln!(
                    out,
                    "solution {i} [witness {kind} {index}]: {}",
                    values.join(" ")
                );
            }
            for (i, space) in wilson_spaces.iter().enumerate() {
                let _ = writeln!(out, "wilson space {i}: dimension {}", space.dimension);
            }
            if let Some((found, matched, unmatched)) = oracle_summary {
                let _ = writeln!(
                    out,
                    "oracle: {starts} starts, {found} found, {matched} matched, {unmatched} unmatched"
                );
            }
            Ok(out)
        }
    }
}

fn cmd_lemma(
    source: &str,
    irrep: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let group = load_group(source)?;
    let basis = compute_basis(&group, seed)?;
    if irrep >= basis.len() {
        return Err(CliError::BadArgs(format!(
            "--irrep {irrep} out of range: the basis has {} irreps",
            basis.len()
        )));
    }
    let report = lemma::verify_small_dimension_lemma(&basis.irreps()[irrep], tol).map_err(
        |e| match e {
            LemmaError::NotIrreducible => CliError::Internal(e.to_string()),
            LemmaError::LemmaViolated(_) => CliError::Internal(e.to_string()),
        },
    )?;
    let conclusion = match report.conclusion {
        LemmaConclusion::Dim1Character => "dim1_character",
        LemmaConclusion::Dim2Su2 => "dim2_su2",
        LemmaConclusion::NotApplicable => "not_applicable",
    };
    match format {
        Format::Json => Ok(render_json(&JsonValue::Object(vec![
            (
                "witnesses".into(),
                JsonValue::Array(
                    report
                        .witnesses
                        .iter()
                        .map(|v| JsonValue::complex_vector(v))
                        .collect(),
                ),
            ),
            (
                "hypothesis_holds".into(),
                JsonValue::Bool(report.hypothesis_holds),
            ),
            ("conclusion".into(), JsonValue::Str(conclusion.into())),
        ]))),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "irrep {irrep}: {} common quasi-eigenvectors, conclusion {conclusion}",
                report.witnesses.len()
            );
            for v in &report.witnesses {
                let values: Vec<String> = v.iter().map(|&z| fmt_complex(z)).collect();
                let _ = writeln!(out, "  witness: {}", values.join(" "));
            }
            Ok(out)
        }
    }
}

fn render_json(value: &JsonValue) -> String {
    let mut text = value.render();
    text.push('\n');
    text
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}
