//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use adjfree_core::pde::Coefficients;
use adjfree_core::sketch::diameter_upper_bound;
use adjfree_core::{Error, Seed};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::experiments::{
    greens_kernels, rate_window, run_convergence, run_greens, run_lastar, run_sweep, toeplitz_demo,
    witness_report, ConvergeConfig, SketchConfig,
};
use crate::io::{self, FormatError};
use crate::selfcheck;

#[derive(Debug, Parser)]
#[command(
    name = "adjfree",
    version,
    about = "Adjoint-free operator recovery experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Artifact path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for the column solves.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Columns of the test matrix.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PdeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Advection: one value in 1D, two in 2D.
    #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
    pub c: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Interior points per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of eigenfunction queries N.
    #[arg(long)]
    pub queries: Option<usize>,
    /// Comma-separated ascending n values.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Query the prior's pseudo-inverse instead of the PDE.
    #[arg(long)]
    pub reference: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diameter bounds of the ambiguity set for a generated instance.
    SketchBounds {
        #[command(flatten)]
        sketch: SketchArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Extremal pair from the lower-bound construction.
    SketchWitness {
        #[command(flatten)]
        sketch: SketchArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Recover a random Toeplitz matrix from two matvecs.
    ToeplitzDemo {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Error curve and certificate on [0,1].
    #[command(name = "converge-1d")]
    Converge1d {
        #[command(flatten)]
        pde: PdeArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Error curve and certificate on [0,1]².
    #[command(name = "converge-2d")]
    Converge2d {
        #[command(flatten)]
        pde: PdeArgs,
        #[command(flatten)]
        output: Output,
    },
    /// ‖M_n‖ curve, the estimate of ‖L A*‖.
    Lastar {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=2))]
        dim: u64,
        #[command(flatten)]
        pde: PdeArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Kernel of A P_n against the closed-form Green's function.
    GreensError {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        n_list: Vec<usize>,
        /// Also write `x,y,approx,exact` samples of the largest-n kernel.
        #[arg(long)]
        kernel_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// err(n) and ‖M_N‖ of −u″ + c u′ across c.
    PerturbSweep {
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "0,2,4,6,8,10,12,14,16,18,20"
        )]
        c_values: Vec<f64>,
        /// The fixed n at which the error is recorded.
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 601)]
        queries: usize,
        #[arg(long, default_value_t = 4000)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Brute-force invariant suites.
    Selfcheck {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Format(FormatError),
}

impl Cli {
    /// True when the artifact goes to stdout, so the summary must not.
    pub fn artifact_on_stdout(&self) -> bool {
        let output = match &self.command {
            Command::SketchBounds { output, .. }
            | Command::SketchWitness { output, .. }
            | Command::ToeplitzDemo { output, .. }
            | Command::Converge1d { output, .. }
            | Command::Converge2d { output, .. }
            | Command::Lastar { output, .. }
            | Command::GreensError { output, .. }
            | Command::PerturbSweep { output, .. }
            | Command::Selfcheck { output } => output,
        };
        output.out.is_none()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{}: {e}", module_of(e)),
            CliError::Format(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Format(FormatError::Io(e))
    }
}

impl CliError {
    /// 1 for failed numerical checks, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ConvergenceFailure { .. } | Error::QueryFailed { .. }) => 1,
            _ => 2,
        }
    }
}

/// The module an error originates from.
pub fn module_of(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. }
        | Error::NonFinite { .. }
        | Error::RankDeficient { .. }
        | Error::ConvergenceFailure { .. }
        | Error::ZeroMatrix => "linalg-core",
        Error::InvalidRange { .. } | Error::NoComplement { .. } | Error::InvalidInstance(_) => {
            "sketch-recovery"
        }
        Error::Underresolved { .. }
        | Error::PecletViolation { .. }
        | Error::SingularOperator { .. } => "pde-lab",
        Error::QueryFailed { .. }
        | Error::EmptyTail { .. }
        | Error::InsufficientData { .. }
        | Error::ZeroEigenvalue { .. }
        | Error::InvalidArgument(_) => "adjoint-free",
    }
}

/// What a successful run reports.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: String,
    pub certificate_ok: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.certificate_ok {
            0
        } else {
            1
        }
    }
}

fn emit(
    out: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> Result<(), FormatError>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn ascending(flag: &str, list: &[usize]) -> Result<(), CliError> {
    if list.is_empty() || list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "{flag} must be strictly ascending positive counts"
        )));
    }
    Ok(())
}

fn positive(flag: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        return Err(CliError::Usage(format!("{flag} must be positive")));
    }
    Ok(v)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

struct PdeDefaults {
    nu: f64,
    c: [f64; 2],
    r: f64,
    grid: usize,
    queries: usize,
}

fn converge_config(
    dim: usize,
    pde: &PdeArgs,
    threads: u64,
    d: PdeDefaults,
) -> Result<ConvergeConfig, CliError> {
    let c = match (&pde.c, dim) {
        (None, _) => d.c,
        (Some(v), 1) if v.len() == 1 => [v[0], 0.0],
        (Some(v), 2) if v.len() == 2 => [v[0], v[1]],
        (Some(_), _) => {
            return Err(CliError::Usage(format!(
                "--c takes {dim} value(s) in {dim}D"
            )))
        }
    };
    if let Some(l) = &pde.n_list {
        ascending("--n-list", l)?;
    }
    let coeffs = Coefficients {
        nu: pde.nu.unwrap_or(d.nu),
        c,
        r: pde.r.unwrap_or(d.r),
    };
    Ok(ConvergeConfig {
        dim,
        coeffs: (!pde.reference).then_some(coeffs),
        grid: positive("--grid", pde.grid.unwrap_or(d.grid))?,
        queries: positive("--queries", pde.queries.unwrap_or(d.queries))?,
        n_list: pde.n_list.clone(),
        threads: threads as usize,
    })
}

fn defaults_1d() -> PdeDefaults {
    PdeDefaults {
        nu: 0.25,
        c: [5.0, 0.0],
        r: 1.0,
        grid: 4000,
        queries: 601,
    }
}

fn defaults_2d() -> PdeDefaults {
    PdeDefaults {
        nu: 1.0,
        c: [10.0, 5.0],
        r: 0.0,
        grid: 96,
        queries: 300,
    }
}

fn sketch_config(a: &SketchArgs, seed: u64, d: SketchConfig) -> SketchConfig {
    SketchConfig {
        n: a.n.unwrap_or(d.n),
        k: a.k.unwrap_or(d.k),
        s: a.s.unwrap_or(d.s),
        delta: a.delta.unwrap_or(d.delta),
        epsilon: a.epsilon.unwrap_or(d.epsilon),
        seed: Seed(seed),
    }
}

fn fmt_err(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:e}")
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::SketchBounds { sketch, output } => {
            let cfg = sketch_config(
                &sketch,
                output.seed,
                SketchConfig {
                    n: 8,
                    k: 2,
                    s: 4,
                    delta: 0.0,
                    epsilon: 0.02,
                    seed: Seed(0),
                },
            );
            let report = diameter_upper_bound(&cfg.instance()?)?;
            emit(&output.out, |w| {
                match output.format.unwrap_or(Format::Json) {
                    Format::Json => io::write_json(w, &report),
                    Format::Csv => io::write_bound_csv(w, &report),
                }
            })?;
            let ok = report.upper.is_none_or(|u| u >= report.lower - 1e-9);
            let upper = report
                .upper
                .map_or("absent".to_string(), |u| format!("{u:.6e}"));
            Ok(Outcome {
                summary: format!(
                    "sketch-bounds: lower={:.6e} upper={upper} c={:.4} consistent={}",
                    report.lower,
                    report.c_constant,
                    pass(ok)
                ),
                certificate_ok: ok,
            })
        }
        Command::SketchWitness { sketch, output } => {
            let cfg = sketch_config(
                &sketch,
                output.seed,
                SketchConfig {
                    n: 10,
                    k: 3,
                    s: 5,
                    delta: 0.05,
                    epsilon: 0.2,
                    seed: Seed(0),
                },
            );
            let report = witness_report(&cfg.instance()?)?;
            if output.format == Some(Format::Csv) {
                return Err(CliError::Usage(
                    "--format csv is not available for sketch-witness".into(),
                ));
            }
            emit(&output.out, |w| io::write_json(w, &report))?;
            Ok(Outcome {
                summary: format!(
                    "sketch-witness: separation={:.6e} lower={:.6e} members={} sandwich={}",
                    report.separation,
                    report.lower,
                    report.b_plus.in_set && report.b_minus.in_set,
                    pass(report.passed)
                ),
                certificate_ok: report.passed,
            })
        }
        Command::ToeplitzDemo { n, output } => {
            let demo = toeplitz_demo(positive("--n", n)?, Seed(output.seed))?;
            if output.format == Some(Format::Json) {
                return Err(CliError::Usage(
                    "--format json is not available for toeplitz-demo".into(),
                ));
            }
            emit(&output.out, |w| io::write_matrix_csv(w, &demo.recovered))?;
            Ok(Outcome {
                summary: format!(
                    "queries={} max_abs_err={}",
                    demo.queries,
                    fmt_err(demo.max_abs_err)
                ),
                certificate_ok: demo.queries == 2 && demo.max_abs_err == 0.0,
            })
        }
        Command::Converge1d { pde, output } => converge(1, &pde, &output, defaults_1d()),
        Command::Converge2d { pde, output } => converge(2, &pde, &output, defaults_2d()),
        Command::Lastar { dim, pde, output } => {
            let d = if dim == 1 {
                defaults_1d()
            } else {
                defaults_2d()
            };
            let cfg = converge_config(dim as usize, &pde, output.threads, d)?;
            let (n_list, m) = run_lastar(&cfg)?;
            emit(&output.out, |w| {
                match output.format.unwrap_or(Format::Csv) {
                    Format::Csv => io::write_lastar_csv(w, &n_list, &m),
                    Format::Json => io::write_json(
                        w,
                        &n_list
                            .iter()
                            .zip(&m)
                            .map(|(n, v)| (*n, *v))
                            .collect::<Vec<_>>(),
                    ),
                }
            })?;
            let last = m.last().copied().unwrap_or(0.0);
            let monotone = m.windows(2).all(|p| p[1] >= p[0] - 1e-12 * p[1]);
            Ok(Outcome {
                summary: format!(
                    "lastar: m_norm_final≈{last:.1} ({last:.10e}) monotone={}",
                    pass(monotone)
                ),
                certificate_ok: monotone,
            })
        }
        Command::GreensError {
            c,
            grid,
            n_list,
            kernel_out,
            output,
        } => {
            ascending("--n-list", &n_list)?;
            let grid = positive("--grid", grid)?;
            let threads = output.threads as usize;
            let rows = run_greens(c, grid, &n_list, threads)?;
            emit(&output.out, |w| {
                match output.format.unwrap_or(Format::Csv) {
                    Format::Csv => io::write_greens_error_csv(w, &rows),
                    Format::Json => io::write_json(w, &rows),
                }
            })?;
            if let Some(path) = kernel_out {
                let n = *n_list.last().unwrap_or(&1);
                let (approx, exact) = greens_kernels(c, grid, n, threads)?;
                let coords: Vec<f64> = (0..grid).map(|i| approx.grid.axis_coord(i)).collect();
                let stride = grid.div_ceil(100);
                emit(&Some(path), |w| {
                    io::write_kernel_csv(w, &coords, &approx.values, &exact.values, stride)
                })?;
            }
            let monotone = rows
                .windows(2)
                .all(|p| p[1].rel_l2_error <= p[0].rel_l2_error + 1e-12);
            let last = rows.last().map_or(0.0, |r| r.rel_l2_error);
            Ok(Outcome {
                summary: format!(
                    "greens-error: c={c} n={} rel_l2_error={last:.4e} nonincreasing={}",
                    n_list.last().unwrap_or(&0),
                    monotone
                ),
                certificate_ok: true,
            })
        }
        Command::PerturbSweep {
            c_values,
            n,
            queries,
            grid,
            output,
        } => {
            let out = run_sweep(
                &c_values,
                n,
                positive("--queries", queries)?,
                positive("--grid", grid)?,
                output.threads as usize,
            )?;
            emit(&output.out, |w| {
                match output.format.unwrap_or(Format::Csv) {
                    Format::Csv => io::write_sweep_csv(w, &out.table),
                    Format::Json => io::write_json(w, &out.table),
                }
            })?;
            let fit = out.table.linear_fit();
            Ok(Outcome {
                summary: format!(
                    "perturb-sweep: n={n} spearman={:.4} increasing={} slope={:.4e} r2={:.4} certificate={}",
                    out.table.spearman(),
                    out.table.is_strictly_increasing(),
                    fit.slope,
                    fit.r2,
                    pass(out.certificate_ok)
                ),
                certificate_ok: out.certificate_ok,
            })
        }
        Command::Selfcheck { output } => {
            let suites = selfcheck::run_all(Seed(output.seed))?;
            if output.format == Some(Format::Csv) {
                return Err(CliError::Usage(
                    "--format csv is not available for selfcheck".into(),
                ));
            }
            emit(&output.out, |w| io::write_json(w, &suites))?;
            let ok = suites.iter().all(|s| s.passed);
            let parts: Vec<String> = suites
                .iter()
                .map(|s| {
                    format!(
                        "{}={}({}, worst {:.2e})",
                        s.name,
                        pass(s.passed),
                        s.cases,
                        s.worst
                    )
                })
                .collect();
            Ok(Outcome {
                summary: format!("selfcheck: {}", parts.join(" ")),
                certificate_ok: ok,
            })
        }
    }
}

fn converge(
    dim: usize,
    pde: &PdeArgs,
    output: &Output,
    d: PdeDefaults,
) -> Result<Outcome, CliError> {
    let cfg = converge_config(dim, pde, output.threads, d)?;
    let out = run_convergence(&cfg)?;
    emit(&output.out, |w| {
        match output.format.unwrap_or(Format::Csv) {
            Format::Csv => io::write_convergence_csv(w, &out.table),
            Format::Json => io::write_json(w, &out.table),
        }
    })?;
    let m = out.table.m_norm_final;
    let (lo, hi) = rate_window(dim);
    let rate = match out.rate {
        Some((s, r2)) => format!("slope[{lo},{hi}]={s:.4} r2={r2:.4}"),
        None => format!("slope[{lo},{hi}]=n/a"),
    };
    Ok(Outcome {
        summary: format!(
            "converge-{dim}d: m_norm_final≈{m:.1} ({m:.10e}) {rate} certificate={} worst_ratio={:.4} monotone={}",
            pass(out.certificate.passed),
            out.certificate.worst_ratio,
            out.monotone
        ),
        certificate_ok: out.certificate.passed,
    })
}
