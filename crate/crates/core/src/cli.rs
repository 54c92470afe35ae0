//! The `paving` command line: `build`, `verify`, `search`, `witness`, `table`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O or parse
//! error, 4 enumeration budget exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counterexample::{
    block_scaling, build_block, build_stack, delta_exact, to_f64, CounterexampleFrame,
    FrameParams, Rational,
};
use crate::io::{
    detect_format, parse_partition, CertificateFile, Construction, Encoding, MatrixFile,
    CERTIFICATE_FORMAT, MATRIX_FORMAT,
};
use crate::linalg::ComplexMatrix;
use crate::partition::{
    exhaustive_search_with, local_search, pigeonhole_block, random_search, Partition,
    SearchOptions, SearchResult, DEFAULT_BUDGET, RNG_ALGORITHM,
};
use crate::witness::{find_witness, verify_witness};
use crate::{Error, BOUND_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const ROW_TOL: f64 = 1e-9;
pub const COLUMN_TOL: f64 = 1e-9;
pub const ORTHO_TOL: f64 = 1e-9;
pub const IDEMPOTENT_TOL: f64 = 1e-8;
pub const DIAGONAL_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-6;
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "paving", version, about = "Non-pavable projections from stacked, column-scaled DFT matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Stack,
    Projection,
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exhaustive,
    Random,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    JsonLines,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build B, the projection G = BB*/r, or a single block B_k.
    Build {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "stack")]
        what: What,
        /// Block index for `--what block`.
        #[arg(long)]
        k: Option<usize>,
        /// Output file; the matrix goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write floats as hex for bit-exact files.
        #[arg(long)]
        exact: bool,
    },
    /// Check the construction identities of a matrix file, a certificate
    /// file, or a freshly built (r, n) frame.
    Verify {
        path: Option<PathBuf>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Search for the partition with the largest uniform Riesz bound.
    Search {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 1_000)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Enumerate one labeling per relabeling class.
        #[arg(long)]
        canonical: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write the machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce a certificate that some block meets D_k in a badly conditioned set.
    Witness {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Seed for a uniformly random partition.
        #[arg(long, conflicts_with = "partition")]
        seed: Option<u64>,
        /// Partition file with one label per frame vector.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// Tabulate δ_1 … δ_r for n = 1..=n.
    Table {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse { .. } => EXIT_IO,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::InvalidParam(_) | Error::IndexOutOfRange { .. } => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    match cmd {
        Command::Build {
            r,
            n,
            what,
            k,
            out: path,
            exact,
        } => cmd_build(*r, *n, *what, *k, path.as_deref(), *exact, out, err),
        Command::Verify { path, r, n } => cmd_verify(path.as_deref(), *r, *n, out),
        Command::Search {
            r,
            n,
            method,
            seed,
            samples,
            restarts,
            iters,
            budget,
            canonical,
            format,
            out: path,
        } => {
            let req = SearchRequest {
                r: *r,
                n: *n,
                method: *method,
                seed: *seed,
                samples: *samples,
                restarts: *restarts,
                iters: *iters,
                budget: *budget,
                canonical: *canonical,
            };
            cmd_search(&req, *format, path.as_deref(), out, err)
        }
        Command::Witness {
            r,
            n,
            k,
            seed,
            partition,
            out: path,
            exact,
        } => cmd_witness(*r, *n, *k, *seed, partition.as_deref(), path.as_deref(), *exact, out),
        Command::Table { r, n, format } => cmd_table(*r, *n, *format, out),
    }
}

fn params(r: usize, n: usize) -> crate::Result<FrameParams> {
    FrameParams::new(r, n)
}

fn encoding(exact: bool) -> Encoding {
    if exact {
        Encoding::Hex
    } else {
        Encoding::Decimal
    }
}

fn delta_lines(frame: &CounterexampleFrame) -> String {
    let p = frame.params();
    let mut s = format!("δ table for r={}, n={}\n", p.r(), p.n());
    for (k, d) in frame.deltas_exact().iter().enumerate() {
        let _ = writeln!(s, "δ_{} = {} ({:?})", k + 1, d, to_f64(*d));
    }
    let sum: Rational = frame.deltas_exact().iter().sum();
    let _ = writeln!(s, "Σδ_k = {sum}");
    s
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_build(
    r: usize,
    n: usize,
    what: What,
    k: Option<usize>,
    path: Option<&Path>,
    exact: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> crate::Result<i32> {
    let frame = build_stack(params(r, n)?)?;
    let (construction, matrix) = match what {
        What::Stack => (Construction::Stack, frame.matrix().clone()),
        What::Projection => (Construction::Projection, frame.projection()),
        What::Block => {
            let k = k.ok_or_else(|| Error::InvalidParam("--what block needs --k".into()))?;
            (Construction::Block(k), build_block(frame.params(), k)?)
        }
    };
    let file = MatrixFile::for_frame(&frame, construction, matrix, encoding(exact));
    let table = delta_lines(&frame);
    match path {
        Some(path) => {
            std::fs::write(path, file.to_text())?;
            write!(out, "{table}")?;
            writeln!(
                out,
                "wrote {} {}x{} matrix to {}",
                file.construction.id(),
                file.matrix.rows(),
                file.matrix.cols(),
                path.display()
            )?;
        }
        None => {
            out.write_all(file.to_text().as_bytes())?;
            write!(err, "{table}")?;
        }
    }
    Ok(EXIT_OK)
}

/// One named check with its residual and tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    fn exact(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            residual: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
        }
    }
}

fn row_sq(m: &ComplexMatrix, i: usize) -> f64 {
    m.row(i).iter().map(|z| z.norm_sqr()).sum()
}

fn column_checks(m: &ComplexMatrix, targets: &[f64], label: &str) -> Vec<Check> {
    let cols: Vec<_> = (0..m.cols()).map(|j| m.column(j)).collect();
    let norm_res = cols
        .iter()
        .zip(targets)
        .map(|(c, t)| (c.norm_sqr() - t).abs())
        .fold(0.0, f64::max);
    let mut ortho = 0.0f64;
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            ortho = ortho.max(cols[a].inner(&cols[b]).norm());
        }
    }
    vec![
        Check::within(format!("column square-sums = {label}"), norm_res, COLUMN_TOL),
        Check::within("columns orthogonal", ortho, ORTHO_TOL),
    ]
}

fn projection_checks(g: &ComplexMatrix, p: FrameParams) -> crate::Result<Vec<Check>> {
    let r = p.r() as f64;
    let mut checks = vec![Check::within(
        "projection Hermitian",
        g.hermitian_deviation()?,
        HERMITIAN_TOL,
    )];
    let idem = g.matmul(g)?.sub(g)?.frobenius_norm();
    checks.push(Check::within("‖G² − G‖_F", idem, IDEMPOTENT_TOL));
    let diag = (0..g.rows())
        .map(|i| (g[(i, i)] - num_complex::Complex64::new(1.0 / r, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.push(Check::within("diagonal = 1/r", diag, DIAGONAL_TOL));
    let trace = (g.trace() - num_complex::Complex64::new(p.dim() as f64, 0.0)).norm();
    checks.push(Check::within("trace = rn", trace, TRACE_TOL));
    Ok(checks)
}

fn delta_sum_check(p: FrameParams) -> crate::Result<Check> {
    let sum: Rational = (1..=p.r())
        .map(|k| delta_exact(p.r(), p.n(), k))
        .collect::<crate::Result<Vec<_>>>()?
        .iter()
        .sum();
    Ok(Check::exact(
        format!("Σδ_k = r exactly ({sum})"),
        sum == Rational::from_integer(p.r() as i128),
    ))
}

/// Identity checks for the stacked matrix `B` of parameters `p`.
pub fn stack_checks(b: &ComplexMatrix, p: FrameParams) -> crate::Result<Vec<Check>> {
    if b.shape() != (p.vectors(), p.dim()) {
        return Ok(vec![Check::exact(
            format!("shape {}x{}", p.vectors(), p.dim()),
            false,
        )]);
    }
    let rows = (0..b.rows()).map(|i| (row_sq(b, i) - 1.0).abs()).fold(0.0, f64::max);
    let mut checks = vec![Check::within("row square-sums = 1", rows, ROW_TOL)];
    checks.extend(column_checks(b, &vec![p.r() as f64; p.dim()], "r"));
    let g = b.mul_adjoint_self().scale(1.0 / p.r() as f64);
    checks.extend(projection_checks(&g, p)?);
    checks.push(delta_sum_check(p)?);
    Ok(checks)
}

fn block_checks(b: &ComplexMatrix, p: FrameParams, k: usize) -> crate::Result<Vec<Check>> {
    if b.shape() != (p.dim(), p.dim()) {
        return Ok(vec![Check::exact(format!("shape {0}x{0}", p.dim()), false)]);
    }
    let rows = (0..b.rows()).map(|i| (row_sq(b, i) - 1.0).abs()).fold(0.0, f64::max);
    let mut checks = vec![Check::within("row square-sums = 1", rows, ROW_TOL)];
    let targets: Vec<f64> = block_scaling(p, k)?.factors().iter().map(|f| f * f).collect();
    checks.extend(column_checks(b, &targets, "factor²"));
    Ok(checks)
}

fn matrix_checks(file: &MatrixFile) -> crate::Result<Vec<Check>> {
    let (Some(r), Some(n)) = (file.r, file.n) else {
        return Err(Error::Parse {
            line: 1,
            msg: "matrix file lacks r and n headers".into(),
        });
    };
    let p = params(r, n)?;
    match file.construction {
        Construction::Stack => stack_checks(&file.matrix, p),
        Construction::Projection => {
            if file.matrix.shape() != (p.vectors(), p.vectors()) {
                return Ok(vec![Check::exact(format!("shape {0}x{0}", p.vectors()), false)]);
            }
            let mut checks = projection_checks(&file.matrix, p)?;
            checks.push(delta_sum_check(p)?);
            Ok(checks)
        }
        Construction::Block(k) => block_checks(&file.matrix, p, k),
        Construction::Custom(ref id) => Err(Error::Parse {
            line: 1,
            msg: format!("unknown construction {id:?}"),
        }),
    }
}

fn certificate_checks(cert: &CertificateFile) -> crate::Result<Vec<Check>> {
    let frame = build_stack(params(cert.r, cert.n)?)?;
    let witness = cert.witness()?;
    let verdict = verify_witness(&frame, &witness);
    let mut checks = vec![
        Check::within(
            "coefficients unit norm",
            (verdict.coefficient_norm - 1.0).abs(),
            crate::witness::UNIT_TOL,
        ),
        Check::within(
            "recomputed ‖Σ a_i f_i‖² matches",
            (verdict.recomputed - cert.achieved).abs(),
            crate::witness::RECOMPUTE_TOL,
        ),
        Check::within(
            "‖Σ a_i f_i‖² ≤ δ_k",
            (verdict.recomputed - cert.bound).max(0.0),
            BOUND_TOL,
        ),
        Check::exact("verify_witness", verdict.valid),
    ];
    let exact_ok = cert.k >= 1
        && cert.k <= cert.r
        && delta_exact(cert.r, cert.n, cert.k)? == cert.bound_exact;
    checks.push(Check::exact("bound equals δ_k exactly", exact_ok));
    let p = &cert.partition;
    let fits = p.len() == frame.params().vectors() && cert.k < cert.r;
    let consistent = fits && {
        let j = pigeonhole_block(p, &frame, cert.k);
        let expected: Vec<usize> = frame
            .params()
            .row_block(cert.k)
            .filter(|&i| p.label(i) == j)
            .map(|i| i + 1)
            .collect();
        j == cert.j && expected == cert.support
    };
    checks.push(Check::exact("support = A_j ∩ D_k of the stored partition", consistent));
    Ok(checks)
}

fn print_checks(checks: &[Check], out: &mut dyn Write) -> std::io::Result<bool> {
    for c in checks {
        writeln!(
            out,
            "{} {}  residual {:.3e} (tol {:.0e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        )?;
    }
    let all = checks.iter().all(|c| c.pass);
    writeln!(out, "{}", if all { "all checks passed" } else { "some checks FAILED" })?;
    Ok(all)
}

pub fn cmd_verify(
    path: Option<&Path>,
    r: Option<usize>,
    n: Option<usize>,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let checks = match (path, r, n) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)?;
            match detect_format(&text).as_deref() {
                Some(MATRIX_FORMAT) => {
                    writeln!(out, "verifying matrix file {}", path.display())?;
                    matrix_checks(&MatrixFile::parse(&text)?)?
                }
                Some(CERTIFICATE_FORMAT) => {
                    writeln!(out, "verifying certificate {}", path.display())?;
                    certificate_checks(&CertificateFile::parse(&text)?)?
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unrecognised file format {other:?}"),
                    })
                }
            }
        }
        (None, Some(r), Some(n)) => {
            writeln!(out, "verifying in-memory frame r={r}, n={n}")?;
            let frame = build_stack(params(r, n)?)?;
            stack_checks(frame.matrix(), frame.params())?
        }
        _ => {
            return Err(Error::InvalidParam(
                "verify takes either a file path or both --r and --n".into(),
            ))
        }
    };
    Ok(if print_checks(&checks, out)? {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Clone, Debug)]
pub struct SearchRequest {
    pub r: usize,
    pub n: usize,
    pub method: Method,
    pub seed: u64,
    pub samples: usize,
    pub restarts: usize,
    pub iters: usize,
    pub budget: u128,
    pub canonical: bool,
}

#[derive(Debug, Serialize)]
struct SearchReport<'a> {
    tool: String,
    rng: &'static str,
    r: usize,
    n: usize,
    method: &'static str,
    seed: u64,
    samples: usize,
    restarts: usize,
    iters: usize,
    budget: String,
    canonical: bool,
    reduction_factor: f64,
    partitions_evaluated: String,
    best_value: f64,
    best_partition: &'a [usize],
    deltas: Vec<String>,
    per_k_violations: &'a [f64],
    dominance_failures: String,
    delta_1: String,
    pass: bool,
}

fn search_result(req: &SearchRequest, frame: &CounterexampleFrame) -> crate::Result<SearchResult> {
    match req.method {
        Method::Exhaustive => exhaustive_search_with(
            frame,
            &SearchOptions {
                budget: req.budget,
                canonical: req.canonical,
            },
        ),
        Method::Random => random_search(frame, req.samples, req.seed),
        Method::Local => local_search(frame, req.restarts, req.iters, req.seed),
    }
}

pub fn cmd_search(
    req: &SearchRequest,
    format: Format,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> crate::Result<i32> {
    let frame = build_stack(params(req.r, req.n)?)?;
    let result = match search_result(req, &frame) {
        Ok(res) => res,
        Err(e @ Error::BudgetExceeded { .. }) => {
            writeln!(err, "{e}")?;
            writeln!(
                err,
                "try --method random --samples N or --method local, or raise --budget"
            )?;
            return Ok(EXIT_BUDGET);
        }
        Err(e) => return Err(e),
    };
    let delta_1 = frame.deltas_exact()[0];
    let below = result.best_value <= frame.delta(1) + BOUND_TOL;
    let pass = below && result.respects_bounds(&frame);
    let report = SearchReport {
        tool: crate::io::generator(),
        rng: RNG_ALGORITHM,
        r: req.r,
        n: req.n,
        method: result.method.name(),
        seed: req.seed,
        samples: req.samples,
        restarts: req.restarts,
        iters: req.iters,
        budget: req.budget.to_string(),
        canonical: result.canonical,
        reduction_factor: result.reduction_factor,
        partitions_evaluated: result.partitions_evaluated.to_string(),
        best_value: result.best_value,
        best_partition: result.best_partition.assignment(),
        deltas: frame.deltas_exact().iter().map(|d| d.to_string()).collect(),
        per_k_violations: &result.per_k_violations,
        dominance_failures: result.dominance_failures.to_string(),
        delta_1: delta_1.to_string(),
        pass,
    };
    let machine = serde_json::to_string(&report).expect("report serialises") + "\n";
    let body = match format {
        Format::JsonLines => machine.clone(),
        Format::Csv => search_csv(&report),
        Format::Text => search_text(&report, &result),
    };
    out.write_all(body.as_bytes())?;
    if let Some(path) = path {
        std::fs::write(path, &machine)?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn search_csv(rep: &SearchReport<'_>) -> String {
    let per_k: Vec<String> = rep.per_k_violations.iter().map(|v| format!("{v:?}")).collect();
    let partition: Vec<String> = rep.best_partition.iter().map(usize::to_string).collect();
    format!(
        "tool,rng,r,n,method,seed,samples,restarts,iters,budget,canonical,partitions_evaluated,best_value,delta_1,per_k_violations,dominance_failures,best_partition,pass\n\
         {},{},{},{},{},{},{},{},{},{},{},{},{:?},{},{},{},{},{}\n",
        rep.tool,
        rep.rng.replace(',', ";"),
        rep.r,
        rep.n,
        rep.method,
        rep.seed,
        rep.samples,
        rep.restarts,
        rep.iters,
        rep.budget,
        rep.canonical,
        rep.partitions_evaluated,
        rep.best_value,
        rep.delta_1,
        per_k.join(" "),
        rep.dominance_failures,
        partition.join(" "),
        if rep.pass { "PASS" } else { "FAIL" }
    )
}

fn search_text(rep: &SearchReport<'_>, result: &SearchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} search", rep.tool);
    let _ = writeln!(s, "# rng: {}", rep.rng);
    let _ = writeln!(
        s,
        "r={} n={} method={} seed={} samples={} restarts={} iters={} budget={} canonical={}",
        rep.r, rep.n, rep.method, rep.seed, rep.samples, rep.restarts, rep.iters, rep.budget, rep.canonical
    );
    let _ = writeln!(s, "partitions_evaluated = {}", rep.partitions_evaluated);
    if result.canonical {
        let _ = writeln!(s, "canonical reduction factor = {}", rep.reduction_factor);
    }
    let _ = writeln!(s, "best_value = {:?}", rep.best_value);
    let _ = writeln!(s, "best_partition = {}", result.best_partition);
    for (k, v) in rep.per_k_violations.iter().enumerate() {
        let _ = writeln!(
            s,
            "per_k_violations[k={}] = {:?} (δ_{} = {})",
            k + 1,
            v,
            k + 1,
            rep.deltas[k]
        );
    }
    let _ = writeln!(s, "dominance_failures = {}", rep.dominance_failures);
    let _ = writeln!(
        s,
        "best_value ≤ δ₁? {} ({:?} vs {})",
        if rep.pass { "PASS" } else { "FAIL" },
        rep.best_value,
        rep.delta_1
    );
    s
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_witness(
    r: usize,
    n: usize,
    k: usize,
    seed: Option<u64>,
    partition: Option<&Path>,
    path: Option<&Path>,
    exact: bool,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let p = params(r, n)?;
    if k == 0 || k >= r {
        return Err(Error::InvalidParam(format!(
            "--k must lie in 1..={}; witnesses do not exist for k = r",
            r - 1
        )));
    }
    let frame = build_stack(p)?;
    let (partition, source) = match (partition, seed) {
        (Some(file), _) => (
            parse_partition(&std::fs::read_to_string(file)?, r)?,
            format!("file:{}", file.display()),
        ),
        (None, seed) => {
            let seed = seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (
                Partition::random(&mut rng, p.vectors(), r),
                format!("seed:{seed}"),
            )
        }
    };
    let witness = find_witness(&frame, &partition, k)?;
    let check = verify_witness(&frame, &witness);
    let cert = CertificateFile::new(&witness, &partition, source, check.valid, encoding(exact));
    match path {
        Some(path) => std::fs::write(path, cert.to_text())?,
        None => out.write_all(cert.to_text().as_bytes())?,
    }
    let report = format!(
        "k={} j={} |support|={} achieved={:?} bound={} ({:?}) verdict={}\n",
        witness.k,
        witness.j,
        witness.support.len(),
        witness.achieved,
        witness.bound_exact,
        witness.bound,
        check.valid
    );
    if path.is_some() {
        out.write_all(report.as_bytes())?;
    } else {
        out.write_all(format!("# {report}").as_bytes())?;
    }
    for f in &check.failures {
        writeln!(out, "# failure: {f}")?;
    }
    Ok(if check.valid { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// First `n` at which column `k` of the table stops rising, and every rise.
fn rises(column: &[Rational]) -> Vec<usize> {
    column
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] >= w[0])
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn cmd_table(r: usize, n_max: usize, format: Format, out: &mut dyn Write) -> crate::Result<i32> {
    params(r, 1)?;
    if n_max == 0 {
        return Err(Error::InvalidParam("--n must be at least 1".into()));
    }
    let rows: Vec<Vec<Rational>> = (1..=n_max)
        .map(|n| (1..=r).map(|k| delta_exact(r, n, k)).collect())
        .collect::<crate::Result<_>>()?;
    let target = Rational::from_integer(r as i128);
    let mut all_sum = true;
    match format {
        Format::Text => {
            let mut head = String::from("n");
            for k in 1..=r {
                let _ = write!(head, "\tδ_{k}\tδ_{k} (float)");
            }
            writeln!(out, "# δ_k table, r={r}, n=1..{n_max}")?;
            writeln!(out, "{head}\tΣδ_k")?;
        }
        Format::Csv => {
            let mut head = String::from("n");
            for k in 1..=r {
                let _ = write!(head, ",delta_{k},delta_{k}_float");
            }
            writeln!(out, "{head},sum")?;
        }
        Format::JsonLines => {}
    }
    for (i, row) in rows.iter().enumerate() {
        let n = i + 1;
        let sum: Rational = row.iter().sum();
        all_sum &= sum == target;
        match format {
            Format::Text | Format::Csv => {
                let sep = if format == Format::Csv { "," } else { "\t" };
                let mut line = n.to_string();
                for d in row {
                    let _ = write!(line, "{sep}{d}{sep}{:?}", to_f64(*d));
                }
                writeln!(out, "{line}{sep}{sum}")?;
            }
            Format::JsonLines => {
                let value = serde_json::json!({
                    "r": r,
                    "n": n,
                    "deltas": row.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "deltas_float": row.iter().map(|d| to_f64(*d)).collect::<Vec<_>>(),
                    "sum": sum.to_string(),
                });
                writeln!(out, "{value}")?;
            }
        }
    }
    if format == Format::Text {
        for k in 1..r {
            let column: Vec<Rational> = rows.iter().map(|row| row[k - 1]).collect();
            let up = rises(&column);
            match up.last() {
                None => writeln!(out, "# δ_{k}: strictly decreasing over n = 1..{n_max}")?,
                Some(&last) => writeln!(
                    out,
                    "# δ_{k}: does not decrease at n = {}; strictly decreasing from n = {}",
                    up.iter().map(|n| format!("{n}→{}", n + 1)).collect::<Vec<_>>().join(", "),
                    last + 1
                )?,
            }
        }
        writeln!(
            out,
            "# Σδ_k = {r} on every row: {}",
            if all_sum { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(if all_sum { EXIT_OK } else { EXIT_CHECK_FAILED })
}
