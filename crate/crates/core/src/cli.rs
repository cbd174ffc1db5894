//! Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage or
//! configuration error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    band_matrix, closed_matrix_element_n2, density, expand, expand_projected, inner_product, random_span_element,
    reconstruct, star_pattern_n2, BAND_THRESHOLD,
};
use crate::families::{build_family, closed_form_norm_n2, FamilyContext, FamilySpec, Kind, QuadOrder};
use crate::io::{gaussian_from_json, gaussian_to_json, Table};
use crate::matpoly::{max_abs, MatrixGaussian};
use crate::operators::{
    commutation_residual, fourier_eigen_residual, quadrature_fourier, real_integral_residual, row_coverage,
    schrodinger_residual, symmetry_residual, RealVariant, SymmetryTarget, GRID,
};
use crate::structmat::phase_diag;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable seeding the random draws of the check suite.
pub const SEED_VAR: &str = "MATSCHROED_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "matschroed",
    version,
    about = "Matrix-valued Hermite-type functions: identity checks, densities, transforms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every identity suite for one family.
    Check(CheckArgs),
    /// Tabulate an entry of the densities Φ̃_n Φ̃_n* on a grid.
    Density(DensityArgs),
    /// Apply the matrix Fourier-type transform to a function file.
    Transform(TransformArgs),
    /// Expand a function file in the orthonormal family.
    Expand(ExpandArgs),
    /// Matrix of multiplication by x or x² in the orthonormal family.
    MatrixElements(MatrixArgs),
    /// Write Φ_n or Φ̃_n of a family as a function file.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Family kind, 1 or 2.
    #[arg(long)]
    pub kind: Option<u8>,
    /// Matrix size; defaults to one more than the number of ν values.
    #[arg(long = "N")]
    pub size: Option<usize>,
    /// Superdiagonal parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<f64>,
    /// Family as JSON, inline or a file path; overrides --kind/--N/--nu.
    #[arg(long)]
    pub family: Option<String>,
    /// Largest index n.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Gauss–Hermite order for the Gram–Schmidt stage; automatic if absent.
    #[arg(long)]
    pub quad_order: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Single tolerance replacing every suite default.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Grid as lo:hi:step.
    #[arg(long, default_value = "-4:4:0.05", allow_hyphen_values = true)]
    pub grid: String,
    /// Entry of Φ̃_n Φ̃_n*, 1-based, as i,j.
    #[arg(long, default_value = "1,1")]
    pub entry: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Function file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Phase index k of e^{iπkJ/2}.
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    /// +1 for the transform, -1 for its inverse.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub direction: i8,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against the quadrature oracle at five points.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub input: PathBuf,
    /// Truncate to the first nmax+1 terms instead of refusing out-of-span input.
    #[arg(long)]
    pub project: bool,
    /// Reconstruct and report the distance to the input.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Power of x, 1 or 2.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = BAND_THRESHOLD)]
    pub threshold: f64,
    /// Compare with the closed forms (N = 2 only).
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// CSV of the flattened matrix.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Index n.
    #[arg(long)]
    pub n: usize,
    /// Export the normalized Φ̃_n instead of Φ_n.
    #[arg(long)]
    pub tilde: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<FamilySpec> {
        if let Some(f) = &self.family {
            let text = if f.trim_start().starts_with('{') {
                f.clone()
            } else {
                fs::read_to_string(f)?
            };
            return FamilySpec::from_json(&text);
        }
        let kind = Kind::from_number(
            self.kind
                .ok_or_else(|| Error::Parameter("--kind or --family is required".into()))?,
        )?;
        let size = self.size.unwrap_or(self.nu.len() + 1);
        FamilySpec::new(kind, size, self.nu.clone())
    }

    pub fn context(&self) -> Result<FamilyContext> {
        let order = match self.quad_order {
            Some(m) => QuadOrder::Fixed(m),
            None => QuadOrder::Auto,
        };
        build_family(&self.spec()?, self.nmax, order)
    }
}

/// Evenly spaced grid `lo, lo + step, …` up to `hi` inclusive.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Parameter(format!("grid must be lo:hi:step, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (lo, hi, step) = (v[0], v[1], v[2]);
    if step.is_nan() || step <= 0.0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::Parameter(format!(
            "grid needs finite lo <= hi and step > 0, got {text:?}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

/// `i,j`, 1-based, into a 0-based pair checked against `size`.
pub fn parse_entry(text: &str, size: usize) -> Result<(usize, usize)> {
    let bad = || Error::Range(format!("entry must be i,j with 1 <= i,j <= {size}, got {text:?}"));
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [i, j] if (1..=size).contains(&i) && (1..=size).contains(&j) => Ok((i - 1, j - 1)),
        _ => Err(bad()),
    }
}

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Outcome of one suite of the check command.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub worst: f64,
    pub tol: f64,
    pub passed: bool,
    pub detail: String,
}

impl SuiteResult {
    fn measured(name: &str, worst: f64, tol: f64, detail: String) -> Self {
        SuiteResult {
            name: name.into(),
            worst,
            tol,
            passed: worst < tol,
            detail,
        }
    }

    fn flag(name: &str, passed: bool, detail: String) -> Self {
        SuiteResult {
            name: name.into(),
            worst: if passed { 0.0 } else { 1.0 },
            tol: 0.5,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<22} worst={:.3e} tol={:.1e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tol,
            self.detail
        )
    }
}

fn worst_of<T>(items: impl IntoIterator<Item = (f64, T)>) -> (f64, Option<T>) {
    let mut best: (f64, Option<T>) = (0.0, None);
    for (v, t) in items {
        if best.1.is_none() || v > best.0 || v.is_nan() {
            best = (v, Some(t));
        }
    }
    best
}

/// Every identity suite for one family, each against its default tolerance
/// or `tol` when given.
pub fn run_checks(ctx: &FamilyContext, tol: Option<f64>, seed: u64) -> Result<Vec<SuiteResult>> {
    let t = |default: f64| tol.unwrap_or(default);
    let n_max = ctx.n_max();
    let size = ctx.size();
    let mut out = Vec::new();

    let id = crate::CMat::identity(size, size);
    let mut pairs = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n_max {
            let g = inner_product(ctx.phi_tilde(n)?, ctx.phi_tilde(m)?)?;
            let want = if n == m { id.clone() } else { id.scale(0.0) };
            pairs.push((max_abs(&(g - want)), (n, m)));
        }
    }
    let (w, at) = worst_of(pairs);
    out.push(SuiteResult::measured(
        "orthonormality",
        w,
        t(1e-9),
        format!("at {:?}", at.unwrap_or_default()),
    ));

    let rep = (0..=n_max)
        .map(|n| schrodinger_residual(ctx, n))
        .collect::<Result<Vec<_>>>()?;
    let (w, at) = worst_of(rep.iter().map(|r| (r.relative(), r.n)));
    out.push(SuiteResult::measured(
        "schrodinger",
        w,
        t(1e-9),
        format!("n={}", at.unwrap_or(0)),
    ));

    let rep = (0..=n_max)
        .map(|n| fourier_eigen_residual(ctx, n))
        .collect::<Result<Vec<_>>>()?;
    let (w, at) = worst_of(rep.iter().map(|r| (r.relative(), r.n)));
    out.push(SuiteResult::measured(
        "fourier-eigen",
        w,
        t(1e-9),
        format!("n={}", at.unwrap_or(0)),
    ));
    let (w, at) = worst_of(rep.iter().map(|r| (r.max_pointwise, r.n)));
    out.push(SuiteResult::measured(
        "fourier-oracle",
        w,
        t(1e-8),
        format!("n={}", at.unwrap_or(0)),
    ));

    let mut sym = Vec::new();
    for n in 0..=n_max {
        for target in [SymmetryTarget::Phi, SymmetryTarget::Poly] {
            let r = symmetry_residual(ctx, n, target)?;
            sym.push((r.relative(), format!("n={n} {}", r.variant)));
        }
    }
    let (w, at) = worst_of(sym);
    out.push(SuiteResult::measured("symmetry", w, t(1e-12), at.unwrap_or_default()));

    let mut real = Vec::new();
    let mut imag = Vec::new();
    for n in 0..=n_max {
        for v in RealVariant::all(ctx.kind()) {
            let r = real_integral_residual(ctx, n, v)?;
            real.push((r.relative(), format!("n={n} {}", r.variant)));
            imag.push((r.max_imag, format!("n={n} {}", r.variant)));
        }
    }
    let (w, at) = worst_of(real);
    out.push(SuiteResult::measured(
        "real-integral",
        w,
        t(1e-8),
        at.unwrap_or_default(),
    ));
    let (w, at) = worst_of(imag);
    out.push(SuiteResult::measured(
        "real-integral-imag",
        w,
        t(1e-10),
        at.unwrap_or_default(),
    ));
    if ctx.kind() == Kind::One {
        let cover = row_coverage(size);
        out.push(SuiteResult::flag(
            "row-coverage",
            cover.iter().all(|&b| b),
            format!("{}/{} rows", cover.iter().filter(|&&b| b).count(), size),
        ));
    }

    if size == 2 {
        let mut norms = Vec::new();
        for n in 0..=n_max {
            let want = closed_form_norm_n2(ctx.spec(), n)?;
            let got = ctx.norm(n)?;
            let scale = want[0].abs().max(want[1].abs());
            let e = (got[0] - want[0]).abs().max((got[1] - want[1]).abs()) / scale;
            norms.push((e, n));
        }
        let (w, at) = worst_of(norms);
        out.push(SuiteResult::measured(
            "norms-closed-form",
            w,
            t(1e-10),
            format!("n={}", at.unwrap_or(0)),
        ));
    } else {
        let min = (0..=n_max)
            .map(|n| ctx.norm(n).map(|d| d.iter().copied().fold(f64::INFINITY, f64::min)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        out.push(SuiteResult::flag("norms-positive", min > 0.0, format!("min={min:.3e}")));
    }

    let mut herm = Vec::new();
    let mut closed = Vec::new();
    let mut bands = Vec::new();
    for k in 1..=2u32 {
        let b = band_matrix(ctx, k, n_max)?;
        let f = b.flattened();
        herm.push((max_abs(&(&f - f.adjoint())), k));
        bands.push((b.block_bandwidth(BAND_THRESHOLD) <= k as usize, k));
        if size == 2 {
            for n in 0..=n_max {
                for m in 0..=n_max {
                    let cf = closed_matrix_element_n2(ctx.spec(), k, n, m)?;
                    closed.push((max_abs(&(b.block(n, m) - cf)), (k, n, m)));
                }
            }
        }
    }
    let (w, at) = worst_of(herm);
    out.push(SuiteResult::measured(
        "matrix-hermitian",
        w,
        t(1e-10),
        format!("k={}", at.unwrap_or(1)),
    ));
    if size == 2 {
        let (w, at) = worst_of(closed);
        out.push(SuiteResult::measured(
            "matrix-closed-form",
            w,
            t(1e-9),
            format!("(k,n,m)={:?}", at.unwrap_or_default()),
        ));
    }
    out.push(SuiteResult::flag(
        "band-width",
        bands.iter().all(|b| b.0),
        "block band <= k".into(),
    ));
    if size == 2 && ctx.spec().nu()[0] != 0.0 {
        let b = band_matrix(ctx, 1, n_max)?;
        let ok = b.mask(BAND_THRESHOLD) == star_pattern_n2(ctx.kind(), b.dim());
        out.push(SuiteResult::flag(
            "band-star-pattern",
            ok,
            format!("{}x{}", b.dim(), b.dim()),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (coeffs, f) = random_span_element(ctx, n_max, &mut rng)?;
    let e = expand(&f, ctx)?;
    let back = reconstruct(&e, ctx)?;
    let w = e.distance(&coeffs).max(back.distance(&f)?);
    out.push(SuiteResult::measured(
        "expansion-round-trip",
        w,
        t(1e-9),
        format!("seed={seed}"),
    ));
    let k = ctx.kind().phase_index();
    let w = f.transform(k, false)?.transform(k, true)?.distance(&f)?;
    out.push(SuiteResult::measured(
        "transform-round-trip",
        w,
        t(1e-9),
        format!("k={k}"),
    ));
    let w = commutation_residual(ctx, &f)?;
    out.push(SuiteResult::measured("commutation", w, t(1e-9), format!("seed={seed}")));
    Ok(out)
}

/// Columns `x, n0, n1, …` with entry `(i, j)` of `Φ̃_n Φ̃_n*`.
pub fn density_table(ctx: &FamilyContext, entry: (usize, usize), grid: &[f64]) -> Result<Table> {
    let mut header = vec!["x".to_string()];
    header.extend((0..=ctx.n_max()).map(|n| format!("n{n}")));
    let rows = grid
        .iter()
        .map(|&x| {
            let mut row = vec![x];
            for n in 0..=ctx.n_max() {
                row.push(density(ctx, n, entry.0, entry.1, x)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

/// Max deviation of `transformed` from the quadrature oracle applied to `f`
/// on the five standard points.
pub fn transform_oracle_deviation(
    f: &MatrixGaussian,
    transformed: &MatrixGaussian,
    k: i64,
    direction: i8,
) -> Result<f64> {
    let phase = phase_diag(f.size(), if direction > 0 { k } else { -k });
    let mut worst = 0.0f64;
    for &x in &GRID {
        let q = phase.right_apply(&quadrature_fourier(f, direction, x, None)?);
        worst = worst.max(max_abs(&(q - transformed.eval(x))));
    }
    Ok(worst)
}

#[derive(Serialize)]
struct ExpansionFile {
    family: serde_json::Value,
    n_max: usize,
    /// `C_0..C_{n_max}`, row-major, entries `[re, im]`.
    coeffs: Vec<Vec<[f64; 2]>>,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) | Error::Numeric(_) => EXIT_FAIL,
        _ => EXIT_CONFIG,
    }
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<'a, I, T>(args: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Check(a) => {
            if let Some(t) = a.tol {
                if t.is_nan() || t <= 0.0 {
                    return Err(Error::Parameter(format!("tolerance must be positive, got {t}")));
                }
            }
            let ctx = a.family.context()?;
            let seed = seed_from_env();
            writeln!(
                out,
                "family {} n_max={} quad_order={}",
                ctx.spec().to_json(),
                ctx.n_max(),
                ctx.quad_order()
            )?;
            let results = run_checks(&ctx, a.tol, seed)?;
            for r in &results {
                writeln!(out, "{}", r.line())?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            writeln!(out, "{} suites, {} failed", results.len(), failed)?;
            Ok(if failed == 0 { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Density(a) => {
            let grid = parse_grid(&a.grid)?;
            let spec = a.family.spec()?;
            let entry = parse_entry(&a.entry, spec.size())?;
            let ctx = a.family.context()?;
            let table = density_table(&ctx, entry, &grid)?;
            emit(out, a.out.as_deref(), &table.to_csv())?;
            Ok(EXIT_PASS)
        }
        Command::Transform(a) => {
            if a.direction != 1 && a.direction != -1 {
                return Err(Error::Parameter(format!(
                    "direction must be 1 or -1, got {}",
                    a.direction
                )));
            }
            let f = gaussian_from_json(&fs::read_to_string(&a.input)?)?;
            let g = f.transform(a.k, a.direction < 0)?;
            emit(out, a.out.as_deref(), &gaussian_to_json(&g))?;
            if a.verify {
                let dev = transform_oracle_deviation(&f, &g, a.k, a.direction)?;
                let ok = dev < a.tol;
                writeln!(
                    out,
                    "{} oracle deviation={dev:.3e} tol={:.1e}",
                    if ok { "PASS" } else { "FAIL" },
                    a.tol
                )?;
                return Ok(if ok { EXIT_PASS } else { EXIT_FAIL });
            }
            Ok(EXIT_PASS)
        }
        Command::Expand(a) => {
            let ctx = a.family.context()?;
            let f = gaussian_from_json(&fs::read_to_string(&a.input)?)?;
            let e = if a.project {
                expand_projected(&f, &ctx)?
            } else {
                expand(&f, &ctx)?
            };
            let n = ctx.size();
            let file = ExpansionFile {
                family: serde_json::to_value(ctx.spec())?,
                n_max: e.n_max(),
                coeffs: e
                    .coeffs()
                    .iter()
                    .map(|c| (0..n * n).map(|k| c[(k / n, k % n)]).map(|z| [z.re, z.im]).collect())
                    .collect(),
            };
            emit(out, a.out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
            if a.verify {
                let d = reconstruct(&e, &ctx)?.distance(&f)?;
                let ok = d < a.tol;
                writeln!(
                    out,
                    "{} reconstruction distance={d:.3e} tol={:.1e}",
                    if ok { "PASS" } else { "FAIL" },
                    a.tol
                )?;
                return Ok(if ok { EXIT_PASS } else { EXIT_FAIL });
            }
            Ok(EXIT_PASS)
        }
        Command::MatrixElements(a) => {
            if a.threshold.is_nan() || a.threshold <= 0.0 {
                return Err(Error::Parameter("threshold must be positive".into()));
            }
            let ctx = a.family.context()?;
            let b = band_matrix(&ctx, a.k, ctx.n_max())?;
            let mask: Vec<String> = b
                .mask(a.threshold)
                .iter()
                .map(|r| r.iter().map(|&on| if on { '*' } else { '0' }).collect())
                .collect();
            match &a.out {
                Some(p) => {
                    fs::write(p, b.to_csv())?;
                    writeln!(out, "{}", mask.join("\n"))?;
                }
                None => {
                    writeln!(out, "{}", mask.join("\n"))?;
                    out.write_all(b.to_csv().as_bytes())?;
                }
            }
            if a.verify {
                if ctx.size() != 2 {
                    return Err(Error::Parameter("--verify needs N = 2".into()));
                }
                let mut worst = 0.0f64;
                for n in 0..=ctx.n_max() {
                    for m in 0..=ctx.n_max() {
                        let cf = closed_matrix_element_n2(ctx.spec(), a.k, n, m)?;
                        worst = worst.max(max_abs(&(b.block(n, m) - cf)));
                    }
                }
                let ok = worst < a.tol;
                writeln!(
                    out,
                    "{} closed-form deviation={worst:.3e} tol={:.1e}",
                    if ok { "PASS" } else { "FAIL" },
                    a.tol
                )?;
                return Ok(if ok { EXIT_PASS } else { EXIT_FAIL });
            }
            Ok(EXIT_PASS)
        }
        Command::Export(a) => {
            let ctx = a.family.context()?;
            let f = if a.tilde { ctx.phi_tilde(a.n)? } else { ctx.phi(a.n)? };
            emit(out, a.out.as_deref(), &gaussian_to_json(f))?;
            Ok(EXIT_PASS)
        }
    }
}

/// Entry point of the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
