//! Inner products, expansion in the orthonormal family, matrix elements of
//! `x^k` and their band structure.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::families::{gamma, FamilyContext, FamilySpec, Kind};
use crate::hermite;
use crate::matpoly::{max_abs, MatPoly, MatrixGaussian};
use crate::CMat;

/// Relative size above which a coefficient of `F·T^{-1}` counts as present.
pub const SPAN_TOL: f64 = 1e-10;

/// Mask threshold for "zero" entries of a band matrix.
pub const BAND_THRESHOLD: f64 = 1e-10;

fn check_sizes(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Parameter(format!("size mismatch: {a} against {b}")));
    }
    Ok(())
}

/// `Σ_i w_i P(x_i) Q(x_i)*` with a rule exact for the product degree.
fn quad_pair(p: &MatPoly, q: &MatPoly, extra_degree: usize, weight: impl Fn(f64) -> Complex64) -> Result<CMat> {
    check_sizes(p.size(), q.size())?;
    let m = (p.degree() + q.degree() + extra_degree) / 2 + 2;
    let rule = hermite::rule(m)?;
    let mut acc = CMat::zeros(p.size(), p.size());
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc += p.eval(x) * q.eval(x).adjoint() * (weight(x) * w);
    }
    Ok(acc)
}

/// `⟨F, G⟩ = ∫ F(x) G(x)* dx`, exact.
pub fn inner_product(f: &MatrixGaussian, g: &MatrixGaussian) -> Result<CMat> {
    quad_pair(f.poly(), g.poly(), 0, |_| Complex64::new(1.0, 0.0))
}

/// `⟨P, Q⟩_W = ∫ P(x) W(x) Q(x)* dx` for matrix polynomials, exact.
pub fn inner_product_weighted(p: &MatPoly, q: &MatPoly, spec: &FamilySpec) -> Result<CMat> {
    let t = spec.right_factor();
    quad_pair(&p.mul(&t)?, &q.mul(&t)?, 0, |_| Complex64::new(1.0, 0.0))
}

/// `(F, G) = Tr⟨F, G⟩`.
pub fn scalar_product(f: &MatrixGaussian, g: &MatrixGaussian) -> Result<Complex64> {
    Ok(inner_product(f, g)?.trace())
}

/// `F = Σ_n C_n Φ̃_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientExpansion {
    spec: FamilySpec,
    coeffs: Vec<CMat>,
}

impl CoefficientExpansion {
    pub fn new(spec: FamilySpec, coeffs: Vec<CMat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter("empty expansion".into()));
        }
        for c in &coeffs {
            if c.nrows() != spec.size() || c.ncols() != spec.size() {
                return Err(Error::Parameter("coefficient size does not match the family".into()));
            }
        }
        Ok(CoefficientExpansion { spec, coeffs })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Max-norm distance between coefficient lists, padding with zeros.
    pub fn distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let size = self.spec.size();
        let zero = CMat::zeros(size, size);
        (0..len)
            .map(|n| {
                let a = self.coeffs.get(n).unwrap_or(&zero);
                let b = other.coeffs.get(n).unwrap_or(&zero);
                max_abs(&(a - b))
            })
            .fold(0.0, f64::max)
    }
}

/// Degree of `F·T^{-1}`, the polynomial part of `F` in the family's span,
/// ignoring coefficients below `SPAN_TOL` relative.
pub fn span_degree(f: &MatrixGaussian, spec: &FamilySpec) -> Result<usize> {
    check_sizes(f.size(), spec.size())?;
    let q = f.poly().mul(&spec.right_factor_inverse())?;
    let scale = q.max_norm();
    if scale == 0.0 {
        return Ok(0);
    }
    Ok(q.coeffs()
        .iter()
        .rposition(|c| max_abs(c) > SPAN_TOL * scale)
        .unwrap_or(0))
}

fn project(f: &MatrixGaussian, ctx: &FamilyContext) -> Result<CoefficientExpansion> {
    let coeffs = ctx
        .phi_tilde_all()
        .iter()
        .map(|p| inner_product(f, p))
        .collect::<Result<Vec<_>>>()?;
    CoefficientExpansion::new(ctx.spec().clone(), coeffs)
}

/// `C_n = ⟨F, Φ̃_n⟩`; refuses inputs outside `span{Φ̃_0..Φ̃_{n_max}}`.
pub fn expand(f: &MatrixGaussian, ctx: &FamilyContext) -> Result<CoefficientExpansion> {
    let d = span_degree(f, ctx.spec())?;
    if d > ctx.n_max() {
        return Err(Error::Range(format!(
            "input reaches degree {d} in the family span, beyond n_max = {}",
            ctx.n_max()
        )));
    }
    project(f, ctx)
}

/// Truncated projection onto the first `n_max + 1` functions, no span check.
pub fn expand_projected(f: &MatrixGaussian, ctx: &FamilyContext) -> Result<CoefficientExpansion> {
    check_sizes(f.size(), ctx.size())?;
    project(f, ctx)
}

/// `Σ_n C_n Φ̃_n`.
pub fn reconstruct(exp: &CoefficientExpansion, ctx: &FamilyContext) -> Result<MatrixGaussian> {
    if exp.spec() != ctx.spec() {
        return Err(Error::Parameter(
            "expansion and context describe different families".into(),
        ));
    }
    let mut acc = MatrixGaussian::zero(ctx.size());
    for (n, c) in exp.coeffs().iter().enumerate() {
        acc = acc.add(&ctx.phi_tilde(n)?.left_mul(c)?)?;
    }
    Ok(acc)
}

/// Seeded element of `span{Φ̃_0..Φ̃_top}` with entries uniform in the unit
/// square, returned with its exact coefficients.
pub fn random_span_element<R: Rng>(
    ctx: &FamilyContext,
    top: usize,
    rng: &mut R,
) -> Result<(CoefficientExpansion, MatrixGaussian)> {
    let size = ctx.size();
    let coeffs: Vec<CMat> = (0..=top)
        .map(|_| {
            CMat::from_fn(size, size, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        })
        .collect();
    let exp = CoefficientExpansion::new(ctx.spec().clone(), coeffs)?;
    let f = reconstruct(&exp, ctx)?;
    Ok((exp, f))
}

/// `(x^k I)_{nm} = ∫ x^k Φ̃_n Φ̃_m* dx`.
pub fn matrix_element(ctx: &FamilyContext, k: u32, n: usize, m: usize) -> Result<CMat> {
    if !(1..=2).contains(&k) {
        return Err(Error::Parameter(format!("k must be 1 or 2, got {k}")));
    }
    let a = ctx.phi_tilde(n)?;
    let b = ctx.phi_tilde(m)?;
    quad_pair(a.poly(), b.poly(), k as usize, |x| {
        Complex64::new(x.powi(k as i32), 0.0)
    })
}

fn diag2(a: f64, b: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[a.into(), 0.0.into(), 0.0.into(), b.into()])
}

fn full2(a: f64, b: f64, c: f64, d: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[a.into(), b.into(), c.into(), d.into()])
}

/// The `N = 2` closed forms of `(x^k I)_{nm}`, both kinds.
pub fn closed_matrix_element_n2(spec: &FamilySpec, k: u32, n: usize, m: usize) -> Result<CMat> {
    if spec.size() != 2 {
        return Err(Error::Parameter("closed forms need N = 2".into()));
    }
    let nu = spec.nu()[0];
    let kind = spec.kind();
    let g = |i: usize| gamma(kind, nu, i);
    let nf = n as f64;
    let mut out = CMat::zeros(2, 2);
    let d = m as i64 - n as i64;
    match (kind, k, d) {
        (Kind::One, 1, -1) => {
            out += diag2(
                (nf * g(n + 1) / (2.0 * g(n))).sqrt(),
                (nf * g(n - 1) / (2.0 * g(n))).sqrt(),
            )
        }
        (Kind::One, 1, 0) => {
            let c = nu / (2.0 * (g(n) * g(n + 1)).sqrt());
            out += full2(0.0, c, c, 0.0);
        }
        (Kind::One, 1, 1) => {
            out += diag2(
                ((nf + 1.0) * g(n + 2) / (2.0 * g(n + 1))).sqrt(),
                ((nf + 1.0) * g(n) / (2.0 * g(n + 1))).sqrt(),
            )
        }
        (Kind::One, 2, -2) => {
            out += diag2(
                0.5 * (nf * (nf - 1.0) * g(n + 1) / g(n - 1)).sqrt(),
                0.5 * (nf * (nf - 1.0) * g(n - 2) / g(n)).sqrt(),
            )
        }
        (Kind::One, 2, -1) => {
            out += full2(
                0.0,
                nu * (nf / (2.0 * g(n - 1) * g(n + 1))).sqrt(),
                nu / g(n) * (nf / 2.0).sqrt(),
                0.0,
            )
        }
        (Kind::One, 2, 0) => out += diag2(nf + 1.5 - 1.0 / g(n + 1), nf - 0.5 + 1.0 / g(n)),
        (Kind::One, 2, 1) => {
            out += full2(
                0.0,
                nu / g(n + 1) * ((nf + 1.0) / 2.0).sqrt(),
                nu * ((nf + 1.0) / (2.0 * g(n) * g(n + 2))).sqrt(),
                0.0,
            )
        }
        (Kind::One, 2, 2) => {
            out += diag2(
                0.5 * ((nf + 1.0) * (nf + 2.0) * g(n + 3) / g(n + 1)).sqrt(),
                0.5 * ((nf + 1.0) * (nf + 2.0) * g(n) / g(n + 2)).sqrt(),
            )
        }
        (Kind::Two, 1, -1) => {
            out += full2(
                (nf * g(n + 2) / (2.0 * g(n + 1))).sqrt(),
                0.0,
                nu * (nf / (2.0 * g(n) * g(n + 1))).sqrt(),
                (nf * g(n - 1) / (2.0 * g(n))).sqrt(),
            )
        }
        (Kind::Two, 1, 1) => {
            out += full2(
                ((nf + 1.0) * g(n + 3) / (2.0 * g(n + 2))).sqrt(),
                nu * ((nf + 1.0) / (2.0 * g(n + 1) * g(n + 2))).sqrt(),
                0.0,
                ((nf + 1.0) * g(n) / (2.0 * g(n + 1))).sqrt(),
            )
        }
        (Kind::Two, 2, -2) => {
            out += full2(
                0.5 * (nf * (nf - 1.0) * g(n + 2) / g(n)).sqrt(),
                0.0,
                nu * (nf * (nf - 1.0)).sqrt() / g(n),
                0.5 * (nf * (nf - 1.0) * g(n - 2) / g(n)).sqrt(),
            )
        }
        (Kind::Two, 2, 0) => {
            let c = nu * (2.0 * nf + 1.0) / (2.0 * (g(n) * g(n + 2)).sqrt());
            out += full2(nf + 2.5 - 2.0 / g(n + 2), c, c, nf - 1.5 + 2.0 / g(n));
        }
        (Kind::Two, 2, 2) => {
            out += full2(
                0.5 * ((nf + 1.0) * (nf + 2.0) * g(n + 4) / g(n + 2)).sqrt(),
                nu * ((nf + 1.0) * (nf + 2.0)).sqrt() / g(n + 2),
                0.0,
                0.5 * ((nf + 1.0) * (nf + 2.0) * g(n) / g(n + 2)).sqrt(),
            )
        }
        (_, 1 | 2, _) => {}
        _ => return Err(Error::Parameter(format!("k must be 1 or 2, got {k}"))),
    }
    Ok(out)
}

/// Blocks `(x^k I)_{nm}` for `n, m ≤ n_max`, flattened at index `n·N + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    size: usize,
    k: u32,
    blocks: Vec<Vec<CMat>>,
}

impl BandMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n: usize, m: usize) -> &CMat {
        &self.blocks[n][m]
    }

    pub fn dim(&self) -> usize {
        self.blocks.len() * self.size
    }

    /// Scalar entry at flattened position `(a, b)`.
    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        let s = self.size;
        self.blocks[a / s][b / s][(a % s, b % s)]
    }

    pub fn flattened(&self) -> CMat {
        CMat::from_fn(self.dim(), self.dim(), |a, b| self.entry(a, b))
    }

    pub fn mask(&self, threshold: f64) -> Vec<Vec<bool>> {
        (0..self.dim())
            .map(|a| (0..self.dim()).map(|b| self.entry(a, b).norm() > threshold).collect())
            .collect()
    }

    /// Largest `|n - m|` with a block above `threshold`.
    pub fn block_bandwidth(&self, threshold: f64) -> usize {
        let mut w = 0;
        for (n, row) in self.blocks.iter().enumerate() {
            for (m, b) in row.iter().enumerate() {
                if max_abs(b) > threshold {
                    w = w.max(n.abs_diff(m));
                }
            }
        }
        w
    }

    /// Dense CSV: `row` then `c{b}_re,c{b}_im` for each flattened column.
    pub fn to_csv(&self) -> String {
        let dim = self.dim();
        let mut out = String::from("row");
        for b in 0..dim {
            out.push_str(&format!(",c{b}_re,c{b}_im"));
        }
        out.push('\n');
        for a in 0..dim {
            out.push_str(&a.to_string());
            for b in 0..dim {
                let z = self.entry(a, b);
                out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

pub fn band_matrix(ctx: &FamilyContext, k: u32, n_max: usize) -> Result<BandMatrix> {
    let blocks = (0..=n_max)
        .map(|n| {
            (0..=n_max)
                .map(|m| matrix_element(ctx, k, n, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandMatrix {
        size: ctx.size(),
        k,
        blocks,
    })
}

/// The matrix of `F ↦ x^k F` and its nonzero mask.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPattern {
    pub matrix: BandMatrix,
    pub threshold: f64,
    pub mask: Vec<Vec<bool>>,
}

impl BandPattern {
    /// Mask rows as `*` (nonzero) and `0`.
    pub fn render(&self) -> String {
        self.mask
            .iter()
            .map(|row| row.iter().map(|&b| if b { '*' } else { '0' }).collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn band_pattern(ctx: &FamilyContext, k: u32, n_max: usize, threshold: f64) -> Result<BandPattern> {
    if threshold <= 0.0 {
        return Err(Error::Parameter("threshold must be positive".into()));
    }
    let matrix = band_matrix(ctx, k, n_max)?;
    let mask = matrix.mask(threshold);
    Ok(BandPattern {
        matrix,
        threshold,
        mask,
    })
}

/// Mask of `(xI)` for `N = 2`, `ν ≠ 0`, read off the closed-form blocks.
pub fn star_pattern_n2(kind: Kind, dim: usize) -> Vec<Vec<bool>> {
    (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let (n, i) = (a / 2, a % 2);
                    let (m, j) = (b / 2, b % 2);
                    match kind {
                        // diagonal neighbour blocks plus the off-diagonal of block (n, n)
                        Kind::One => (n.abs_diff(m) == 1 && i == j) || (n == m && i != j),
                        // neighbour blocks: upper-triangular forward, lower-triangular backward
                        Kind::Two => (m == n + 1 && i <= j) || (m + 1 == n && i >= j),
                    }
                })
                .collect()
        })
        .collect()
}

/// `(Φ̃_n Φ̃_n*)_{ij}(x)`, real part.
pub fn density(ctx: &FamilyContext, n: usize, i: usize, j: usize, x: f64) -> Result<f64> {
    if i >= ctx.size() || j >= ctx.size() {
        return Err(Error::Range(format!(
            "entry ({i}, {j}) outside a {0}x{0} matrix",
            ctx.size()
        )));
    }
    let v = ctx.phi_tilde(n)?.eval(x);
    Ok((&v * v.adjoint())[(i, j)].re)
}
