//! The differential and integral operators and every identity check on them.
//!
//! Coefficient-space residuals are exact algebra on [`MatrixGaussian`]s.
//! Pointwise residuals use the Gauss–Hermite transform oracle, which never
//! touches the Hermite-basis rule inside [`MatrixGaussian::fourier`].

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::{FamilyContext, Kind};
use crate::hermite::{self, exact_order, oscillatory_order};
use crate::matpoly::{max_abs, MatrixGaussian};
use crate::structmat::{i_pow, phase_diag, trig_diag, TrigKind};
use crate::CMat;

/// Sample points for pointwise residuals.
pub const GRID: [f64; 5] = [-3.0, -1.5, 0.0, 0.8, 2.2];

/// Default relative coefficient tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub n: usize,
    pub variant: String,
    /// Max-norm of the residual's coefficients; `None` for pointwise-only checks.
    pub max_coeff_norm: Option<f64>,
    /// Max entry of the residual over [`GRID`].
    pub max_pointwise: f64,
    /// Divisor making the residual relative.
    pub scale: f64,
    /// Largest imaginary part seen on either side; zero unless checked.
    pub max_imag: f64,
}

impl ResidualReport {
    /// Relative residual: coefficient-based when available, else pointwise.
    pub fn relative(&self) -> f64 {
        self.max_coeff_norm.unwrap_or(self.max_pointwise) / self.scale
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative() < tol
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={:<3} {:<28} rel={:.3e} pointwise={:.3e}",
            self.n,
            self.variant,
            self.relative(),
            self.max_pointwise
        )?;
        if self.max_imag > 0.0 {
            write!(f, " imag={:.3e}", self.max_imag)?;
        }
        Ok(())
    }
}

fn pointwise_max(f: &MatrixGaussian) -> f64 {
    GRID.iter().map(|&x| max_abs(&f.eval(x))).fold(0.0, f64::max)
}

fn coeff_report(n: usize, variant: String, residual: &MatrixGaussian, scale: f64) -> ResidualReport {
    ResidualReport {
        n,
        variant,
        max_coeff_norm: Some(residual.max_coeff_norm()),
        max_pointwise: pointwise_max(residual),
        scale: if scale > 0.0 { scale } else { 1.0 },
        max_imag: 0.0,
    }
}

/// `F ↦ F'' - F·(x²I + cJ) + cJ·F`; `Φ_n` is an eigenfunction with
/// eigenvalue `-(2n+1)`.
pub fn schrodinger_operator(f: &MatrixGaussian, c: f64, j: &CMat) -> Result<MatrixGaussian> {
    let cj = j * Complex64::new(c, 0.0);
    let second = f.differentiate().differentiate();
    let potential = f.mul_x().mul_x().add(&f.right_mul(&cj)?)?;
    second.sub(&potential)?.add(&f.left_mul(&cj)?)
}

/// `Φ_n'' - Φ_n(x²I + cJ) + ((2n+1)I + cJ)Φ_n`, which vanishes identically.
pub fn schrodinger_residual(ctx: &FamilyContext, n: usize) -> Result<ResidualReport> {
    let phi = ctx.phi(n)?;
    let j = ctx.structured().j_complex();
    let lhs = schrodinger_operator(phi, ctx.kind().potential_j(), &j)?;
    let residual = lhs.add(&phi.scale(Complex64::new(2.0 * n as f64 + 1.0, 0.0)))?;
    Ok(coeff_report(n, "schrodinger".into(), &residual, phi.max_coeff_norm()))
}

/// `(1/√2π) ∫ f(t) e^{±ixt} dt` by Gauss–Hermite after `t = √2u`.
///
/// `order = None` picks [`oscillatory_order`].
pub fn quadrature_fourier(f: &MatrixGaussian, direction: i8, x: f64, order: Option<usize>) -> Result<CMat> {
    let min = exact_order(f.degree());
    let m = match order {
        Some(m) if m < min => {
            return Err(Error::Parameter(format!(
                "quadrature order {m} below {min} for degree {}",
                f.degree()
            )))
        }
        Some(m) => m,
        None => oscillatory_order(f.degree(), x),
    };
    let rule = hermite::rule(m)?;
    let s2 = std::f64::consts::SQRT_2;
    let mut acc = CMat::zeros(f.size(), f.size());
    for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
        let t = s2 * u;
        let kernel = Complex64::new(0.0, direction as f64 * x * t).exp() * w;
        acc += f.poly().eval(t) * kernel;
    }
    Ok(acc * Complex64::new(std::f64::consts::PI.sqrt().recip(), 0.0))
}

/// `(1/√2π) ∫ f(t) e^{ixt} dt · e^{iπkJ/2}`, numerically.
pub fn quadrature_transform(f: &MatrixGaussian, k: i64, x: f64, order: Option<usize>) -> Result<CMat> {
    Ok(phase_diag(f.size(), k).right_apply(&quadrature_fourier(f, 1, x, order)?))
}

/// Cosine and sine transforms `(1/√2π) ∫ f(t) cos|sin(xt) dt`, numerically.
pub fn quadrature_cos_sin(f: &MatrixGaussian, x: f64, order: Option<usize>) -> Result<(CMat, CMat)> {
    let plus = quadrature_fourier(f, 1, x, order)?;
    let minus = quadrature_fourier(f, -1, x, order)?;
    let half = Complex64::new(0.5, 0.0);
    let cos = (&plus + &minus) * half;
    let sin = (plus - minus) * Complex64::new(0.0, -0.5);
    Ok((cos, sin))
}

/// `F(Φ_n)·e^{iπkJ/2} - i^p e^{iπkJ/2}·Φ_n` in coefficient space, with the
/// pointwise part from the quadrature oracle.
pub fn fourier_eigen_residual_with(ctx: &FamilyContext, n: usize, power: i64) -> Result<ResidualReport> {
    let phi = ctx.phi(n)?;
    let k = ctx.kind().phase_index();
    let phase = phase_diag(ctx.size(), k);
    let lam = i_pow(power);
    let lhs = phi.transform(k, false)?;
    let rhs = phi.left_phase(&phase)?.scale(lam);
    let residual = lhs.sub(&rhs)?;
    let mut report = coeff_report(
        n,
        format!("fourier-eigen k={k} i^{power}"),
        &residual,
        phi.max_coeff_norm(),
    );
    let mut pw = 0.0f64;
    for &x in &GRID {
        let q = quadrature_transform(phi, k, x, None)?;
        let want = phase.left_apply(&phi.eval(x)) * lam;
        pw = pw.max(max_abs(&(q - want)));
    }
    report.max_pointwise = pw;
    Ok(report)
}

/// Integral eigen-equation with eigenvalue `i^n e^{iπkJ/2}`.
pub fn fourier_eigen_residual(ctx: &FamilyContext, n: usize) -> Result<ResidualReport> {
    fourier_eigen_residual_with(ctx, n, n as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryTarget {
    Phi,
    Poly,
}

/// Reflection identity: `F(x) = (-1)^n E F(-x) E` with `E = e^{iπJ}` for
/// kind 1 and `E = I` for kind 2, `F` being `Φ_n` or `P_n`.
pub fn symmetry_residual(ctx: &FamilyContext, n: usize, target: SymmetryTarget) -> Result<ResidualReport> {
    let f = match target {
        SymmetryTarget::Phi => ctx.phi(n)?.clone(),
        SymmetryTarget::Poly => MatrixGaussian::new(ctx.poly(n)?.clone()),
    };
    let sign = Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let mut reflected = f.reflect().scale(sign);
    if ctx.kind() == Kind::One {
        let e = phase_diag(ctx.size(), 2);
        reflected = reflected.left_phase(&e)?.right_phase(&e)?;
    }
    let residual = f.sub(&reflected)?;
    let label = match target {
        SymmetryTarget::Phi => "symmetry phi",
        SymmetryTarget::Poly => "symmetry poly",
    };
    // P_n's pointwise values are not Gaussian-damped; the report keeps them.
    let mut report = coeff_report(n, label.into(), &residual, f.max_coeff_norm());
    if target == SymmetryTarget::Poly {
        report.max_pointwise = GRID
            .iter()
            .map(|&x| max_abs(&residual.poly().eval(x)))
            .fold(0.0, f64::max);
    }
    Ok(report)
}

/// The real integral equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealVariant {
    /// Kind 1: `(E + σI) Φ_n C`, with `C = C_σ` (kernel `k_n`) or
    /// `C = C_{-σ}` (kernel `k_{n+1}`); `C_+ = cos(πJ/2)`, `C_- = sin(πJ/2)`.
    Kind1 { sign: i8, right: TrigKind },
    /// Kind 2: `E Φ_n = (-1)^{⌊n/2⌋} G_{k_n} E`.
    Kind2Main,
    /// Kind 2: the `k_{n+1}` integral of `Φ_n` vanishes.
    Kind2Complement,
}

impl RealVariant {
    pub fn all(kind: Kind) -> Vec<RealVariant> {
        match kind {
            Kind::One => [1i8, -1]
                .into_iter()
                .flat_map(|sign| {
                    [TrigKind::Cos, TrigKind::Sin]
                        .into_iter()
                        .map(move |right| RealVariant::Kind1 { sign, right })
                })
                .collect(),
            Kind::Two => vec![RealVariant::Kind2Main, RealVariant::Kind2Complement],
        }
    }

    pub fn label(&self, n: usize) -> String {
        let ker = |m: usize| if m % 2 == 0 { "cos" } else { "sin" };
        match *self {
            RealVariant::Kind1 { sign, right } => {
                let same = matches!((sign, right), (1, TrigKind::Cos) | (-1, TrigKind::Sin));
                let kernel = if same { ker(n) } else { ker(n + 1) };
                let r = match right {
                    TrigKind::Cos => "cos",
                    TrigKind::Sin => "sin",
                };
                let s = if sign > 0 { '+' } else { '-' };
                format!("real {s} right={r} kernel={kernel}")
            }
            RealVariant::Kind2Main => format!("real kernel={}", ker(n)),
            RealVariant::Kind2Complement => format!("real vanishing kernel={}", ker(n + 1)),
        }
    }

    fn matches(&self, kind: Kind) -> bool {
        matches!(
            (self, kind),
            (RealVariant::Kind1 { .. }, Kind::One) | (RealVariant::Kind2Main | RealVariant::Kind2Complement, Kind::Two)
        )
    }
}

fn trig(size: usize, kind: TrigKind) -> CMat {
    trig_diag(size, kind).to_complex()
}

/// Row-and-column pattern constrained by one kind-1 variant: entry `(r, c)`
/// is constrained iff `(E + σI)_{rr} ≠ 0` and `C_{cc} ≠ 0`.
pub fn variant_entry_mask(size: usize, sign: i8, right: TrigKind) -> Vec<Vec<bool>> {
    let e = phase_diag(size, 2);
    let c = trig_diag(size, right);
    (0..size)
        .map(|r| {
            let left = e.values()[r].re + sign as f64;
            (0..size).map(|col| left != 0.0 && c.values()[col] != 0.0).collect()
        })
        .collect()
}

/// Union over the four kind-1 variants of constrained entries.
pub fn entry_coverage(size: usize) -> Vec<Vec<bool>> {
    let mut cover = vec![vec![false; size]; size];
    for v in RealVariant::all(Kind::One) {
        if let RealVariant::Kind1 { sign, right } = v {
            for (r, row) in variant_entry_mask(size, sign, right).into_iter().enumerate() {
                for (c, on) in row.into_iter().enumerate() {
                    cover[r][c] |= on;
                }
            }
        }
    }
    cover
}

/// Rows of `P_n` constrained by at least one kind-1 variant.
pub fn row_coverage(size: usize) -> Vec<bool> {
    entry_coverage(size)
        .into_iter()
        .map(|row| row.into_iter().any(|b| b))
        .collect()
}

fn max_imag(m: &CMat) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// One real integral equation checked on [`GRID`]; the right side is the
/// quadrature cosine/sine transform.
pub fn real_integral_residual(ctx: &FamilyContext, n: usize, variant: RealVariant) -> Result<ResidualReport> {
    if !variant.matches(ctx.kind()) {
        return Err(Error::Parameter(format!(
            "variant {variant:?} does not belong to kind {}",
            ctx.kind().number()
        )));
    }
    let phi = ctx.phi(n)?;
    let size = ctx.size();
    let id = CMat::identity(size, size);
    let e = phase_diag(size, 2).to_matrix();
    let floor_sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let ceil_sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    let mut imag = 0.0f64;
    let mut scale = 1.0f64;
    for &x in &GRID {
        let value = phi.eval(x);
        scale = scale.max(max_abs(&value));
        let (gc, gs) = quadrature_cos_sin(phi, x, None)?;
        let kernel = |m: usize| if m % 2 == 0 { &gc } else { &gs };
        let (lhs, rhs) = match variant {
            RealVariant::Kind1 { sign, right } => {
                let s = sign as f64;
                let c_sign = trig(size, if sign > 0 { TrigKind::Cos } else { TrigKind::Sin });
                let left = &e + &id * Complex64::new(s, 0.0);
                let lhs = &left * &value * trig(size, right);
                let same = matches!((sign, right), (1, TrigKind::Cos) | (-1, TrigKind::Sin));
                let rhs = if same {
                    &c_sign * kernel(n) * &left * Complex64::new(floor_sign, 0.0)
                } else {
                    let other = &e - &id * Complex64::new(s, 0.0);
                    &c_sign * kernel(n + 1) * other * Complex64::new(s * ceil_sign, 0.0)
                };
                (lhs, rhs)
            }
            RealVariant::Kind2Main => (&e * &value, kernel(n) * &e * Complex64::new(floor_sign, 0.0)),
            RealVariant::Kind2Complement => (CMat::zeros(size, size), kernel(n + 1).clone()),
        };
        imag = imag.max(max_imag(&lhs)).max(max_imag(&rhs));
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    Ok(ResidualReport {
        n,
        variant: variant.label(n),
        max_coeff_norm: None,
        max_pointwise: worst,
        scale,
        max_imag: imag,
    })
}

/// `D(F F_k) - D(F) F_k` in coefficient space, with `D` the `n`-free
/// Schrödinger operator of the family.
pub fn commutation_residual(ctx: &FamilyContext, f: &MatrixGaussian) -> Result<f64> {
    let c = ctx.kind().potential_j();
    let k = ctx.kind().phase_index();
    let j = ctx.structured().j_complex();
    let a = schrodinger_operator(&f.transform(k, false)?, c, &j)?;
    let b = schrodinger_operator(f, c, &j)?.transform(k, false)?;
    a.distance(&b)
}

/// All identity checks for one index.
pub fn all_reports(ctx: &FamilyContext, n: usize) -> Result<Vec<ResidualReport>> {
    let mut out = vec![
        schrodinger_residual(ctx, n)?,
        fourier_eigen_residual(ctx, n)?,
        symmetry_residual(ctx, n, SymmetryTarget::Phi)?,
        symmetry_residual(ctx, n, SymmetryTarget::Poly)?,
    ];
    for v in RealVariant::all(ctx.kind()) {
        out.push(real_integral_residual(ctx, n, v)?);
    }
    Ok(out)
}
