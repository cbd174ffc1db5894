//! The two concrete families of matrix-valued orthogonal functions.
//!
//! Kind 1 has weight `e^{-x²} e^{Ax} e^{A*x}` and right factor `T = e^{Ax}`.
//! Kind 2 has weight `e^{-x²} e^{Bx²} e^{B*x²}`, `B = A(I+A)^{-1}`, and right
//! factor `T = e^{Bx²}`. In both cases `W = e^{-x²} T T*`, so
//! `⟨P, Q⟩_W = ∫ (PT)(QT)* e^{-x²} dx` is a Gauss–Hermite-exact sum.
//!
//! `Φ_n = e^{-x²/2} P_n T` with `P_n = L_n P̂_n`, and `Φ̃_n = ‖P_n‖_W^{-1} Φ_n`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{self, hermite_phys, wave_function_signed, wave_poly, QuadratureRule, ScalarPoly};
use crate::matpoly::{max_abs, MatPoly, MatrixGaussian};
use crate::structmat::{build_structured, nilpotent_series, taylor, StructuredPair};
use crate::CMat;

/// Relative off-diagonal size above which a computed norm is rejected.
pub const NORM_DIAGONAL_GATE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    One,
    Two,
}

impl Kind {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Kind::One),
            2 => Ok(Kind::Two),
            _ => Err(Error::Parameter(format!("kind must be 1 or 2, got {k}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Kind::One => 1,
            Kind::Two => 2,
        }
    }

    /// Coefficient `c` of `J` in the Schrödinger potential `x²I + cJ`.
    pub fn potential_j(self) -> f64 {
        match self {
            Kind::One => 2.0,
            Kind::Two => 4.0,
        }
    }

    /// Index `k` of the phase `e^{iπkJ/2}` in the integral eigen-equation.
    pub fn phase_index(self) -> i64 {
        match self {
            Kind::One => 1,
            Kind::Two => 2,
        }
    }
}

/// Which family, its size and the superdiagonal parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct FamilySpec {
    kind: Kind,
    size: usize,
    nu: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: u8,
    #[serde(rename = "N")]
    size: usize,
    nu: Vec<f64>,
}

impl TryFrom<RawSpec> for FamilySpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        FamilySpec::new(Kind::from_number(raw.kind)?, raw.size, raw.nu)
    }
}

impl From<FamilySpec> for RawSpec {
    fn from(s: FamilySpec) -> Self {
        RawSpec {
            kind: s.kind.number(),
            size: s.size,
            nu: s.nu,
        }
    }
}

impl FamilySpec {
    pub fn new(kind: Kind, size: usize, nu: Vec<f64>) -> Result<Self> {
        // validates size, length and finiteness
        build_structured(size, &nu)?;
        Ok(FamilySpec { kind, size, nu })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn structured(&self) -> StructuredPair {
        build_structured(self.size, &self.nu).expect("validated at construction")
    }

    /// The right factor `T` as a matrix polynomial.
    pub fn right_factor(&self) -> MatPoly {
        self.exp_factor(1.0)
    }

    /// `T^{-1}`: `e^{-Ax}` or `e^{-Bx²}`, again a polynomial.
    pub fn right_factor_inverse(&self) -> MatPoly {
        self.exp_factor(-1.0)
    }

    fn exp_factor(&self, sign: f64) -> MatPoly {
        let n = self.size;
        let a = self.structured().a_complex();
        let (base, step) = match self.kind {
            Kind::One => (a, 1),
            Kind::Two => {
                let inv = nilpotent_series(&taylor::binomial(-1.0, n), &a).expect("A is nilpotent");
                (&a * inv, 2)
            }
        };
        let base = base * Complex64::new(sign, 0.0);
        let mut coeffs = vec![CMat::zeros(n, n); step * (n - 1) + 1];
        let mut power = CMat::identity(n, n);
        let mut factorial = 1.0;
        for j in 0..n {
            if j > 0 {
                factorial *= j as f64;
                power = &power * &base;
            }
            coeffs[step * j] = &power / Complex64::new(factorial, 0.0);
        }
        MatPoly::from_coeffs(coeffs).expect("square coefficients")
    }

    /// `L_n`: `e^{-A²/4}` (kind 1) or `(I+A)^{-(2n+1)/2}` (kind 2).
    pub fn normalizer(&self, n: usize) -> CMat {
        let a = self.structured().a_complex();
        let series = match self.kind {
            Kind::One => taylor::exp_square(-0.25, self.size),
            Kind::Two => taylor::binomial(-(2.0 * n as f64 + 1.0) / 2.0, self.size),
        };
        nilpotent_series(&series, &a).expect("A is nilpotent")
    }
}

/// `W(x)`, real symmetric positive definite.
pub fn weight_eval(spec: &FamilySpec, x: f64) -> DMatrix<f64> {
    let t = spec.right_factor().eval(x);
    let w = &t * t.adjoint() * Complex64::new((-x * x).exp(), 0.0);
    w.map(|z| z.re)
}

/// Gauss–Hermite order for building up to `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOrder {
    Auto,
    Fixed(usize),
}

/// Smallest order integrating every `⟨·,·⟩_W` integrand up to `n_max` exactly.
pub fn required_order(spec: &FamilySpec, n_max: usize) -> usize {
    n_max + spec.right_factor().degree() + 1
}

pub fn auto_order(spec: &FamilySpec, n_max: usize) -> usize {
    (n_max + spec.size() + 8).max(required_order(spec, n_max))
}

/// Everything built for one family up to degree `n_max`. Immutable.
#[derive(Debug, Clone)]
pub struct FamilyContext {
    spec: FamilySpec,
    structured: StructuredPair,
    n_max: usize,
    rule: Arc<QuadratureRule>,
    right_factor: MatPoly,
    monic: Vec<MatPoly>,
    normalizers: Vec<CMat>,
    polys: Vec<MatPoly>,
    norms: Vec<Vec<f64>>,
    phi: Vec<MatrixGaussian>,
    phi_tilde: Vec<MatrixGaussian>,
}

/// `Σ_i w_i F(x_i) G(x_i)*` over node values.
fn node_inner(weights: &[f64], f: &[CMat], g: &[CMat]) -> CMat {
    let n = f[0].nrows();
    let mut acc = CMat::zeros(n, n);
    for ((w, a), b) in weights.iter().zip(f).zip(g) {
        acc += a * b.adjoint() * Complex64::new(*w, 0.0);
    }
    acc
}

fn node_values(p: &MatPoly, nodes: &[f64]) -> Vec<CMat> {
    nodes.iter().map(|&x| p.eval(x)).collect()
}

pub fn build_family(spec: &FamilySpec, n_max: usize, order: QuadOrder) -> Result<FamilyContext> {
    let need = required_order(spec, n_max);
    let m = match order {
        QuadOrder::Auto => auto_order(spec, n_max),
        QuadOrder::Fixed(m) if m < need => {
            return Err(Error::Parameter(format!(
                "quadrature order {m} below the exactness requirement {need}"
            )))
        }
        QuadOrder::Fixed(m) => m,
    };
    let rule = hermite::rule(m)?;
    let size = spec.size();
    let t = spec.right_factor();
    let nodes = rule.nodes();
    let weights = rule.weights();

    // Gram–Schmidt seeded with x·P̂_{n-1}: same monic family as x^n I,
    // better conditioned. Two passes.
    let mut monic: Vec<MatPoly> = Vec::with_capacity(n_max + 1);
    let mut vals: Vec<Vec<CMat>> = Vec::with_capacity(n_max + 1);
    let mut gram_inv: Vec<CMat> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut p = if n == 0 {
            MatPoly::identity(size)
        } else {
            monic[n - 1].shift_up()
        };
        for _pass in 0..2 {
            let pv = node_values(&p.mul(&t)?, nodes);
            let mut correction = MatPoly::zero(size);
            for k in 0..n {
                let c = node_inner(weights, &pv, &vals[k]) * &gram_inv[k];
                correction = correction.add(&monic[k].left_mul(&c)?)?;
            }
            p = p.sub(&correction)?;
        }
        let pv = node_values(&p.mul(&t)?, nodes);
        let gram = node_inner(weights, &pv, &pv);
        let inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric(format!("singular Gram matrix at degree {n}")))?;
        monic.push(p);
        vals.push(pv);
        gram_inv.push(inv);
    }

    let normalizers: Vec<CMat> = (0..=n_max).map(|n| spec.normalizer(n)).collect();
    let mut polys = Vec::with_capacity(n_max + 1);
    let mut norms = Vec::with_capacity(n_max + 1);
    let mut phi = Vec::with_capacity(n_max + 1);
    let mut phi_tilde = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let pn = monic[n].left_mul(&normalizers[n])?;
        let f = MatrixGaussian::new(pn.mul(&t)?);
        let fv = node_values(f.poly(), nodes);
        let gram = node_inner(weights, &fv, &fv);
        let diag = diagonal_norm(&gram, n)?;
        let scale = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            size,
            diag.iter().map(|d| Complex64::new(d.sqrt().recip(), 0.0)),
        ));
        phi_tilde.push(f.left_mul(&scale)?);
        phi.push(f);
        polys.push(pn);
        norms.push(diag);
    }

    Ok(FamilyContext {
        spec: spec.clone(),
        structured: spec.structured(),
        n_max,
        rule,
        right_factor: t,
        monic,
        normalizers,
        polys,
        norms,
        phi,
        phi_tilde,
    })
}

/// Diagonal of a computed norm after the diagonality gate.
fn diagonal_norm(gram: &CMat, n: usize) -> Result<Vec<f64>> {
    let size = gram.nrows();
    let scale = max_abs(gram);
    let mut off = 0.0f64;
    for r in 0..size {
        for c in 0..size {
            if r != c {
                off = off.max(gram[(r, c)].norm());
            }
        }
    }
    if off > NORM_DIAGONAL_GATE * scale {
        return Err(Error::Consistency(format!(
            "norm of P_{n} is not diagonal: off-diagonal {off:e} against scale {scale:e}"
        )));
    }
    let diag: Vec<f64> = (0..size).map(|r| gram[(r, r)].re).collect();
    if diag.iter().any(|&d| d <= 0.0 || !d.is_finite()) {
        return Err(Error::Consistency(format!(
            "norm of P_{n} has a non-positive diagonal entry"
        )));
    }
    Ok(diag)
}

impl FamilyContext {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn kind(&self) -> Kind {
        self.spec.kind()
    }

    pub fn size(&self) -> usize {
        self.spec.size()
    }

    pub fn structured(&self) -> &StructuredPair {
        &self.structured
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn quad_order(&self) -> usize {
        self.rule.order()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn right_factor(&self) -> &MatPoly {
        &self.right_factor
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::Range(format!("index {n} exceeds n_max = {}", self.n_max)));
        }
        Ok(())
    }

    /// `P̂_n`.
    pub fn monic(&self, n: usize) -> Result<&MatPoly> {
        self.check(n)?;
        Ok(&self.monic[n])
    }

    pub fn normalizer(&self, n: usize) -> Result<&CMat> {
        self.check(n)?;
        Ok(&self.normalizers[n])
    }

    /// `P_n = L_n P̂_n`.
    pub fn poly(&self, n: usize) -> Result<&MatPoly> {
        self.check(n)?;
        Ok(&self.polys[n])
    }

    /// Diagonal of `‖P_n‖²_W`.
    pub fn norm(&self, n: usize) -> Result<&[f64]> {
        self.check(n)?;
        Ok(&self.norms[n])
    }

    pub fn phi(&self, n: usize) -> Result<&MatrixGaussian> {
        self.check(n)?;
        Ok(&self.phi[n])
    }

    pub fn phi_tilde(&self, n: usize) -> Result<&MatrixGaussian> {
        self.check(n)?;
        Ok(&self.phi_tilde[n])
    }

    pub fn phi_tilde_all(&self) -> &[MatrixGaussian] {
        &self.phi_tilde
    }
}

/// `γ_0..γ_{n_max}` for `N = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSeq {
    values: Vec<f64>,
}

impl GammaSeq {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }
}

fn require_n2(spec: &FamilySpec) -> Result<f64> {
    if spec.size() != 2 {
        return Err(Error::Parameter(format!(
            "closed forms need N = 2, got N = {}",
            spec.size()
        )));
    }
    Ok(spec.nu()[0])
}

/// `γ_n = 1 + nν²/2` (kind 1) or `1 + (ν²/2)·C(n,2)` (kind 2).
pub fn gamma(kind: Kind, nu: f64, n: usize) -> f64 {
    let n = n as f64;
    match kind {
        Kind::One => 1.0 + 0.5 * n * nu * nu,
        Kind::Two => 1.0 + 0.5 * nu * nu * n * (n - 1.0) / 2.0,
    }
}

pub fn gamma_seq(spec: &FamilySpec, n_max: usize) -> Result<GammaSeq> {
    let nu = require_n2(spec)?;
    Ok(GammaSeq {
        values: (0..=n_max).map(|n| gamma(spec.kind(), nu, n)).collect(),
    })
}

/// Offset between the two `γ` indices in the `N = 2` closed forms.
fn shift(kind: Kind) -> usize {
    match kind {
        Kind::One => 1,
        Kind::Two => 2,
    }
}

/// `p(x)·scale` placed at entry `(r, c)` of a 2×2 polynomial.
fn entry(r: usize, c: usize, p: &ScalarPoly, scale: f64) -> MatPoly {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|&v| {
            let mut m = CMat::zeros(2, 2);
            m[(r, c)] = Complex64::new(v * scale, 0.0);
            m
        })
        .collect();
    MatPoly::from_coeffs(coeffs).expect("2x2 coefficients")
}

fn sum(parts: &[MatPoly]) -> MatPoly {
    parts
        .iter()
        .fold(MatPoly::zero(2), |acc, p| acc.add(p).expect("2x2 operands"))
}

/// Normalized `Φ̃_n` for `N = 2`, assembled from wave functions.
pub fn closed_form_n2(spec: &FamilySpec, n: usize) -> Result<MatrixGaussian> {
    let nu = require_n2(spec)?;
    let kind = spec.kind();
    let s = shift(kind);
    let g = |k: usize| gamma(kind, nu, k);
    let nf = n as f64;
    let (upper, lower) = match kind {
        Kind::One => (
            nu * ((nf + 1.0) / (2.0 * g(n + 1))).sqrt(),
            -nu * (nf / (2.0 * g(n))).sqrt(),
        ),
        Kind::Two => (
            0.5 * nu * ((nf + 1.0) * (nf + 2.0) / g(n + 2)).sqrt(),
            -0.5 * nu * (nf * (nf - 1.0) / g(n)).sqrt(),
        ),
    };
    let mut parts = vec![
        entry(0, 0, &wave_poly(n), g(n + s).sqrt().recip()),
        entry(0, 1, &wave_poly(n + s), upper),
        entry(1, 1, &wave_poly(n), g(n).sqrt().recip()),
    ];
    if n >= s {
        parts.push(entry(1, 0, &wave_poly(n - s), lower));
    }
    Ok(MatrixGaussian::new(sum(&parts)))
}

/// `P_n` for `N = 2` in terms of physicists' Hermite polynomials.
pub fn closed_form_poly_n2(spec: &FamilySpec, n: usize) -> Result<MatPoly> {
    let nu = require_n2(spec)?;
    let kind = spec.kind();
    let gn = gamma(kind, nu, n);
    let nf = n as f64;
    let h = |k: usize| hermite_phys(k);
    let scale = 0.5f64.powi(n as i32);
    let parts = match kind {
        Kind::One => {
            let mut p = vec![entry(0, 0, &h(n), scale), entry(1, 1, &h(n), scale / gn)];
            if n >= 1 {
                let hm = h(n - 1);
                p.push(entry(0, 1, &hm, -nf * nu * scale));
                p.push(entry(1, 0, &hm, -nf * nu * scale / gn));
                let xh = ScalarPoly::new([vec![0.0], hm.coeffs().to_vec()].concat());
                p.push(entry(1, 1, &xh, nf * nu * nu * scale / gn));
            }
            p
        }
        Kind::Two => {
            let mut p = vec![
                entry(0, 0, &h(n), scale),
                entry(0, 1, &h(n), -nu * (nf + 0.5) * scale),
                entry(1, 1, &h(n), scale / gn),
            ];
            if n >= 2 {
                let hm = h(n - 2);
                let c = nf * (nf - 1.0);
                p.push(entry(0, 1, &hm, -nu * c * scale));
                p.push(entry(1, 0, &hm, -c * nu * scale / gn));
                let x2h = ScalarPoly::new([vec![0.0, 0.0], hm.coeffs().to_vec()].concat());
                p.push(entry(1, 1, &x2h, c * nu * nu * scale / gn));
            }
            p
        }
    };
    Ok(sum(&parts))
}

/// Diagonal of `‖P_n‖²_W` for `N = 2`: `(n!√π/2^n)·(γ_{n+s}, 1/γ_n)`.
pub fn closed_form_norm_n2(spec: &FamilySpec, n: usize) -> Result<[f64; 2]> {
    let nu = require_n2(spec)?;
    let kind = spec.kind();
    let base = (1..=n).map(|k| k as f64 / 2.0).product::<f64>() * std::f64::consts::PI.sqrt();
    Ok([base * gamma(kind, nu, n + shift(kind)), base / gamma(kind, nu, n)])
}

/// `Φ̃_n Φ̃_n*` at `x` for `N = 2`, in the wave-function form.
pub fn closed_form_density_n2(spec: &FamilySpec, n: usize, x: f64) -> Result<[[f64; 2]; 2]> {
    let nu = require_n2(spec)?;
    let kind = spec.kind();
    let s = shift(kind);
    let g = |k: usize| gamma(kind, nu, k);
    let psi = |k: i64| wave_function_signed(k, x);
    let ni = n as i64;
    let up = psi(ni + s as i64);
    let dn = psi(ni - s as i64);
    let p = psi(ni);
    let dp = (n as f64 / 2.0).sqrt() * psi(ni - 1) - ((n as f64 + 1.0) / 2.0).sqrt() * psi(ni + 1);
    let d11 = up * up + (p * p - up * up) / g(n + s);
    let d22 = dn * dn + (p * p - dn * dn) / g(n);
    let off = match kind {
        // equals -ψ_n ψ_n' with the standard ladder relation
        Kind::One => -nu / (g(n) * g(n + 1)).sqrt() * p * dp,
        Kind::Two => -nu / (2.0 * (g(n) * g(n + 2)).sqrt()) * p * (p + 2.0 * x * dp),
    };
    Ok([[d11, off], [off, d22]])
}
