//! Matrix polynomials and matrix Gaussians `x ↦ P(x) e^{-x²/2}`.
//!
//! Every function handled by the crate is of the second form, so sums,
//! products with constants, derivatives and the Fourier transform are all
//! exact operations on the coefficient list `C_0..C_d`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{monic_table, ScalarPoly};
use crate::structmat::{i_pow, PhaseDiag};
use crate::CMat;

/// Trailing coefficients with max-norm below this are dropped.
pub const TRIM_TOL: f64 = 1e-14;

/// Highest degree accepted by [`MatrixGaussian::fourier`].
pub const MAX_FOURIER_DEGREE: usize = 64;

/// Compensated dot product: result as if accumulated in twice the precision.
#[derive(Default)]
struct Dot2 {
    sum: f64,
    err: f64,
}

impl Dot2 {
    fn add_prod(&mut self, a: f64, b: f64) {
        let p = a * b;
        let pe = a.mul_add(b, -p);
        let t = self.sum + p;
        let z = t - self.sum;
        let se = (self.sum - (t - z)) + (p - z);
        self.sum = t;
        self.err += pe + se;
    }

    fn value(&self) -> f64 {
        self.sum + self.err
    }
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_size(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Parameter(format!(
            "size mismatch: {expected}x{expected} against {got}x{got}"
        )));
    }
    Ok(())
}

fn check_square(size: usize, m: &CMat) -> Result<()> {
    if m.nrows() != size || m.ncols() != size {
        return Err(Error::Parameter(format!(
            "expected a {size}x{size} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// `Σ_j C_j x^j` with complex `N×N` coefficients.
///
/// Invariant: at least one coefficient; the last one is nonzero unless the
/// degree is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    size: usize,
    coeffs: Vec<CMat>,
}

impl MatPoly {
    pub fn zero(size: usize) -> Self {
        MatPoly {
            size,
            coeffs: vec![CMat::zeros(size, size)],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::constant(CMat::identity(size, size))
    }

    pub fn constant(m: CMat) -> Self {
        MatPoly {
            size: m.nrows(),
            coeffs: vec![m],
        }
    }

    /// `p(x)·I`.
    pub fn from_scalar(p: &ScalarPoly, size: usize) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|&c| CMat::identity(size, size) * Complex64::new(c, 0.0))
            .collect();
        MatPoly { size, coeffs }.trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<CMat>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Parameter("empty coefficient list".into()));
        };
        let size = first.nrows();
        for c in &coeffs {
            check_square(size, c)?;
        }
        Ok(MatPoly { size, coeffs }.trimmed())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// `C_j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> CMat {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.size, self.size))
    }

    pub fn leading(&self) -> &CMat {
        &self.coeffs[self.coeffs.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && max_abs(&self.coeffs[0]) == 0.0
    }

    /// Largest coefficient entry in modulus.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(max_abs).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> CMat {
        let xc = Complex64::new(x, 0.0);
        let mut acc = CMat::zeros(self.size, self.size);
        for c in self.coeffs.iter().rev() {
            acc = acc * xc + c;
        }
        acc
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && max_abs(self.leading()) < TRIM_TOL {
            self.coeffs.pop();
        }
        if self.coeffs.len() == 1 && max_abs(&self.coeffs[0]) < TRIM_TOL {
            self.coeffs[0] = CMat::zeros(self.size, self.size);
        }
        self
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        check_size(self.size, other.size)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|j| f(&self.coeff(j), &other.coeff(j))).collect();
        Ok(MatPoly {
            size: self.size,
            coeffs,
        }
        .trimmed())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
        .trimmed()
    }

    /// `M·P(x)`.
    pub fn left_mul(&self, m: &CMat) -> Result<Self> {
        check_square(self.size, m)?;
        Ok(MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|c| m * c).collect(),
        }
        .trimmed())
    }

    /// `P(x)·M`.
    pub fn right_mul(&self, m: &CMat) -> Result<Self> {
        check_square(self.size, m)?;
        Ok(MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|c| c * m).collect(),
        }
        .trimmed())
    }

    /// `P(x)·Q(x)`, order preserved.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_size(self.size, other.size)?;
        let mut coeffs = vec![CMat::zeros(self.size, self.size); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(MatPoly {
            size: self.size,
            coeffs,
        }
        .trimmed())
    }

    /// `p(x)·P(x)` for a scalar polynomial `p`.
    pub fn mul_scalar_poly(&self, p: &ScalarPoly) -> Self {
        let mut coeffs = vec![CMat::zeros(self.size, self.size); self.coeffs.len() + p.degree()];
        for (i, &a) in p.coeffs().iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, c) in self.coeffs.iter().enumerate() {
                coeffs[i + j] += c * Complex64::new(a, 0.0);
            }
        }
        MatPoly {
            size: self.size,
            coeffs,
        }
        .trimmed()
    }

    /// `x·P(x)`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(CMat::zeros(self.size, self.size));
        coeffs.extend(self.coeffs.iter().cloned());
        MatPoly {
            size: self.size,
            coeffs,
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.size);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * Complex64::new(j as f64, 0.0))
            .collect();
        MatPoly {
            size: self.size,
            coeffs,
        }
        .trimmed()
    }

    /// `P(-x)`.
    pub fn reflect(&self) -> Self {
        MatPoly {
            size: self.size,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Coefficient-wise `P(x)^*` for real `x`.
    pub fn adjoint(&self) -> Self {
        MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|c| c.adjoint()).collect(),
        }
    }

    /// Max-norm of the coefficient difference.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }
}

/// `f(x) = (Σ_j C_j x^j) e^{-x²/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGaussian {
    poly: MatPoly,
}

impl MatrixGaussian {
    pub fn new(poly: MatPoly) -> Self {
        MatrixGaussian { poly }
    }

    pub fn from_coeffs(coeffs: Vec<CMat>) -> Result<Self> {
        MatPoly::from_coeffs(coeffs).map(Self::new)
    }

    pub fn zero(size: usize) -> Self {
        Self::new(MatPoly::zero(size))
    }

    /// `I·e^{-x²/2}`.
    pub fn gaussian(size: usize) -> Self {
        Self::new(MatPoly::identity(size))
    }

    pub fn poly(&self) -> &MatPoly {
        &self.poly
    }

    pub fn into_poly(self) -> MatPoly {
        self.poly
    }

    pub fn size(&self) -> usize {
        self.poly.size()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn coeffs(&self) -> &[CMat] {
        self.poly.coeffs()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.poly.max_norm()
    }

    pub fn eval(&self, x: f64) -> CMat {
        self.poly.eval(x) * Complex64::new((-0.5 * x * x).exp(), 0.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.poly.add(&other.poly).map(Self::new)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.poly.sub(&other.poly).map(Self::new)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self::new(self.poly.scale(alpha))
    }

    pub fn left_mul(&self, m: &CMat) -> Result<Self> {
        self.poly.left_mul(m).map(Self::new)
    }

    pub fn right_mul(&self, m: &CMat) -> Result<Self> {
        self.poly.right_mul(m).map(Self::new)
    }

    /// `f(x)·Q(x)` for a matrix polynomial `Q`; the envelope is unchanged.
    pub fn right_mul_poly(&self, q: &MatPoly) -> Result<Self> {
        self.poly.mul(q).map(Self::new)
    }

    /// `Q(x)·f(x)`.
    pub fn left_mul_poly(&self, q: &MatPoly) -> Result<Self> {
        q.mul(&self.poly).map(Self::new)
    }

    /// `p(x)·f(x)` for scalar `p`.
    pub fn poly_mul(&self, p: &ScalarPoly) -> Self {
        Self::new(self.poly.mul_scalar_poly(p))
    }

    /// `x·f(x)`.
    pub fn mul_x(&self) -> Self {
        Self::new(self.poly.shift_up())
    }

    pub fn left_phase(&self, d: &PhaseDiag) -> Result<Self> {
        check_size(self.size(), d.size())?;
        Ok(Self::new(MatPoly {
            size: self.size(),
            coeffs: self.coeffs().iter().map(|c| d.left_apply(c)).collect(),
        }))
    }

    pub fn right_phase(&self, d: &PhaseDiag) -> Result<Self> {
        check_size(self.size(), d.size())?;
        Ok(Self::new(MatPoly {
            size: self.size(),
            coeffs: self.coeffs().iter().map(|c| d.right_apply(c)).collect(),
        }))
    }

    /// Exact derivative: `P ↦ P' - xP`.
    pub fn differentiate(&self) -> Self {
        let p = &self.poly;
        Self::new(p.derivative().sub(&p.shift_up()).expect("operands share a size"))
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(self.poly.reflect())
    }

    /// `(1/√2π) ∫ f(t) e^{±ixt} dt`, exact.
    ///
    /// Uses `t^j e^{-t²/2} ↦ (±i)^j He_j(x) e^{-x²/2}`, with `He` the monic
    /// Hermite polynomials. Degrees above [`MAX_FOURIER_DEGREE`] are refused.
    pub fn fourier(&self, direction: i8) -> Result<Self> {
        if direction != 1 && direction != -1 {
            return Err(Error::Parameter(format!("direction must be +1 or -1, got {direction}")));
        }
        let d = self.degree();
        if d > MAX_FOURIER_DEGREE {
            return Err(Error::Range(format!(
                "degree {d} exceeds the Fourier limit {MAX_FOURIER_DEGREE}"
            )));
        }
        let n = self.size();
        let table = monic_table(d);
        let phases: Vec<Complex64> = (0..=d as i64).map(|k| i_pow(direction as i64 * k)).collect();
        let mut out = vec![CMat::zeros(n, n); d + 1];
        // out_j = Σ_k (±i)^k He_k[j] C_k, k ≡ j (mod 2); heavy cancellation, so
        // each entry is a compensated dot product.
        for (j, o) in out.iter_mut().enumerate() {
            for r in 0..n {
                for s in 0..n {
                    let mut re = Dot2::default();
                    let mut im = Dot2::default();
                    for k in (j..=d).step_by(2) {
                        let h = table[k][j];
                        let (pr, pi) = (phases[k].re * h, phases[k].im * h);
                        let c = self.coeffs()[k][(r, s)];
                        re.add_prod(c.re, pr);
                        re.add_prod(c.im, -pi);
                        im.add_prod(c.re, pi);
                        im.add_prod(c.im, pr);
                    }
                    o[(r, s)] = Complex64::new(re.value(), im.value());
                }
            }
        }
        Ok(Self::new(MatPoly { size: n, coeffs: out }.trimmed()))
    }

    /// `(f F_k)(x) = (1/√2π)∫ f(t) e^{ixt} dt · e^{iπkJ/2}`; the inverse uses
    /// `e^{-ixt}` and `e^{-iπkJ/2}`.
    pub fn transform(&self, k: i64, inverse: bool) -> Result<Self> {
        let (dir, kk) = if inverse { (-1, -k) } else { (1, k) };
        let phase = crate::structmat::phase_diag(self.size(), kk);
        self.fourier(dir)?.right_phase(&phase)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.poly.distance(&other.poly)
    }
}
