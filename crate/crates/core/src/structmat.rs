//! Structured matrices built from a size `N` and parameters `ν_1..ν_{N-1}`.
//!
//! * the nilpotent shift `A` with `ν_j` on the first superdiagonal,
//! * the level diagonal `J = diag(N-1, ..., 1, 0)`,
//! * the phase diagonals `e^{iπkJ/2}` (entry `j` is `i^{k(N-1-j)}`, zero-based),
//! * the trigonometric diagonals `sin(πJ/2)` and `cos(πJ/2)`.
//!
//! Analytic functions of a nilpotent matrix reduce to a finite Taylor sum; see
//! [`nilpotent_series`] and the coefficient generators in [`taylor`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::CMat;

/// Absolute bound on `max |(A^N)_{ij}|` accepted as nilpotent.
pub const NILPOTENCY_TOL: f64 = 1e-12;

/// The pair `(A, J)` for a given size and parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredPair {
    size: usize,
    nu: Vec<f64>,
    a: DMatrix<f64>,
    j: DMatrix<f64>,
}

impl StructuredPair {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    /// The nilpotent shift `A`.
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// The level diagonal `J`.
    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn a_complex(&self) -> CMat {
        to_complex(&self.a)
    }

    pub fn j_complex(&self) -> CMat {
        to_complex(&self.j)
    }

    /// Diagonal of `J` as integers, `N-1` down to `0`.
    pub fn levels(&self) -> Vec<usize> {
        (0..self.size).map(|r| self.size - 1 - r).collect()
    }
}

/// Builds `A = Σ ν_j E_{j,j+1}` and `J = Σ (N-j) E_{j,j}`.
pub fn build_structured(size: usize, nu: &[f64]) -> Result<StructuredPair> {
    if size == 0 {
        return Err(Error::Parameter("matrix size must be at least 1".into()));
    }
    if nu.len() != size - 1 {
        return Err(Error::Parameter(format!(
            "size {size} needs {} parameters, got {}",
            size - 1,
            nu.len()
        )));
    }
    if let Some(bad) = nu.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!("parameter {bad} is not finite")));
    }
    let mut a = DMatrix::zeros(size, size);
    for (r, &v) in nu.iter().enumerate() {
        a[(r, r + 1)] = v;
    }
    let j = DMatrix::from_fn(size, size, |r, c| if r == c { (size - 1 - r) as f64 } else { 0.0 });
    Ok(StructuredPair {
        size,
        nu: nu.to_vec(),
        a,
        j,
    })
}

/// `i^p` for an integer power, exact.
pub fn i_pow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// The unitary diagonal `e^{iπkJ/2}`; `k` is stored reduced mod 4.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiag {
    k: u8,
    values: Vec<Complex64>,
}

impl PhaseDiag {
    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn to_matrix(&self) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_column_slice(&self.values))
    }

    /// The inverse (and adjoint), `e^{-iπkJ/2}`.
    pub fn inverse(&self) -> PhaseDiag {
        phase_diag(self.size(), -(self.k as i64))
    }

    /// `D·M`: scales row `r` of `m` by entry `r`.
    pub fn left_apply(&self, m: &CMat) -> CMat {
        let mut out = m.clone();
        for (r, v) in self.values.iter().enumerate() {
            for c in 0..out.ncols() {
                out[(r, c)] *= v;
            }
        }
        out
    }

    /// `M·D`: scales column `c` of `m` by entry `c`.
    pub fn right_apply(&self, m: &CMat) -> CMat {
        let mut out = m.clone();
        for (c, v) in self.values.iter().enumerate() {
            for r in 0..out.nrows() {
                out[(r, c)] *= v;
            }
        }
        out
    }
}

pub fn phase_diag(size: usize, k: i64) -> PhaseDiag {
    let k = k.rem_euclid(4);
    let values = (0..size).map(|r| i_pow(k * (size - 1 - r) as i64)).collect();
    PhaseDiag { k: k as u8, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sin,
    Cos,
}

/// `sin(πJ/2)` or `cos(πJ/2)`; entries are exactly -1, 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigDiag {
    kind: TrigKind,
    values: Vec<f64>,
}

impl TrigDiag {
    pub fn kind(&self) -> TrigKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.values))
    }

    pub fn to_complex(&self) -> CMat {
        to_complex(&self.to_matrix())
    }
}

pub fn trig_diag(size: usize, kind: TrigKind) -> TrigDiag {
    let values = (0..size)
        .map(|r| {
            let level = (size - 1 - r) % 4;
            match (kind, level) {
                (TrigKind::Sin, 1) => 1.0,
                (TrigKind::Sin, 3) => -1.0,
                (TrigKind::Sin, _) => 0.0,
                (TrigKind::Cos, 0) => 1.0,
                (TrigKind::Cos, 2) => -1.0,
                (TrigKind::Cos, _) => 0.0,
            }
        })
        .collect();
    TrigDiag { kind, values }
}

/// `f(A) = Σ_{j<N} f^{(j)}(0) A^j / j!` for nilpotent `A`.
///
/// `taylor[j]` holds the derivative `f^{(j)}(0)`; entries beyond `N-1` are
/// ignored.
pub fn nilpotent_series(taylor: &[Complex64], a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Parameter("matrix must be square".into()));
    }
    if taylor.len() < n {
        return Err(Error::Parameter(format!(
            "need {n} Taylor coefficients, got {}",
            taylor.len()
        )));
    }
    let mut power = CMat::identity(n, n);
    let mut out = CMat::zeros(n, n);
    let mut factorial = 1.0;
    for (j, coeff) in taylor.iter().take(n).enumerate() {
        if j > 0 {
            factorial *= j as f64;
        }
        out += &power * (*coeff / factorial);
        power = &power * a;
    }
    let residual = power.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual >= NILPOTENCY_TOL {
        return Err(Error::Domain(format!(
            "matrix is not nilpotent: max |A^N| = {residual:e}"
        )));
    }
    Ok(out)
}

/// Derivative sequences `f^{(j)}(0)` for the functions used with
/// [`nilpotent_series`].
pub mod taylor {
    use num_complex::Complex64;

    fn real(v: impl IntoIterator<Item = f64>) -> Vec<Complex64> {
        v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
    }

    /// `e^{s y}`.
    pub fn exp(scale: f64, len: usize) -> Vec<Complex64> {
        real((0..len).map(|j| scale.powi(j as i32)))
    }

    /// `(1 + y)^α`: the falling factorial `α(α-1)…(α-j+1)`.
    pub fn binomial(alpha: f64, len: usize) -> Vec<Complex64> {
        let mut acc = 1.0;
        real((0..len).map(|j| {
            let v = acc;
            acc *= alpha - j as f64;
            v
        }))
    }

    /// `e^{c y^2}`: nonzero only at even `j = 2m`, where it is `c^m (2m)!/m!`.
    pub fn exp_square(c: f64, len: usize) -> Vec<Complex64> {
        real((0..len).map(|j| {
            if j % 2 == 1 {
                return 0.0;
            }
            let m = j / 2;
            let ratio: f64 = ((m + 1)..=j).map(|t| t as f64).product();
            c.powi(m as i32) * ratio
        }))
    }
}

pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs(m: &CMat) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scalar_case_is_zero() {
        let p = build_structured(1, &[]).unwrap();
        assert_eq!(p.a()[(0, 0)], 0.0);
        assert_eq!(p.j()[(0, 0)], 0.0);
    }

    #[test]
    fn two_by_two_layout() {
        let p = build_structured(2, &[0.7]).unwrap();
        assert_eq!(p.a(), &DMatrix::from_row_slice(2, 2, &[0.0, 0.7, 0.0, 0.0]));
        assert_eq!(p.j(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn three_by_three_nilpotent_and_commutator() {
        let p = build_structured(3, &[1.0, 1.0]).unwrap();
        let a = p.a();
        let j = p.j();
        assert_eq!(a * a * a, DMatrix::zeros(3, 3));
        assert_eq!(a * j - j * a, -a);
    }

    #[test]
    fn parameter_length_mismatch() {
        assert!(matches!(build_structured(3, &[1.0]), Err(Error::Parameter(_))));
        assert!(matches!(build_structured(0, &[]), Err(Error::Parameter(_))));
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_diag(2, 1).values(), &[Complex64::i(), c(1.0)]);
        assert_eq!(phase_diag(3, 2).values(), &[c(1.0), c(-1.0), c(1.0)]);
        for n in 1..6 {
            assert_eq!(phase_diag(n, 0).to_matrix(), CMat::identity(n, n));
        }
        assert_eq!(phase_diag(4, -3), phase_diag(4, 1));
    }

    #[test]
    fn trig_examples() {
        assert_eq!(trig_diag(3, TrigKind::Sin).values(), &[0.0, 1.0, 0.0]);
        assert_eq!(trig_diag(3, TrigKind::Cos).values(), &[-1.0, 0.0, 1.0]);
        let s = trig_diag(2, TrigKind::Sin).to_matrix();
        let co = trig_diag(2, TrigKind::Cos).to_matrix();
        assert_eq!(s.diagonal().as_slice(), &[1.0, 0.0]);
        assert_eq!(co.diagonal().as_slice(), &[0.0, 1.0]);
        assert_eq!(&s * &s + &co * &co, DMatrix::identity(2, 2));
    }

    #[test]
    fn trig_values_match_floating_trig() {
        for n in 1..9 {
            let s = trig_diag(n, TrigKind::Sin);
            let co = trig_diag(n, TrigKind::Cos);
            for r in 0..n {
                let arg = std::f64::consts::FRAC_PI_2 * (n - 1 - r) as f64;
                assert!((s.values()[r] - arg.sin()).abs() < 1e-15);
                assert!((co.values()[r] - arg.cos()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sin_cos_relations() {
        for n in 1..9 {
            let e1 = phase_diag(n, 1).to_matrix();
            let e2 = phase_diag(n, 2).to_matrix();
            let e3 = phase_diag(n, 3).to_matrix();
            let s = trig_diag(n, TrigKind::Sin).to_complex();
            let co = trig_diag(n, TrigKind::Cos).to_complex();
            let id = CMat::identity(n, n);
            let half = c(0.5);
            let inv_2i = Complex64::new(0.0, -0.5);
            let checks = [
                &e1 * &co - (&id + &e2) * half,
                &e1 * &s - (&e2 - &id) * inv_2i,
                &e2 * &co - &co,
                &e2 * &s + &s,
                &e3 * &co - (&id + &e2) * half,
                &e3 * &s + (&e2 - &id) * inv_2i,
            ];
            for m in checks.iter() {
                assert!(max_abs(m) < 1e-15);
            }
        }
    }

    #[test]
    fn series_examples() {
        let zero = CMat::zeros(3, 3);
        assert_eq!(
            nilpotent_series(&taylor::exp(1.0, 3), &zero).unwrap(),
            CMat::identity(3, 3)
        );

        let a = build_structured(2, &[1.3]).unwrap().a_complex();
        let inv = nilpotent_series(&taylor::binomial(-1.0, 2), &a).unwrap();
        assert!(max_abs(&(inv - (CMat::identity(2, 2) - &a))) < 1e-15);

        let a = build_structured(3, &[0.4, -1.1]).unwrap().a_complex();
        let x = 0.9;
        let got = nilpotent_series(&taylor::exp(x, 3), &a).unwrap();
        let ax = &a * c(x);
        let naive = CMat::identity(3, 3) + &ax + &ax * &ax * c(0.5);
        assert!(max_abs(&(got - naive)) < 1e-15);
    }

    #[test]
    fn series_rejects_non_nilpotent() {
        let m = CMat::identity(2, 2);
        assert!(matches!(
            nilpotent_series(&taylor::exp(1.0, 2), &m),
            Err(Error::Domain(_))
        ));
        let a = build_structured(3, &[1.0, 1.0]).unwrap().a_complex();
        assert!(matches!(
            nilpotent_series(&taylor::exp(1.0, 2), &a),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn exp_square_coefficients() {
        // e^{-y^2/4} = 1 - y^2/4 + y^4/32 - ...
        let t = taylor::exp_square(-0.25, 5);
        let want = [1.0, 0.0, -0.5, 0.0, 0.75];
        for (a, b) in t.iter().zip(want) {
            assert!((a.re - b).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn phase_commutes_with_powers(
            nu in proptest::collection::vec(-2.0f64..2.0, 5),
            size in 1usize..=6,
            k in 0i64..4,
        ) {
            let p = build_structured(size, &nu[..size - 1]).unwrap();
            let a = p.a_complex();
            let d = phase_diag(size, k).to_matrix();
            let mut power = a.clone();
            for m in 1..size {
                let lhs = &d * &power;
                let rhs = &power * &d * i_pow(k * m as i64);
                prop_assert!(max_abs(&(lhs - rhs)) < 1e-13);
                power = &power * &a;
            }
        }

        #[test]
        fn ad_powers(nu in proptest::collection::vec(-2.0f64..2.0, 5), size in 1usize..=6) {
            let p = build_structured(size, &nu[..size - 1]).unwrap();
            let a = p.a_complex();
            let j = p.j_complex();
            let mut power = a.clone();
            for k in 1..size {
                let ad = &power * &j - &j * &power;
                prop_assert!(max_abs(&(ad + &power * c(k as f64))) < 1e-13);
                power = &power * &a;
            }
            prop_assert!(max_abs(&power) == 0.0);
        }

        #[test]
        fn phase_periodicity(size in 1usize..=8, k in -8i64..8) {
            let prod = phase_diag(size, k).to_matrix() * phase_diag(size, 4 - k).to_matrix();
            prop_assert_eq!(prod, CMat::identity(size, size));
        }
    }
}
