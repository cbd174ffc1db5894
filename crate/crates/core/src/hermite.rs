//! Scalar Hermite polynomials, normalized wave functions and Gauss–Hermite
//! quadrature for the weight `e^{-x^2}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Real polynomial, `coeffs[j]` multiplies `x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly {
    coeffs: Vec<f64>,
}

impl ScalarPoly {
    /// Trailing exact zeros are dropped; the zero polynomial keeps one entry.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        ScalarPoly { coeffs }
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[degree] = 1.0;
        ScalarPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Monic Hermite polynomial `He_n`, from `He_{n+1} = x He_n - n He_{n-1}`.
pub fn hermite_monic(n: usize) -> ScalarPoly {
    ScalarPoly::new(monic_table(n).swap_remove(n))
}

/// Coefficient rows of `He_0..He_n`.
pub(crate) fn monic_table(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    if n >= 1 {
        rows.push(vec![0.0, 1.0]);
    }
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (j, &c) in rows[k].iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, &c) in rows[k - 1].iter().enumerate() {
            next[j] -= k as f64 * c;
        }
        rows.push(next);
    }
    rows
}

/// Physicists' Hermite polynomial `H_n`, from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_phys(n: usize) -> ScalarPoly {
    let mut prev = vec![1.0];
    if n == 0 {
        return ScalarPoly::new(prev);
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    ScalarPoly::new(cur)
}

/// Polynomial part of `ψ_n`, i.e. `H_n / sqrt(2^n n! sqrt(π))`, built with the
/// normalized recurrence so no factorial is ever formed.
pub fn wave_poly(n: usize) -> ScalarPoly {
    let mut prev = vec![0.0];
    let mut cur = vec![PI.powf(-0.25)];
    for k in 0..n {
        let a = (2.0 / (k as f64 + 1.0)).sqrt();
        let b = (k as f64 / (k as f64 + 1.0)).sqrt();
        let mut next = vec![0.0; k + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += a * c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= b * c;
        }
        prev = cur;
        cur = next;
    }
    ScalarPoly::new(cur)
}

/// `ψ_0(x), …, ψ_{n_max}(x)`.
pub fn wave_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..n_max {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Normalized Hermite function `ψ_n(x) = (2^n n! √π)^{-1/2} e^{-x²/2} H_n(x)`.
pub fn wave_function(n: usize, x: f64) -> f64 {
    wave_functions(n, x)[n]
}

/// `ψ_n` for a signed index, zero below 0.
pub fn wave_function_signed(n: i64, x: f64) -> f64 {
    if n < 0 {
        0.0
    } else {
        wave_function(n as usize, x)
    }
}

/// Gauss–Hermite rule for `∫ f(x) e^{-x²} dx ≈ Σ w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Builds the `m`-point rule.
///
/// Nodes are the eigenvalues of the Jacobi matrix (zero diagonal,
/// off-diagonal `sqrt(k/2)`), polished by Newton steps on the orthonormal
/// recurrence. Weights are `1 / Σ_k p_k(x_i)²` with `p_k` orthonormal; this is
/// the squared first eigenvector component scaled by `√π`, evaluated so that
/// the tiny tail weights keep full relative accuracy.
pub fn gauss_hermite(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Parameter("quadrature order must be at least 1".into()));
    }
    let jacobi = DMatrix::from_fn(m, m, |r, c| {
        if r + 1 == c {
            (c as f64 / 2.0).sqrt()
        } else if c + 1 == r {
            (r as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jacobi, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric(format!("Jacobi eigen-solver did not converge (m = {m})")))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pm, pm1) = orthonormal_pair(m, *x);
            let step = pm / ((2.0 * m as f64).sqrt() * pm1);
            if !step.is_finite() {
                break;
            }
            *x -= step;
        }
    }
    // exact symmetry about zero
    for i in 0..m / 2 {
        let v = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -v;
        nodes[m - 1 - i] = v;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }

    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let mut prev = 0.0;
            let mut cur = PI.powf(-0.25);
            let mut sum = cur * cur;
            for k in 0..m - 1 {
                let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();
    for i in 0..m / 2 {
        let w = 0.5 * (weights[i] + weights[m - 1 - i]);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(p_m(x), p_{m-1}(x))` for the polynomials orthonormal under `e^{-x²}`.
fn orthonormal_pair(m: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    for k in 0..m {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Cached rule of order `m`.
pub fn rule(m: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("quadrature cache poisoned").get(&m) {
        return Ok(r.clone());
    }
    let r = Arc::new(gauss_hermite(m)?);
    cache.lock().expect("quadrature cache poisoned").insert(m, r.clone());
    Ok(r)
}

/// Minimum order accepted for transforming a degree-`d` matrix Gaussian.
pub fn exact_order(degree: usize) -> usize {
    degree / 2 + 8
}

/// Order for `∫ p(√2u) e^{i√2xu} e^{-u²} du` with `deg p = degree`, reaching
/// a 1e-13 relative floor for `|x| ≤ 5`.
pub fn oscillatory_order(degree: usize, x: f64) -> usize {
    degree / 2 + 10 + (x * x + 4.0 * x.abs()).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    /// `∫ x^p e^{-x²} dx` = Γ((p+1)/2) for even p.
    fn moment(p: usize) -> f64 {
        if p % 2 == 1 {
            return 0.0;
        }
        (1..=p / 2).map(|k| (2 * k - 1) as f64 / 2.0).product::<f64>() * SQRT_PI
    }

    #[test]
    fn monic_base_cases() {
        assert_eq!(hermite_monic(0).coeffs(), &[1.0]);
        assert_eq!(hermite_monic(1).coeffs(), &[0.0, 1.0]);
        assert_eq!(hermite_monic(2).coeffs(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn monic_six_matches_rodrigues() {
        // (-1)^6 e^{x²/2} d^6/dx^6 e^{-x²/2}, differentiated symbolically:
        // track the polynomial q with d/dx (q e^{-x²/2}) = (q' - x q) e^{-x²/2}.
        let mut q = vec![1.0];
        for _ in 0..6 {
            let mut next = vec![0.0; q.len() + 1];
            for (j, &c) in q.iter().enumerate() {
                if j > 0 {
                    next[j - 1] += j as f64 * c;
                }
                next[j + 1] -= c;
            }
            q = next;
        }
        let rodrigues = ScalarPoly::new(q);
        let he6 = hermite_monic(6);
        for i in 0..20 {
            let x = -3.0 + 0.3 * i as f64;
            assert!((rodrigues.eval(x) - he6.eval(x)).abs() < 1e-10 * (1.0 + he6.eval(x).abs()));
        }
    }

    #[test]
    fn wave_function_values() {
        assert!((wave_function(0, 0.0) - PI.powf(-0.25)).abs() < 1e-16);
        assert_eq!(wave_function(1, 0.0), 0.0);
        let r = gauss_hermite(40).unwrap();
        // ψ_3² = p(x)² e^{-x²}
        let p = wave_poly(3);
        let norm = r.integrate(|x| p.eval(x).powi(2));
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wave_poly_matches_recurrence_values() {
        for n in 0..15 {
            let p = wave_poly(n);
            for &x in &[-2.5, -0.3, 0.0, 1.1, 3.7] {
                let direct = p.eval(x) * (-0.5 * x * x).exp();
                assert!((direct - wave_function(n, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wave_function_large_index_is_finite() {
        let v = wave_functions(300, 5.0);
        assert!(v.iter().all(|x| x.is_finite()));
        assert!(v[300].abs() < 1.0);
    }

    #[test]
    fn hermite_recurrences() {
        let h: Vec<_> = (0..=21).map(hermite_phys).collect();
        for n in 1..20 {
            for i in 0..=24 {
                let x = -6.0 + 0.5 * i as f64;
                let lhs = h[n + 1].eval(x);
                let rhs = 2.0 * x * h[n].eval(x) - 2.0 * n as f64 * h[n - 1].eval(x);
                assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn wave_function_derivative_identity() {
        let hstep = 1e-5;
        for n in 0..=20usize {
            for i in 0..=24 {
                let x = -6.0 + 0.5 * i as f64;
                let fd = (wave_function(n, x + hstep) - wave_function(n, x - hstep)) / (2.0 * hstep);
                let rhs = (n as f64 / 2.0).sqrt() * wave_function_signed(n as i64 - 1, x)
                    - ((n as f64 + 1.0) / 2.0).sqrt() * wave_function(n + 1, x);
                assert!((fd - rhs).abs() < 1e-6, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn scalar_matrix_elements() {
        let r = gauss_hermite(40).unwrap();
        let polys: Vec<_> = (0..=10).map(wave_poly).collect();
        for n in 0..=10 {
            for m in 0..=10 {
                let x1 = r.integrate(|x| x * polys[n].eval(x) * polys[m].eval(x));
                let x2 = r.integrate(|x| x * x * polys[n].eval(x) * polys[m].eval(x));
                let (nf, mf) = (n as f64, m as f64);
                let mut want1 = 0.0;
                if m + 1 == n {
                    want1 += (nf / 2.0).sqrt();
                }
                if m == n + 1 {
                    want1 += ((nf + 1.0) / 2.0).sqrt();
                }
                let mut want2 = 0.0;
                if m + 2 == n {
                    want2 += 0.5 * (nf * (nf - 1.0)).sqrt();
                }
                if m == n {
                    want2 += nf + 0.5;
                }
                if m == n + 2 {
                    want2 += 0.5 * ((nf + 1.0) * (nf + 2.0)).sqrt();
                }
                assert!((x1 - want1).abs() < 1e-10, "x n={n} m={m}");
                assert!((x2 - want2).abs() < 1e-10, "x² n={n} m={m} {x2} {mf}");
            }
        }
    }

    #[test]
    fn quadrature_small_orders() {
        let r1 = gauss_hermite(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - SQRT_PI).abs() < 1e-15);

        let r2 = gauss_hermite(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r2.nodes()[0] + s).abs() < 1e-15);
        assert!((r2.nodes()[1] - s).abs() < 1e-15);
        for w in r2.weights() {
            assert!((w - SQRT_PI / 2.0).abs() < 1e-15);
        }
        assert!(gauss_hermite(0).is_err());
    }

    #[test]
    fn quadrature_tenth_moment() {
        let r = gauss_hermite(30).unwrap();
        let got = r.integrate(|x| x.powi(10));
        let want = 945.0 * SQRT_PI / 32.0;
        assert!((got - want).abs() / want < 1e-12);
    }

    #[test]
    fn cached_rule_is_shared() {
        let a = rule(17).unwrap();
        let b = rule(17).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn rule_invariants(m in 1usize..90) {
            let r = gauss_hermite(m).unwrap();
            let total: f64 = r.weights().iter().sum();
            prop_assert!((total - SQRT_PI).abs() < 1e-12);
            for i in 0..m {
                prop_assert_eq!(r.nodes()[i], -r.nodes()[m - 1 - i]);
                prop_assert_eq!(r.weights()[i], r.weights()[m - 1 - i]);
                prop_assert!(r.weights()[i] > 0.0);
            }
            for p in 0..(2 * m).min(40) {
                let got = r.integrate(|x| x.powi(p as i32));
                let want = moment(p);
                // condition scale of the sum
                let scale = r.integrate(|x| x.abs().powi(p as i32)).max(1.0);
                prop_assert!((got - want).abs() <= 1e-12 * scale, "m={} p={} {} {}", m, p, got, want);
            }
        }
    }
}
