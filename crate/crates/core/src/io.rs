//! File formats: `MatrixGaussian` JSON and CSV tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matpoly::MatrixGaussian;
use crate::CMat;

#[derive(Serialize, Deserialize)]
struct RawGaussian {
    #[serde(rename = "N")]
    size: usize,
    degree: usize,
    /// `C_0..C_d`, each row-major, entries `[re, im]`.
    coeffs: Vec<Vec<[f64; 2]>>,
}

pub fn gaussian_to_json(f: &MatrixGaussian) -> String {
    let n = f.size();
    let raw = RawGaussian {
        size: n,
        degree: f.degree(),
        coeffs: f
            .coeffs()
            .iter()
            .map(|c| {
                (0..n * n)
                    .map(|k| {
                        let z = c[(k / n, k % n)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serializes")
}

pub fn gaussian_from_json(text: &str) -> Result<MatrixGaussian> {
    let raw: RawGaussian = serde_json::from_str(text)?;
    let n = raw.size;
    if n == 0 {
        return Err(Error::Parse("N must be at least 1".into()));
    }
    if raw.coeffs.len() != raw.degree + 1 {
        return Err(Error::Parse(format!(
            "degree {} needs {} coefficients, found {}",
            raw.degree,
            raw.degree + 1,
            raw.coeffs.len()
        )));
    }
    let coeffs = raw
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.len() != n * n {
                return Err(Error::Parse(format!(
                    "coefficient {j} has {} entries, expected {}",
                    c.len(),
                    n * n
                )));
            }
            Ok(CMat::from_row_iterator(
                n,
                n,
                c.iter().map(|&[re, im]| Complex64::new(re, im)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixGaussian::from_coeffs(coeffs)
}

/// Round-trip-safe float formatting.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table with a header row; every cell a float.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MatrixGaussian {
        let c0 = CMat::from_fn(2, 2, |i, j| Complex64::new(i as f64 + 0.1, j as f64 - 0.3));
        let c1 = CMat::from_fn(2, 2, |i, j| Complex64::new(1.0 / 3.0, (i * 2 + j) as f64));
        MatrixGaussian::from_coeffs(vec![c0, c1]).unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let f = sample();
        let back = gaussian_from_json(&gaussian_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_layout_is_row_major() {
        let text = gaussian_to_json(&sample());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["N"], 2);
        assert_eq!(v["degree"], 1);
        // C_0 entry (0, 1) = 0.1 + 0.7i
        assert_eq!(v["coeffs"][0][1][0].as_f64().unwrap(), 0.1);
        assert_eq!(v["coeffs"][0][1][1].as_f64().unwrap(), 0.7);
    }

    #[test]
    fn json_rejects_bad_shapes() {
        let bad = r#"{"N":2,"degree":1,"coeffs":[[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(gaussian_from_json(bad), Err(Error::Parse(_))));
        let bad = r#"{"N":2,"degree":0,"coeffs":[[[0,0]]]}"#;
        assert!(matches!(gaussian_from_json(bad), Err(Error::Parse(_))));
        assert!(matches!(gaussian_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn table_csv() {
        let t = Table {
            header: vec!["x".into(), "n0".into()],
            rows: vec![vec![0.0, 1.0], vec![0.5, 0.25]],
        };
        let csv = t.to_csv();
        assert!(csv.starts_with("x,n0\n"));
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(t.column("n0").unwrap(), vec![1.0, 0.25]);
        assert!(t.column("n9").is_none());
    }
}
