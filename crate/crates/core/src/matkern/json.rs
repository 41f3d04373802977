use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// On-disk matrix format: `{"n": int, "re": [[..]], "im": [[..]]}`, row-major.
/// `im` may be omitted for real matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = if m.iter().all(|z| z.im == 0.0) {
            None
        } else {
            Some((0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect())
        };
        Self { n, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Format("n must be at least 1".into()));
        }
        check_shape("re", &self.re, n)?;
        if let Some(im) = &self.im {
            check_shape("im", im, n)?;
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.re[i][j], im)
        }))
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix JSON serialization cannot fail")
    }

    /// Reads and validates a Hermitian matrix file.
    pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)?.to_hermitian()
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.as_matrix())
    }
}

fn check_shape(field: &str, rows: &[Vec<f64>], n: usize) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("\"{field}\" must be an {n}x{n} array")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_matrix_without_im() {
        let m = MatrixJson::from_json_str(r#"{"n": 2, "re": [[0.5, 0.1], [0.1, 0.5]]}"#)
            .unwrap()
            .to_hermitian()
            .unwrap();
        assert_eq!(m.as_matrix()[(0, 1)], Complex64::new(0.1, 0.0));
    }

    #[test]
    fn roundtrip_complex() {
        let text = r#"{"n": 2, "re": [[1.0, 0.2], [0.2, 2.0]], "im": [[0.0, -0.3], [0.3, 0.0]]}"#;
        let j = MatrixJson::from_json_str(text).unwrap();
        let h = j.to_hermitian().unwrap();
        assert_eq!(MatrixJson::from(&h), j);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MatrixJson::from_json_str(r#"{"n": 2, "re": [[1.0, 0.0]]}"#)
            .unwrap()
            .to_matrix()
            .is_err());
        assert!(MatrixJson::from_json_str(r#"{"n": 2, "re": [[1.0], [0.0, 1.0]]}"#)
            .unwrap()
            .to_matrix()
            .is_err());
        assert!(MatrixJson::from_json_str("{not json").is_err());
    }
}
