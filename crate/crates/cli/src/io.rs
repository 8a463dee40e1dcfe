//! JSON state and operator files.
//!
//! State: `{"dims": [..], "amplitudes": [[re, im], ..], "label": ..}` with
//! amplitudes in row-major (first factor slowest) order.
//! Operator: `{"dims": [..], "matrix": [[[re, im], ..], ..], "label": ..}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use smaps::{ComplexMatrix, MultiVector};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl StateFile {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CliError::Input(e.to_string()))
    }

    #[cfg(test)]
    fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn to_vector(&self) -> Result<MultiVector> {
        let amps = self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(MultiVector::new(self.dims.clone(), amps)?)
    }
}

impl OperatorFile {
    pub fn load(path: &Path) -> Result<Self> {
        parse(path)
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows: Vec<Vec<Complex64>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows)?;
        let n: usize = self.dims.iter().product();
        if self.dims.is_empty() || m.rows() != n || m.cols() != n {
            return Err(CliError::Input(format!(
                "{}x{} matrix declared with dims {:?}",
                m.rows(),
                m.cols(),
                self.dims
            )));
        }
        Ok(m)
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector(v: &[Complex64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(&m.row(i))).collect())
}

pub fn state(v: &MultiVector) -> Value {
    json!({ "dims": v.dims(), "amplitudes": vector(v.amplitudes()) })
}

/// Echo of a state file for the report's `inputs` section.
pub fn echo_state(path: &Path, s: &StateFile) -> Value {
    json!({
        "file": path.display().to_string(),
        "dims": s.dims,
        "amplitudes": s.amplitudes,
        "label": s.label,
    })
}

pub fn echo_operator(path: &Path, o: &OperatorFile) -> Value {
    json!({
        "file": path.display().to_string(),
        "dims": o.dims,
        "matrix": o.matrix,
        "label": o.label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let src = r#"{"dims":[2,2],"amplitudes":[[0.7071067811865476,0.0],[0.0,0.0],[0.1,-0.3],[1e-17,2.5]],"label":"x"}"#;
        let s = StateFile::from_json(src).unwrap();
        let again = StateFile::from_json(&s.to_json()).unwrap();
        assert_eq!(s, again);
        for (a, b) in s.amplitudes.iter().zip(&again.amplitudes) {
            assert_eq!(a[0].to_bits(), b[0].to_bits());
            assert_eq!(a[1].to_bits(), b[1].to_bits());
        }
        assert_eq!(s.to_json(), src);
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let s = StateFile::from_json(r#"{"dims":[2,2],"amplitudes":[[1,0]]}"#).unwrap();
        assert!(matches!(s.to_vector(), Err(CliError::Input(_))));
        assert!(StateFile::from_json(r#"{"dims":[2],"amps":[]}"#).is_err());
    }
}
