//! Matrix JSON: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`,
//! row-major. A bare number is accepted as a real entry.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::matrix::GeneralMatrix;
use crate::error::{HeinzError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Complex([f64; 2]),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryJson>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<GeneralMatrix> {
        let data = self
            .entries
            .iter()
            .map(|e| match *e {
                EntryJson::Complex([re, im]) => C64::new(re, im),
                EntryJson::Real(re) => C64::new(re, 0.0),
            })
            .collect();
        GeneralMatrix::from_vec(self.rows, self.cols, data)
    }
}

impl From<&GeneralMatrix> for MatrixJson {
    fn from(m: &GeneralMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| EntryJson::Complex([z.re, z.im])).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for GeneralMatrix {
    type Error = HeinzError;

    fn try_from(value: MatrixJson) -> Result<Self> {
        value.to_matrix()
    }
}

pub fn parse_matrix(text: &str) -> Result<GeneralMatrix> {
    let json: MatrixJson = serde_json::from_str(text).map_err(|e| HeinzError::Schema(e.to_string()))?;
    json.to_matrix()
}

pub fn matrix_to_json(m: &GeneralMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix json is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_shorthand_and_complex_pairs() {
        let m = parse_matrix(r#"{"rows": 2, "cols": 2, "entries": [1, [0, 2], [0, -2], 3.5]}"#).unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 2.0));
        assert_eq!(m[(1, 1)], C64::new(3.5, 0.0));
    }

    #[test]
    fn schema_errors() {
        assert!(parse_matrix(r#"{"rows": 2, "cols": 2, "entries": [1, 2, 3]}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1, "entries": [[1, 2, 3]]}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 0, "cols": 0, "entries": []}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let m = GeneralMatrix::from_vec(1, 2, vec![C64::new(0.1, -3.0), C64::new(1e-300, 7.0)]).unwrap();
        let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }
}
