//! Matrix file format:
//!
//! ```text
//! {"rows": n, "cols": m, "data": [[[re, im], ...], ...]}
//! ```
//!
//! `data` is row-major. An entry may be a bare number when its imaginary part
//! is zero. Writing always emits `[re, im]` pairs so that finite doubles
//! (including signed zeros) survive a round trip bit for bit.

use serde_json::{Map, Value};
use thiserror::Error;

use super::{c64, ComplexMatrix, Complex64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("top-level value must be an object")]
    NotAnObject,
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{field}` {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("`data` has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) {reason}")]
    InvalidEntry {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
}

fn dimension(obj: &Map<String, Value>, field: &'static str) -> Result<usize, FormatError> {
    let v = obj.get(field).ok_or(FormatError::MissingField(field))?;
    let n = v.as_u64().ok_or_else(|| FormatError::InvalidField {
        field,
        reason: format!("must be a positive integer, got {v}"),
    })?;
    if n == 0 {
        return Err(FormatError::InvalidField {
            field,
            reason: "must be positive".into(),
        });
    }
    usize::try_from(n).map_err(|_| FormatError::InvalidField {
        field,
        reason: "is too large".into(),
    })
}

fn number(v: &Value, row: usize, col: usize) -> Result<f64, FormatError> {
    let x = v.as_f64().ok_or_else(|| FormatError::InvalidEntry {
        row,
        col,
        reason: format!("expected a number, got {v}"),
    })?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(FormatError::NonFinite { row, col })
    }
}

fn entry(v: &Value, row: usize, col: usize) -> Result<Complex64, FormatError> {
    match v {
        Value::Number(_) => Ok(c64(number(v, row, col)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            Ok(c64(number(&pair[0], row, col)?, number(&pair[1], row, col)?))
        }
        _ => Err(FormatError::InvalidEntry {
            row,
            col,
            reason: "must be a number or a [re, im] pair".into(),
        }),
    }
}

impl ComplexMatrix {
    pub fn from_json_str(text: &str) -> Result<Self, FormatError> {
        let root: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let obj = root.as_object().ok_or(FormatError::NotAnObject)?;
        let rows = dimension(obj, "rows")?;
        let cols = dimension(obj, "cols")?;
        let data = obj
            .get("data")
            .ok_or(FormatError::MissingField("data"))?
            .as_array()
            .ok_or_else(|| FormatError::InvalidField {
                field: "data",
                reason: "must be an array of rows".into(),
            })?;
        if data.len() != rows {
            return Err(FormatError::RowCount {
                expected: rows,
                found: data.len(),
            });
        }
        let mut entries = Vec::with_capacity(data.len().saturating_mul(cols).min(1 << 20));
        for (i, row) in data.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| FormatError::InvalidEntry {
                row: i,
                col: 0,
                reason: "row must be an array".into(),
            })?;
            if row.len() != cols {
                return Err(FormatError::RowLength {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                entries.push(entry(v, i, j)?);
            }
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    pub fn to_json_value(&self) -> Value {
        let data: Vec<Value> = (0..self.rows())
            .map(|i| {
                Value::Array(
                    (0..self.cols())
                        .map(|j| {
                            let z = self.get(i, j);
                            Value::Array(vec![Value::from(z.re), Value::from(z.im)])
                        })
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("rows".into(), Value::from(self.rows()));
        obj.insert("cols".into(), Value::from(self.cols()));
        obj.insert("data".into(), Value::Array(data));
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

impl serde::Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        ComplexMatrix::from_json_str(&value.to_string()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_round_trips() {
        let i = ComplexMatrix::identity(3);
        let back = ComplexMatrix::from_json_str(&i.to_json_string()).unwrap();
        assert_eq!(back, i);
    }

    #[test]
    fn bare_numbers_read_as_real() {
        let m = ComplexMatrix::from_json_str(r#"{"rows":1,"cols":2,"data":[[1.5,[0,2]]]}"#)
            .unwrap();
        assert_eq!(m.get(0, 0), c64(1.5, 0.0));
        assert_eq!(m.get(0, 1), c64(0.0, 2.0));
    }

    #[test]
    fn wrong_row_length_names_the_row() {
        let e = ComplexMatrix::from_json_str(r#"{"rows":2,"cols":2,"data":[[1,2],[3]]}"#)
            .unwrap_err();
        assert_eq!(
            e,
            FormatError::RowLength {
                row: 1,
                expected: 2,
                found: 1
            }
        );
        assert!(e.to_string().contains("row 1"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = ComplexMatrix::from_json_str("{\"rows\": 1,\n \"cols\": }").unwrap_err();
        match e {
            FormatError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_shapes_and_entries() {
        let cases = [
            r#"[1, 2]"#,
            r#"{"cols":1,"data":[[1]]}"#,
            r#"{"rows":0,"cols":1,"data":[]}"#,
            r#"{"rows":-1,"cols":1,"data":[[1]]}"#,
            r#"{"rows":2,"cols":1,"data":[[1]]}"#,
            r#"{"rows":1,"cols":1,"data":[["x"]]}"#,
            r#"{"rows":1,"cols":1,"data":[[[1,2,3]]]}"#,
            r#"{"rows":1,"cols":1,"data":[[1e999]]}"#,
            r#"{"rows":1,"cols":1,"data":[7]}"#,
        ];
        for c in cases {
            assert!(ComplexMatrix::from_json_str(c).is_err(), "{c} accepted");
        }
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |x| x.is_finite()),
            Just(-0.0),
            Just(f64::MIN_POSITIVE),
            Just(f64::MAX),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(
            rows in 1usize..4,
            cols in 1usize..4,
            vals in proptest::collection::vec((finite(), finite()), 16),
        ) {
            let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
                let (re, im) = vals[i * 4 + j];
                c64(re, im)
            });
            let back = ComplexMatrix::from_json_str(&m.to_json_string()).unwrap();
            for (a, b) in m.row_major().iter().zip(back.row_major()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
