//! Textual map descriptors `name[:params]` as accepted on the command line:
//!
//! ```text
//! transpose[:n]            moore-penrose[:n]      normalized-trace[:n]
//! identity[:n]             det-shift[:alpha]      vector-state[:k | :@e.json]
//! compression:@v.json      pinching:1,2|3,4       kraus:@k1.json,@k2.json
//! ```
//!
//! Indices are 1-based. Parsing is purely syntactic; [`MapSpec::resolve`]
//! loads referenced files and validates the result.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::MapDescriptor;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapSpecError {
    #[error("empty map descriptor")]
    Empty,
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("map `{map}` requires parameters")]
    MissingParams { map: &'static str },
    #[error("map `{map}`: {reason}")]
    BadParams { map: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorSpec {
    /// 1-based standard basis index.
    Basis(usize),
    File(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Transpose { dim: Option<usize> },
    MoorePenrose { dim: Option<usize> },
    NormalizedTrace { dim: Option<usize> },
    Identity { dim: Option<usize> },
    DetShift { alpha: f64 },
    VectorState(VectorSpec),
    Compression { file: String },
    /// 1-based indices.
    Pinching { blocks: Vec<Vec<usize>> },
    Kraus { files: Vec<String> },
}

fn bad(map: &'static str, reason: impl Into<String>) -> MapSpecError {
    MapSpecError::BadParams {
        map,
        reason: reason.into(),
    }
}

fn positive_index(map: &'static str, s: &str) -> Result<usize, MapSpecError> {
    match s.trim().parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(bad(map, format!("`{s}` is not a positive integer"))),
    }
}

fn optional_dim(map: &'static str, params: Option<&str>) -> Result<Option<usize>, MapSpecError> {
    params.map(|p| positive_index(map, p)).transpose()
}

fn file_ref(map: &'static str, s: &str) -> Result<String, MapSpecError> {
    match s.trim().strip_prefix('@') {
        Some(path) if !path.is_empty() => Ok(path.to_string()),
        _ => Err(bad(map, format!("expected @file, got `{s}`"))),
    }
}

impl FromStr for MapSpec {
    type Err = MapSpecError;

    fn from_str(s: &str) -> Result<Self, MapSpecError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(MapSpecError::Empty);
        }
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (s, None),
        };
        let name = name.to_ascii_lowercase().replace('_', "-");
        match name.as_str() {
            "transpose" => Ok(MapSpec::Transpose {
                dim: optional_dim("transpose", params)?,
            }),
            "moore-penrose" => Ok(MapSpec::MoorePenrose {
                dim: optional_dim("moore-penrose", params)?,
            }),
            "normalized-trace" => Ok(MapSpec::NormalizedTrace {
                dim: optional_dim("normalized-trace", params)?,
            }),
            "identity" => Ok(MapSpec::Identity {
                dim: optional_dim("identity", params)?,
            }),
            "det-shift" => {
                let alpha = match params {
                    None => 1.0,
                    Some(p) => p
                        .trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|a| a.is_finite() && *a >= 0.0)
                        .ok_or_else(|| bad("det-shift", format!("`{p}` is not a nonnegative number")))?,
                };
                Ok(MapSpec::DetShift { alpha })
            }
            "vector-state" => match params {
                None => Ok(MapSpec::VectorState(VectorSpec::Basis(1))),
                Some(p) if p.trim_start().starts_with('@') => {
                    Ok(MapSpec::VectorState(VectorSpec::File(file_ref("vector-state", p)?)))
                }
                Some(p) => Ok(MapSpec::VectorState(VectorSpec::Basis(positive_index(
                    "vector-state",
                    p,
                )?))),
            },
            "compression" => {
                let p = params.ok_or(MapSpecError::MissingParams { map: "compression" })?;
                Ok(MapSpec::Compression {
                    file: file_ref("compression", p)?,
                })
            }
            "pinching" => {
                let p = params.ok_or(MapSpecError::MissingParams { map: "pinching" })?;
                let blocks = p
                    .split('|')
                    .map(|b| {
                        b.split(',')
                            .map(|i| positive_index("pinching", i))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MapSpec::Pinching { blocks })
            }
            "kraus" => {
                let p = params.ok_or(MapSpecError::MissingParams { map: "kraus" })?;
                let files = p
                    .split(',')
                    .map(|f| file_ref("kraus", f))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MapSpec::Kraus { files })
            }
            _ => Err(MapSpecError::UnknownMap(name)),
        }
    }
}

impl MapSpec {
    /// Builds the descriptor. `default_dim` applies to maps without an
    /// explicit size; `load` reads referenced matrix files.
    pub fn resolve<L>(&self, default_dim: usize, mut load: L, tol: &Tolerances) -> Result<MapDescriptor>
    where
        L: FnMut(&str) -> Result<ComplexMatrix>,
    {
        match self {
            MapSpec::Transpose { dim } => MapDescriptor::transpose(dim.unwrap_or(default_dim)),
            MapSpec::MoorePenrose { dim } => MapDescriptor::moore_penrose(dim.unwrap_or(default_dim)),
            MapSpec::NormalizedTrace { dim } => {
                MapDescriptor::normalized_trace(dim.unwrap_or(default_dim))
            }
            MapSpec::Identity { dim } => MapDescriptor::identity(dim.unwrap_or(default_dim)),
            MapSpec::DetShift { alpha } => MapDescriptor::det_shift(default_dim, *alpha),
            MapSpec::VectorState(VectorSpec::Basis(k)) => MapDescriptor::basis_state(default_dim, k - 1),
            MapSpec::VectorState(VectorSpec::File(path)) => {
                let m = load(path)?;
                if m.cols() != 1 {
                    return Err(Error::dims(format!("{path}: state vector must be a single column")));
                }
                MapDescriptor::vector_state((0..m.rows()).map(|i| m.get(i, 0)).collect(), tol)
            }
            MapSpec::Compression { file } => MapDescriptor::compression(load(file)?, tol),
            MapSpec::Pinching { blocks } => {
                let n = blocks.iter().map(Vec::len).sum();
                let zero_based = blocks
                    .iter()
                    .map(|b| b.iter().map(|i| i - 1).collect())
                    .collect();
                MapDescriptor::pinching(n, zero_based)
            }
            MapSpec::Kraus { files } => {
                let ops = files.iter().map(|f| load(f)).collect::<Result<Vec<_>>>()?;
                MapDescriptor::kraus(ops)
            }
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = |f: &mut fmt::Formatter<'_>, name: &str, d: &Option<usize>| match d {
            Some(n) => write!(f, "{name}:{n}"),
            None => f.write_str(name),
        };
        match self {
            MapSpec::Transpose { dim: d } => dim(f, "transpose", d),
            MapSpec::MoorePenrose { dim: d } => dim(f, "moore-penrose", d),
            MapSpec::NormalizedTrace { dim: d } => dim(f, "normalized-trace", d),
            MapSpec::Identity { dim: d } => dim(f, "identity", d),
            MapSpec::DetShift { alpha } => write!(f, "det-shift:{alpha}"),
            MapSpec::VectorState(VectorSpec::Basis(k)) => write!(f, "vector-state:{k}"),
            MapSpec::VectorState(VectorSpec::File(p)) => write!(f, "vector-state:@{p}"),
            MapSpec::Compression { file } => write!(f, "compression:@{file}"),
            MapSpec::Pinching { blocks } => {
                let parts: Vec<String> = blocks
                    .iter()
                    .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "pinching:{}", parts.join("|"))
            }
            MapSpec::Kraus { files } => {
                let parts: Vec<String> = files.iter().map(|p| format!("@{p}")).collect();
                write!(f, "kraus:{}", parts.join(","))
            }
        }
    }
}
