//! Catalog of operator convex functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{Interval, SpectralFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    /// t² on ℝ
    Square,
    /// 1/t on (0, ∞)
    Inverse,
    /// −√t on [0, ∞)
    NegSqrt,
    /// −log t on (0, ∞)
    NegLog,
    /// t log t on (0, ∞)
    TLogT,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 5] = [
        FunctionKind::Square,
        FunctionKind::Inverse,
        FunctionKind::NegSqrt,
        FunctionKind::NegLog,
        FunctionKind::TLogT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Square => "square",
            FunctionKind::Inverse => "inverse",
            FunctionKind::NegSqrt => "neg_sqrt",
            FunctionKind::NegLog => "neg_log",
            FunctionKind::TLogT => "t_log_t",
        }
    }
}

/// An operator convex function together with its domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    pub kind: FunctionKind,
    pub domain: Interval,
}

impl FunctionDescriptor {
    pub fn new(kind: FunctionKind) -> Self {
        let domain = match kind {
            FunctionKind::Square => Interval::real_line(),
            FunctionKind::NegSqrt => Interval::nonnegative(),
            FunctionKind::Inverse | FunctionKind::NegLog | FunctionKind::TLogT => {
                Interval::positive()
            }
        };
        Self { kind, domain }
    }

    pub fn catalog() -> Vec<Self> {
        FunctionKind::ALL.iter().map(|&k| Self::new(k)).collect()
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Evaluates at a scalar, refusing points outside the domain.
    pub fn at(&self, t: f64) -> Result<f64, Error> {
        if self.domain.contains(t) {
            Ok(self.eval(t))
        } else {
            Err(Error::SpectrumViolation {
                value: t,
                interval: self.domain,
            })
        }
    }
}

impl SpectralFunction for FunctionDescriptor {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn eval(&self, t: f64) -> f64 {
        match self.kind {
            FunctionKind::Square => t * t,
            FunctionKind::Inverse => 1.0 / t,
            FunctionKind::NegSqrt => -t.sqrt(),
            FunctionKind::NegLog => -t.ln(),
            FunctionKind::TLogT => t * t.ln(),
        }
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.name(), self.domain)
    }
}

impl FromStr for FunctionDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().replace('-', "_");
        FunctionKind::ALL
            .iter()
            .find(|k| k.name() == key)
            .map(|&k| Self::new(k))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown function `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply_function, ComplexMatrix, HermitianView, Tolerances};

    #[test]
    fn domains_match_catalog() {
        let f = |k| FunctionDescriptor::new(k).domain;
        assert_eq!(f(FunctionKind::Square), Interval::real_line());
        assert_eq!(f(FunctionKind::NegSqrt), Interval::nonnegative());
        for k in [FunctionKind::Inverse, FunctionKind::NegLog, FunctionKind::TLogT] {
            assert_eq!(f(k), Interval::positive());
        }
    }

    #[test]
    fn parses_names() {
        let f: FunctionDescriptor = "t-log-t".parse().unwrap();
        assert_eq!(f.kind, FunctionKind::TLogT);
        assert!("cube".parse::<FunctionDescriptor>().is_err());
    }

    #[test]
    fn neg_log_of_identity_is_zero() {
        let tol = Tolerances::default();
        let f = FunctionDescriptor::new(FunctionKind::NegLog);
        let i = HermitianView::new(&ComplexMatrix::identity(3), &tol).unwrap();
        assert!(apply_function(&f, &i, &tol).unwrap().max_abs() < 1e-15);
        assert!(f.at(0.0).is_err());
    }

    #[test]
    fn midpoint_convexity_on_samples() {
        for f in FunctionDescriptor::catalog() {
            for (a, b) in [(0.2, 3.0), (1.0, 1.5), (0.01, 0.5)] {
                let mid = f.eval((a + b) / 2.0);
                assert!(mid <= (f.eval(a) + f.eval(b)) / 2.0 + 1e-15, "{f}");
            }
        }
    }
}
