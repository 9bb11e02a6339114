//! Dense complex linear algebra: the matrix type, tolerances, Hermitian views
//! and the spectral primitives (eigendecomposition, SVD, square roots,
//! absolute values, pseudoinverse, polar decomposition, functional calculus).

mod json;
mod matrix;
mod spectral;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use json::FormatError;
pub use matrix::{c64, ComplexMatrix};
pub use num_complex::Complex64;
pub use spectral::{
    apply_function, hermitian_eig, hermitian_norm, matrix_scalars, min_eig, operator_abs,
    operator_norm, polar_decompose, pseudo_inverse, psd_sqrt, rank_one, singular_value_decompose, Eigh, MatrixScalars, OperatorAbs,
    PolarDecomposition, Power, SpectralFunction, Svd,
};

/// Relative tolerances used throughout. Every threshold is multiplied by a
/// scale of `max(1, operand norm)` at the point of use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub recon: f64,
    pub rank: f64,
    pub margin: f64,
    pub spec: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-9,
            recon: 1e-10,
            rank: 1e-12,
            margin: 1e-8,
            spec: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.herm, self.psd, self.recon, self.rank, self.margin, self.spec];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidArgument(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.rank < f64::EPSILON {
            return Err(Error::InvalidArgument(
                "rank tolerance is below machine epsilon".into(),
            ));
        }
        Ok(())
    }
}

/// Real interval with optionally infinite, open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidArgument(format!(
                "invalid interval bounds {lower}, {upper}"
            )));
        }
        if (lower_closed && !lower.is_finite()) || (upper_closed && !upper.is_finite()) {
            return Err(Error::InvalidArgument(
                "closed interval endpoints must be finite".into(),
            ));
        }
        Ok(Self {
            lower,
            upper,
            lower_closed,
            upper_closed,
        })
    }

    pub fn real_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            lower_closed: false,
            upper_closed: false,
        }
    }

    pub fn open(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, false, false).expect("valid open interval")
    }

    pub fn closed(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, true, true).expect("valid closed interval")
    }

    /// (0, ∞)
    pub fn positive() -> Self {
        Self::open(0.0, f64::INFINITY)
    }

    /// [0, ∞)
    pub fn nonnegative() -> Self {
        Self::new(0.0, f64::INFINITY, true, false).expect("valid interval")
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lower_closed { t >= self.lower } else { t > self.lower };
        let below = if self.upper_closed { t <= self.upper } else { t < self.upper };
        above && below
    }

    /// Returns `t` if it lies in the interval, the nearest closed endpoint if
    /// `t` overshoots that endpoint by at most `slack`, and `None` otherwise.
    pub fn clamp_within(&self, t: f64, slack: f64) -> Option<f64> {
        if self.contains(t) {
            return Some(t);
        }
        if self.lower_closed && t < self.lower && self.lower - t <= slack {
            return Some(self.lower);
        }
        if self.upper_closed && t > self.upper && t - self.upper <= slack {
            return Some(self.upper);
        }
        None
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lower_closed { '[' } else { '(' };
        let r = if self.upper_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lower, self.upper)
    }
}

/// A square matrix accepted as self-adjoint. The stored value is the
/// symmetrized `(M + M*)/2`; the original defect is kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianView {
    matrix: ComplexMatrix,
    defect: f64,
}

impl HermitianView {
    pub fn new(m: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        m.ensure_square()?;
        let defect = m.hermitian_defect();
        if defect > tol.herm {
            return Err(Error::NotHermitian {
                defect,
                tol: tol.herm,
            });
        }
        Ok(Self {
            matrix: m.hermitian_part(),
            defect,
        })
    }

    /// Symmetrizes without a defect check. Used on values that are Hermitian
    /// by construction (products like X*AX) where only rounding is removed.
    pub fn symmetrize(m: &ComplexMatrix) -> Result<Self> {
        m.ensure_square()?;
        Ok(Self {
            defect: m.hermitian_defect(),
            matrix: m.hermitian_part(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}
