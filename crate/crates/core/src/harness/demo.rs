//! The introductory counterexamples, rebuilt from their exact matrices.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matrix_scalars, ComplexMatrix, HermitianView, Tolerances};
use crate::maps::MapDescriptor;
use crate::positivity::BlockTwo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemoCase {
    MoorePenrose,
    DetShift,
    Transpose,
}

impl DemoCase {
    pub const ALL: [DemoCase; 3] = [DemoCase::MoorePenrose, DemoCase::DetShift, DemoCase::Transpose];

    pub fn name(self) -> &'static str {
        match self {
            DemoCase::MoorePenrose => "moore-penrose",
            DemoCase::DetShift => "det-shift",
            DemoCase::Transpose => "transpose",
        }
    }
}

impl fmt::Display for DemoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DemoCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown demo case `{s}`")))
    }
}

/// A PSD input block whose image under Φ₂ is not PSD.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub case: DemoCase,
    pub map: String,
    pub input: ComplexMatrix,
    pub input_eigenvalues: Vec<f64>,
    pub image: ComplexMatrix,
    pub image_eigenvalues: Vec<f64>,
    pub image_min_eig: f64,
    pub image_determinant: f64,
    pub input_psd: bool,
    pub image_psd: bool,
}

impl DemoReport {
    /// The image is a witness when the input is PSD and the image is not.
    pub fn is_witness(&self) -> bool {
        self.input_psd && !self.image_psd
    }
}

fn real(rows: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&rows).expect("finite entries")
}

/// [A, C; C*, B] with A = diag(1, 0), B = 2·ones, C = [1 1; 0 0].
pub fn weak_witness_block() -> BlockTwo {
    let a = real([[1.0, 0.0], [0.0, 0.0]]);
    let b = real([[2.0, 2.0], [2.0, 2.0]]);
    let c = real([[1.0, 1.0], [0.0, 0.0]]);
    BlockTwo::hermitian(&a, &c, &b).expect("2x2 parts")
}

/// [2I, I; I, 2I] on M_2.
pub fn doubled_identity_block() -> BlockTwo {
    let i = ComplexMatrix::identity(2);
    BlockTwo::hermitian(&i.scale(2.0), &i, &i.scale(2.0)).expect("2x2 parts")
}

/// Reproduces one counterexample; `alpha` is the det-shift parameter and is
/// ignored by the other cases.
pub fn demo_paper(case: DemoCase, alpha: f64) -> Result<DemoReport> {
    let (map, block) = match case {
        DemoCase::MoorePenrose => (MapDescriptor::moore_penrose(2)?, doubled_identity_block()),
        DemoCase::DetShift => (MapDescriptor::det_shift(2, alpha)?, weak_witness_block()),
        DemoCase::Transpose => (MapDescriptor::transpose(2)?, weak_witness_block()),
    };
    let tol = Tolerances::default();
    let image = map.ampliate2(&block)?;
    let input_eig = hermitian_eig(&HermitianView::symmetrize(block.assembled())?)?;
    let image_eig = hermitian_eig(&HermitianView::symmetrize(image.assembled())?)?;
    let psd = |e: &crate::linalg::Eigh| e.min() >= -tol.psd * e.spectral_radius().max(1.0);
    let determinant = matrix_scalars(image.assembled(), &tol)?
        .determinant
        .map(|d| d.re)
        .unwrap_or(f64::NAN);
    Ok(DemoReport {
        case,
        map: map.name(),
        input: block.assembled().clone(),
        input_psd: psd(&input_eig),
        image_psd: psd(&image_eig),
        input_eigenvalues: input_eig.values,
        image_min_eig: image_eig.min(),
        image_eigenvalues: image_eig.values,
        image: image.assembled().clone(),
        image_determinant: determinant,
    })
}
