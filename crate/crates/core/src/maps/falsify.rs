//! Counterexample search for positivity grades.

use serde::Serialize;

use super::{Grade, MapDescriptor};
use crate::error::{Error, Result};
use crate::harness::generate::{psd_block, psd_weak_block};
use crate::harness::rng::trial_rng;
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianView, Tolerances};
use crate::positivity::BlockTwo;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Canonical(&'static str),
    Random { trial: usize },
}

/// `found = false` means the search was inconclusive, not that the map has
/// the grade.
#[derive(Debug, Clone, PartialEq)]
pub struct FalsifyOutcome {
    pub found: bool,
    pub witness: Option<BlockTwo>,
    pub image: Option<BlockTwo>,
    pub source: Option<WitnessSource>,
    /// Smallest eigenvalue of the witness image, or of all images seen when
    /// nothing was found.
    pub min_eig: f64,
    pub trials_run: usize,
}

fn canonical_blocks(n: usize, grade: Grade) -> Vec<(&'static str, BlockTwo)> {
    let i = ComplexMatrix::identity(n);
    let mut out = vec![(
        "[2I, I; I, 2I]",
        BlockTwo::hermitian(&i.scale(2.0), &i, &i.scale(2.0)).expect("equal parts"),
    )];
    if grade == Grade::TwoPositive && n == 2 {
        let m = |rows: [[f64; 2]; 2]| ComplexMatrix::from_real_rows(&rows).expect("finite");
        let a = m([[1.0, 0.0], [0.0, 0.0]]);
        let b = m([[2.0, 2.0], [2.0, 2.0]]);
        let c = m([[1.0, 1.0], [0.0, 0.0]]);
        out.push((
            "[A, C; C*, B] with A = diag(1,0), B = 2·ones, C = [1 1; 0 0]",
            BlockTwo::hermitian(&a, &c, &b).expect("equal parts"),
        ));
    }
    out
}

/// Min eigenvalue of Φ₂(block) and its negativity threshold.
fn image_min_eig(map: &MapDescriptor, block: &BlockTwo, tol: &Tolerances) -> Result<(BlockTwo, f64, f64)> {
    let image = map.ampliate2(block)?;
    let e = hermitian_eig(&HermitianView::symmetrize(image.assembled())?)?;
    let threshold = -tol.psd * e.spectral_radius().max(1.0);
    Ok((image, e.min(), threshold))
}

/// Searches the canonical blocks first, then `trials` seeded random PSD
/// blocks of the shape the grade quantifies over, for one whose image under
/// Φ₂ has an eigenvalue below `−tol.psd · scale`.
pub fn falsify_grade(
    map: &MapDescriptor,
    grade: Grade,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FalsifyOutcome> {
    if !matches!(grade, Grade::WeaklyTwoPositive | Grade::TwoPositive) {
        return Err(Error::InvalidArgument(format!(
            "falsification targets weakly_2_positive or two_positive, not {grade}"
        )));
    }
    let n = map.input_dim();
    let mut lowest = f64::INFINITY;
    let hit = |block: BlockTwo, image: BlockTwo, min_eig: f64, source, trials_run| FalsifyOutcome {
        found: true,
        witness: Some(block),
        image: Some(image),
        source: Some(source),
        min_eig,
        trials_run,
    };
    for (name, block) in canonical_blocks(n, grade) {
        let (image, min, threshold) = image_min_eig(map, &block, tol)?;
        if min < threshold {
            return Ok(hit(block, image, min, WitnessSource::Canonical(name), 0));
        }
        lowest = lowest.min(min);
    }
    for t in 0..trials {
        let mut rng = trial_rng(seed, "falsify", t as u64);
        let block = match grade {
            Grade::WeaklyTwoPositive => psd_weak_block(&mut rng, n, tol)?,
            _ => psd_block(&mut rng, n),
        };
        let (image, min, threshold) = image_min_eig(map, &block, tol)?;
        if min < threshold {
            return Ok(hit(block, image, min, WitnessSource::Random { trial: t }, t + 1));
        }
        lowest = lowest.min(min);
    }
    Ok(FalsifyOutcome {
        found: false,
        witness: None,
        image: None,
        source: None,
        min_eig: lowest,
        trials_run: trials,
    })
}
