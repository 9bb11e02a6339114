#![allow(dead_code)]

use loewner::harness::TrialRng;
use loewner::harness::trial_rng;
use loewner::linalg::{hermitian_eig, ComplexMatrix, HermitianView, Tolerances};

pub const DIMS: [usize; 4] = [2, 3, 4, 8];

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn rng(label: &str, i: u64) -> TrialRng {
    trial_rng(0x5eed, label, i)
}

pub fn view(m: &ComplexMatrix) -> HermitianView {
    HermitianView::symmetrize(m).expect("square")
}

pub fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).expect("finite")
}

pub fn min_eig(m: &ComplexMatrix) -> f64 {
    hermitian_eig(&view(m)).expect("eig").min()
}

pub fn max_eig(m: &ComplexMatrix) -> f64 {
    hermitian_eig(&view(m)).expect("eig").max()
}

/// Smallest eigenvalue of `larger − smaller`, relative to their size.
pub fn order_gap(smaller: &ComplexMatrix, larger: &ComplexMatrix) -> f64 {
    let scale = smaller.frobenius_norm().max(larger.frobenius_norm()).max(1.0);
    min_eig(&(larger - smaller)) / scale
}

/// Rank-k PSD matrix G G* with G n×k, unit norm.
pub fn low_rank_psd(rng: &mut TrialRng, n: usize, k: usize) -> ComplexMatrix {
    let g = loewner::harness::generate::ginibre(rng, n, k);
    let w = (&g * g.adjoint()).hermitian_part();
    let norm = loewner::linalg::operator_norm(&w).expect("norm");
    w.scale(1.0 / norm)
}
