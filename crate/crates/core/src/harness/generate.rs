//! Seeded random instance generators.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::rng::seeded_rng;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_eig, operator_norm, ComplexMatrix, HermitianView, Interval, Tolerances,
};
use crate::means::geometric_mean;
use crate::positivity::BlockTwo;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Ginibre,
    PsdWishart,
    HermitianInInterval(Interval),
    Contraction,
    Unitary,
    /// n×k with orthonormal columns.
    IsometryColumns(usize),
    PsdWeakBlock,
    PsdBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Matrix(ComplexMatrix),
    Block(BlockTwo),
}

impl Generated {
    pub fn matrix(self) -> Option<ComplexMatrix> {
        match self {
            Generated::Matrix(m) => Some(m),
            Generated::Block(_) => None,
        }
    }

    pub fn block(self) -> Option<BlockTwo> {
        match self {
            Generated::Block(b) => Some(b),
            Generated::Matrix(_) => None,
        }
    }
}

/// Deterministic in `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    if spec.dim == 0 {
        return Err(Error::InvalidArgument("generator dimension must be at least 1".into()));
    }
    let mut rng = seeded_rng(spec.seed);
    let n = spec.dim;
    let tol = Tolerances::default();
    Ok(match spec.kind {
        GeneratorKind::Ginibre => Generated::Matrix(ginibre(&mut rng, n, n)),
        GeneratorKind::PsdWishart => Generated::Matrix(psd_wishart(&mut rng, n)),
        GeneratorKind::HermitianInInterval(j) => {
            Generated::Matrix(hermitian_in_interval(&mut rng, n, &j)?)
        }
        GeneratorKind::Contraction => Generated::Matrix(contraction(&mut rng, n)),
        GeneratorKind::Unitary => Generated::Matrix(unitary(&mut rng, n)),
        GeneratorKind::IsometryColumns(k) => Generated::Matrix(isometry_columns(&mut rng, n, k)?),
        GeneratorKind::PsdWeakBlock => Generated::Block(psd_weak_block(&mut rng, n, &tol)?),
        GeneratorKind::PsdBlock => Generated::Block(psd_block(&mut rng, n)),
    })
}

/// I.i.d. standard complex Gaussian entries (E|z|² = 1).
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(s * re, s * im)
    })
}

/// Ginibre scaled by 1/√n, so that the operator norm stays O(1).
pub fn ginibre_operator<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n, n).scale(1.0 / (n as f64).sqrt())
}

/// Standard complex Gaussian vector.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<crate::linalg::Complex64> {
    ginibre(rng, n, 1).row_major()
}

/// Unit vector, uniformly distributed on the sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<crate::linalg::Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// (G + G*)/2 for a scaled Ginibre G.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre_operator(rng, n).hermitian_part()
}

/// G*G normalized to unit operator norm.
pub fn psd_wishart<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let w = (g.adjoint() * g).hermitian_part();
    let norm = operator_norm(&w).unwrap_or(1.0);
    w.scale(1.0 / norm.max(f64::MIN_POSITIVE))
}

/// Uniform on (0, 1).
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Q diag(λ) Q* with Haar-like Q and λ uniform in the interior of `j`
/// (kept 0.05% of the width away from each endpoint).
pub fn hermitian_in_interval<R: Rng + ?Sized>(rng: &mut R, n: usize, j: &Interval) -> Result<ComplexMatrix> {
    if !(j.lower.is_finite() && j.upper.is_finite()) || j.upper <= j.lower {
        return Err(Error::InvalidArgument(format!(
            "spectra are drawn from bounded intervals of positive width, got {j}"
        )));
    }
    let width = j.upper - j.lower;
    let values: Vec<f64> = (0..n)
        .map(|_| j.lower + width * (0.0005 + 0.999 * rng.random::<f64>()))
        .collect();
    let q = unitary(rng, n);
    Ok((&q * ComplexMatrix::from_diagonal(&values) * q.adjoint()).hermitian_part())
}

/// G / (‖G‖ (1 + u)) with u uniform on (0, 1); operator norm below 1.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let u = open_unit(rng);
    let norm = operator_norm(&g).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    g.scale(1.0 / (norm * (1.0 + u)))
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) absorbed.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let qr = g.into_inner().qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<_> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c64(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from(q) * ComplexMatrix::from_complex_diagonal(&phases)
}

/// First k columns of a Haar unitary.
pub fn isometry_columns<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<ComplexMatrix> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("isometry needs 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    Ok(unitary(rng, n).columns(0, k))
}

/// Blocks of a normalized 2n×2n Wishart matrix, read as [A, C; C*, B].
pub fn psd_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BlockTwo {
    let m = psd_wishart(rng, 2 * n);
    BlockTwo::new(
        m.submatrix(0, 0, n, n),
        m.submatrix(0, n, n, n),
        m.submatrix(n, 0, n, n),
        m.submatrix(n, n, n, n),
    )
    .expect("square parts of equal size")
}

/// PSD block [A, C; C, B] with Hermitian C. Half of the draws take
/// C = t (A#B) with t uniform on [−1, 1]; the others take a random Hermitian
/// direction H and scale it to the largest s ∈ [0, 1] for which
/// [A, sH; sH, B] stays PSD, found by bisection on the smallest eigenvalue.
pub fn psd_weak_block<R: Rng + ?Sized>(rng: &mut R, n: usize, tol: &Tolerances) -> Result<BlockTwo> {
    let a = psd_wishart(rng, n);
    let b = psd_wishart(rng, n);
    let c = if rng.random::<bool>() {
        let t = 2.0 * rng.random::<f64>() - 1.0;
        let va = HermitianView::symmetrize(&a)?;
        let vb = HermitianView::symmetrize(&b)?;
        geometric_mean(&va, &vb, tol)?.scale(t)
    } else {
        let h = hermitian(rng, n);
        let min_at = |s: f64| -> Result<f64> {
            let blk = ComplexMatrix::block2(&a, &h.scale(s), &h.scale(s), &b)?;
            Ok(hermitian_eig(&HermitianView::symmetrize(&blk)?)?.min())
        };
        let s = if min_at(1.0)? >= 0.0 {
            1.0
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if min_at(mid)? >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        h.scale(s)
    };
    BlockTwo::weak(&a, &c, &b, tol)
}
