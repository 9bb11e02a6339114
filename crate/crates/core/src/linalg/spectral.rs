use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, HermitianView, Interval, Tolerances};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Q · diag(values) · Q*, symmetrized.
    pub fn reassemble(&self, values: &[f64]) -> ComplexMatrix {
        debug_assert_eq!(values.len(), self.values.len());
        let q = self.vectors.as_inner();
        let mut scaled = q.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        ComplexMatrix::from(scaled * q.adjoint()).hermitian_part()
    }
}

pub fn hermitian_eig(m: &HermitianView) -> Result<Eigh> {
    let n = m.dim();
    let eig = SymmetricEigen::try_new(m.matrix().as_inner().clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NonConvergence("Hermitian eigendecomposition"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh {
        values,
        vectors: vectors.into(),
    })
}

/// Thin SVD `M = U Σ V*` with singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rel · σ_max`.
    pub fn rank(&self, rel: f64) -> usize {
        let cut = rel * self.largest();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// One-sided Jacobi SVD. Columns of the working copy of M are rotated in
/// pairs until mutually orthogonal; their norms are the singular values.
/// Wide matrices go through M*.
pub fn singular_value_decompose(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = singular_value_decompose(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (rows, k) = m.shape();
    let mut a = m.as_inner().clone();
    let mut v = DMatrix::<Complex64>::identity(k, k);
    // below a few ulps the rounding of a rotation exceeds what it removes
    let threshold = (rows as f64).max(4.0) * f64::EPSILON;
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence("singular value decomposition"));
    }
    let norms: Vec<f64> = (0..k).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let largest = singular_values.first().copied().unwrap_or(0.0);
    let mut u = DMatrix::<Complex64>::zeros(rows, k);
    let mut filled = 0;
    for (col, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > 0.0 && s > f64::EPSILON * largest {
            u.set_column(col, &(a.column(j) / Complex64::new(s, 0.0)));
            filled = col + 1;
        }
    }
    complete_orthonormal(&mut u, filled);
    let v = DMatrix::from_fn(k, k, |i, j| v[(i, order[j])]);
    Ok(Svd {
        u: u.into(),
        singular_values,
        v: v.into(),
    })
}

const JACOBI_SWEEPS: usize = 100;

/// Columns p, q ← (c·x_p − s·e^{−iφ}x_q, s·x_p + c·e^{−iφ}x_q).
fn rotate(m: &mut DMatrix<Complex64>, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let conj = phase.conj();
    for i in 0..m.nrows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * conj;
        m[(i, p)] = xp * c - xq * s;
        m[(i, q)] = xp * s + xq * c;
    }
}

/// Replaces columns `from..` with unit vectors orthogonal to all earlier
/// columns: each is the standard basis vector with the largest component
/// outside their span, orthogonalized twice.
fn complete_orthonormal(u: &mut DMatrix<Complex64>, from: usize) {
    let rows = u.nrows();
    for col in from..u.ncols() {
        let residual = |i: usize| {
            let mut x = DMatrix::<Complex64>::zeros(rows, 1);
            x[(i, 0)] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for j in 0..col {
                    let proj = u.column(j).dotc(&x.column(0));
                    x -= u.column(j) * proj;
                }
            }
            x
        };
        let best = (0..rows)
            .map(residual)
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("at least one row");
        let norm = best.norm();
        u.set_column(col, &(best.column(0) / Complex64::new(norm, 0.0)));
    }
}

/// U · diag(s) · W* for column blocks U, W.
fn weighted_outer(u: &ComplexMatrix, s: &[f64], w: &ComplexMatrix) -> ComplexMatrix {
    let mut scaled = u.as_inner().clone();
    for (j, &sj) in s.iter().enumerate() {
        scaled.column_mut(j).scale_mut(sj);
    }
    ComplexMatrix::from(scaled * w.as_inner().adjoint())
}

/// Principal square root of a positive semidefinite matrix. Negative
/// eigenvalues within `tol.psd · max(1, ‖M‖)` are clamped to zero.
pub fn psd_sqrt(m: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let scale = eig.spectral_radius().max(1.0);
    if eig.min() < -tol.psd * scale {
        return Err(Error::NotPsd { min_eig: eig.min() });
    }
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(eig.reassemble(&roots))
}

/// |M| = (M*M)^{1/2} together with |M*| = (MM*)^{1/2}.
#[derive(Debug, Clone)]
pub struct OperatorAbs {
    pub abs: ComplexMatrix,
    pub abs_adjoint: ComplexMatrix,
}

pub fn operator_abs(m: &ComplexMatrix) -> Result<OperatorAbs> {
    let svd = singular_value_decompose(m)?;
    let s = &svd.singular_values;
    Ok(OperatorAbs {
        abs: weighted_outer(&svd.v, s, &svd.v).hermitian_part(),
        abs_adjoint: weighted_outer(&svd.u, s, &svd.u).hermitian_part(),
    })
}

/// Moore–Penrose inverse. Singular values at or below `tol.rank · σ_max`
/// are treated as zero.
pub fn pseudo_inverse(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let svd = singular_value_decompose(m)?;
    let cut = tol.rank * svd.largest();
    let inv: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&s| if s > cut { 1.0 / s } else { 0.0 })
        .collect();
    Ok(weighted_outer(&svd.v, &inv, &svd.u))
}

/// `A = U |A|` with U a partial isometry and ker U = ker |A|.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub isometry: ComplexMatrix,
    pub positive: ComplexMatrix,
    pub rank: usize,
}

pub fn polar_decompose(m: &ComplexMatrix, tol: &Tolerances) -> Result<PolarDecomposition> {
    m.ensure_square()?;
    let svd = singular_value_decompose(m)?;
    let rank = svd.rank(tol.rank);
    let n = m.rows();
    let isometry = if rank == 0 {
        ComplexMatrix::zeros(n, n)
    } else {
        svd.u.columns(0, rank) * svd.v.columns(0, rank).adjoint()
    };
    let positive = weighted_outer(&svd.v, &svd.singular_values, &svd.v).hermitian_part();
    Ok(PolarDecomposition {
        isometry,
        positive,
        rank,
    })
}

/// A real function with a domain interval, applied to Hermitian matrices
/// through the spectral theorem.
pub trait SpectralFunction {
    fn domain(&self) -> Interval;
    fn eval(&self, t: f64) -> f64;
}

/// t ↦ t^p on [0, ∞), for fractional powers such as |X|^{3/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Power(pub f64);

impl SpectralFunction for Power {
    fn domain(&self) -> Interval {
        Interval::nonnegative()
    }

    fn eval(&self, t: f64) -> f64 {
        t.powf(self.0)
    }
}

/// Q f(Λ) Q*. Eigenvalues may overshoot a closed endpoint of the domain by
/// `tol.spec · max(1, ‖M‖)` and are then clamped onto it.
pub fn apply_function<F>(f: &F, m: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix>
where
    F: SpectralFunction + ?Sized,
{
    let eig = hermitian_eig(m)?;
    let domain = f.domain();
    let slack = tol.spec * eig.spectral_radius().max(1.0);
    let mut mapped = Vec::with_capacity(eig.values.len());
    for &l in &eig.values {
        let t = domain.clamp_within(l, slack).ok_or(Error::SpectrumViolation {
            value: l,
            interval: domain,
        })?;
        mapped.push(f.eval(t));
    }
    Ok(eig.reassemble(&mapped))
}

/// x ⊗ ȳ, the operator z ↦ ⟨z, y⟩ x, as the matrix x y*.
pub fn rank_one(x: &[Complex64], y: &[Complex64]) -> Result<ComplexMatrix> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::dims(format!(
            "rank-one factors of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj()))
}

#[derive(Debug, Clone)]
pub struct MatrixScalars {
    pub trace: Option<Complex64>,
    pub determinant: Option<Complex64>,
    pub operator_norm: f64,
    pub min_hermitian_eig: Option<f64>,
    pub spectrum: Option<Vec<f64>>,
}

pub fn matrix_scalars(m: &ComplexMatrix, tol: &Tolerances) -> Result<MatrixScalars> {
    let operator_norm = singular_value_decompose(m)?.largest();
    if !m.is_square() {
        return Ok(MatrixScalars {
            trace: None,
            determinant: None,
            operator_norm,
            min_hermitian_eig: None,
            spectrum: None,
        });
    }
    let determinant = m.as_inner().clone().lu().determinant();
    let spectrum = if m.hermitian_defect() <= tol.herm {
        Some(hermitian_eig(&HermitianView::symmetrize(m)?)?.values)
    } else {
        None
    };
    Ok(MatrixScalars {
        trace: Some(m.trace()),
        determinant: Some(determinant),
        operator_norm,
        min_hermitian_eig: spectrum.as_ref().and_then(|s| s.first().copied()),
        spectrum,
    })
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_value_decompose(m)?.largest())
}

/// Spectral radius of a Hermitian matrix, which is its operator norm.
pub fn hermitian_norm(m: &HermitianView) -> Result<f64> {
    Ok(hermitian_eig(m)?.spectral_radius())
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(&HermitianView::symmetrize(m)?)?.min())
}
