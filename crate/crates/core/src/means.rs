//! Operator geometric mean `A#B` and harmonic mean `A!B` of positive
//! semidefinite matrices, and the block characterizations
//!
//! ```text
//! A#B = max{X = X* : [A, X; X, B] ≥ 0}
//! A!B = max{X = X* : [X, X; X, X] ≤ [2A, 0; 0, 2B]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hermitian_norm, singular_value_decompose, ComplexMatrix, Eigh,
    HermitianView, Tolerances,
};
use crate::outcome::{CheckOutcome, OutcomeBuilder};
use crate::positivity::{loewner_leq, BlockTwo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Geometric,
    Harmonic,
    ParallelSum,
}

impl MeanKind {
    pub fn name(self) -> &'static str {
        match self {
            MeanKind::Geometric => "geometric",
            MeanKind::Harmonic => "harmonic",
            MeanKind::ParallelSum => "parallel_sum",
        }
    }
}

/// Minimum cosine for a principal angle to count as a shared direction of
/// two ranges.
const SHARED_DIRECTION: f64 = 1.0 - 1e-6;
const EPS_STEPS: i32 = 7;
const EPS_CONVERGED: f64 = 1e-8;

fn same_dim(a: &HermitianView, b: &HermitianView) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::dims(format!(
            "mean of {}x{} and {}x{} operands",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )))
    }
}

/// Eigendecomposition of a PSD operand with rounding-level negatives clamped.
fn psd_eig(m: &HermitianView, tol: &Tolerances) -> Result<Eigh> {
    let mut e = hermitian_eig(m)?;
    let scale = e.spectral_radius().max(1.0);
    if e.min() < -tol.psd * scale {
        return Err(Error::NotPsd { min_eig: e.min() });
    }
    for l in &mut e.values {
        *l = l.max(0.0);
    }
    Ok(e)
}

fn map_eig(e: &Eigh, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let vals: Vec<f64> = e.values.iter().map(|&l| f(l)).collect();
    e.reassemble(&vals)
}

/// `base^{1/2} (base^{-1/2} other base^{-1/2})^{1/2} base^{1/2}`; `base` must
/// be invertible, `other` only PSD.
fn mean_over_base(base: &Eigh, other: &ComplexMatrix) -> Result<ComplexMatrix> {
    let half = map_eig(base, f64::sqrt);
    let inv_half = map_eig(base, |l| 1.0 / l.sqrt());
    let inner = HermitianView::symmetrize(&(&inv_half * other * &inv_half))?;
    let root = map_eig(&hermitian_eig(&inner)?, |l| l.max(0.0).sqrt());
    Ok(&half * root * &half)
}

fn conditioning(e: &Eigh) -> f64 {
    if e.max() > 0.0 {
        e.min() / e.max()
    } else {
        0.0
    }
}

/// Mean of two PSD operands at least one of which is invertible; the better
/// conditioned one serves as the base.
fn mean_one_invertible(ea: &Eigh, a: &ComplexMatrix, eb: &Eigh, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if conditioning(ea) >= conditioning(eb) {
        mean_over_base(ea, b)
    } else {
        mean_over_base(eb, a)
    }
}

/// Columns of the eigenvectors whose eigenvalues exceed `cut`.
fn range_basis(e: &Eigh, cut: f64) -> ComplexMatrix {
    let keep: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > cut).collect();
    ComplexMatrix::from_fn(e.vectors.rows(), keep.len(), |i, j| e.vectors.get(i, keep[j]))
}

/// Shorted operator of a PSD matrix onto a subspace of its range, expressed
/// in the subspace basis: `(Q* A† Q)^{-1}`.
fn short_onto(e: &Eigh, cut: f64, q: &ComplexMatrix) -> Result<Eigh> {
    let pinv = map_eig(e, |l| if l > cut { 1.0 / l } else { 0.0 });
    let compressed = HermitianView::symmetrize(&(q.adjoint() * pinv * q))?;
    let ce = hermitian_eig(&compressed)?;
    let inv = map_eig(&ce, |l| 1.0 / l);
    hermitian_eig(&HermitianView::symmetrize(&inv)?)
}

/// Geometric mean of PSD matrices.
///
/// When one operand is invertible the closed form over that operand is used.
/// When both are singular, every feasible X lives on `M = ran A ∩ ran B`, and
/// `A#B` equals the mean of the shorted operators `A_M # B_M` computed on M.
pub fn geometric_mean(a: &HermitianView, b: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    let ea = psd_eig(a, tol)?;
    let eb = psd_eig(b, tol)?;
    let n = a.dim();
    let scale = ea.max().max(eb.max()).max(1.0);
    let cut = tol.rank * scale;
    let full_a = ea.min() > cut;
    let full_b = eb.min() > cut;
    let pa = map_eig(&ea, |l| l);
    let pb = map_eig(&eb, |l| l);
    let g = if full_a || full_b {
        mean_one_invertible(&ea, &pa, &eb, &pb)?
    } else {
        let ra = range_basis(&ea, cut);
        let rb = range_basis(&eb, cut);
        if ra.cols() == 0 || rb.cols() == 0 {
            return Ok(ComplexMatrix::zeros(n, n));
        }
        let overlap = singular_value_decompose(&(ra.adjoint() * &rb))?;
        let k = overlap
            .singular_values
            .iter()
            .filter(|&&s| s >= SHARED_DIRECTION)
            .count();
        if k == 0 {
            return Ok(ComplexMatrix::zeros(n, n));
        }
        let q = &ra * overlap.u.columns(0, k);
        let sa = short_onto(&ea, cut, &q)?;
        let sb = short_onto(&eb, cut, &q)?;
        let g = mean_one_invertible(&sa, &map_eig(&sa, |l| l), &sb, &map_eig(&sb, |l| l))?;
        &q * g * q.adjoint()
    };
    Ok(g.hermitian_part())
}

/// Limit of `(A + εI) # (B + εI)` over `ε_k = 10^{-2k} · max(1, ‖A‖, ‖B‖)`,
/// `k = 1..7`, stopping once successive iterates agree to 1e-8 relative.
pub fn geometric_mean_regularized(
    a: &HermitianView,
    b: &HermitianView,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    let ea = psd_eig(a, tol)?;
    let eb = psd_eig(b, tol)?;
    let pa = map_eig(&ea, |l| l);
    let pb = map_eig(&eb, |l| l);
    let scale = ea.max().max(eb.max()).max(1.0);
    epsilon_limit(scale, |eps| {
        let sa = pa.shift(eps);
        let sb = pb.shift(eps);
        let ea = hermitian_eig(&HermitianView::symmetrize(&sa)?)?;
        let eb = hermitian_eig(&HermitianView::symmetrize(&sb)?)?;
        mean_one_invertible(&ea, &sa, &eb, &sb)
    })
    .map_err(|_| Error::NonConvergence("regularized geometric mean"))
}

fn epsilon_limit(
    scale: f64,
    mut at: impl FnMut(f64) -> Result<ComplexMatrix>,
) -> Result<ComplexMatrix> {
    let mut prev: Option<ComplexMatrix> = None;
    for k in 1..=EPS_STEPS {
        let eps = 10f64.powi(-2 * k) * scale;
        let cur = at(eps)?.hermitian_part();
        if let Some(p) = &prev {
            let diff = (&cur - p).frobenius_norm();
            if diff < EPS_CONVERGED * cur.frobenius_norm().max(1.0) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
    }
    Err(Error::NonConvergence("epsilon schedule"))
}

/// Parallel sum `A : B = A (A + B)† B`. Falls back to the limit of
/// `((A + εI)^{-1} + (B + εI)^{-1})^{-1}` when the range compatibility check
/// `A (A + B)† (A + B) ≈ A` fails.
pub fn parallel_sum(a: &HermitianView, b: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    let ea = psd_eig(a, tol)?;
    let eb = psd_eig(b, tol)?;
    let scale = ea.max().max(eb.max()).max(1.0);
    let (am, bm) = (a.matrix(), b.matrix());
    // (A + B)† and the projector (A + B)†(A + B) from one eigendecomposition,
    // so that the check does not amplify rounding through small eigenvalues
    let es = psd_eig(&HermitianView::symmetrize(&(am + bm))?, tol)?;
    let cut = tol.rank * scale;
    let sum_pinv = map_eig(&es, |l| if l > cut { 1.0 / l } else { 0.0 });
    let projector = map_eig(&es, |l| if l > cut { 1.0 } else { 0.0 });
    let consistency = (am * &projector - am).frobenius_norm();
    if consistency <= tol.recon * scale {
        return Ok((am * sum_pinv * bm).hermitian_part());
    }
    let pa = map_eig(&ea, |l| l);
    let pb = map_eig(&eb, |l| l);
    epsilon_limit(scale, |eps| {
        let ia = map_eig(&hermitian_eig(&HermitianView::symmetrize(&pa.shift(eps))?)?, |l| 1.0 / l);
        let ib = map_eig(&hermitian_eig(&HermitianView::symmetrize(&pb.shift(eps))?)?, |l| 1.0 / l);
        let e = hermitian_eig(&HermitianView::symmetrize(&(ia + ib))?)?;
        Ok(map_eig(&e, |l| 1.0 / l))
    })
    .map_err(|_| Error::NonConvergence("regularized parallel sum"))
}

/// `A!B = 2 (A : B)`.
pub fn harmonic_mean(a: &HermitianView, b: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix> {
    Ok(parallel_sum(a, b, tol)?.scale(2.0))
}

pub fn mean(kind: MeanKind, a: &HermitianView, b: &HermitianView, tol: &Tolerances) -> Result<ComplexMatrix> {
    match kind {
        MeanKind::Geometric => geometric_mean(a, b, tol),
        MeanKind::Harmonic => harmonic_mean(a, b, tol),
        MeanKind::ParallelSum => parallel_sum(a, b, tol),
    }
}

/// Tests the block condition that defines the mean for a candidate X:
/// geometric: `[A, X; X, B] ≥ 0`; harmonic: `[X, X; X, X] ≤ diag(2A, 2B)`;
/// parallel sum: `[X, X; X, X] ≤ diag(A, B)`.
pub fn variational_check(
    kind: MeanKind,
    a: &HermitianView,
    b: &HermitianView,
    x: &HermitianView,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    same_dim(a, b)?;
    same_dim(a, x)?;
    let id = format!("variational-{}", kind.name());
    let builder = OutcomeBuilder::new(&id)
        .digest_matrix(a.matrix())
        .digest_matrix(b.matrix())
        .digest_matrix(x.matrix());
    let (margin, scale) = match kind {
        MeanKind::Geometric => {
            let blk = BlockTwo::weak(a.matrix(), x.matrix(), b.matrix(), tol)?;
            let view = HermitianView::symmetrize(blk.assembled())?;
            let e = hermitian_eig(&view)?;
            (e.min(), e.spectral_radius())
        }
        MeanKind::Harmonic | MeanKind::ParallelSum => {
            let w = if kind == MeanKind::Harmonic { 2.0 } else { 1.0 };
            let xm = x.matrix();
            let lhs = ComplexMatrix::block2(xm, xm, xm, xm)?;
            let z = ComplexMatrix::zeros(a.dim(), a.dim());
            let rhs = ComplexMatrix::block2(&a.matrix().scale(w), &z, &z, &b.matrix().scale(w))?;
            let lv = HermitianView::symmetrize(&lhs)?;
            let rv = HermitianView::symmetrize(&rhs)?;
            let v = loewner_leq(&lv, &rv, tol)?;
            (v.margin, hermitian_norm(&lv)?.max(hermitian_norm(&rv)?))
        }
    };
    Ok(builder.finish(margin, scale, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn view(m: &ComplexMatrix) -> HermitianView {
        HermitianView::new(m, &tol()).unwrap()
    }

    fn diag(d: &[f64]) -> HermitianView {
        view(&ComplexMatrix::from_diagonal(d))
    }

    #[test]
    fn scalar_geometric_and_harmonic() {
        let g = geometric_mean(&diag(&[4.0]), &diag(&[9.0]), &tol()).unwrap();
        assert_abs_diff_eq!(g.get(0, 0).re, 6.0, epsilon = 1e-14);
        let h = harmonic_mean(&diag(&[3.0]), &diag(&[6.0]), &tol()).unwrap();
        assert_abs_diff_eq!(h.get(0, 0).re, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn commuting_geometric_mean() {
        let g = geometric_mean(&diag(&[1.0, 4.0]), &diag(&[4.0, 1.0]), &tol()).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 2.0])) < 1e-14);
    }

    #[test]
    fn idempotence_and_zero() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let g = geometric_mean(&view(&a), &view(&a), &tol()).unwrap();
        assert!(g.max_abs_diff(&a) < 1e-13);
        let h = harmonic_mean(&view(&a), &view(&a), &tol()).unwrap();
        assert!(h.max_abs_diff(&a) < 1e-13);

        let z = diag(&[0.0, 0.0]);
        assert!(geometric_mean(&view(&a), &z, &tol()).unwrap().max_abs() < 1e-15);
        assert!(harmonic_mean(&view(&a), &z, &tol()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn singular_pairs_use_range_intersection() {
        let e1 = diag(&[1.0, 0.0]);
        let e2 = diag(&[0.0, 1.0]);
        assert!(geometric_mean(&e1, &e2, &tol()).unwrap().max_abs() < 1e-15);
        let g = geometric_mean(&e1, &diag(&[4.0, 0.0]), &tol()).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 0.0])) < 1e-14);
        assert!(geometric_mean(&diag(&[0.0, 0.0]), &e2, &tol()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn regularized_route_agrees_on_shared_range() {
        // both operands live on span{(1,1,0)/√2, e3}
        let a = ComplexMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 3.0]])
            .unwrap();
        let b = ComplexMatrix::from_real_rows(&[[2.0, 2.0, 1.0], [2.0, 2.0, 1.0], [1.0, 1.0, 1.0]])
            .unwrap();
        let exact = geometric_mean(&view(&a), &view(&b), &tol()).unwrap();
        let limit = geometric_mean_regularized(&view(&a), &view(&b), &tol()).unwrap();
        assert!(exact.max_abs_diff(&limit) < 1e-8, "{exact}\n{limit}");
        let v = variational_check(MeanKind::Geometric, &view(&a), &view(&b), &view(&exact), &tol())
            .unwrap();
        assert!(v.holds);
    }

    #[test]
    fn regularized_route_reports_slow_limits() {
        // disjoint ranges: the ε-iterates decay like √ε and never settle
        let r = geometric_mean_regularized(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &tol());
        assert_eq!(r, Err(Error::NonConvergence("regularized geometric mean")));
    }

    #[test]
    fn rejects_non_psd_and_mismatch() {
        assert!(matches!(
            geometric_mean(&diag(&[1.0, -1.0]), &diag(&[1.0, 1.0]), &tol()),
            Err(Error::NotPsd { .. })
        ));
        assert!(harmonic_mean(&diag(&[1.0]), &diag(&[1.0, 1.0]), &tol()).is_err());
    }

    #[test]
    fn variational_checks_accept_means_and_reject_perturbations() {
        let a = view(&ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap());
        let b = view(&ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 3.0]]).unwrap());
        let g = geometric_mean(&a, &b, &tol()).unwrap();
        let v = variational_check(MeanKind::Geometric, &a, &b, &view(&g), &tol()).unwrap();
        assert!(v.holds);
        let bumped = g.shift(0.1);
        let v = variational_check(MeanKind::Geometric, &a, &b, &view(&bumped), &tol()).unwrap();
        assert!(!v.holds);

        let h = harmonic_mean(&a, &b, &tol()).unwrap();
        let v = variational_check(MeanKind::Harmonic, &a, &b, &view(&h), &tol()).unwrap();
        assert!(v.holds);
        let v = variational_check(MeanKind::Harmonic, &a, &b, &view(&h.shift(0.1)), &tol()).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn harmonic_matches_inverse_formula() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 3.0]]).unwrap();
        let inv = |m: &ComplexMatrix| crate::linalg::pseudo_inverse(m, &tol()).unwrap();
        let want = inv(&(inv(&a) + inv(&b))).scale(2.0);
        let h = harmonic_mean(&view(&a), &view(&b), &tol()).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-13);
    }
}
