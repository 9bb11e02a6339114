//! Cauchy–Schwarz type inequalities through the geometric mean.

use serde::{Deserialize, Serialize};

use super::{
    abs, abs_adjoint, ensure_input, ensure_square_same, gmean, herm, order_margin, require,
    require_grade, require_star,
};
use crate::error::{Error, Result};
use crate::linalg::{apply_function, polar_decompose, ComplexMatrix, Complex64, Power, Tolerances};
use crate::maps::{Grade, MapDescriptor};
use crate::means::{mean, MeanKind};
use crate::outcome::{CheckOutcome, OutcomeBuilder};
use crate::positivity::is_psd;

/// PSD-ness of `[|A|, A*; A, |A*|]` and of its congruence
/// `[X*|A|X, X*A*Y; Y*AX, Y*|A*|Y]`; the margin is the smaller of the two
/// minimal eigenvalues.
pub fn check_schwarz_block(
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    ensure_square_same("schwarz-block", &[a, x, y])?;
    let out = OutcomeBuilder::new("schwarz-block")
        .digest_matrix(a)
        .digest_matrix(x)
        .digest_matrix(y);
    let (pa, pas) = (abs(a)?, abs_adjoint(a)?);
    let base = ComplexMatrix::block2(&pa, &a.adjoint(), a, &pas)?;
    let (xs, ys) = (x.adjoint(), y.adjoint());
    let top_right = &xs * a.adjoint() * y;
    let congruent = ComplexMatrix::block2(
        &(&xs * &pa * x),
        &top_right,
        &top_right.adjoint(),
        &(&ys * &pas * y),
    )?;
    let mut out = out;
    let mut margin = f64::INFINITY;
    let mut scale: f64 = 1.0;
    for (m, name) in [(&base, "polar block"), (&congruent, "congruence block")] {
        let v = herm(m)?;
        let verdict = is_psd(&v, tol)?;
        out.residual(&format!("{name} min eig"), verdict.min_eig);
        margin = margin.min(verdict.min_eig);
        scale = scale.max(crate::linalg::hermitian_norm(&v)?);
    }
    Ok(out.finish(margin, scale, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm21Variant {
    /// Φ(|X*A*Y|) ≤ Φ(V*X*|A|XV) # Φ(Y*|A*|Y), Φ weakly 2-positive.
    I,
    /// |Φ(X*A*Y)| ≤ U*Φ(X*|A|X)U # Φ(Y*|A*|Y), Φ a 2-positive *-map.
    Ii,
    /// |Φ(X*AX)| ≤ U*Φ(X*|A|X)U # Φ(X*|A|X), A Hermitian, Φ a weakly
    /// 2-positive *-map. `y` is ignored.
    Remark,
}

impl Thm21Variant {
    fn id(self) -> &'static str {
        match self {
            Thm21Variant::I => "thm-2-1-i",
            Thm21Variant::Ii => "thm-2-1-ii",
            Thm21Variant::Remark => "rmk-2-2",
        }
    }
}

/// Residuals `lhs` and `rhs` hold the operator norms of both sides; for
/// scalar-valued maps these are the two sides themselves.
pub fn check_thm_2_1(
    variant: Thm21Variant,
    map: &MapDescriptor,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let n = ensure_square_same(variant.id(), &[a, x, y])?;
    ensure_input(map, n)?;
    let y = if variant == Thm21Variant::Remark { x } else { y };
    let mut out = OutcomeBuilder::new(variant.id())
        .digest_map(map)
        .digest_matrix(a)
        .digest_matrix(x)
        .digest_matrix(y);
    match variant {
        Thm21Variant::I => require_grade(&mut out, map, Grade::WeaklyTwoPositive)?,
        Thm21Variant::Ii => {
            require_grade(&mut out, map, Grade::TwoPositive)?;
            require_star(&mut out, map)?;
        }
        Thm21Variant::Remark => {
            require_grade(&mut out, map, Grade::WeaklyTwoPositive)?;
            require_star(&mut out, map)?;
            let defect = a.hermitian_defect();
            require(&mut out, "A Hermitian", defect <= tol.herm, || {
                format!("hermiticity defect {defect:e}")
            })?;
        }
    }
    let a = if variant == Thm21Variant::Remark { a.hermitian_part() } else { a.clone() };
    let (xs, ys) = (x.adjoint(), y.adjoint());
    let left_weight = &xs * abs(&a)? * x;
    let right_weight = &ys * abs_adjoint(&a)? * y;
    let cross = &xs * a.adjoint() * y;
    let (lhs, rhs) = match variant {
        Thm21Variant::I => {
            let polar = polar_decompose(&cross, tol)?;
            let v = &polar.isometry;
            let lhs = map.apply(&polar.positive)?;
            let p = map.apply(&(v.adjoint() * &left_weight * v))?;
            let q = map.apply(&right_weight)?;
            (lhs, gmean(&p, &q, tol)?)
        }
        Thm21Variant::Ii | Thm21Variant::Remark => {
            let polar = polar_decompose(&map.apply(&cross)?, tol)?;
            let u = &polar.isometry;
            let p = u.adjoint() * map.apply(&left_weight)? * u;
            let q = map.apply(&right_weight)?;
            (polar.positive, gmean(&p, &q, tol)?)
        }
    };
    let (margin, scale) = order_margin(&lhs, &rhs)?;
    out.residual("lhs", crate::linalg::hermitian_norm(&herm(&lhs)?)?);
    out.residual("rhs", crate::linalg::hermitian_norm(&herm(&rhs)?)?);
    Ok(out.finish(margin, scale, tol))
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn apply_vec(m: &ComplexMatrix, x: &[Complex64]) -> Vec<Complex64> {
    (m * ComplexMatrix::column(x)).row_major()
}

/// |⟨Ax, y⟩|² ≤ ⟨|A|x, x⟩⟨|A*|y, y⟩; residuals `lhs`, `rhs`.
pub fn check_cor_2_3(a: &ComplexMatrix, x: &[Complex64], y: &[Complex64], tol: &Tolerances) -> Result<CheckOutcome> {
    let n = ensure_square_same("cor-2-3", &[a])?;
    if x.len() != n || y.len() != n {
        return Err(Error::dims(format!("cor-2-3: vectors must have length {n}")));
    }
    let mut out = OutcomeBuilder::new("cor-2-3")
        .digest_matrix(a)
        .digest_matrix(&ComplexMatrix::column(x))
        .digest_matrix(&ComplexMatrix::column(y));
    let lhs = inner(&apply_vec(a, x), y).norm_sqr();
    let rhs = inner(&apply_vec(&abs(a)?, x), x).re * inner(&apply_vec(&abs_adjoint(a)?, y), y).re;
    out.residual("lhs", lhs);
    out.residual("rhs", rhs);
    Ok(out.finish(rhs - lhs, lhs.max(rhs), tol))
}

/// tr(|X*A*Y|)² ≤ tr(X*|A|X) tr(Y*|A*|Y); residuals `lhs`, `rhs`.
pub fn check_cor_2_4(
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    ensure_square_same("cor-2-4", &[a, x, y])?;
    let mut out = OutcomeBuilder::new("cor-2-4")
        .digest_matrix(a)
        .digest_matrix(x)
        .digest_matrix(y);
    let (xs, ys) = (x.adjoint(), y.adjoint());
    let lhs = abs(&(&xs * a.adjoint() * y))?.trace().re.powi(2);
    let rhs = (&xs * abs(a)? * x).trace().re * (&ys * abs_adjoint(a)? * y).trace().re;
    out.residual("lhs", lhs);
    out.residual("rhs", rhs);
    Ok(out.finish(rhs - lhs, lhs.max(rhs), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cor25Variant {
    /// Φ(|X|) ≤ Φ(V*|X*|V) # Φ(|X|) with X = V|X|, Φ weakly 2-positive.
    I,
    /// |Φ(X)| ≤ U*Φ(|X*|^{1/2})U # Φ(|X|^{3/2}) with Φ(X) = U|Φ(X)|, Φ a
    /// 2-positive *-map.
    Ii,
}

pub fn check_cor_2_5(
    variant: Cor25Variant,
    map: &MapDescriptor,
    x: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let id = match variant {
        Cor25Variant::I => "cor-2-5-i",
        Cor25Variant::Ii => "cor-2-5-ii",
    };
    let n = ensure_square_same(id, &[x])?;
    ensure_input(map, n)?;
    let mut out = OutcomeBuilder::new(id).digest_map(map).digest_matrix(x);
    let ax = abs(x)?;
    let axs = abs_adjoint(x)?;
    let (lhs, rhs) = match variant {
        Cor25Variant::I => {
            require_grade(&mut out, map, Grade::WeaklyTwoPositive)?;
            let v = polar_decompose(x, tol)?.isometry;
            let lhs = map.apply(&ax)?;
            let p = map.apply(&(v.adjoint() * &axs * &v))?;
            (lhs.clone(), gmean(&p, &lhs, tol)?)
        }
        Cor25Variant::Ii => {
            require_grade(&mut out, map, Grade::TwoPositive)?;
            require_star(&mut out, map)?;
            let polar = polar_decompose(&map.apply(x)?, tol)?;
            let u = &polar.isometry;
            let half = apply_function(&Power(0.5), &herm(&axs)?, tol)?;
            let three_halves = apply_function(&Power(1.5), &herm(&ax)?, tol)?;
            let p = u.adjoint() * map.apply(&half)? * u;
            let q = map.apply(&three_halves)?;
            (polar.positive, gmean(&p, &q, tol)?)
        }
    };
    let (margin, scale) = order_margin(&lhs, &rhs)?;
    Ok(out.finish(margin, scale, tol))
}

/// Φ(A#B) ≤ Φ(A)#Φ(B) for weakly 2-positive Φ, or Φ(A!B) ≤ Φ(A)!Φ(B) for
/// linear weakly 2-positive Φ.
pub fn check_mean_subpreservation(
    kind: MeanKind,
    map: &MapDescriptor,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let id = match kind {
        MeanKind::Geometric => "mean-sub-geo",
        MeanKind::Harmonic => "mean-sub-har",
        MeanKind::ParallelSum => "mean-sub-parallel",
    };
    let n = ensure_square_same(id, &[a, b])?;
    ensure_input(map, n)?;
    let mut out = OutcomeBuilder::new(id)
        .digest_map(map)
        .digest_matrix(a)
        .digest_matrix(b);
    require_grade(&mut out, map, Grade::WeaklyTwoPositive)?;
    if kind != MeanKind::Geometric {
        require(&mut out, "map is linear", map.is_linear(), || map.name())?;
    }
    let (va, vb) = (herm(a)?, herm(b)?);
    for (v, name) in [(&va, "A"), (&vb, "B")] {
        let psd = is_psd(v, tol)?;
        require(&mut out, &format!("{name} positive"), psd.holds, || {
            format!("minimum eigenvalue {:e}", psd.min_eig)
        })?;
    }
    let lhs = map.apply(&mean(kind, &va, &vb, tol)?)?;
    let fa = herm(&map.apply(a)?)?;
    let fb = herm(&map.apply(b)?)?;
    let rhs = mean(kind, &fa, &fb, tol)?;
    let (margin, scale) = order_margin(&lhs, &rhs)?;
    Ok(out.finish(margin, scale, tol))
}
