//! Löwner order, 2×2 operator blocks and the contraction criterion
//! `[A, C; C*, B] ≥ 0 ⇔ C = A^{1/2} W B^{1/2}` for some contraction W.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hermitian_norm, operator_norm, pseudo_inverse, psd_sqrt, ComplexMatrix,
    HermitianView, Tolerances,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub holds: bool,
    pub min_eig: f64,
}

/// `holds` iff the smallest eigenvalue is at least `−tol.psd · max(1, ‖M‖)`.
pub fn is_psd(m: &HermitianView, tol: &Tolerances) -> Result<PsdVerdict> {
    let eig = hermitian_eig(m)?;
    let scale = eig.spectral_radius().max(1.0);
    Ok(PsdVerdict {
        holds: eig.min() >= -tol.psd * scale,
        min_eig: eig.min(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerVerdict {
    pub holds: bool,
    /// Smallest eigenvalue of `B − A`.
    pub margin: f64,
}

/// A ≤ B in the Löwner order.
pub fn loewner_leq(a: &HermitianView, b: &HermitianView, tol: &Tolerances) -> Result<LoewnerVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::dims(format!(
            "Löwner comparison of {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let diff = HermitianView::symmetrize(&(b.matrix() - a.matrix()))?;
    let margin = hermitian_eig(&diff)?.min();
    let scale = hermitian_norm(a)?.max(hermitian_norm(b)?).max(1.0);
    Ok(LoewnerVerdict {
        holds: margin >= -tol.psd * scale,
        margin,
    })
}

/// A 2×2 operator block `[top_left, top_right; bottom_left, bottom_right]`
/// of equally sized square parts, together with its assembled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTwo {
    top_left: ComplexMatrix,
    top_right: ComplexMatrix,
    bottom_left: ComplexMatrix,
    bottom_right: ComplexMatrix,
    assembled: ComplexMatrix,
}

impl BlockTwo {
    pub fn new(
        top_left: ComplexMatrix,
        top_right: ComplexMatrix,
        bottom_left: ComplexMatrix,
        bottom_right: ComplexMatrix,
    ) -> Result<Self> {
        top_left.ensure_square()?;
        for (m, name) in [
            (&top_right, "top-right block"),
            (&bottom_left, "bottom-left block"),
            (&bottom_right, "bottom-right block"),
        ] {
            m.ensure_same_shape(&top_left, name)?;
        }
        let assembled = ComplexMatrix::block2(&top_left, &top_right, &bottom_left, &bottom_right)?;
        Ok(Self {
            top_left,
            top_right,
            bottom_left,
            bottom_right,
            assembled,
        })
    }

    /// `[A, C; C*, B]`
    pub fn hermitian(a: &ComplexMatrix, c: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(a.clone(), c.clone(), c.adjoint(), b.clone())
    }

    /// `[A, C; C, B]` with C self-adjoint.
    pub fn weak(
        a: &ComplexMatrix,
        c: &ComplexMatrix,
        b: &ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        c.ensure_square()?;
        let defect = c.hermitian_defect();
        if defect > tol.herm {
            return Err(Error::NotHermitian {
                defect,
                tol: tol.herm,
            });
        }
        let c = c.hermitian_part();
        Self::new(a.clone(), c.clone(), c, b.clone())
    }

    pub fn top_left(&self) -> &ComplexMatrix {
        &self.top_left
    }

    pub fn top_right(&self) -> &ComplexMatrix {
        &self.top_right
    }

    pub fn bottom_left(&self) -> &ComplexMatrix {
        &self.bottom_left
    }

    pub fn bottom_right(&self) -> &ComplexMatrix {
        &self.bottom_right
    }

    pub fn assembled(&self) -> &ComplexMatrix {
        &self.assembled
    }

    /// Size n of each part.
    pub fn part_dim(&self) -> usize {
        self.top_left.rows()
    }

    pub fn parts(&self) -> [&ComplexMatrix; 4] {
        [
            &self.top_left,
            &self.top_right,
            &self.bottom_left,
            &self.bottom_right,
        ]
    }

    /// Applies `f` to every part.
    pub fn map_parts<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    {
        Self::new(
            f(&self.top_left)?,
            f(&self.top_right)?,
            f(&self.bottom_left)?,
            f(&self.bottom_right)?,
        )
    }

    /// `diag(V, I)* · M · diag(V, I)`.
    pub fn congruence(&self, v: &ComplexMatrix) -> Result<Self> {
        v.ensure_same_shape(&self.top_left, "congruence factor")?;
        let vs = v.adjoint();
        Self::new(
            &vs * &self.top_left * v,
            &vs * &self.top_right,
            &self.bottom_left * v,
            self.bottom_right.clone(),
        )
    }

    /// PSD verdict on the assembled matrix, which must be Hermitian.
    pub fn is_psd(&self, tol: &Tolerances) -> Result<PsdVerdict> {
        is_psd(&HermitianView::new(&self.assembled, tol)?, tol)
    }
}

/// W with `A^{1/2} W B^{1/2} = C`, extracted as `(A^{1/2})† C (B^{1/2})†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionWitness {
    pub w: ComplexMatrix,
    pub norm: f64,
    /// ‖A^{1/2} W B^{1/2} − C‖ / max(1, ‖C‖)
    pub reconstruction_error: f64,
}

impl ContractionWitness {
    /// The block `[A, C; C*, B]` is positive exactly when W is a contraction.
    pub fn certifies_psd(&self, tol: &Tolerances) -> bool {
        self.norm <= 1.0 + tol.margin && self.reconstruction_error <= tol.margin
    }
}

/// Refuses with [`Error::NotFactorizable`] when C does not factor through
/// the square roots (its range or co-range escapes those of A, B).
pub fn contraction_witness(
    a: &HermitianView,
    b: &HermitianView,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ContractionWitness> {
    if c.shape() != (a.dim(), b.dim()) {
        return Err(Error::dims(format!(
            "C is {:?}, expected {}x{}",
            c.shape(),
            a.dim(),
            b.dim()
        )));
    }
    let ra = psd_sqrt(a, tol)?;
    let rb = psd_sqrt(b, tol)?;
    let w = pseudo_inverse(&ra, tol)? * c * pseudo_inverse(&rb, tol)?;
    let residual = &ra * &w * &rb - c;
    let reconstruction_error = operator_norm(&residual)? / operator_norm(c)?.max(1.0);
    if reconstruction_error > tol.margin {
        return Err(Error::NotFactorizable(reconstruction_error));
    }
    Ok(ContractionWitness {
        norm: operator_norm(&w)?,
        w,
        reconstruction_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(rows: &[[f64; 2]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn view(m: &ComplexMatrix) -> HermitianView {
        HermitianView::new(m, &tol()).unwrap()
    }

    fn rank_one_parts() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
        (
            real(&[[1.0, 0.0], [0.0, 0.0]]),
            real(&[[2.0, 2.0], [2.0, 2.0]]),
            real(&[[1.0, 1.0], [0.0, 0.0]]),
        )
    }

    #[test]
    fn psd_examples() {
        let v = is_psd(&view(&ComplexMatrix::identity(3)), &tol()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.min_eig, 1.0, epsilon = 1e-15);

        let i2 = ComplexMatrix::identity(2);
        let pos = real(&[[2.0, 1.0], [1.0, 2.0]]).kron(&i2);
        let v = is_psd(&view(&pos), &tol()).unwrap();
        assert!(v.holds);
        assert_abs_diff_eq!(v.min_eig, 1.0, epsilon = 1e-14);

        let neg = real(&[[0.5, 1.0], [1.0, 0.5]]).kron(&i2);
        let v = is_psd(&view(&neg), &tol()).unwrap();
        assert!(!v.holds);
        assert_abs_diff_eq!(v.min_eig, -0.5, epsilon = 1e-14);
    }

    #[test]
    fn loewner_examples() {
        let z = view(&ComplexMatrix::zeros(2, 2));
        let i = view(&ComplexMatrix::identity(2));
        let r = loewner_leq(&z, &i, &tol()).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.margin, 1.0, epsilon = 1e-15);

        let a = view(&ComplexMatrix::from_diagonal(&[1.0, 3.0]));
        let b = view(&ComplexMatrix::from_diagonal(&[2.0, 2.0]));
        let r = loewner_leq(&a, &b, &tol()).unwrap();
        assert!(!r.holds);
        assert_abs_diff_eq!(r.margin, -1.0, epsilon = 1e-15);

        let r = loewner_leq(&a, &a, &tol()).unwrap();
        assert!(r.holds);
        assert_eq!(r.margin, 0.0);

        let big = view(&ComplexMatrix::identity(3));
        assert!(loewner_leq(&a, &big, &tol()).is_err());
    }

    #[test]
    fn block_assembly() {
        let i = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let b = BlockTwo::hermitian(&i, &z, &i).unwrap();
        assert_eq!(b.assembled(), &ComplexMatrix::identity(4));

        let (a, bb, c) = rank_one_parts();
        let blk = BlockTwo::hermitian(&a, &c, &bb).unwrap();
        assert!(blk.is_psd(&tol()).unwrap().holds);

        let m = real(&[[0.0, 1.0], [0.0, 0.0]]);
        let abs = crate::linalg::operator_abs(&m).unwrap();
        let blk = BlockTwo::new(abs.abs.clone(), m.adjoint(), m.clone(), abs.abs_adjoint).unwrap();
        let want = ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(blk.assembled().max_abs_diff(&want) < 1e-15);
        assert!(blk.is_psd(&tol()).unwrap().holds);
    }

    #[test]
    fn weak_block_requires_hermitian_c() {
        let i = ComplexMatrix::identity(2);
        let c = real(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            BlockTwo::weak(&i, &c, &i, &tol()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(BlockTwo::weak(&i, &c.hermitian_part(), &i, &tol()).is_ok());
    }

    #[test]
    fn witness_on_rank_one_parts() {
        let (a, b, c) = rank_one_parts();
        let w = contraction_witness(&view(&a), &view(&b), &c, &tol()).unwrap();
        assert!(w.w.max_abs_diff(&real(&[[0.5, 0.5], [0.0, 0.0]])) < 1e-14);
        assert_abs_diff_eq!(w.norm, 0.5f64.sqrt(), epsilon = 1e-14);
        assert!(w.reconstruction_error < 1e-14);
        assert!(w.certifies_psd(&tol()));
    }

    #[test]
    fn witness_scalar_case() {
        let i = ComplexMatrix::identity(2);
        let w = contraction_witness(&view(&i), &view(&i), &i.scale(0.5), &tol()).unwrap();
        assert!(w.w.max_abs_diff(&i.scale(0.5)) < 1e-15);
        assert_abs_diff_eq!(w.norm, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn witness_refuses_range_violation() {
        let a = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let c = real(&[[0.0, 0.0], [1.0, 0.0]]);
        let r = contraction_witness(&view(&a), &view(&ComplexMatrix::identity(2)), &c, &tol());
        assert!(matches!(r, Err(Error::NotFactorizable(_))));
    }

    #[test]
    fn witness_norm_above_one_does_not_certify() {
        let i = ComplexMatrix::identity(2);
        let w = contraction_witness(&view(&i), &view(&i), &i.scale(2.0), &tol()).unwrap();
        assert!(!w.certifies_psd(&tol()));
        let blk = BlockTwo::hermitian(&i, &i.scale(2.0), &i).unwrap();
        assert!(!blk.is_psd(&tol()).unwrap().holds);
    }
}
