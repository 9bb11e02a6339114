//! Concrete maps Φ on matrices with claimed positivity grades, the
//! ampliation Φ₂, Choi matrices, the pinching conditional expectation and
//! the operator convex function catalog.

mod falsify;
mod functions;
mod spec;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse, ComplexMatrix, Complex64, Tolerances};
use crate::outcome::{CheckOutcome, OutcomeBuilder};
use crate::positivity::BlockTwo;

pub use falsify::{falsify_grade, FalsifyOutcome, WitnessSource};
pub use functions::{FunctionDescriptor, FunctionKind};
pub use spec::{MapSpec, MapSpecError, VectorSpec};

/// Positivity grades, ordered by strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Grade {
    #[serde(rename = "positive")]
    Positive,
    #[serde(rename = "weakly_2_positive")]
    WeaklyTwoPositive,
    #[serde(rename = "two_positive")]
    TwoPositive,
    #[serde(rename = "completely_positive")]
    CompletelyPositive,
}

impl Grade {
    pub fn name(self) -> &'static str {
        match self {
            Grade::Positive => "positive",
            Grade::WeaklyTwoPositive => "weakly_2_positive",
            Grade::TwoPositive => "two_positive",
            Grade::CompletelyPositive => "completely_positive",
        }
    }

    /// Accepts the long names and the short forms `weak2` and `two`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "positive" => Ok(Grade::Positive),
            "weak2" | "weakly_2_positive" | "weakly-2-positive" => Ok(Grade::WeaklyTwoPositive),
            "two" | "two_positive" | "two-positive" | "2" => Ok(Grade::TwoPositive),
            "cp" | "completely_positive" | "completely-positive" => {
                Ok(Grade::CompletelyPositive)
            }
            other => Err(Error::InvalidArgument(format!("unknown grade `{other}`"))),
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// X ↦ Xᵗʳ
    Transpose,
    /// X ↦ X†
    MoorePenrose,
    /// X ↦ X* + α det(X) I
    DetShift { alpha: f64 },
    /// X ↦ [⟨Xe, e⟩]
    VectorState { e: Vec<Complex64> },
    /// X ↦ [tr(X)/n]
    NormalizedTrace,
    /// X ↦ V*XV
    Compression { v: ComplexMatrix },
    /// X ↦ Σ P_i X P_i; blocks hold 0-based indices
    Pinching { blocks: Vec<Vec<usize>> },
    /// X ↦ Σ K_i* X K_i
    Kraus { ops: Vec<ComplexMatrix> },
}

/// A map M_n → M_m with its claimed grade. Immutable once built; the
/// constructors validate each kind's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDescriptor {
    kind: MapKind,
    input_dim: usize,
    output_dim: usize,
    claimed_grade: Grade,
    is_linear: bool,
    is_star_map: bool,
}

impl MapDescriptor {
    fn build(kind: MapKind, input_dim: usize, output_dim: usize) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidArgument("map dimensions must be positive".into()));
        }
        let (claimed_grade, is_linear) = match kind {
            MapKind::Transpose => (Grade::WeaklyTwoPositive, true),
            MapKind::MoorePenrose => (Grade::Positive, false),
            MapKind::DetShift { .. } => (Grade::WeaklyTwoPositive, false),
            _ => (Grade::CompletelyPositive, true),
        };
        Ok(Self {
            kind,
            input_dim,
            output_dim,
            claimed_grade,
            is_linear,
            is_star_map: true,
        })
    }

    pub fn transpose(n: usize) -> Result<Self> {
        Self::build(MapKind::Transpose, n, n)
    }

    pub fn moore_penrose(n: usize) -> Result<Self> {
        Self::build(MapKind::MoorePenrose, n, n)
    }

    pub fn det_shift(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "det-shift parameter must be finite and nonnegative, got {alpha}"
            )));
        }
        Self::build(MapKind::DetShift { alpha }, n, n)
    }

    pub fn vector_state(e: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.recon {
            return Err(Error::MapPrecondition {
                map: "vector_state".into(),
                requirement: format!("‖e‖ = 1, got {norm}"),
            });
        }
        let n = e.len();
        Self::build(MapKind::VectorState { e }, n, 1)
    }

    /// The state X ↦ X_kk for the k-th (0-based) standard basis vector.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidArgument(format!("basis index {k} out of range for n = {n}")));
        }
        let e = (0..n)
            .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self::vector_state(e, &Tolerances::default())
    }

    pub fn normalized_trace(n: usize) -> Result<Self> {
        Self::build(MapKind::NormalizedTrace, n, 1)
    }

    /// V must be n×k with orthonormal columns.
    pub fn compression(v: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let (n, k) = v.shape();
        let defect = (v.adjoint() * &v - ComplexMatrix::identity(k)).frobenius_norm();
        if k > n || defect > tol.recon * (k as f64).max(1.0) {
            return Err(Error::MapPrecondition {
                map: "compression".into(),
                requirement: format!("V*V = I, defect {defect:e}"),
            });
        }
        Self::build(MapKind::Compression { v }, n, k)
    }

    /// `blocks` must partition {0, …, n−1} into nonempty sets.
    pub fn pinching(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(partition_error("empty block"));
            }
            for &i in b {
                if i >= n {
                    return Err(partition_error(&format!("index {} exceeds n = {n}", i + 1)));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(partition_error(&format!("index {} repeated", i + 1)));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(partition_error(&format!("index {} not covered", i + 1)));
        }
        Self::build(MapKind::Pinching { blocks }, n, n)
    }

    /// Pinching onto consecutive diagonal blocks of the given sizes.
    pub fn block_pinching(sizes: &[usize]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        Self::pinching(start, blocks)
    }

    /// All K_i must share one shape n×m.
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("Kraus map needs at least one operator".into()))?;
        let (n, m) = first.shape();
        if ops.iter().any(|k| k.shape() != (n, m)) {
            return Err(Error::dims("Kraus operators differ in shape"));
        }
        Self::build(MapKind::Kraus { ops }, n, m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::kraus(vec![ComplexMatrix::identity(n)])
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn claimed_grade(&self) -> Grade {
        self.claimed_grade
    }

    pub fn is_linear(&self) -> bool {
        self.is_linear
    }

    pub fn is_star_map(&self) -> bool {
        self.is_star_map
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.output_dim == 1
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MapKind::Transpose => "transpose".into(),
            MapKind::MoorePenrose => "moore_penrose".into(),
            MapKind::DetShift { alpha } => format!("det_shift({alpha})"),
            MapKind::VectorState { .. } => "vector_state".into(),
            MapKind::NormalizedTrace => "normalized_trace".into(),
            MapKind::Compression { .. } => "compression".into(),
            MapKind::Pinching { .. } => "pinching".into(),
            MapKind::Kraus { .. } => "kraus".into(),
        }
    }

    /// Parameters of the map as matrices, for digests and reports.
    pub fn parameters(&self) -> Vec<ComplexMatrix> {
        match &self.kind {
            MapKind::Transpose | MapKind::MoorePenrose | MapKind::NormalizedTrace => {
                vec![ComplexMatrix::scalar(Complex64::new(self.input_dim as f64, 0.0))]
            }
            MapKind::DetShift { alpha } => vec![
                ComplexMatrix::scalar(Complex64::new(self.input_dim as f64, 0.0)),
                ComplexMatrix::scalar(Complex64::new(*alpha, 0.0)),
            ],
            MapKind::VectorState { e } => vec![ComplexMatrix::column(e)],
            MapKind::Compression { v } => vec![v.clone()],
            MapKind::Pinching { blocks } => blocks
                .iter()
                .map(|b| {
                    let idx: Vec<Complex64> = b.iter().map(|&i| Complex64::new(i as f64, 0.0)).collect();
                    ComplexMatrix::column(&idx)
                })
                .collect(),
            MapKind::Kraus { ops } => ops.clone(),
        }
    }

    /// Whether Φ(I) = I within `tol.recon`.
    pub fn is_unital(&self, tol: &Tolerances) -> Result<bool> {
        let img = self.apply(&ComplexMatrix::identity(self.input_dim))?;
        let id = ComplexMatrix::identity(self.output_dim);
        Ok((img - id).frobenius_norm() <= tol.recon * (self.output_dim as f64).sqrt().max(1.0))
    }

    fn precondition(&self, requirement: String) -> Error {
        Error::MapPrecondition {
            map: self.name(),
            requirement,
        }
    }

    /// Applies the defining formula of the map.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.input_dim;
        if x.shape() != (n, n) {
            return Err(Error::dims(format!(
                "{} expects {n}x{n} input, got {}x{}",
                self.name(),
                x.rows(),
                x.cols()
            )));
        }
        Ok(match &self.kind {
            MapKind::Transpose => x.transpose(),
            MapKind::MoorePenrose => pseudo_inverse(x, &Tolerances::default())?,
            MapKind::DetShift { alpha } => {
                let det = x.as_inner().clone().lu().determinant();
                let mut out = x.adjoint();
                for i in 0..n {
                    let d = out.get(i, i) + det * *alpha;
                    out.set(i, i, d);
                }
                out
            }
            MapKind::VectorState { e } => {
                let col = ComplexMatrix::column(e);
                col.adjoint() * x * col
            }
            MapKind::NormalizedTrace => ComplexMatrix::scalar(x.trace() / n as f64),
            MapKind::Compression { v } => v.adjoint() * x * v,
            MapKind::Pinching { blocks } => {
                let mut out = ComplexMatrix::zeros(n, n);
                for b in blocks {
                    for &i in b {
                        for &j in b {
                            out.set(i, j, x.get(i, j));
                        }
                    }
                }
                out
            }
            MapKind::Kraus { ops } => {
                let mut out = ComplexMatrix::zeros(self.output_dim, self.output_dim);
                for k in ops {
                    out = out + k.adjoint() * x * k;
                }
                out
            }
        })
    }

    /// Φ₂: applies Φ to each part of a 2×2 block.
    pub fn ampliate2(&self, m: &BlockTwo) -> Result<BlockTwo> {
        m.map_parts(|p| self.apply(p))
    }

    /// Σ_ij E_ij ⊗ Φ(E_ij); positive semidefinite iff Φ is completely positive.
    pub fn choi_matrix(&self) -> Result<ComplexMatrix> {
        if !self.is_linear {
            return Err(self.precondition("Choi matrix needs a linear map".into()));
        }
        let (n, m) = (self.input_dim, self.output_dim);
        let mut choi = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let img = self.apply(&ComplexMatrix::unit(n, n, i, j))?;
                for r in 0..m {
                    for c in 0..m {
                        choi.set(i * m + r, j * m + c, img.get(r, c));
                    }
                }
            }
        }
        Ok(choi)
    }

    /// Projection onto the block-diagonal part for a pinching, else `None`.
    fn pinching_blocks(&self) -> Option<&[Vec<usize>]> {
        match &self.kind {
            MapKind::Pinching { blocks } => Some(blocks),
            _ => None,
        }
    }

    /// Size of the part of `a` lying off the block diagonal of a pinching.
    pub fn off_block_defect(&self, a: &ComplexMatrix) -> Result<f64> {
        let blocks = self
            .pinching_blocks()
            .ok_or_else(|| self.precondition("subalgebra membership needs a pinching".into()))?;
        let n = self.input_dim;
        if a.shape() != (n, n) {
            return Err(Error::dims(format!("expected {n}x{n} operand")));
        }
        let mut owner = vec![0usize; n];
        for (k, b) in blocks.iter().enumerate() {
            for &i in b {
                owner[i] = k;
            }
        }
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if owner[i] != owner[j] {
                    off += a.get(i, j).norm_sqr();
                }
            }
        }
        Ok(off.sqrt() / a.frobenius_norm().max(1.0))
    }

    /// Residual ‖Φ(AXB) − AΦ(X)B‖ of the bimodule property of a pinching.
    /// A and B must be block diagonal for the partition.
    pub fn check_bimodule(
        &self,
        a: &ComplexMatrix,
        x: &ComplexMatrix,
        b: &ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<CheckOutcome> {
        let mut out = OutcomeBuilder::new("bimodule")
            .digest_text(&self.name())
            .digest_matrix(a)
            .digest_matrix(x)
            .digest_matrix(b);
        for (m, name) in [(a, "A"), (b, "B")] {
            let defect = self.off_block_defect(m)?;
            if defect > tol.herm {
                return Err(self.precondition(format!(
                    "{name} lies outside the block-diagonal subalgebra (defect {defect:e})"
                )));
            }
            out.hypothesis(&format!("{name} in subalgebra"), true);
        }
        let lhs = self.apply(&(a * x * b))?;
        let rhs = a * self.apply(x)? * b;
        let residual = (&lhs - &rhs).frobenius_norm();
        out.residual("bimodule", residual);
        let scale = lhs.frobenius_norm().max(rhs.frobenius_norm());
        Ok(out.finish(-residual, scale, tol))
    }
}

fn partition_error(detail: &str) -> Error {
    Error::MapPrecondition {
        map: "pinching".into(),
        requirement: format!("blocks must partition the index set: {detail}"),
    }
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : M_{} -> M_{} ({})",
            self.name(),
            self.input_dim,
            self.output_dim,
            self.claimed_grade
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, hermitian_eig, HermitianView};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(rows: &[[f64; 2]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn moore_penrose_of_two_identity() {
        let m = MapDescriptor::moore_penrose(2).unwrap();
        let out = m.apply(&ComplexMatrix::identity(2).scale(2.0)).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn det_shift_on_singular_input_is_adjoint() {
        let c = real(&[[1.0, 1.0], [0.0, 0.0]]);
        let m = MapDescriptor::det_shift(2, 0.7).unwrap();
        assert_eq!(m.apply(&c).unwrap(), c.adjoint());
        let i = m.apply(&ComplexMatrix::identity(2)).unwrap();
        assert!(i.max_abs_diff(&ComplexMatrix::identity(2).scale(1.7)) < 1e-15);
        assert!(MapDescriptor::det_shift(2, -1.0).is_err());
    }

    #[test]
    fn pinching_extracts_diagonal() {
        let p = MapDescriptor::pinching(2, vec![vec![0], vec![1]]).unwrap();
        let out = p.apply(&real(&[[1.0, 5.0], [5.0, 2.0]])).unwrap();
        assert_eq!(out, ComplexMatrix::from_diagonal(&[1.0, 2.0]));
        assert!(MapDescriptor::pinching(3, vec![vec![0, 1]]).is_err());
        assert!(MapDescriptor::pinching(2, vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn scalar_maps() {
        let x = real(&[[1.0, 2.0], [3.0, 5.0]]);
        let tr = MapDescriptor::normalized_trace(2).unwrap();
        assert_eq!(tr.apply(&x).unwrap().get(0, 0), c64(3.0, 0.0));
        let st = MapDescriptor::basis_state(2, 1).unwrap();
        assert_eq!(st.apply(&x).unwrap().get(0, 0), c64(5.0, 0.0));
        assert!(MapDescriptor::vector_state(vec![c64(1.0, 0.0), c64(1.0, 0.0)], &tol()).is_err());
    }

    #[test]
    fn ampliation_of_moore_penrose_breaks_positivity() {
        let i = ComplexMatrix::identity(2);
        let blk = BlockTwo::hermitian(&i.scale(2.0), &i, &i.scale(2.0)).unwrap();
        let img = MapDescriptor::moore_penrose(2).unwrap().ampliate2(&blk).unwrap();
        let v = img.is_psd(&tol()).unwrap();
        assert!(!v.holds);
        assert!((v.min_eig + 0.5).abs() < 1e-12);
    }

    #[test]
    fn identity_kraus_ampliation_is_identity() {
        let i = ComplexMatrix::identity(2);
        let c = real(&[[1.0, 2.0], [0.0, 1.0]]);
        let blk = BlockTwo::hermitian(&i, &c, &i.scale(3.0)).unwrap();
        let img = MapDescriptor::identity(2).unwrap().ampliate2(&blk).unwrap();
        assert_eq!(img, blk);
    }

    #[test]
    fn det_shift_ampliation_gives_the_negative_determinant_block() {
        let a = real(&[[1.0, 0.0], [0.0, 0.0]]);
        let b = real(&[[2.0, 2.0], [2.0, 2.0]]);
        let c = real(&[[1.0, 1.0], [0.0, 0.0]]);
        let blk = BlockTwo::hermitian(&a, &c, &b).unwrap();
        let img = MapDescriptor::det_shift(2, 1.0).unwrap().ampliate2(&blk).unwrap();
        let det = img.assembled().as_inner().clone().lu().determinant();
        assert!((det.re + 2.0).abs() < 1e-12 && det.im.abs() < 1e-12);
    }

    #[test]
    fn choi_matrices() {
        let t = MapDescriptor::transpose(2).unwrap().choi_matrix().unwrap();
        let e = hermitian_eig(&HermitianView::new(&t, &tol()).unwrap()).unwrap();
        let want = [-1.0, 1.0, 1.0, 1.0];
        for (got, want) in e.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        let tr = MapDescriptor::normalized_trace(3).unwrap().choi_matrix().unwrap();
        assert!(tr.max_abs_diff(&ComplexMatrix::identity(3).scale(1.0 / 3.0)) < 1e-15);
        let p = MapDescriptor::block_pinching(&[1, 2]).unwrap().choi_matrix().unwrap();
        let e = hermitian_eig(&HermitianView::new(&p, &tol()).unwrap()).unwrap();
        assert!(e.min() > -1e-12);
        assert!(MapDescriptor::moore_penrose(2).unwrap().choi_matrix().is_err());
    }

    #[test]
    fn bimodule_property_and_refusal() {
        let p = MapDescriptor::block_pinching(&[2, 2]).unwrap();
        let i = ComplexMatrix::identity(4);
        let x = ComplexMatrix::from_fn(4, 4, |r, c| c64((r * 4 + c) as f64, r as f64 - c as f64));
        let o = p.check_bimodule(&i, &x, &i, &tol()).unwrap();
        assert!(o.holds);
        assert_eq!(o.residual("bimodule"), Some(0.0));
        let full = ComplexMatrix::from_fn(4, 4, |_, _| c64(1.0, 0.0));
        assert!(matches!(
            p.check_bimodule(&full, &x, &i, &tol()),
            Err(Error::MapPrecondition { .. })
        ));
        let once = p.apply(&x).unwrap();
        assert_eq!(p.apply(&once).unwrap(), once);
    }

    #[test]
    fn unitality() {
        let t = tol();
        assert!(MapDescriptor::block_pinching(&[1, 2]).unwrap().is_unital(&t).unwrap());
        assert!(MapDescriptor::normalized_trace(3).unwrap().is_unital(&t).unwrap());
        assert!(MapDescriptor::basis_state(3, 0).unwrap().is_unital(&t).unwrap());
        let v = ComplexMatrix::identity(3).columns(0, 2);
        assert!(MapDescriptor::compression(v, &t).unwrap().is_unital(&t).unwrap());
        assert!(!MapDescriptor::det_shift(2, 1.0).unwrap().is_unital(&t).unwrap());
    }

    #[test]
    fn grades_are_ordered() {
        assert!(Grade::Positive < Grade::WeaklyTwoPositive);
        assert!(Grade::WeaklyTwoPositive < Grade::TwoPositive);
        assert!(Grade::TwoPositive < Grade::CompletelyPositive);
        assert_eq!(Grade::parse("weak2").unwrap(), Grade::WeaklyTwoPositive);
        assert!(Grade::parse("three").is_err());
    }
}
