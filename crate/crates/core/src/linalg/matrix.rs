use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix. Every operand of the library (operators, blocks,
/// vectors as n×1 columns) is carried by this type.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    /// Builds a matrix from row-major entries. Rejects empty shapes, a wrong
    /// entry count and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Real matrix from rows of equal length.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::dims(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|&x| c64(x, 0.0)));
        }
        Self::from_row_major(rows.len(), cols, entries)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn from_complex_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { c64(0.0, 0.0) })
    }

    /// Column vector.
    pub fn column(entries: &[Complex64]) -> Self {
        Self {
            inner: DMatrix::from_column_slice(entries.len(), 1, entries),
        }
    }

    pub fn scalar(z: Complex64) -> Self {
        Self {
            inner: DMatrix::from_element(1, 1, z),
        }
    }

    /// Standard basis matrix E_ij of shape rows×cols.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.inner[(i, j)] = c64(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.inner[(i, j)] = z;
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn as_inner(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            inner: self.inner.map(|z| z.conj()),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * s),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            inner: self.inner.map(|z| z * s),
        }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift(&self, s: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows().min(self.cols()) {
            out.inner[(i, i)] += c64(s, 0.0);
        }
        out
    }

    /// Sum of the diagonal (square part for rectangular input).
    pub fn trace(&self) -> Complex64 {
        (0..self.rows().min(self.cols())).map(|i| self.inner[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖M − M*‖_F / max(1, ‖M‖_F). Meaningful for square matrices only.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let diff = &self.inner - self.inner.adjoint();
        let num = diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        num / self.frobenius_norm().max(1.0)
    }

    /// (M + M*) / 2.
    pub fn hermitian_part(&self) -> Self {
        Self {
            inner: (&self.inner + self.inner.adjoint()) * c64(0.5, 0.0),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Copy of the `rows`×`cols` sub-matrix starting at (`r0`, `c0`).
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self {
            inner: self.inner.view((r0, c0), (rows, cols)).into_owned(),
        }
    }

    pub fn columns(&self, first: usize, count: usize) -> Self {
        self.submatrix(0, first, self.rows(), count)
    }

    /// Places `[tl, tr; bl, br]` into one matrix. Shapes must tile.
    pub fn block2(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self> {
        if tl.rows() != tr.rows()
            || bl.rows() != br.rows()
            || tl.cols() != bl.cols()
            || tr.cols() != br.cols()
        {
            return Err(Error::dims(format!(
                "blocks {:?} {:?} / {:?} {:?} do not tile",
                tl.shape(),
                tr.shape(),
                bl.shape(),
                br.shape()
            )));
        }
        let (r1, c1) = tl.shape();
        let (r2, c2) = br.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&tl.inner);
        m.view_mut((0, c1), (r1, c2)).copy_from(&tr.inner);
        m.view_mut((r1, 0), (r2, c1)).copy_from(&bl.inner);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&br.inner);
        Ok(Self { inner: m })
    }

    /// Block-diagonal matrix from square or rectangular pieces.
    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(Self::rows).sum();
        let cols = blocks.iter().map(Self::cols).sum();
        let mut m = DMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.view_mut((r, c), b.shape()).copy_from(&b.inner);
            r += b.rows();
            c += b.cols();
        }
        Self { inner: m }
    }

    /// ⟨x, y⟩ = y* x for column vectors.
    pub fn inner_product(x: &Self, y: &Self) -> Complex64 {
        x.inner
            .iter()
            .zip(y.inner.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Largest entrywise distance, a quick closeness measure for tests and checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub(crate) fn ensure_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::dims(format!(
                "{what}: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )))
        }
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} ", self.rows(), self.cols())?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows() {
            write!(f, "  [")?;
            for j in 0..self.cols() {
                let z = self.inner[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{:?}", z.re)?;
                } else {
                    write!(f, "{:?}{:+?}i", z.re, z.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { inner: &self.inner $op &rhs.inner }
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { inner: self.inner $op rhs.inner }
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { inner: self.inner $op &rhs.inner }
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { inner: &self.inner $op rhs.inner }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { inner: -&self.inner }
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { inner: -self.inner }
    }
}
