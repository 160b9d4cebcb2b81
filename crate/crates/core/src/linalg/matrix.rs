use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{shape_err, Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return shape_err(format!(
                "buffer of length {} cannot hold a {rows}x{cols} matrix",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for
    /// literals in tests and examples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols + j])
            .collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParam(
                "matrix contains NaN or infinite entries".into(),
            ))
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.data[i * self.cols + j]);
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: out,
        }
    }

    /// Leading `k` columns.
    pub fn leading_columns(&self, k: usize) -> DenseMatrix {
        assert!(k <= self.cols);
        let mut data = Vec::with_capacity(self.rows * k);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[..k]);
        }
        DenseMatrix {
            rows: self.rows,
            cols: k,
            data,
        }
    }

    /// Columns at the given indices, in that order.
    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// `[self, other]`.
    pub fn hcat(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return shape_err(format!(
                "hcat of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn scaled(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> Result<DenseMatrix> {
        if self.shape() != other.shape() {
            return shape_err(format!(
                "elementwise op on {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return shape_err(format!(
                "matmul of {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        gemm(
            self.rows,
            self.cols,
            rhs.cols,
            (&self.data, self.cols as isize, 1),
            (&rhs.data, rhs.cols as isize, 1),
            &mut out.data,
        );
        Ok(out)
    }

    /// `selfᵀ * rhs` without materializing the transpose.
    pub fn tr_matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != rhs.rows {
            return shape_err(format!(
                "transposed matmul of ({}x{})ᵀ by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = DenseMatrix::zeros(self.cols, rhs.cols);
        gemm(
            self.cols,
            self.rows,
            rhs.cols,
            (&self.data, 1, self.cols as isize),
            (&rhs.data, rhs.cols as isize, 1),
            &mut out.data,
        );
        Ok(out)
    }

    /// `self * rhsᵀ` without materializing the transpose.
    pub fn matmul_tr(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.cols {
            return shape_err(format!(
                "matmul of {}x{} by ({}x{})ᵀ",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.rows);
        gemm(
            self.rows,
            self.cols,
            rhs.rows,
            (&self.data, self.cols as isize, 1),
            (&rhs.data, 1, rhs.cols as isize),
            &mut out.data,
        );
        Ok(out)
    }

    /// `max |selfᵀ self − I|`, the orthonormality defect of the columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.tr_matmul(self).expect("square gram");
        let mut worst: f64 = 0.0;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }
}

/// `out = a * b` for an `m x k` by `k x n` product given (slice, row stride,
/// col stride) views; `out` is row-major `m x n` and must be zeroed.
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: (&[f64], isize, isize),
    b: (&[f64], isize, isize),
    out: &mut [f64],
) {
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    // SAFETY: strides and dimensions describe in-bounds views of the slices,
    // which the callers derive from the matrices' own shapes.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.0.as_ptr(),
            a.1,
            a.2,
            b.0.as_ptr(),
            b.1,
            b.2,
            0.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for v in self.row(i).iter().take(8) {
                write!(f, "{v:>12.5e} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_checks_length() {
        assert!(DenseMatrix::from_vec(2, 3, vec![0.0; 5]).is_err());
        assert!(DenseMatrix::from_vec(2, 3, vec![0.0; 6]).is_ok());
    }

    #[test]
    fn frob_norm_of_identity() {
        assert_eq!(DenseMatrix::identity(4).frob_norm(), 2.0);
    }

    #[test]
    fn matmul_by_identity() {
        let a = DenseMatrix::from_fn(3, 4, |i, j| (i * 7 + j) as f64 - 3.5);
        assert_eq!(a.matmul(&DenseMatrix::identity(4)).unwrap(), a);
        assert_eq!(DenseMatrix::identity(3).matmul(&a).unwrap(), a);
    }

    #[test]
    fn matmul_rejects_bad_dims() {
        let a = DenseMatrix::zeros(3, 4);
        assert!(matches!(a.matmul(&a), Err(Error::Shape(_))));
    }

    #[test]
    fn transposed_products_match_explicit() {
        let a = DenseMatrix::from_fn(5, 3, |i, j| ((i + 1) * (j + 2)) as f64 * 0.5 - i as f64);
        let b = DenseMatrix::from_fn(5, 2, |i, j| (i as f64 - j as f64).sin());
        let c = DenseMatrix::from_fn(4, 3, |i, j| (i * j) as f64 + 1.0);
        let tn = a.tr_matmul(&b).unwrap();
        let explicit = a.transpose().matmul(&b).unwrap();
        assert!(tn.sub(&explicit).unwrap().max_abs() < 1e-14);
        let nt = a.matmul_tr(&c).unwrap();
        let explicit = a.matmul(&c.transpose()).unwrap();
        assert!(nt.sub(&explicit).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn matmul_matches_naive_triple_loop() {
        let a = DenseMatrix::from_fn(7, 9, |i, j| ((i * 31 + j * 17) % 13) as f64 - 6.0);
        let b = DenseMatrix::from_fn(9, 5, |i, j| ((i * 11 + j * 3) % 7) as f64 * 0.25);
        let c = a.matmul(&b).unwrap();
        for i in 0..7 {
            for j in 0..5 {
                let want: f64 = (0..9).map(|p| a[(i, p)] * b[(p, j)]).sum();
                assert_eq!(c[(i, j)], want);
            }
        }
    }

    #[test]
    fn hcat_and_leading_columns() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| (i * 2 + j) as f64);
        let b = DenseMatrix::from_fn(3, 1, |i, _| -(i as f64));
        let ab = a.hcat(&b).unwrap();
        assert_eq!(ab.shape(), (3, 3));
        assert_eq!(ab.leading_columns(2), a);
        assert_eq!(ab.column(2), vec![0.0, -1.0, -2.0]);
    }
}
