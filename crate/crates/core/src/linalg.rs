//! Exact dense linear algebra over any [`Field`].
//!
//! Matrices here are tiny (at most 2^n × 2^n with n = 4 for every shipped check),
//! so everything is a plain row-major `Vec`. Subspaces are stored in reduced
//! row echelon form, which makes equality of spaces a basis comparison.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator does not square to the identity")]
    NotAnInvolution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOver<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> MatrixOver<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: Vec<F>) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MatrixOver<G> {
        MatrixOver {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (ii, &i) in rows.iter().enumerate() {
            for (jj, &j) in cols.iter().enumerate() {
                m[(ii, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Self]) -> Result<Self, LinalgError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(LinalgError::DimensionMismatch {
                    left: cols,
                    right: b.cols,
                });
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Self { rows, cols, data })
    }

    /// Reduced row echelon form and pivot columns. Pivot choice: leftmost
    /// column holding a nonzero entry among the remaining rows, topmost such row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].clone() * inv.clone();
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank together with the kernel `{v : M v = 0}`.
    pub fn rank_kernel(&self) -> (usize, SubspaceOver<F>) {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let kernel = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect();
        (pivots.len(), SubspaceOver::span(self.cols, kernel))
    }

    pub fn kernel(&self) -> SubspaceOver<F> {
        self.rank_kernel().1
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&cols))
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                }
            }
        }
        det
    }

    /// ±1 eigenspaces of an involution.
    pub fn eigensplit_involution(&self) -> Result<(SubspaceOver<F>, SubspaceOver<F>), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch {
                left: self.rows,
                right: self.cols,
            });
        }
        let id = Self::identity(self.rows);
        if (self * self) != id {
            return Err(LinalgError::NotAnInvolution);
        }
        let plus = (self - &id).kernel();
        let minus = (self + &id).kernel();
        Ok((plus, minus))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for MatrixOver<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for MatrixOver<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Mul for &MatrixOver<F> {
    type Output = MatrixOver<F>;
    fn mul(self, rhs: &MatrixOver<F>) -> MatrixOver<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shapes");
        let mut out = MatrixOver::<F>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<F: Field> Add for &MatrixOver<F> {
    type Output = MatrixOver<F>;
    fn add(self, rhs: &MatrixOver<F>) -> MatrixOver<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatrixOver {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Sub for &MatrixOver<F> {
    type Output = MatrixOver<F>;
    fn sub(self, rhs: &MatrixOver<F>) -> MatrixOver<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatrixOver {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Neg for &MatrixOver<F> {
    type Output = MatrixOver<F>;
    fn neg(self) -> MatrixOver<F> {
        self.map(|v| -v.clone())
    }
}

/// A linear subspace of `F^ambient`, basis kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceOver<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> SubspaceOver<F> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![F::zero(); ambient];
                    v[i] = F::one();
                    v
                })
                .collect(),
        )
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector outside the ambient space");
        }
        let (r, pivots) = MatrixOver::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if v.iter().all(F::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        MatrixOver::from_rows(rows).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::span(self.ambient, vectors))
    }

    /// Vectors annihilated by every basis vector under the bilinear pairing.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        MatrixOver::from_rows(self.basis.clone()).kernel()
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let rows: Vec<Vec<F>> = self
            .annihilator()
            .basis
            .into_iter()
            .chain(other.annihilator().basis)
            .collect();
        if rows.is_empty() {
            return Ok(Self::full(self.ambient));
        }
        Ok(MatrixOver::from_rows(rows).kernel())
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &MatrixOver<F>) -> Self {
        assert_eq!(m.cols(), self.ambient);
        Self::span(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }

    /// Image under an arbitrary additive map (e.g. an antilinear conjugation).
    pub fn image_with(&self, ambient: usize, f: impl Fn(&[F]) -> Vec<F>) -> Self {
        Self::span(ambient, self.basis.iter().map(|v| f(v)).collect())
    }

    /// Re-embeds coordinates on the listed ambient indices into a larger space.
    pub fn embed(&self, indices: &[usize], ambient: usize) -> Self {
        assert_eq!(indices.len(), self.ambient);
        let vectors = self
            .basis
            .iter()
            .map(|v| {
                let mut w = vec![F::zero(); ambient];
                for (x, &i) in v.iter().zip(indices) {
                    w[i] = x.clone();
                }
                w
            })
            .collect();
        Self::span(ambient, vectors)
    }

    /// `self = a ⊕ b` as an internal direct sum.
    pub fn is_direct_sum_of(&self, a: &Self, b: &Self) -> Result<bool, LinalgError> {
        let sum = a.sum(b)?;
        Ok(sum.dim() == a.dim() + b.dim() && &sum == self)
    }

    /// Some basis vector of `self` lying outside `other`, if any.
    pub fn witness_outside(&self, other: &Self) -> Option<Vec<F>> {
        self.basis.iter().find(|v| !other.contains(v)).cloned()
    }
}
