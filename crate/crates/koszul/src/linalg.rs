//! Dense exact linear algebra over the ground field.
//!
//! Matrices here are small (dozens of rows at desk scale), so plain Gaussian
//! elimination with exact scalars is used throughout. Pivoting is
//! deterministic: first nonzero column, topmost available row.

use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug)]
pub struct Mat {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Mat::zeros(field, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, s) in row.into_iter().enumerate() {
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of `{x : self * x = 0}`, one vector per free column, in
    /// canonical (free-column) order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = m.get(ri, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = rhs` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Mat::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (ri, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(ri, self.cols).clone();
        }
        Some(x)
    }
}

/// Reduced row-echelon basis of the span of `rows`, with the pivot column of
/// each basis vector. Rows of zeros are dropped.
pub fn row_space_basis(
    field: FieldSpec,
    rows: &[Vec<Scalar>],
) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    if rows.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut m = Mat::from_rows(field, rows.to_vec());
    let pivots = m.rref();
    let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
    (basis, pivots)
}

/// Reduces `v` against an RREF basis: subtracts multiples so that all pivot
/// coordinates of the result vanish.
pub fn reduce_against(v: &mut [Scalar], basis: &[Vec<Scalar>], pivots: &[usize]) {
    for (row, &p) in basis.iter().zip(pivots) {
        if !v[p].is_zero() {
            let f = v[p].clone();
            for j in 0..v.len() {
                v[j] = v[j].sub(&f.mul(&row[j]));
            }
        }
    }
}
