//! Dense matrices over GF(q) and the Gaussian elimination needed for kernels.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Row-major dense matrix over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from integer-encoded rows, checking the entries.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::param("matrix rows have unequal lengths"));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.element(v)?);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.value()).collect())
            .collect()
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|j| self.column_is_zero(j))
    }

    /// Submatrix made of the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, j));
            }
        }
        m
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, field: &FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = field.inv(m.get(r, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                m.set(r, j, field.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                let f = m.get(i, col);
                if i == r || f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = field.sub(m.get(i, j), field.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of `{x : H x = 0}`, one vector per free column.
    pub fn kernel_basis(&self, field: &FieldSpec) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[f] = FieldElement::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(r.get(row, f));
                }
                v
            })
            .collect()
    }

    /// `H x` for a vector `x`.
    pub fn mul_vec(&self, field: &FieldSpec, x: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|e| e.value()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_in_kernel() {
        for q in [2, 3, 4, 5, 7, 8] {
            let f = FieldSpec::new(q).unwrap();
            let rows: Vec<Vec<u32>> = (0..3)
                .map(|i| (0..6).map(|j| (i * 7 + j * 3 + i * j) % q).collect())
                .collect();
            let h = Matrix::from_rows(&f, &rows).unwrap();
            let basis = h.kernel_basis(&f);
            assert_eq!(basis.len(), 6 - h.rank(&f));
            for v in &basis {
                assert!(h.mul_vec(&f, v).iter().all(|e| e.is_zero()));
            }
        }
    }

    #[test]
    fn rank_examples() {
        let f = FieldSpec::new(2).unwrap();
        let h = Matrix::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(h.rank(&f), 2);
        let f3 = FieldSpec::new(3).unwrap();
        let h = Matrix::from_rows(&f3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(h.rank(&f3), 3);
        assert_eq!(Matrix::identity(4).rank(&f), 4);
        assert!(Matrix::zeros(1, 2).has_zero_column());
    }
}
