//! Dense exact linear algebra over ℚ(√−3).
//!
//! Two independent elimination routes are provided: [`Matrix::rank`] runs
//! fraction-free (Bareiss) elimination, where every division is exact in the
//! ring generated by the entries, and [`Matrix::rref`] runs ordinary
//! Gauss–Jordan elimination with pivots scaled to one. Null spaces are read
//! off the reduced row echelon form.

use std::fmt;

use crate::scalars::QuadScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<QuadScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![QuadScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = QuadScalar::one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must share `cols` entries.
    pub fn from_rows(rows: Vec<Vec<QuadScalar>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[QuadScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<QuadScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> QuadScalar {
        let mut t = QuadScalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn scaled(&self, s: &QuadScalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QuadScalar::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank by fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = QuadScalar::one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let pivot = m[(rank, col)].clone();
            for r in rank + 1..m.rows {
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    // (pivot·m[r][c] − factor·m[rank][c]) / prev is exact
                    let num = &(&pivot * &m[(r, c)]) - &(&factor * &m[(rank, c)]);
                    m[(r, c)] = num.checked_div(&prev).expect("nonzero Bareiss divisor");
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> QuadScalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return QuadScalar::one();
        }
        let mut m = self.clone();
        let mut prev = QuadScalar::one();
        let mut sign_flip = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[(r, k)].is_zero()) else {
                return QuadScalar::zero();
            };
            if p != k {
                m.swap_rows(k, p);
                sign_flip = !sign_flip;
            }
            let pivot = m[(k, k)].clone();
            for r in k + 1..n {
                let factor = m[(r, k)].clone();
                for c in k + 1..n {
                    let num = &(&pivot * &m[(r, c)]) - &(&factor * &m[(k, c)]);
                    m[(r, c)] = num.checked_div(&prev).expect("nonzero Bareiss divisor");
                }
                m[(r, k)] = QuadScalar::zero();
            }
            prev = pivot;
        }
        let det = m[(n - 1, n - 1)].clone();
        if sign_flip {
            -det
        } else {
            det
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = &factor * &m[(row, c)];
                    m[(r, c)] -= &delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : self·x = 0}`, returned as the rows of a matrix in
    /// reduced row echelon form.
    pub fn null_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![QuadScalar::zero(); self.cols];
            v[f] = QuadScalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, f)];
            }
            basis.push(v);
        }
        let b = Matrix::from_rows(basis, self.cols);
        if b.rows == 0 {
            return b;
        }
        b.rref().0
    }

    /// Whether `v` lies in the row space of `self`.
    pub fn row_space_contains(&self, v: &[QuadScalar]) -> bool {
        let mut rows = self.to_rows();
        let before = self.rank();
        rows.push(v.to_vec());
        Matrix::from_rows(rows, self.cols).rank() == before
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = QuadScalar;
    fn index(&self, (r, c): (usize, usize)) -> &QuadScalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut QuadScalar {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
