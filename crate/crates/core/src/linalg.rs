//! Dense exact matrices over a [`Field`] and the handful of elimination
//! routines the rest of the engine is built on.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalars::{Field, Scalar};

/// Row-major dense matrix. Subspaces are passed around as matrices whose
/// columns form a basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Result of Gauss-Jordan elimination.
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: nrows, cols, data }
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
            cols,
        )
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = &out[(r, c)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Matrix {
        let data = self.data[range.start * self.cols..range.end * self.cols].to_vec();
        Matrix { field: self.field, rows: range.len(), cols: self.cols, data }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Echelon {
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
                    if !m[(row, c)].is_zero() {
                        let delta = &factor * &m[(row, c)];
                        m[(r, c)] = &m[(r, c)] - &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -&reduced[(i, f)];
            }
        }
        k
    }

    /// A basis of the column space, chosen among the columns themselves.
    pub fn column_basis(&self) -> Matrix {
        self.select_columns(&self.rref().pivots)
    }

    /// Solves `self * X = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve row mismatch");
        let aug = self.hstack(rhs);
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = reduced[(i, self.cols + c)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows))
            .filter(|_| self.rank() == self.rows)
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = self.field.one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                return self.field.zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..m.cols {
                    let delta = &factor * &m[(col, c)];
                    m[(r, c)] = &m[(r, c)] - &delta;
                }
            }
        }
        det
    }
}

/// Precomputed left inverse of a full-column-rank matrix `M`: coordinates of
/// vectors in the column span of `M`, and a membership test.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    /// First `rank` rows give coordinates; the remaining rows vanish exactly on span(M).
    transform: Matrix,
    rank: usize,
}

impl CoordinateMap {
    /// Panics if `basis` does not have full column rank.
    pub fn new(basis: &Matrix) -> CoordinateMap {
        let field = basis.field();
        let n = basis.rows();
        let aug = basis.hstack(&Matrix::identity(field, n));
        let Echelon { reduced, pivots } = aug.rref();
        let rank = pivots.iter().filter(|&&p| p < basis.cols()).count();
        assert_eq!(rank, basis.cols(), "coordinate basis is not independent");
        // Row operations E with E*M = [I; 0] sit in the right block.
        let mut transform = Matrix::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                transform[(r, c)] = reduced[(r, basis.cols() + c)].clone();
            }
        }
        CoordinateMap { transform, rank }
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    /// `L` with `L M = I`.
    pub fn left_inverse(&self) -> Matrix {
        self.transform.select_rows(0..self.rank)
    }

    /// Coordinates of each column of `vectors`, or `None` if some column is
    /// outside the span.
    pub fn coordinates(&self, vectors: &Matrix) -> Option<Matrix> {
        let ev = self.transform.mul(vectors);
        let n = ev.rows();
        if !ev.select_rows(self.rank..n).is_zero() {
            return None;
        }
        Some(ev.select_rows(0..self.rank))
    }
}

/// The quotient `Z / B` of a subspace `Z` by a subspace `B ⊆ Z`, with chosen
/// representatives for a basis of the quotient.
#[derive(Clone, Debug)]
pub struct Subquotient {
    representatives: Matrix,
    boundary_rank: usize,
    coords: CoordinateMap,
}

impl Subquotient {
    /// `cycles` columns must be a basis of `Z`; `boundaries` columns span `B`.
    pub fn new(cycles: &Matrix, boundaries: &Matrix) -> Subquotient {
        let field = cycles.field();
        let joined = boundaries.hstack(cycles);
        let pivots = joined.rref().pivots;
        let b_cols: Vec<usize> = pivots.iter().copied().filter(|&p| p < boundaries.cols()).collect();
        let z_cols: Vec<usize> = pivots
            .iter()
            .copied()
            .filter(|&p| p >= boundaries.cols())
            .collect();
        let b_basis = joined.select_columns(&b_cols);
        let representatives = joined.select_columns(&z_cols);
        debug_assert_eq!(b_basis.cols() + representatives.cols(), cycles.cols());
        let full = if b_basis.cols() == 0 && representatives.cols() == 0 {
            Matrix::zeros(field, cycles.rows(), 0)
        } else {
            b_basis.hstack(&representatives)
        };
        Subquotient {
            boundary_rank: b_basis.cols(),
            coords: CoordinateMap::new(&full),
            representatives,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }

    /// Ambient vectors (columns) representing a basis of the quotient.
    pub fn representatives(&self) -> &Matrix {
        &self.representatives
    }

    /// Quotient coordinates of cycle vectors; `None` if a column is not in `Z`.
    pub fn reduce(&self, vectors: &Matrix) -> Option<Matrix> {
        let c = self.coords.coordinates(vectors)?;
        Some(c.select_rows(self.boundary_rank..c.rows()))
    }
}
