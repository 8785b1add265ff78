use num_complex::Complex64;

use super::matrix::RealMatrix;

/// Real sparse matrix in row-compressed form. Used for the boolean extraction
/// operators and the frame interpolation matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_entries: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_entries: vec![Vec::new(); rows],
        }
    }

    /// Builds from triplets; duplicates are summed and exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut m = Self::new(rows, cols);
        for (i, j, v) in triplets {
            m.add(i, j, v);
        }
        m.compact();
        m
    }

    pub fn from_dense(dense: &RealMatrix, drop_tol: f64) -> Self {
        let mut m = Self::new(dense.rows(), dense.cols());
        for i in 0..dense.rows() {
            for (j, &v) in dense.row(i).iter().enumerate() {
                if v.abs() > drop_tol {
                    m.row_entries[i].push((j, v));
                }
            }
        }
        m
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of bounds");
        match self.row_entries[i].iter_mut().find(|(c, _)| *c == j) {
            Some(e) => e.1 += v,
            None => self.row_entries[i].push((j, v)),
        }
    }

    fn compact(&mut self) {
        for row in &mut self.row_entries {
            row.retain(|&(_, v)| v != 0.0);
            row.sort_by_key(|&(c, _)| c);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.row_entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row_entries[i].iter().find(|(c, _)| *c == j).map_or(0.0, |e| e.1)
    }

    pub fn nnz(&self) -> usize {
        self.row_entries.iter().map(Vec::len).sum()
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        self.row_entries
            .iter()
            .map(|row| row.iter().map(|&(j, v)| x[j] * v).sum())
            .collect()
    }

    /// `A^T y`
    pub fn tr_mul_vec(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (row, &yi) in self.row_entries.iter().zip(y) {
            for &(j, v) in row {
                out[j] += yi * v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (i, row) in self.row_entries.iter().enumerate() {
            for &(j, v) in row {
                t.row_entries[j].push((i, v));
            }
        }
        t
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut d = RealMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.row_entries.iter().enumerate() {
            for &(j, v) in row {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Keeps only the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            rows: rows.len(),
            cols: self.cols,
            row_entries: rows.iter().map(|&r| self.row_entries[r].clone()).collect(),
        }
    }

    /// Keeps only the listed columns, renumbered in order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            map[old] = new;
        }
        let row_entries = self
            .row_entries
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(j, _)| map[*j] != usize::MAX)
                    .map(|&(j, v)| (map[j], v))
                    .collect()
            })
            .collect();
        Self {
            rows: self.rows,
            cols: cols.len(),
            row_entries,
        }
    }

    /// Places `self` at column offset `offset` inside a wider matrix.
    pub fn with_col_offset(&self, offset: usize, total_cols: usize) -> Self {
        assert!(offset + self.cols <= total_cols);
        Self {
            rows: self.rows,
            cols: total_cols,
            row_entries: self
                .row_entries
                .iter()
                .map(|row| row.iter().map(|&(j, v)| (j + offset, v)).collect())
                .collect(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut row_entries = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack needs equal column counts");
            row_entries.extend(b.row_entries.iter().cloned());
        }
        Self {
            rows: row_entries.len(),
            cols,
            row_entries,
        }
    }
}
