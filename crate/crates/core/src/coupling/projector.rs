use num_complex::Complex64;

use crate::error::{FsiError, Result};
use crate::linalg::{RealMatrix, SparseMatrix};

/// `P = I - L (L^T L)^-1 L^T`, applied without forming `P`.
#[derive(Clone, Debug)]
pub struct Projector {
    l: SparseMatrix,
    /// Lower Cholesky factor of `L^T L`.
    chol: RealMatrix,
}

impl Projector {
    pub fn new(l: SparseMatrix) -> Result<Self> {
        let n = l.cols();
        let mut g = RealMatrix::zeros(n, n);
        for i in 0..l.rows() {
            let row = l.row(i);
            for &(a, va) in row {
                for &(b, vb) in row {
                    g[(a, b)] += va * vb;
                }
            }
        }
        let chol = cholesky(&g).ok_or_else(|| {
            FsiError::DegenerateFrame("L^T L is rank deficient; frame nodes are not all reached".into())
        })?;
        Ok(Self { l, chol })
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    pub fn frame_matrix(&self) -> &SparseMatrix {
        &self.l
    }

    /// `(L^T L)^-1 L^T v`, the least-squares frame coefficients of `v`.
    pub fn frame_coefficients(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut y = self.l.tr_mul_vec(v);
        cholesky_solve(&self.chol, &mut y);
        y
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let y = self.frame_coefficients(v);
        let ly = self.l.mul_vec(&y);
        v.iter().zip(ly).map(|(a, b)| a - b).collect()
    }
}

pub fn make_projector(l: SparseMatrix) -> Result<Projector> {
    Projector::new(l)
}

fn cholesky(a: &RealMatrix) -> Option<RealMatrix> {
    let n = a.rows();
    let scale = (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max);
    if n == 0 || scale == 0.0 {
        return if n == 0 { Some(RealMatrix::zeros(0, 0)) } else { None };
    }
    let mut l = RealMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 1e-12 * scale {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

fn cholesky_solve(l: &RealMatrix, b: &mut [Complex64]) {
    let n = l.rows();
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= b[k] * l[(i, k)];
        }
        b[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= b[k] * l[(k, i)];
        }
        b[i] = s / l[(i, i)];
    }
}
