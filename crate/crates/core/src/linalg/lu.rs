use num_complex::Complex64;
use rayon::prelude::*;

use super::matrix::ComplexMatrix;
use crate::error::{FsiError, Result};

/// LU factorization with partial pivoting, `P A = L U`, stored in place.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: ComplexMatrix,
    /// `perm[i]` is the row of the original matrix placed at row `i`.
    perm: Vec<usize>,
    norm1: f64,
}

const PAR_THRESHOLD: usize = 128;

impl LuFactors {
    /// Factorizes a square matrix. A pivot that is exactly zero (or non-finite)
    /// reports a singularity so that callers can attach physical context.
    pub fn factorize(mut a: ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(FsiError::DimensionMismatch {
                expected: a.rows(),
                got: a.cols(),
            });
        }
        let n = a.rows();
        let norm1 = a.norm1();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > 0.0) || !pmax.is_finite() {
                return Err(FsiError::Singularity(format!("zero pivot in column {k}")));
            }
            if p != k {
                perm.swap(p, k);
                let data = a.as_mut_slice();
                let (top, bottom) = data.split_at_mut(p * n);
                top[k * n..(k + 1) * n].swap_with_slice(&mut bottom[..n]);
            }
            let data = a.as_mut_slice();
            let (head, tail) = data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv_pivot = pivot_row[k].inv();
            let update = |row: &mut [Complex64]| {
                let l = row[k] * inv_pivot;
                row[k] = l;
                if l != Complex64::new(0.0, 0.0) {
                    for (r, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *r -= l * u;
                    }
                }
            };
            if n - k > PAR_THRESHOLD {
                tail.par_chunks_mut(n).for_each(update);
            } else {
                tail.chunks_mut(n).for_each(update);
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            norm1,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: Complex64 = row[..i].iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: Complex64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        // A^H = U^H L^H P, so solve U^H y = b, L^H z = y, x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let pivot = self.lu[(i, i)].conj();
            y[i] /= pivot;
            let yi = y[i];
            let row = self.lu.row(i);
            for (yj, u) in y[i + 1..].iter_mut().zip(&row[i + 1..]) {
                *yj -= u.conj() * yi;
            }
        }
        for i in (0..n).rev() {
            let yi = y[i];
            let row = self.lu.row(i);
            for (yj, l) in y[..i].iter_mut().zip(&row[..i]) {
                *yj -= l.conj() * yi;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    /// Solves `A X = B` for every column of `B`.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.n);
        let columns: Vec<Vec<Complex64>> = (0..b.cols())
            .into_par_iter()
            .map(|j| self.solve(&b.column(j)))
            .collect();
        ComplexMatrix::from_fn(self.n, b.cols(), |i, j| columns[j][i])
    }

    /// Estimate of the 1-norm condition number `||A||_1 ||A^-1||_1`
    /// (Hager's method with Higham's refinements).
    pub fn condition_estimate(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let one = Complex64::new(1.0, 0.0);
        let sign = |v: &[Complex64]| -> Vec<Complex64> {
            v.iter()
                .map(|z| if z.norm() > 0.0 { z / z.norm() } else { one })
                .collect()
        };
        let norm1 = |v: &[Complex64]| v.iter().map(|z| z.norm()).sum::<f64>();

        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut y = self.solve(&x);
        let mut est = norm1(&y);
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let z = self.solve_adjoint(&sign(&y));
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.re.abs().max(v.norm())))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if j == last_j {
                break;
            }
            let zx: f64 = x.iter().zip(&z).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= zx && last_j != usize::MAX {
                break;
            }
            x = vec![Complex64::new(0.0, 0.0); n];
            x[j] = one;
            y = self.solve(&x);
            let new_est = norm1(&y);
            last_j = j;
            if new_est <= est {
                break;
            }
            est = new_est;
        }
        let alt: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                Complex64::new(s * (1.0 + t), 0.0)
            })
            .collect();
        let alt_est = 2.0 * norm1(&self.solve(&alt)) / (3.0 * n as f64);
        self.norm1 * est.max(alt_est)
    }

    /// Explicit inverse; only used by tests and small oracles.
    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_matrix(&ComplexMatrix::identity(self.n))
    }
}
