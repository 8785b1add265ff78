use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Square linear map on multiplier space.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64>;
}

impl LinearOperator for ComplexMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matvec(v)
    }
}

/// Identity map of a given size.
#[derive(Clone, Copy, Debug)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.to_vec()
    }
}

/// `factor * inner`.
pub struct Scaled<'a, T: LinearOperator + ?Sized> {
    pub inner: &'a T,
    pub factor: f64,
}

impl<T: LinearOperator + ?Sized> LinearOperator for Scaled<'_, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut y = self.inner.apply(v);
        for x in &mut y {
            *x *= self.factor;
        }
        y
    }
}

/// Assembles an operator column by column (small problems and tests only).
pub fn to_dense(op: &dyn LinearOperator) -> ComplexMatrix {
    let n = op.dim();
    let mut m = ComplexMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let col = op.apply(&e);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
        e[j] = Complex64::new(0.0, 0.0);
    }
    m
}
