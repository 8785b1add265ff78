//! Dense and sparse linear-algebra carriers used throughout the solver.

mod lu;
mod matrix;
mod sparse;
mod vector;

pub use lu::LuFactors;
pub use matrix::{ComplexMatrix, Matrix, RealMatrix, Scalar};
pub use sparse::SparseMatrix;
pub use vector::{axpy, dot, norm2, norm_inf, relative_difference, scale, sub, ComplexVector};

pub use num_complex::Complex64 as C64;
