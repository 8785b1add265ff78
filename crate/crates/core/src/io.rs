//! Plain-text serialization of results: CSV tables and Matrix Market dumps.
//! Floats are written with Rust's shortest round-trip formatting, so identical
//! values always produce identical bytes.

use std::fmt::Write;

use num_complex::Complex64;

use crate::benchmarks::InterfaceSample;
use crate::linalg::ComplexMatrix;
use crate::mesh::Point2D;

/// `iter,normalized_residual`, one row per entry of the history.
pub fn residuals_csv(history: &[f64]) -> String {
    let mut s = String::from("iter,normalized_residual\n");
    for (i, r) in history.iter().enumerate() {
        let _ = writeln!(s, "{i},{r:e}");
    }
    s
}

/// Interface displacements; the frame columns are empty for mortar coupling.
pub fn interface_csv(samples: &[InterfaceSample]) -> String {
    let mut s = String::from("interface,s,re_u_sn,im_u_sn,re_u_fn,im_u_fn,re_u_in,im_u_in\n");
    for p in samples {
        let _ = write!(
            s,
            "{},{:e},{:e},{:e},{:e},{:e},",
            p.interface, p.s, p.side_a.re, p.side_a.im, p.side_b.re, p.side_b.im
        );
        match p.frame {
            Some(f) => {
                let _ = writeln!(s, "{:e},{:e}", f.re, f.im);
            }
            None => s.push_str(",\n"),
        }
    }
    s
}

/// `x,y,re_p,im_p`; points outside the fluid are skipped.
pub fn field_csv(points: &[Point2D], values: &[Option<Complex64>]) -> String {
    let mut s = String::from("x,y,re_p,im_p\n");
    for (p, v) in points.iter().zip(values) {
        if let Some(v) = v {
            let _ = writeln!(s, "{:e},{:e},{:e},{:e}", p.x, p.y, v.re, v.im);
        }
    }
    s
}

/// Dense complex matrix in Matrix Market array format (column major).
pub fn matrix_market(m: &ComplexMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix array complex general\n");
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let v = m[(i, j)];
            let _ = writeln!(s, "{:e} {:e}", v.re, v.im);
        }
    }
    s
}

/// Regular grid of `nx` x `ny` points covering `[x0, x1] x [y0, y1]`.
pub fn grid(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Vec<Point2D> {
    let at = |a: f64, b: f64, i: usize, n: usize| if n > 1 { a + (b - a) * i as f64 / (n - 1) as f64 } else { 0.5 * (a + b) };
    let mut pts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            pts.push(Point2D::new(at(x0, x1, i, nx), at(y0, y1, j, ny)));
        }
    }
    pts
}
