//! Independent oracles shared by the property and acceptance targets.
#![allow(dead_code)]

use num_complex::Complex64;

use fsifeti::bem::{assemble_h, assemble_influence, bessel_values, FluxDofMap, GaussLegendre, QuadratureOrders};
use fsifeti::coupling::make_projector;
use fsifeti::fem::{assemble_beam, BeamModel, BeamProperties};
use fsifeti::linalg::SparseMatrix;
use fsifeti::mesh::{build_rectangle_boundary, BoundaryMesh, Orientation, Point2D};

use crate::reference;

/// Largest relative error of J0, Y0, J1, Y1 against the frozen table.
pub fn bessel_max_error() -> f64 {
    let mut worst = 0.0f64;
    for &(z, j0, y0, j1, y1) in reference::BESSEL_TABLE {
        let b = bessel_values(z).unwrap();
        for (got, want) in [(b.j0, j0), (b.y0, y0), (b.j1, j1), (b.y1, y1)] {
            worst = worst.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    worst
}

pub fn square(side: f64) -> BoundaryMesh {
    let nodes = vec![
        Point2D::new(0.0, 0.0),
        Point2D::new(side, 0.0),
        Point2D::new(side, side),
        Point2D::new(0.0, side),
    ];
    BoundaryMesh::new(nodes, vec![[0, 1], [1, 2], [2, 3], [3, 0]], Orientation::Interior, None).unwrap()
}

/// Adaptive bisection with a 10-point Gauss rule.
fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: usize) -> Complex64 {
    let rule = GaussLegendre::new(10);
    // The rule lives on [0, 1].
    let quad = |a: f64, b: f64| -> Complex64 { rule.iter().map(|(x, w)| f(a + (b - a) * x) * (w * (b - a))).sum() };
    fn rec(quad: &dyn Fn(f64, f64) -> Complex64, a: f64, b: f64, whole: Complex64, tol: f64, depth: usize) -> Complex64 {
        let m = 0.5 * (a + b);
        let (l, r) = (quad(a, m), quad(m, b));
        if (l + r - whole).norm() <= tol.max(1e-14 * whole.norm()) || depth == 0 {
            return l + r;
        }
        rec(quad, a, m, l, 0.5 * tol, depth - 1) + rec(quad, m, b, r, 0.5 * tol, depth - 1)
    }
    rec(&quad, a, b, quad(a, b), tol, depth)
}

pub type Dense = Vec<Vec<Complex64>>;

/// Independent element-by-element evaluation of `H` and `G0` (nodal flux).
pub fn influence_oracle(mesh: &BoundaryMesh, k: f64) -> (Dense, Dense) {
    let n = mesh.node_count();
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 0..n {
        h[i][i] += mesh.corner_coefficient(i).unwrap();
        let x = mesh.node(i);
        for e in 0..mesh.element_count() {
            let [a, b] = mesh.element(e);
            let (pa, pb) = (mesh.node(a), mesh.node(b));
            let l = mesh.length(e);
            let nrm = mesh.element_normal(e).unwrap();
            let y = |t: f64| Point2D::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y));
            let gk = |t: f64| {
                let p = y(t);
                let r = ((p.x - x.x).powi(2) + (p.y - x.y).powi(2)).sqrt();
                if r == 0.0 {
                    // Only reachable through rounding of the substitution; the
                    // weight 2u vanishes there anyway.
                    return Complex64::new(0.0, 0.0);
                }
                let hv = bessel_values(k * r).unwrap();
                i_unit / 4.0 * hv.h0()
            };
            let hk = |t: f64| {
                let p = y(t);
                let (dx, dy) = (p.x - x.x, p.y - x.y);
                let r = (dx * dx + dy * dy).sqrt();
                let rn = (dx * nrm.nx + dy * nrm.ny) / r;
                let hv = bessel_values(k * r).unwrap();
                -i_unit * k / 4.0 * hv.h1() * rn
            };
            // Substitutions t = u^2 / t = 1 - u^2 remove the endpoint log
            // singularity when the collocation node is an element end.
            let map = |u: f64| -> (f64, f64) {
                if a == i {
                    (u * u, 2.0 * u)
                } else if b == i {
                    (1.0 - u * u, 2.0 * u)
                } else {
                    (u, 1.0)
                }
            };
            for (j, shape) in [(a, (|t: f64| 1.0 - t) as fn(f64) -> f64), (b, |t: f64| t)] {
                g[i][j] += adaptive(&|u| {
                    let (t, jac) = map(u);
                    gk(t) * (shape(t) * jac)
                }, 0.0, 1.0, 1e-13, 30) * l;
                if a != i && b != i {
                    h[i][j] += adaptive(&|t| hk(t) * shape(t), 0.0, 1.0, 1e-13, 30) * l;
                }
            }
        }
    }
    (h, g)
}

/// Meshes and wavenumbers the quadrature oracle is run on.
pub fn oracle_cases() -> Vec<(BoundaryMesh, f64)> {
    vec![
        (square(1.0), 1.0),
        (square(1.0), 3.0),
        (square(2.5), 0.7),
        (
            BoundaryMesh::new(
                vec![Point2D::new(0.0, 0.0), Point2D::new(1.3, 0.2), Point2D::new(1.0, 1.1), Point2D::new(-0.2, 0.9)],
                vec![[0, 1], [1, 2], [2, 3], [3, 0]],
                Orientation::Interior,
                None,
            )
            .unwrap(),
            2.0,
        ),
    ]
}

/// Largest absolute entry difference of assembled `H` and `G0` against the
/// adaptive oracle.
pub fn influence_max_error(mesh: &BoundaryMesh, k: f64) -> (f64, f64) {
    let (h, g) = assemble_influence(mesh, k, &FluxDofMap::nodal(mesh), QuadratureOrders::default()).unwrap();
    let (ho, go) = influence_oracle(mesh, k);
    let (mut eh, mut eg) = (0.0f64, 0.0f64);
    for i in 0..mesh.node_count() {
        for j in 0..mesh.node_count() {
            eh = eh.max((h[(i, j)] - ho[i][j]).norm());
            eg = eg.max((g[(i, j)] - go[i][j]).norm());
        }
    }
    (eh, eg)
}

pub const LAPLACE_RECTANGLES: [(f64, f64, f64); 4] = [(1.0, 1.0, 4.0), (2.0, 1.0, 8.0), (10.0, 4.0, 6.4), (3.0, 0.5, 12.0)];

/// Largest `|sum_j H_ij|` at `k = 1e-4` on a rectangle.
pub fn laplace_max_row_sum(w: f64, ht: f64, density: f64) -> f64 {
    let mesh = build_rectangle_boundary(w, ht, density).unwrap();
    let h = assemble_h(&mesh, 1e-4).unwrap();
    (0..h.rows()).map(|i| h.row(i).iter().sum::<Complex64>().norm()).fold(0.0, f64::max)
}

/// Natural frequencies (Hz) of a simply supported 10 m steel beam from the
/// generalized symmetric eigenproblem `K phi = w^2 M phi`, solved with nalgebra.
pub fn beam_frequencies(n: usize) -> Vec<f64> {
    let props = BeamProperties::steel_wall();
    let beam = BeamModel::new(Point2D::new(0.0, 0.0), Point2D::new(10.0, 0.0), n, props, (0.0, 1.0))
        .unwrap()
        .simply_supported();
    let beam = assemble_beam(beam, 0.0).unwrap();
    let free = beam.free_dofs().to_vec();
    let m = free.len();
    let k = nalgebra::DMatrix::from_fn(m, m, |i, j| beam.k_s[(free[i], free[j])]);
    let ms = nalgebra::DMatrix::from_fn(m, m, |i, j| beam.m_s[(free[i], free[j])]);
    let chol = nalgebra::Cholesky::new(ms).expect("mass matrix is positive definite");
    let l_inv = chol.l().try_inverse().unwrap();
    let a = &l_inv * k * l_inv.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let mut w2: Vec<f64> = nalgebra::SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    w2.sort_by(f64::total_cmp);
    w2.into_iter().map(|v| v.sqrt() / (2.0 * std::f64::consts::PI)).collect()
}

/// Largest violations of `PL = 0`, `P^2 = P` and `P^T = P` for the frame
/// `vals (n x m, row-major) + 2 I`; the identity block keeps it full rank.
pub fn projector_errors(n: usize, m: usize, vals: &[f64]) -> (f64, f64, f64) {
    let l = SparseMatrix::from_triplets(
        n,
        m,
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j, vals[i * m + j] + if i == j { 2.0 } else { 0.0 }))),
    );
    let p = make_projector(l.clone()).unwrap();
    let unit = |k: usize| (0..n).map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect::<Vec<_>>();
    let cols: Vec<Vec<Complex64>> = (0..n).map(|k| p.apply(&unit(k))).collect();
    let mut pl = 0.0f64;
    for j in 0..m {
        let col: Vec<Complex64> = (0..n).map(|i| Complex64::new(l.get(i, j), 0.0)).collect();
        pl = p.apply(&col).iter().map(|v| v.norm()).fold(pl, f64::max);
    }
    let (mut idem, mut sym) = (0.0f64, 0.0f64);
    for k in 0..n {
        let ppk = p.apply(&cols[k]);
        for i in 0..n {
            idem = idem.max((ppk[i] - cols[k][i]).norm());
            sym = sym.max((cols[k][i] - cols[i][k]).norm());
        }
    }
    (pl, idem, sym)
}
