use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::{check_wavenumber, kernel_pair};
use super::quadrature::GaussLegendre;
use crate::error::Result;
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::mesh::{BoundaryMesh, Point2D};

/// Gauss-Legendre orders for regular and (log-)singular element integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureOrders {
    pub regular: usize,
    pub singular: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        Self { regular: 8, singular: 16 }
    }
}

impl QuadratureOrders {
    pub fn doubled(self) -> Self {
        Self {
            regular: 2 * self.regular,
            singular: 2 * self.singular,
        }
    }
}

const MAX_SUBDIVISION_DEPTH: u32 = 40;

/// Numbering of the normal-flux unknowns.
///
/// Pressure is continuous and lives on nodes, but the normal derivative jumps at
/// corners, so a corner node carries one flux value per adjacent element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FluxDofMap {
    element_dofs: Vec<[usize; 2]>,
    dof_node: Vec<usize>,
    dof_elements: Vec<Vec<usize>>,
}

impl FluxDofMap {
    /// One flux value per node (continuous flux).
    pub fn nodal(mesh: &BoundaryMesh) -> Self {
        Self::build(mesh, |_| false)
    }

    /// Separate flux values on either side of every corner and open end.
    pub fn split_at_corners(mesh: &BoundaryMesh) -> Self {
        Self::build(mesh, |n| mesh.is_corner(n))
    }

    fn build(mesh: &BoundaryMesh, split: impl Fn(usize) -> bool) -> Self {
        let mut element_dofs = vec![[usize::MAX; 2]; mesh.element_count()];
        let mut dof_node = Vec::new();
        let mut dof_elements = Vec::new();
        for node in 0..mesh.node_count() {
            let incoming = mesh.incoming(node);
            let outgoing = mesh.outgoing(node);
            if split(node) {
                for (e, end) in [(incoming, 1), (outgoing, 0)] {
                    if let Some(e) = e {
                        element_dofs[e][end] = dof_node.len();
                        dof_node.push(node);
                        dof_elements.push(vec![e]);
                    }
                }
            } else {
                let d = dof_node.len();
                dof_node.push(node);
                let mut els = Vec::new();
                if let Some(e) = incoming {
                    element_dofs[e][1] = d;
                    els.push(e);
                }
                if let Some(e) = outgoing {
                    element_dofs[e][0] = d;
                    els.push(e);
                }
                dof_elements.push(els);
            }
        }
        Self {
            element_dofs,
            dof_node,
            dof_elements,
        }
    }

    pub fn len(&self) -> usize {
        self.dof_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof_node.is_empty()
    }

    /// Flux DOF at local end `end` (0 = first node) of element `e`.
    pub fn dof(&self, e: usize, end: usize) -> usize {
        self.element_dofs[e][end]
    }

    pub fn node_of(&self, dof: usize) -> usize {
        self.dof_node[dof]
    }

    /// Elements supporting the shape function of `dof`.
    pub fn elements_of(&self, dof: usize) -> &[usize] {
        &self.dof_elements[dof]
    }

    pub fn dofs_of_node(&self, node: usize) -> Vec<usize> {
        (0..self.len()).filter(|&d| self.dof_node[d] == node).collect()
    }
}

/// Collocation coefficient per node; open ends are treated as smooth points.
fn collocation_coefficients(mesh: &BoundaryMesh) -> Vec<f64> {
    (0..mesh.node_count())
        .map(|i| mesh.corner_coefficient(i).unwrap_or(0.5))
        .collect()
}

struct Rules {
    regular: GaussLegendre,
    singular: GaussLegendre,
}

/// Assembles the double-layer matrix `H` (nodes x nodes) and the geometric
/// single-layer matrix `G0` (nodes x flux DOFs). Rows are collocation nodes and
/// are computed in parallel.
pub fn assemble_influence(
    mesh: &BoundaryMesh,
    k: f64,
    flux: &FluxDofMap,
    orders: QuadratureOrders,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_wavenumber(k)?;
    let n = mesh.node_count();
    let m = flux.len();
    let rules = Rules {
        regular: GaussLegendre::new(orders.regular),
        singular: GaussLegendre::new(orders.singular),
    };
    let coeff = collocation_coefficients(mesh);
    let warned = AtomicBool::new(false);
    let rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut h = vec![Complex64::new(0.0, 0.0); n];
            let mut g = vec![Complex64::new(0.0, 0.0); m];
            h[i] += coeff[i];
            let x = mesh.node(i);
            for (e, &[a, b]) in mesh.elements().iter().enumerate() {
                let l = mesh.length(e);
                if a == i || b == i {
                    // dG/dn vanishes on a flat element through x.
                    let (near, far) = singular_single_layer(l, k, &rules.singular);
                    let (ga, gb) = if a == i { (near, far) } else { (far, near) };
                    g[flux.dof(e, 0)] += ga;
                    g[flux.dof(e, 1)] += gb;
                    continue;
                }
                let (pa, pb) = (mesh.node(a), mesh.node(b));
                let normal = mesh.element_normal(e).expect("element index in range");
                let offset = normal.dot((pa.x - x.x, pa.y - x.y));
                if point_segment_distance(x, pa, pb) <= 1e-14 * l && !warned.swap(true, Ordering::Relaxed) {
                    warn!("collocation node {i} lies on non-adjacent element {e}; results near it are unreliable");
                }
                let mut acc = [Complex64::new(0.0, 0.0); 4];
                regular_element(x, pa, pb, l, offset, k, &rules.regular, 0.0, 1.0, 0, &mut acc);
                g[flux.dof(e, 0)] += acc[0];
                g[flux.dof(e, 1)] += acc[1];
                h[a] += acc[2];
                h[b] += acc[3];
            }
            (h, g)
        })
        .collect();
    let mut hm = ComplexMatrix::zeros(n, n);
    let mut gm = ComplexMatrix::zeros(n, m);
    for (i, (h, g)) in rows.into_iter().enumerate() {
        hm.row_mut(i).copy_from_slice(&h);
        gm.row_mut(i).copy_from_slice(&g);
    }
    Ok((hm, gm))
}

/// `H_ij = C_i delta_ij + sum_e int dG/dn N_j` with default quadrature.
pub fn assemble_h(mesh: &BoundaryMesh, k: f64) -> Result<ComplexMatrix> {
    assemble_influence(mesh, k, &FluxDofMap::nodal(mesh), QuadratureOrders::default()).map(|(h, _)| h)
}

/// `G0_ij = sum_e int G N_j` (nodal flux, no `rho omega^2` factor).
pub fn assemble_g0(mesh: &BoundaryMesh, k: f64) -> Result<ComplexMatrix> {
    assemble_influence(mesh, k, &FluxDofMap::nodal(mesh), QuadratureOrders::default()).map(|(_, g)| g)
}

/// Consistent nodal lumping matrix `int N^T N`.
pub fn assemble_lumping(mesh: &BoundaryMesh) -> RealMatrix {
    assemble_flux_lumping(mesh, &FluxDofMap::nodal(mesh))
}

/// Lumping between flux test functions (rows) and nodal pressures (columns):
/// the consistent force on flux DOF `d` from a nodal pressure field `p` is `(M p)_d`.
pub fn assemble_flux_lumping(mesh: &BoundaryMesh, flux: &FluxDofMap) -> RealMatrix {
    let mut m = RealMatrix::zeros(flux.len(), mesh.node_count());
    for (e, &[a, b]) in mesh.elements().iter().enumerate() {
        let l = mesh.length(e);
        let (da, db) = (flux.dof(e, 0), flux.dof(e, 1));
        m[(da, a)] += l / 3.0;
        m[(da, b)] += l / 6.0;
        m[(db, a)] += l / 6.0;
        m[(db, b)] += l / 3.0;
    }
    m
}

/// Single-layer integrals `(int G N_near, int G N_far)` over an element of
/// length `l` whose first node is the collocation point. The `-(1/2pi) ln r`
/// part is integrated analytically and the smooth remainder with `s = l u^2`.
fn singular_single_layer(l: f64, k: f64, rule: &GaussLegendre) -> (Complex64, Complex64) {
    let inv2pi = 1.0 / (2.0 * PI);
    let ln_l = l.ln();
    let near = -inv2pi * (0.5 * l * ln_l - 0.75 * l);
    let far = -inv2pi * (0.5 * l * ln_l - 0.25 * l);
    let mut rn = Complex64::new(0.0, 0.0);
    let mut rf = Complex64::new(0.0, 0.0);
    for (u, w) in rule.iter() {
        let s = l * u * u;
        let (g, _) = kernel_pair(s, 0.0, k);
        let remainder = g + inv2pi * s.ln();
        let jac = w * 2.0 * l * u;
        let t = s / l;
        rn += remainder * ((1.0 - t) * jac);
        rf += remainder * (t * jac);
    }
    (rn + near, rf + far)
}

#[allow(clippy::too_many_arguments)]
fn regular_element(
    x: Point2D,
    pa: Point2D,
    pb: Point2D,
    l: f64,
    offset: f64,
    k: f64,
    rule: &GaussLegendre,
    t0: f64,
    t1: f64,
    depth: u32,
    acc: &mut [Complex64; 4],
) {
    let seg = l * (t1 - t0);
    if depth < MAX_SUBDIVISION_DEPTH && point_segment_distance(x, pa.lerp(&pb, t0), pa.lerp(&pb, t1)) < seg {
        let tm = 0.5 * (t0 + t1);
        regular_element(x, pa, pb, l, offset, k, rule, t0, tm, depth + 1, acc);
        regular_element(x, pa, pb, l, offset, k, rule, tm, t1, depth + 1, acc);
        return;
    }
    for (u, w) in rule.iter() {
        let t = t0 + (t1 - t0) * u;
        let y = pa.lerp(&pb, t);
        let r = x.distance(&y);
        if r == 0.0 {
            continue;
        }
        let (g, dg) = kernel_pair(r, offset, k);
        let wl = w * seg;
        acc[0] += g * ((1.0 - t) * wl);
        acc[1] += g * (t * wl);
        acc[2] += dg * ((1.0 - t) * wl);
        acc[3] += dg * (t * wl);
    }
}

pub(crate) fn point_segment_distance(x: Point2D, a: Point2D, b: Point2D) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((x.x - a.x) * dx + (x.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    x.distance(&a.lerp(&b, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_line_mesh, build_rectangle_boundary};
    use approx::assert_relative_eq;

    #[test]
    fn lumping_single_element() {
        let m = assemble_lumping(&build_line_mesh(Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0), 1).unwrap());
        assert_relative_eq!(m[(0, 0)], 1.0 / 3.0);
        assert_relative_eq!(m[(0, 1)], 1.0 / 6.0);
        assert_relative_eq!(m[(1, 0)], 1.0 / 6.0);
        assert_relative_eq!(m[(1, 1)], 1.0 / 3.0);
    }

    #[test]
    fn lumping_row_sums_are_tributary_lengths() {
        let mesh = build_line_mesh(Point2D::new(0.0, 0.0), Point2D::new(2.0, 0.0), 2).unwrap();
        let m = assemble_lumping(&mesh);
        assert_relative_eq!(m[(1, 1)], 2.0 / 3.0);
        let sums: Vec<f64> = (0..3).map(|i| m.row(i).iter().sum()).collect();
        assert_relative_eq!(sums[0], 0.5);
        assert_relative_eq!(sums[1], 1.0);
        assert_relative_eq!(m.as_slice().iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn self_element_leaves_only_the_collocation_coefficient() {
        let mesh = build_line_mesh(Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0), 1).unwrap();
        let h = assemble_h(&mesh, 1.0).unwrap();
        assert_eq!(h[(0, 0)], Complex64::new(0.5, 0.0));
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_layer_log_scaling() {
        // For small k the self integral is dominated by -(1/2pi) l ln l / 2 per end.
        let rule = GaussLegendre::new(16);
        let k = 1e-3;
        let d = |l: f64| {
            let (a, b) = singular_single_layer(l, k, &rule);
            (a + b).re
        };
        // the constant part of R cancels in the second difference in l
        let (l1, l2) = (0.5f64, 1.0f64);
        let exact = -(l2 * l2.ln() - l2 - l1 * l1.ln() + l1) / (2.0 * PI);
        let c = -((k / 2.0).ln() + 0.577_215_664_901_532_9) / (2.0 * PI);
        assert_relative_eq!(d(l2) - d(l1), exact + c * (l2 - l1), max_relative = 1e-6);
    }

    #[test]
    fn laplace_limit_row_sums() {
        let mesh = build_rectangle_boundary(2.0, 1.0, 8.0).unwrap();
        let h = assemble_h(&mesh, 1e-4).unwrap();
        for i in 0..h.rows() {
            let s: Complex64 = h.row(i).iter().sum();
            assert!(s.norm() < 1e-3, "row {i}: {s}");
        }
    }

    #[test]
    fn corner_split_flux_numbering() {
        let mesh = build_rectangle_boundary(1.0, 1.0, 2.0).unwrap();
        let f = FluxDofMap::split_at_corners(&mesh);
        assert_eq!(f.len(), mesh.node_count() + 4);
        let nodal = FluxDofMap::nodal(&mesh);
        assert_eq!(nodal.len(), mesh.node_count());
        for e in 0..mesh.element_count() {
            let [a, b] = mesh.element(e);
            assert_eq!(f.node_of(f.dof(e, 0)), a);
            assert_eq!(f.node_of(f.dof(e, 1)), b);
        }
    }
}
