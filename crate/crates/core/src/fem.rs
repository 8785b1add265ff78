//! Euler-Bernoulli beam elements with transverse deflection and rotation per node.

use num_complex::Complex64;

use crate::error::{FsiError, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, LuFactors, RealMatrix, SparseMatrix};
use crate::mesh::{InterfaceSide, Point2D};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamProperties {
    pub e: f64,
    pub i: f64,
    /// Cross-section area; bending-only elements do not use it.
    pub a: f64,
    pub m_s: f64,
}

impl BeamProperties {
    pub fn new(e: f64, i: f64, a: f64, m_s: f64) -> Result<Self> {
        if [e, i, a, m_s].iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(FsiError::InvalidArgument(format!(
                "beam properties must be positive: E = {e}, I = {i}, A = {a}, m_s = {m_s}"
            )));
        }
        Ok(Self { e, i, a, m_s })
    }

    /// Steel wall of the cavity benchmark.
    pub fn steel_wall() -> Self {
        Self {
            e: 2.1e11,
            i: 1.59e-4,
            a: 0.02,
            m_s: 50.0,
        }
    }

    pub fn bending_stiffness(&self) -> f64 {
        self.e * self.i
    }
}

/// First natural frequency (Hz) of a simply supported beam of length `l`.
pub fn simply_supported_frequency(props: &BeamProperties, l: f64, mode: usize) -> f64 {
    let n = mode as f64;
    (n * std::f64::consts::PI / l).powi(2) * (props.bending_stiffness() / props.m_s).sqrt() / (2.0 * std::f64::consts::PI)
}

/// Hermite-cubic stiffness and consistent mass of one element of length `l`.
pub fn element_matrices(l: f64, props: &BeamProperties) -> Result<(RealMatrix, RealMatrix)> {
    if !(l > 0.0) {
        return Err(FsiError::InvalidArgument(format!("element length must be positive, got {l}")));
    }
    let ks = props.bending_stiffness() / l.powi(3);
    let l2 = l * l;
    #[rustfmt::skip]
    let k = [
        12.0, 6.0 * l, -12.0, 6.0 * l,
        6.0 * l, 4.0 * l2, -6.0 * l, 2.0 * l2,
        -12.0, -6.0 * l, 12.0, -6.0 * l,
        6.0 * l, 2.0 * l2, -6.0 * l, 4.0 * l2,
    ];
    let ms = props.m_s * l / 420.0;
    #[rustfmt::skip]
    let m = [
        156.0, 22.0 * l, 54.0, -13.0 * l,
        22.0 * l, 4.0 * l2, 13.0 * l, -3.0 * l2,
        54.0, 13.0 * l, 156.0, -22.0 * l,
        -13.0 * l, -3.0 * l2, -22.0 * l, 4.0 * l2,
    ];
    Ok((
        RealMatrix::from_row_major(4, 4, k.iter().map(|v| v * ks).collect()),
        RealMatrix::from_row_major(4, 4, m.iter().map(|v| v * ms).collect()),
    ))
}

/// Hermite shape functions `[H1, H2, H3, H4]` at `xi` for element length `l`.
pub fn hermite_shape(xi: f64, l: f64) -> [f64; 4] {
    let (x2, x3) = (xi * xi, xi * xi * xi);
    [
        1.0 - 3.0 * x2 + 2.0 * x3,
        l * xi * (1.0 - xi) * (1.0 - xi),
        3.0 * x2 - 2.0 * x3,
        l * x2 * (xi - 1.0),
    ]
}

pub const W: usize = 0;
pub const THETA: usize = 1;

/// Straight beam between `start` and `end`. The deflection `w` is measured
/// along `deflection_direction`, a unit vector normal to the beam axis.
#[derive(Clone, Debug)]
pub struct BeamModel {
    pub start: Point2D,
    pub end: Point2D,
    pub props: BeamProperties,
    pub deflection_direction: (f64, f64),
    coords: Vec<f64>,
    fixed: Vec<bool>,
    pub k_s: RealMatrix,
    pub m_s: RealMatrix,
    /// `K_S - omega^2 M_S` restricted to the free DOFs.
    pub kbar: ComplexMatrix,
    /// Load over all DOFs.
    pub f_s: ComplexVector,
    pub omega: f64,
    free: Vec<usize>,
    free_index: Vec<Option<usize>>,
}

impl BeamModel {
    /// Uniform mesh of `n_elements` without constraints.
    pub fn new(
        start: Point2D,
        end: Point2D,
        n_elements: usize,
        props: BeamProperties,
        deflection_direction: (f64, f64),
    ) -> Result<Self> {
        if n_elements == 0 {
            return Err(FsiError::InvalidArgument("beam needs at least one element".into()));
        }
        let len = start.distance(&end);
        let coords = (0..=n_elements).map(|i| len * i as f64 / n_elements as f64).collect();
        Self::from_coords(start, end, coords, props, deflection_direction)
    }

    /// Beam with nodes at the arc-length positions `coords` (from `start`).
    pub fn from_coords(
        start: Point2D,
        end: Point2D,
        coords: Vec<f64>,
        props: BeamProperties,
        deflection_direction: (f64, f64),
    ) -> Result<Self> {
        let len = start.distance(&end);
        if coords.len() < 2 || coords.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FsiError::InvalidArgument("beam node coordinates must be strictly increasing".into()));
        }
        if coords[0].abs() > 1e-12 * len || (coords[coords.len() - 1] - len).abs() > 1e-12 * len {
            return Err(FsiError::InvalidArgument("beam coordinates must span start to end".into()));
        }
        let (dx, dy) = ((end.x - start.x) / len, (end.y - start.y) / len);
        let (nx, ny) = deflection_direction;
        if ((nx * nx + ny * ny).sqrt() - 1.0).abs() > 1e-12 || (nx * dx + ny * dy).abs() > 1e-12 {
            return Err(FsiError::InvalidArgument(
                "deflection direction must be a unit vector normal to the beam".into(),
            ));
        }
        let ndof = 2 * coords.len();
        Ok(Self {
            start,
            end,
            props,
            deflection_direction,
            coords,
            fixed: vec![false; ndof],
            k_s: RealMatrix::zeros(ndof, ndof),
            m_s: RealMatrix::zeros(ndof, ndof),
            kbar: ComplexMatrix::zeros(0, 0),
            f_s: vec![Complex64::new(0.0, 0.0); ndof],
            omega: 0.0,
            free: Vec::new(),
            free_index: Vec::new(),
        })
    }

    /// Fixes `w` at both end nodes.
    pub fn simply_supported(mut self) -> Self {
        let last = self.node_count() - 1;
        self.fixed[2 * W] = true;
        self.fixed[2 * last + W] = true;
        self
    }

    pub fn fix(mut self, node: usize, component: usize) -> Result<Self> {
        if node >= self.node_count() || component > THETA {
            return Err(FsiError::InvalidArgument(format!("no DOF {component} at node {node}")));
        }
        self.fixed[2 * node + component] = true;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn element_count(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dof_count(&self) -> usize {
        2 * self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn node_position(&self, node: usize) -> Point2D {
        self.start.lerp(&self.end, self.coords[node] / self.length())
    }

    pub fn length(&self) -> f64 {
        self.start.distance(&self.end)
    }

    pub fn element_length(&self, e: usize) -> f64 {
        self.coords[e + 1] - self.coords[e]
    }

    pub fn is_fixed(&self, dof: usize) -> bool {
        self.fixed[dof]
    }

    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    /// Position of a global DOF in the free-DOF numbering, after assembly.
    pub fn free_index(&self, dof: usize) -> Option<usize> {
        self.free_index.get(dof).copied().flatten()
    }

    pub fn set_load(&mut self, f: ComplexVector) -> Result<()> {
        if f.len() != self.dof_count() {
            return Err(FsiError::DimensionMismatch {
                expected: self.dof_count(),
                got: f.len(),
            });
        }
        self.f_s = f;
        Ok(())
    }

    /// Load restricted to the free DOFs.
    pub fn free_load(&self) -> ComplexVector {
        self.free.iter().map(|&d| self.f_s[d]).collect()
    }

    /// Full DOF vector from free-DOF values (fixed DOFs are zero).
    pub fn expand(&self, u_free: &[Complex64]) -> ComplexVector {
        let mut u = vec![Complex64::new(0.0, 0.0); self.dof_count()];
        for (&d, &v) in self.free.iter().zip(u_free) {
            u[d] = v;
        }
        u
    }

    /// Locates `s` (arc length) in an element and returns `(element, xi)`.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let ne = self.element_count();
        let e = match self.coords.binary_search_by(|c| c.partial_cmp(&s).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(ne - 1),
            Err(i) => i.saturating_sub(1).min(ne - 1),
        };
        let xi = ((s - self.coords[e]) / self.element_length(e)).clamp(0.0, 1.0);
        (e, xi)
    }

    /// Deflection at arc length `s` for a full DOF vector.
    pub fn deflection_at(&self, u: &[Complex64], s: f64) -> Complex64 {
        let (e, xi) = self.locate(s);
        let ue = [u[2 * e], u[2 * e + 1], u[2 * e + 2], u[2 * e + 3]];
        hermite_displacement(self, e, xi, &ue)
    }
}

/// Assembles `K_S`, `M_S` and the dynamic stiffness over the free DOFs.
pub fn assemble_beam(mut model: BeamModel, omega: f64) -> Result<BeamModel> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(FsiError::InvalidArgument(format!("omega must be non-negative, got {omega}")));
    }
    let ndof = model.dof_count();
    let mut k = RealMatrix::zeros(ndof, ndof);
    let mut m = RealMatrix::zeros(ndof, ndof);
    for e in 0..model.element_count() {
        let (ke, me) = element_matrices(model.element_length(e), &model.props)?;
        for a in 0..4 {
            for b in 0..4 {
                k[(2 * e + a, 2 * e + b)] += ke[(a, b)];
                m[(2 * e + a, 2 * e + b)] += me[(a, b)];
            }
        }
    }
    let free: Vec<usize> = (0..ndof).filter(|&d| !model.fixed[d]).collect();
    let mut free_index = vec![None; ndof];
    for (i, &d) in free.iter().enumerate() {
        free_index[d] = Some(i);
    }
    let w2 = omega * omega;
    let kbar = ComplexMatrix::from_fn(free.len(), free.len(), |i, j| {
        Complex64::new(k[(free[i], free[j])] - w2 * m[(free[i], free[j])], 0.0)
    });
    let kf = RealMatrix::from_fn(free.len(), free.len(), |i, j| k[(free[i], free[j])]);
    let scale = kf.norm1();
    let singular = match LuFactors::factorize(kf.to_complex()) {
        Ok(lu) => lu.condition_estimate() > 1e12,
        Err(_) => true,
    };
    if singular || scale == 0.0 {
        return Err(FsiError::Singularity(
            "beam stiffness has an unconstrained rigid-body mode".into(),
        ));
    }
    model.k_s = k;
    model.m_s = m;
    model.kbar = kbar;
    model.omega = omega;
    model.free = free;
    model.free_index = free_index;
    Ok(model)
}

/// Load vector with moment `m0` at the rotation DOF of `node`.
pub fn apply_end_moment(model: &BeamModel, node: usize, m0: Complex64) -> Result<ComplexVector> {
    if node >= model.node_count() {
        return Err(FsiError::InvalidArgument(format!("beam has no node {node}")));
    }
    let mut f = vec![Complex64::new(0.0, 0.0); model.dof_count()];
    f[2 * node + THETA] = m0;
    Ok(f)
}

/// Boolean matrix (all DOFs x interface nodes) selecting the deflection of each
/// interface node; rotations are never selected.
pub fn normal_trace_matrix(model: &BeamModel, iface: &InterfaceSide) -> Result<SparseMatrix> {
    let mut b = SparseMatrix::new(model.dof_count(), iface.nodes.len());
    for (col, (&node, &s)) in iface.nodes.iter().zip(&iface.coords).enumerate() {
        if node >= model.node_count() || (model.coords[node] - s).abs() > 1e-9 * model.length() {
            return Err(FsiError::Mismatch(format!(
                "interface node {node} at s = {s} is not a beam node"
            )));
        }
        b.add(2 * node + W, col, 1.0);
    }
    Ok(b)
}

/// Cubic Hermite interpolation of the deflection inside `element`.
pub fn hermite_displacement(model: &BeamModel, element: usize, xi: f64, u_e: &[Complex64; 4]) -> Complex64 {
    let h = hermite_shape(xi, model.element_length(element));
    u_e.iter().zip(h).map(|(u, h)| u * h).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_beam(n: usize) -> BeamModel {
        BeamModel::new(Point2D::new(0.0, 0.0), Point2D::new(10.0, 0.0), n, BeamProperties::steel_wall(), (0.0, 1.0)).unwrap()
    }

    #[test]
    fn element_matrix_entries() {
        let p = BeamProperties::steel_wall();
        let (k, m) = element_matrices(2.0, &p).unwrap();
        assert_relative_eq!(k[(0, 0)], 12.0 * p.e * p.i / 8.0);
        let t = [1.0, 0.0, 1.0, 0.0];
        assert!(k.matvec(&t).iter().all(|v| v.abs() < 1e-6));
        let mt = m.matvec(&t);
        assert_relative_eq!(t.iter().zip(&mt).map(|(a, b)| a * b).sum::<f64>(), p.m_s * 2.0, max_relative = 1e-14);
        assert!(k.is_symmetric(1e-14 * k.norm1()) && m.is_symmetric(0.0));
        assert!(matches!(element_matrices(0.0, &p), Err(FsiError::InvalidArgument(_))));
    }

    #[test]
    fn hermite_interpolation() {
        let b = BeamModel::new(Point2D::new(0.0, 0.0), Point2D::new(1.0, 0.0), 1, BeamProperties::steel_wall(), (0.0, 1.0)).unwrap();
        let c = |v: [f64; 4]| v.map(|x| Complex64::new(x, 0.0));
        let u = c([2.0, 0.3, -1.0, 0.7]);
        assert_eq!(hermite_displacement(&b, 0, 0.0, &u), u[0]);
        assert_relative_eq!(hermite_displacement(&b, 0, 1.0, &u).re, u[2].re, epsilon = 1e-15);
        for xi in [0.1, 0.5, 0.8] {
            assert_relative_eq!(hermite_displacement(&b, 0, xi, &c([1.0, 0.0, 1.0, 0.0])).re, 1.0, epsilon = 1e-15);
        }
        assert_relative_eq!(hermite_displacement(&b, 0, 0.5, &c([0.0, 1.0, 0.0, 0.0])).re, 0.125);
    }

    #[test]
    fn zero_frequency_dynamic_stiffness_is_static() {
        let b = assemble_beam(unit_beam(4).simply_supported(), 0.0).unwrap();
        let free = b.free_dofs().to_vec();
        assert_eq!(free.len(), 8);
        for (i, &a) in free.iter().enumerate() {
            for (j, &c) in free.iter().enumerate() {
                assert_eq!(b.kbar[(i, j)].re, b.k_s[(a, c)]);
            }
        }
    }

    #[test]
    fn free_beam_is_singular() {
        assert!(matches!(assemble_beam(unit_beam(4), 0.0), Err(FsiError::Singularity(_))));
        assert!(matches!(
            assemble_beam(unit_beam(4).fix(0, W).unwrap(), 0.0),
            Err(FsiError::Singularity(_))
        ));
    }

    #[test]
    fn cantilever_tip_load_is_exact_for_any_mesh() {
        let tip = |n: usize| {
            let b = assemble_beam(unit_beam(n).fix(0, W).unwrap().fix(0, THETA).unwrap(), 0.0).unwrap();
            let mut f = vec![Complex64::new(0.0, 0.0); b.dof_count()];
            f[2 * n] = Complex64::new(1e3, 0.0);
            let mut bb = b.clone();
            bb.set_load(f).unwrap();
            let u = LuFactors::factorize(bb.kbar.clone()).unwrap().solve(&bb.free_load());
            bb.expand(&u)[2 * n].re
        };
        let (one, two) = (tip(1), tip(2));
        let p = BeamProperties::steel_wall();
        assert_relative_eq!(one, 1e3 * 1000.0 / (3.0 * p.e * p.i), max_relative = 1e-12);
        assert_relative_eq!(one, two, max_relative = 1e-12);
    }

    #[test]
    fn end_moment_and_trace() {
        let b = unit_beam(2);
        let f = apply_end_moment(&b, 0, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f[1], Complex64::new(1.0, 0.0));
        assert_eq!(f.iter().filter(|v| v.norm() > 0.0).count(), 1);
        assert!(apply_end_moment(&b, 3, Complex64::new(1.0, 0.0)).is_err());
        let side = InterfaceSide {
            nodes: vec![0, 1, 2],
            coords: vec![0.0, 5.0, 10.0],
        };
        let t = normal_trace_matrix(&b, &side).unwrap();
        assert_eq!((t.rows(), t.cols()), (6, 3));
        for i in 0..3 {
            assert_eq!(t.get(2 * i, i), 1.0);
        }
        let rot: Vec<Complex64> = (0..6).map(|d| Complex64::new((d % 2) as f64, 0.0)).collect();
        assert!(t.tr_mul_vec(&rot).iter().all(|v| v.norm() == 0.0));
        let bad = InterfaceSide {
            nodes: vec![0, 1],
            coords: vec![0.0, 4.0],
        };
        assert!(matches!(normal_trace_matrix(&b, &bad), Err(FsiError::Mismatch(_))));
    }

    #[test]
    fn first_frequency_of_the_wall() {
        let f1 = simply_supported_frequency(&BeamProperties::steel_wall(), 10.0, 1);
        assert_relative_eq!(f1, 12.84, epsilon = 0.01);
    }
}
