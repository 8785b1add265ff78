use std::sync::atomic::{AtomicBool, Ordering};

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::assembly::{assemble_flux_lumping, assemble_influence, point_segment_distance, FluxDofMap, QuadratureOrders};
use super::kernel::kernel_pair;
use super::quadrature::GaussLegendre;
use crate::error::{FsiError, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, LuFactors, RealMatrix};
use crate::mesh::{BoundaryMesh, Orientation, Point2D};

/// Condition estimates above this are reported as a resonance.
pub const RESONANCE_CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidProperties {
    pub rho: f64,
    pub c: f64,
}

impl FluidProperties {
    pub fn new(rho: f64, c: f64) -> Result<Self> {
        if !(rho > 0.0 && c > 0.0) || !rho.is_finite() || !c.is_finite() {
            return Err(FsiError::InvalidArgument(format!(
                "fluid density and sound speed must be positive, got rho = {rho}, c = {c}"
            )));
        }
        Ok(Self { rho, c })
    }

    pub fn water() -> Self {
        Self { rho: 1000.0, c: 1500.0 }
    }

    pub fn wavenumber(&self, omega: f64) -> f64 {
        omega / self.c
    }
}

/// `p0 exp(i k (x cos(alpha) + y sin(alpha)))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave {
    pub p0: Complex64,
    pub alpha: f64,
    pub k: f64,
}

impl PlaneWave {
    pub fn new(p0: Complex64, alpha: f64, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(FsiError::InvalidArgument(format!("plane wave needs k > 0, got {k}")));
        }
        Ok(Self { p0, alpha, k })
    }

    pub fn pressure(&self, x: Point2D) -> Complex64 {
        let (s, c) = self.alpha.sin_cos();
        self.p0 * Complex64::new(0.0, self.k * (x.x * c + x.y * s)).exp()
    }

    /// Directional derivative along `(nx, ny)`.
    pub fn normal_derivative(&self, x: Point2D, n: (f64, f64)) -> Complex64 {
        let (s, c) = self.alpha.sin_cos();
        Complex64::new(0.0, self.k * (n.0 * c + n.1 * s)) * self.pressure(x)
    }
}

/// Nodal `dp_inc/dn`. At corners the two element normals are averaged; use
/// [`incident_flux`] for the corner-split flux numbering.
pub fn incident_wave_neumann(wave: &PlaneWave, mesh: &BoundaryMesh) -> ComplexVector {
    (0..mesh.node_count())
        .map(|i| {
            let x = mesh.node(i);
            let els: Vec<usize> = [mesh.incoming(i), mesh.outgoing(i)].into_iter().flatten().collect();
            let sum: Complex64 = els
                .iter()
                .map(|&e| {
                    let n = mesh.element_normal(e).expect("element in range");
                    wave.normal_derivative(x, (n.nx, n.ny))
                })
                .sum();
            sum / els.len().max(1) as f64
        })
        .collect()
}

/// `dp_inc/dn` per flux DOF, using the normal of the element owning the DOF.
pub fn incident_flux(wave: &PlaneWave, mesh: &BoundaryMesh, flux: &FluxDofMap) -> ComplexVector {
    (0..flux.len())
        .map(|d| {
            let x = mesh.node(flux.node_of(d));
            let els = flux.elements_of(d);
            let sum: Complex64 = els
                .iter()
                .map(|&e| {
                    let n = mesh.element_normal(e).expect("element in range");
                    wave.normal_derivative(x, (n.nx, n.ny))
                })
                .sum();
            sum / els.len().max(1) as f64
        })
        .collect()
}

/// Boundary element model of one fluid region at a fixed frequency.
///
/// `h` is nodes x nodes, `g0` nodes x flux DOFs and `lumping` flux DOFs x nodes.
/// The boundary integral equation reads `H p = G0 q` with `q = dp/dn = rho omega^2 u_n`.
#[derive(Clone, Debug)]
pub struct FluidSubdomain {
    pub mesh: BoundaryMesh,
    pub props: FluidProperties,
    pub omega: f64,
    pub flux: FluxDofMap,
    pub h: ComplexMatrix,
    pub g0: ComplexMatrix,
    pub lumping: RealMatrix,
}

impl FluidSubdomain {
    pub fn new(mesh: BoundaryMesh, props: FluidProperties, omega: f64, orders: QuadratureOrders) -> Result<Self> {
        let flux = FluxDofMap::split_at_corners(&mesh);
        Self::with_flux_map(mesh, props, omega, flux, orders)
    }

    pub fn with_flux_map(
        mesh: BoundaryMesh,
        props: FluidProperties,
        omega: f64,
        flux: FluxDofMap,
        orders: QuadratureOrders,
    ) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(FsiError::InvalidArgument(format!("omega must be positive, got {omega}")));
        }
        let k = props.wavenumber(omega);
        let (h, g0) = assemble_influence(&mesh, k, &flux, orders)?;
        let lumping = assemble_flux_lumping(&mesh, &flux);
        Ok(Self {
            mesh,
            props,
            omega,
            flux,
            h,
            g0,
            lumping,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        self.props.wavenumber(self.omega)
    }

    /// `rho omega^2`, the factor turning normal displacement into normal pressure gradient.
    pub fn flux_factor(&self) -> f64 {
        self.props.rho * self.omega * self.omega
    }

    pub(crate) fn factorize_checked(&self, a: ComplexMatrix, what: &str) -> Result<LuFactors> {
        let lu = LuFactors::factorize(a).map_err(|_| FsiError::Resonance {
            what: what.to_string(),
            omega: self.omega,
            condition: f64::INFINITY,
        })?;
        let condition = lu.condition_estimate();
        if !(condition <= RESONANCE_CONDITION_LIMIT) {
            return Err(FsiError::Resonance {
                what: what.to_string(),
                omega: self.omega,
                condition,
            });
        }
        Ok(lu)
    }

    /// Eliminates the boundary pressures, leaving a stiffness on the coupled flux DOFs.
    pub fn condense(&self, bc: &FluidBoundaryConditions) -> Result<CondensedFluid> {
        CondensedFluid::new(self, bc)
    }
}

/// `Kbar_F = rho omega^2 M H^-1 G0` over all flux DOFs.
///
/// With the outward normal this is the negative of the force-displacement
/// stiffness: the pressure force the fluid exerts on moving walls is `Kbar_F u`.
pub fn fluid_dynamic_stiffness(sub: &FluidSubdomain) -> Result<ComplexMatrix> {
    let lu = sub.factorize_checked(sub.h.clone(), "fluid double-layer matrix H")?;
    let x = lu.solve_matrix(&sub.g0);
    Ok(sub.lumping.to_complex().matmul(&x).scaled(Complex64::new(sub.flux_factor(), 0.0)))
}

/// Which boundary data are known. Flux DOFs not listed as coupled or free are rigid walls.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FluidBoundaryConditions {
    /// Flux DOFs driven by a normal displacement, `q = rho omega^2 u_n`.
    pub coupled: Vec<usize>,
    /// Nodes with prescribed total pressure.
    pub pressure: Vec<(usize, Complex64)>,
    /// Flux DOFs that become unknowns in place of the prescribed pressures.
    pub free_flux: Vec<usize>,
    /// Incident field; the boundary unknowns are then the scattered field.
    pub incident: Option<PlaneWave>,
}

/// Boundary pressure and flux of a solved fluid region. With an incident wave
/// these are the scattered parts; the total pressure adds `incident`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryState {
    pub pressure: ComplexVector,
    pub flux: ComplexVector,
    pub incident: Option<PlaneWave>,
}

/// Fluid region reduced to its coupled normal displacements:
/// `stiffness u_c = external force + load`, where the force is along the outward normal.
#[derive(Clone, Debug)]
pub struct CondensedFluid {
    pub coupled: Vec<usize>,
    pub stiffness: ComplexMatrix,
    pub load: ComplexVector,
    /// Nodal approximation of the interface block, `-rho omega^2 M_bb H_bb^-1 G_bb`.
    pub interface_block: Option<ComplexMatrix>,
    unknown_nodes: Vec<usize>,
    known: Vec<(usize, Complex64)>,
    free_flux: Vec<usize>,
    response: ComplexMatrix,
    particular: ComplexVector,
    incident_flux: ComplexVector,
    incident: Option<PlaneWave>,
    flux_factor: f64,
    n_nodes: usize,
    n_flux: usize,
}

impl CondensedFluid {
    fn new(sub: &FluidSubdomain, bc: &FluidBoundaryConditions) -> Result<Self> {
        let n = sub.mesh.node_count();
        let m = sub.flux.len();
        if bc.pressure.len() != bc.free_flux.len() {
            return Err(FsiError::InvalidArgument(format!(
                "{} prescribed pressures need as many free flux DOFs, got {}",
                bc.pressure.len(),
                bc.free_flux.len()
            )));
        }
        let mut role = vec![0u8; m];
        for (list, tag) in [(&bc.coupled, 1u8), (&bc.free_flux, 2u8)] {
          for &d in list.iter() {
            if d >= m {
                return Err(FsiError::InvalidArgument(format!("flux DOF {d} out of range ({m})")));
            }
            if role[d] != 0 {
                return Err(FsiError::InvalidArgument(format!("flux DOF {d} listed twice")));
            }
            role[d] = tag;
          }
        }
        let mut is_known = vec![false; n];
        for &(node, _) in &bc.pressure {
            if node >= n || is_known[node] {
                return Err(FsiError::InvalidArgument(format!("bad prescribed-pressure node {node}")));
            }
            is_known[node] = true;
        }
        if bc.incident.is_some() && !bc.pressure.is_empty() {
            return Err(FsiError::InvalidArgument(
                "prescribed pressures cannot be combined with an incident field".into(),
            ));
        }
        if bc.incident.is_some() && sub.mesh.orientation() != Orientation::Exterior {
            warn!("incident field on an interior fluid region");
        }
        let unknown_nodes: Vec<usize> = (0..n).filter(|&i| !is_known[i]).collect();

        // A z = rhs with z = [p_U; q_free].
        let mut a = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for (c, &j) in unknown_nodes.iter().enumerate() {
                a[(i, c)] = sub.h[(i, j)];
            }
            for (c, &d) in bc.free_flux.iter().enumerate() {
                a[(i, unknown_nodes.len() + c)] = -sub.g0[(i, d)];
            }
        }
        let lu = sub.factorize_checked(a, "fluid boundary system")?;

        let rw2 = sub.flux_factor();
        let incident_flux = match &bc.incident {
            Some(w) => incident_flux(w, &sub.mesh, &sub.flux),
            None => vec![Complex64::new(0.0, 0.0); m],
        };
        let mut rhs0 = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for d in 0..m {
                if role[d] != 2 && incident_flux[d] != Complex64::new(0.0, 0.0) {
                    s -= sub.g0[(i, d)] * incident_flux[d];
                }
            }
            for &(node, p) in &bc.pressure {
                s -= sub.h[(i, node)] * p;
            }
            rhs0[i] = s;
        }
        let particular = lu.solve(&rhs0);
        let nc = bc.coupled.len();
        let rhs_c = ComplexMatrix::from_fn(n, nc, |i, c| sub.g0[(i, bc.coupled[c])] * rw2);
        let response = lu.solve_matrix(&rhs_c);

        // Nodal pressure p = P u + p0 (total pressure), then force F = -M_C p.
        let mut p_resp = ComplexMatrix::zeros(n, nc);
        let mut p0 = vec![Complex64::new(0.0, 0.0); n];
        for (r, &node) in unknown_nodes.iter().enumerate() {
            p_resp.row_mut(node).copy_from_slice(response.row(r));
            p0[node] = particular[r];
        }
        for &(node, p) in &bc.pressure {
            p0[node] = p;
        }
        if let Some(w) = &bc.incident {
            for (i, v) in p0.iter_mut().enumerate() {
                *v += w.pressure(sub.mesh.node(i));
            }
        }
        let m_c = ComplexMatrix::from_fn(nc, n, |r, j| Complex64::new(sub.lumping[(bc.coupled[r], j)], 0.0));
        let stiffness = m_c.matmul(&p_resp).scaled(Complex64::new(-1.0, 0.0));
        let load = m_c.matvec(&p0);

        let interface_block = interface_block(sub, &bc.coupled);
        Ok(Self {
            coupled: bc.coupled.clone(),
            stiffness,
            load,
            interface_block,
            unknown_nodes,
            known: bc.pressure.clone(),
            free_flux: bc.free_flux.clone(),
            response,
            particular,
            incident_flux,
            incident: bc.incident,
            flux_factor: rw2,
            n_nodes: n,
            n_flux: m,
        })
    }

    pub fn dofs(&self) -> usize {
        self.coupled.len()
    }

    /// Boundary pressure and flux for coupled normal displacements `u`.
    pub fn boundary_state(&self, u: &[Complex64]) -> Result<BoundaryState> {
        if u.len() != self.coupled.len() {
            return Err(FsiError::DimensionMismatch {
                expected: self.coupled.len(),
                got: u.len(),
            });
        }
        let mut z = self.response.matvec(u);
        for (zi, pi) in z.iter_mut().zip(&self.particular) {
            *zi += pi;
        }
        let mut pressure = vec![Complex64::new(0.0, 0.0); self.n_nodes];
        for (r, &node) in self.unknown_nodes.iter().enumerate() {
            pressure[node] = z[r];
        }
        for &(node, p) in &self.known {
            pressure[node] = p;
        }
        let mut flux: Vec<Complex64> = self.incident_flux.iter().map(|q| -q).collect();
        for (c, &d) in self.coupled.iter().enumerate() {
            flux[d] += u[c] * self.flux_factor;
        }
        for (c, &d) in self.free_flux.iter().enumerate() {
            flux[d] = z[self.unknown_nodes.len() + c];
        }
        debug_assert_eq!(flux.len(), self.n_flux);
        Ok(BoundaryState {
            pressure,
            flux,
            incident: self.incident,
        })
    }
}

fn interface_block(sub: &FluidSubdomain, coupled: &[usize]) -> Option<ComplexMatrix> {
    if coupled.is_empty() {
        return None;
    }
    let nodes: Vec<usize> = coupled.iter().map(|&d| sub.flux.node_of(d)).collect();
    let mut sorted = nodes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != nodes.len() {
        warn!("coupled flux DOFs share nodes; fluid preconditioner block unavailable");
        return None;
    }
    let h_bb = sub.h.select(&nodes, &nodes);
    let g_bb = sub.g0.select(&nodes, coupled);
    let lu = match LuFactors::factorize(h_bb) {
        Ok(lu) if lu.condition_estimate() < RESONANCE_CONDITION_LIMIT => lu,
        _ => {
            warn!("interface block of H is singular; fluid preconditioner block unavailable");
            return None;
        }
    };
    let x = lu.solve_matrix(&g_bb);
    let m_bb = RealMatrix::from_fn(coupled.len(), nodes.len(), |r, c| sub.lumping[(coupled[r], nodes[c])]);
    Some(m_bb.to_complex().matmul(&x).scaled(Complex64::new(-sub.flux_factor(), 0.0)))
}

/// Field pressure from the representation formula
/// `p(x) = sum_e int (G q - dG/dn p)` (coefficient 1 inside the fluid).
/// `boundary_p` is nodal, `boundary_q` is per flux DOF of `sub.flux`.
pub fn interior_pressure(
    sub: &FluidSubdomain,
    boundary_p: &[Complex64],
    boundary_q: &[Complex64],
    points: &[Point2D],
) -> Result<ComplexVector> {
    let mesh = &sub.mesh;
    if boundary_p.len() != mesh.node_count() {
        return Err(FsiError::DimensionMismatch {
            expected: mesh.node_count(),
            got: boundary_p.len(),
        });
    }
    if boundary_q.len() != sub.flux.len() {
        return Err(FsiError::DimensionMismatch {
            expected: sub.flux.len(),
            got: boundary_q.len(),
        });
    }
    let k = sub.wavenumber();
    let rule = GaussLegendre::new(8);
    let warned = AtomicBool::new(false);
    Ok(points
        .par_iter()
        .map(|&x| {
            let mut total = Complex64::new(0.0, 0.0);
            for (e, &[a, b]) in mesh.elements().iter().enumerate() {
                let (pa, pb) = (mesh.node(a), mesh.node(b));
                let l = mesh.length(e);
                let dist = point_segment_distance(x, pa, pb);
                if dist < l && !warned.swap(true, Ordering::Relaxed) {
                    warn!("field point {x:?} is within one element length of the boundary");
                }
                if dist == 0.0 {
                    continue;
                }
                let n = mesh.element_normal(e).expect("element in range");
                let offset = n.dot((pa.x - x.x, pa.y - x.y));
                let mut acc = [Complex64::new(0.0, 0.0); 4];
                field_element(x, pa, pb, l, offset, k, &rule, 0.0, 1.0, 0, &mut acc);
                let (qa, qb) = (boundary_q[sub.flux.dof(e, 0)], boundary_q[sub.flux.dof(e, 1)]);
                total += acc[0] * qa + acc[1] * qb - acc[2] * boundary_p[a] - acc[3] * boundary_p[b];
            }
            total
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn field_element(
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
    if depth < 30 && point_segment_distance(x, pa.lerp(&pb, t0), pa.lerp(&pb, t1)) < seg {
        let tm = 0.5 * (t0 + t1);
        field_element(x, pa, pb, l, offset, k, rule, t0, tm, depth + 1, acc);
        field_element(x, pa, pb, l, offset, k, rule, tm, t1, depth + 1, acc);
        return;
    }
    for (u, w) in rule.iter() {
        let t = t0 + (t1 - t0) * u;
        let r = x.distance(&pa.lerp(&pb, t));
        let (g, dg) = kernel_pair(r, offset, k);
        let wl = w * seg;
        acc[0] += g * ((1.0 - t) * wl);
        acc[1] += g * (t * wl);
        acc[2] += dg * ((1.0 - t) * wl);
        acc[3] += dg * (t * wl);
    }
}

impl CondensedFluid {
    /// Total pressure at field points.
    pub fn field(&self, sub: &FluidSubdomain, state: &BoundaryState, points: &[Point2D]) -> Result<ComplexVector> {
        let mut p = interior_pressure(sub, &state.pressure, &state.flux, points)?;
        if let Some(w) = &state.incident {
            for (v, x) in p.iter_mut().zip(points) {
                *v += w.pressure(*x);
            }
        }
        Ok(p)
    }
}

/// Nodal total pressure of a boundary state.
pub fn total_boundary_pressure(mesh: &BoundaryMesh, state: &BoundaryState) -> ComplexVector {
    match &state.incident {
        None => state.pressure.clone(),
        Some(w) => state
            .pressure
            .iter()
            .enumerate()
            .map(|(i, p)| p + w.pressure(mesh.node(i)))
            .collect(),
    }
}
