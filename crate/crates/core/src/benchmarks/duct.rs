use num_complex::Complex64;

use super::model::{BenchmarkModel, FluidPart, InterfaceModel, Region, SideKind, SideModel, Solution};
use crate::bem::{FluidBoundaryConditions, FluidProperties, FluidSubdomain, QuadratureOrders};
use crate::coupling::{assemble_llm, assemble_llm_system, build_frame, FrameStrategy, InterfaceDofs, LlmInterface, Subdomain};
use crate::error::{FsiError, Result};
use crate::mesh::{rectangle_with_counts, side, InterfaceDescriptor, Orientation, Point2D};

pub const DUCT_LENGTH: f64 = 8.0 * std::f64::consts::PI;

/// Rigid duct of unit height with prescribed inlet pressure at `x = 0` and a
/// rigid outlet, cut transversally into `ns` boundary element subdomains.
#[derive(Clone, Debug, PartialEq)]
pub struct DuctParams {
    pub ns: usize,
    /// Elements across the unit height.
    pub lh: usize,
    pub k: f64,
    pub p0: Complex64,
    pub length: f64,
    pub fluid: FluidProperties,
    pub orders: QuadratureOrders,
}

impl Default for DuctParams {
    fn default() -> Self {
        Self {
            ns: 4,
            lh: 10,
            k: 1.0,
            p0: Complex64::new(1.0, 0.0),
            length: DUCT_LENGTH,
            fluid: FluidProperties::water(),
            orders: QuadratureOrders::default(),
        }
    }
}

impl DuctParams {
    pub fn new(ns: usize, lh: usize) -> Self {
        Self {
            ns,
            lh,
            ..Self::default()
        }
    }
}

/// Elements along each long wall: the length times the density, rounded up to
/// a multiple of 32 so that every power-of-two partition up to 32 is even.
pub fn duct_long_side_elements(length: f64, lh: usize) -> usize {
    32 * ((length * lh as f64 / 32.0).ceil() as usize).max(1)
}

/// `p(x) = p0 cos(k (L0 - x)) / cos(k L0)`: the plane standing wave satisfying
/// `p(0) = p0` and `p'(L0) = 0`.
pub fn duct_analytic(x: f64, p0: Complex64, k: f64, l0: f64) -> Result<Complex64> {
    let c = (k * l0).cos();
    if c.abs() < 1e-12 {
        return Err(FsiError::Resonance {
            what: "rigid duct (k L0 at an odd multiple of pi/2)".into(),
            omega: k,
            condition: f64::INFINITY,
        });
    }
    Ok(p0 * ((k * (l0 - x)).cos() / c))
}

/// Nodes with `x == x0` sorted by `y`.
fn nodes_at_x(bem: &FluidSubdomain, x0: f64) -> Vec<usize> {
    let m = &bem.mesh;
    let mut ids: Vec<usize> = (0..m.node_count()).filter(|&n| (m.node(n).x - x0).abs() < 1e-9).collect();
    ids.sort_by(|&a, &b| m.node(a).y.total_cmp(&m.node(b).y));
    ids
}

/// Flux DOF of each node on the element of side group `g`.
fn side_flux_dofs(bem: &FluidSubdomain, g: usize, nodes: &[usize]) -> Result<Vec<usize>> {
    let m = &bem.mesh;
    nodes
        .iter()
        .map(|&n| {
            if let Some(e) = m.outgoing(n).filter(|&e| m.group(e) == g) {
                return Ok(bem.flux.dof(e, 0));
            }
            if let Some(e) = m.incoming(n).filter(|&e| m.group(e) == g) {
                return Ok(bem.flux.dof(e, 1));
            }
            Err(FsiError::InvalidMesh(format!("node {n} is not on side {g}")))
        })
        .collect()
}

pub fn build_duct(p: &DuctParams) -> Result<BenchmarkModel> {
    if p.ns == 0 || p.lh == 0 {
        return Err(FsiError::InvalidArgument("partition count and density must be positive".into()));
    }
    let long = duct_long_side_elements(p.length, p.lh);
    if long % p.ns != 0 {
        return Err(FsiError::InvalidArgument(format!(
            "{long} wall elements cannot be split evenly into {} partitions",
            p.ns
        )));
    }
    if !(p.k > 0.0) {
        return Err(FsiError::InvalidArgument(format!("wavenumber must be positive, got {}", p.k)));
    }
    let omega = p.k * p.fluid.c;
    let nl = long / p.ns;
    let ls = p.length / p.ns as f64;

    struct Part {
        bem: FluidSubdomain,
        left: Vec<usize>,
        right: Vec<usize>,
    }
    let mut parts = Vec::with_capacity(p.ns);
    for i in 0..p.ns {
        let x0 = i as f64 * ls;
        let mesh = rectangle_with_counts(Point2D::new(x0, 0.0), ls, 1.0, [nl, p.lh, nl, p.lh], Orientation::Interior)?;
        let bem = FluidSubdomain::new(mesh, p.fluid, omega, p.orders)?;
        let left = nodes_at_x(&bem, x0);
        let right = nodes_at_x(&bem, x0 + ls);
        parts.push(Part { bem, left, right });
    }

    let mut fluids = Vec::with_capacity(p.ns);
    let mut subdomains = Vec::with_capacity(p.ns);
    // (left-side coupled range, right-side coupled range) per subdomain
    let mut ranges = Vec::with_capacity(p.ns);
    for (i, part) in parts.into_iter().enumerate() {
        let mut bc = FluidBoundaryConditions::default();
        let mut left_range = None;
        let mut right_range = None;
        if i == 0 {
            bc.pressure = part.left.iter().map(|&n| (n, p.p0)).collect();
            bc.free_flux = side_flux_dofs(&part.bem, side::LEFT, &part.left)?;
        } else {
            let d = side_flux_dofs(&part.bem, side::LEFT, &part.left)?;
            left_range = Some(bc.coupled.len()..bc.coupled.len() + d.len());
            bc.coupled.extend(d);
        }
        if i + 1 < p.ns {
            let d = side_flux_dofs(&part.bem, side::RIGHT, &part.right)?;
            right_range = Some(bc.coupled.len()..bc.coupled.len() + d.len());
            bc.coupled.extend(d);
        }
        let condensed = part.bem.condense(&bc)?;
        subdomains.push(Subdomain::fluid(format!("duct-{i}"), &condensed)?);
        ranges.push((left_range, right_range, part.left, part.right));
        fluids.push(FluidPart {
            subdomain: i,
            bem: part.bem,
            condensed,
            region: Region::Interior,
        });
    }

    let mut interfaces = Vec::new();
    let mut llm = Vec::new();
    let mut frame_offset = 0;
    for i in 0..p.ns.saturating_sub(1) {
        let x = (i + 1) as f64 * ls;
        let (ra, nodes_a) = (ranges[i].1.clone().expect("right coupling"), &ranges[i].3);
        let (rb, nodes_b) = (ranges[i + 1].0.clone().expect("left coupling"), &ranges[i + 1].2);
        let pts_a: Vec<Point2D> = nodes_a.iter().map(|&n| fluids[i].bem.mesh.node(n)).collect();
        let pts_b: Vec<Point2D> = nodes_b.iter().map(|&n| fluids[i + 1].bem.mesh.node(n)).collect();
        let descriptor = InterfaceDescriptor::new(Point2D::new(x, 0.0), Point2D::new(x, 1.0), (nodes_a, &pts_a), (nodes_b, &pts_b))?;
        // Reference direction +x: outward for the left neighbour, inward for the right.
        let side_a = InterfaceDofs {
            dofs: ra.map(Some).collect(),
            sign: 1.0,
            ndofs: fluids[i].condensed.dofs(),
        };
        let side_b = InterfaceDofs {
            dofs: rb.map(Some).collect(),
            sign: -1.0,
            ndofs: fluids[i + 1].condensed.dofs(),
        };
        let frame = build_frame(&descriptor, &FrameStrategy::Coarse)?;
        let coupling = assemble_llm(&descriptor, &side_a, &side_b, &frame)?;
        let nf = coupling.frame_dofs();
        llm.push(LlmInterface { a: i, b: i + 1, coupling });
        interfaces.push(InterfaceModel {
            descriptor,
            a: SideModel {
                subdomain: i,
                kind: SideKind::Fluid,
                dofs: side_a,
            },
            b: SideModel {
                subdomain: i + 1,
                kind: SideKind::Fluid,
                dofs: side_b,
            },
            frame: Some(frame),
            frame_offset,
        });
        frame_offset += nf;
    }
    let system = assemble_llm_system(subdomains, &llm)?;
    Ok(BenchmarkModel {
        name: "duct".into(),
        omega,
        system,
        fluids,
        beam: None,
        interfaces,
        rho: p.fluid.rho,
    })
}

/// Relative L2 error of the boundary pressure over the nodes of every
/// subdomain against [`duct_analytic`].
pub fn duct_pressure_error(model: &BenchmarkModel, sol: &Solution, p: &DuctParams) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (f, state) in model.fluids.iter().zip(model.boundary_states(&sol.u)?) {
        for (n, pn) in state.pressure.iter().enumerate() {
            let exact = duct_analytic(f.bem.mesh.node(n).x, p.p0, p.k, p.length)?;
            num += (pn - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}
