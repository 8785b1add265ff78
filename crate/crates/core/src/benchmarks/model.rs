use num_complex::Complex64;

use super::CouplingChoice;
use crate::bem::{BoundaryState, CondensedFluid, FluidBoundaryConditions, FluidSubdomain};
use crate::coupling::{
    assemble_llm, assemble_llm_system, assemble_mortar, assemble_mortar_system, build_frame, mortar_ansatz, CoupledSystem,
    CouplingMethod, FrameMesh, InterfaceDofs, LlmInterface, Subdomain,
};
use crate::error::{FsiError, Result};
use crate::fem::{BeamModel, THETA, W};
use crate::linalg::ComplexVector;
use crate::mesh::{InterfaceDescriptor, Point2D};
use crate::solver::{direct_monolithic_solve, solve_iterative, ScalingState, SolverOptions, DIRECT_SIZE_CAP};

/// Whether the fluid occupies the inside or the outside of its boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
}

/// A boundary element region together with its condensed form.
#[derive(Clone, Debug)]
pub struct FluidPart {
    /// Index in `system.subdomains`.
    pub subdomain: usize,
    pub bem: FluidSubdomain,
    pub condensed: CondensedFluid,
    pub region: Region,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideKind {
    Beam,
    Fluid,
}

/// One side of a coupling interface: owner subdomain and its interface DOFs.
#[derive(Clone, Debug)]
pub struct SideModel {
    pub subdomain: usize,
    pub kind: SideKind,
    pub dofs: InterfaceDofs,
}

#[derive(Clone, Debug)]
pub struct InterfaceModel {
    pub descriptor: InterfaceDescriptor,
    pub a: SideModel,
    pub b: SideModel,
    /// Interface frame (localized multipliers only).
    pub frame: Option<FrameMesh>,
    /// First column of this interface in the global frame vector.
    pub frame_offset: usize,
}

/// Normal displacements on an interface at arc length `s`, in the interface
/// reference direction. `frame` is `None` for mortar coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceSample {
    pub interface: usize,
    pub s: f64,
    pub side_a: Complex64,
    pub side_b: Complex64,
    pub frame: Option<Complex64>,
}

/// Linear solver used for a benchmark run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolverChoice {
    #[default]
    Bicgstab,
    Direct,
}

/// Solved benchmark: subdomain unknowns plus solver statistics.
#[derive(Clone, Debug)]
pub struct Solution {
    pub u: Vec<ComplexVector>,
    pub lambda: ComplexVector,
    /// Frame displacements (empty for mortar).
    pub u_frame: ComplexVector,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub restarts: usize,
    pub gap_residual: f64,
}

/// A fully assembled experiment.
#[derive(Clone, Debug)]
pub struct BenchmarkModel {
    pub name: String,
    pub omega: f64,
    pub system: CoupledSystem,
    pub fluids: Vec<FluidPart>,
    /// Beam and its subdomain index.
    pub beam: Option<(usize, BeamModel)>,
    pub interfaces: Vec<InterfaceModel>,
    pub rho: f64,
}

impl BenchmarkModel {
    /// Variable scaling `s = sqrt(rho omega^2 Lambda)` for beam-fluid problems;
    /// fluid-only problems are left unscaled.
    pub fn scaling(&self, nu: f64) -> Result<Option<ScalingState>> {
        match &self.beam {
            Some((_, b)) => Ok(Some(ScalingState::new(b.props.e, nu, self.rho, self.omega)?)),
            None => Ok(None),
        }
    }

    pub fn solve(&self, solver: SolverChoice, opts: &SolverOptions) -> Result<Solution> {
        match solver {
            SolverChoice::Direct => {
                let d = direct_monolithic_solve(&self.system, DIRECT_SIZE_CAP)?;
                let gap = self.gap(&d.u, &d.u_frame);
                Ok(Solution {
                    u: d.u,
                    lambda: d.lambda,
                    u_frame: d.u_frame,
                    iterations: 0,
                    residual_history: Vec::new(),
                    converged: true,
                    restarts: 0,
                    gap_residual: gap,
                })
            }
            SolverChoice::Bicgstab => {
                let r = solve_iterative(&self.system, self.omega, opts)?;
                Ok(Solution {
                    u: r.u_per_subdomain,
                    lambda: r.lambda,
                    u_frame: r.u_frame.unwrap_or_default(),
                    iterations: r.iterations,
                    residual_history: r.residual_history,
                    converged: r.converged,
                    restarts: r.restarts,
                    gap_residual: r.gap_residual,
                })
            }
        }
    }

    fn gap(&self, u: &[ComplexVector], u_frame: &[Complex64]) -> f64 {
        let mut g = vec![Complex64::new(0.0, 0.0); self.system.n_multipliers];
        for (s, us) in self.system.subdomains.iter().zip(u) {
            for (j, v) in s.coupling.tr_mul_vec(us).into_iter().enumerate() {
                g[j] += v;
            }
        }
        if let Some(l) = &self.system.frame {
            for (gi, v) in g.iter_mut().zip(l.mul_vec(u_frame)) {
                *gi -= v;
            }
        }
        let un = u.iter().map(|v| crate::linalg::norm2(v).powi(2)).sum::<f64>().sqrt();
        let gn = crate::linalg::norm2(&g);
        if un > 0.0 {
            gn / un
        } else {
            gn
        }
    }

    /// Nodal normal displacement of one interface side, in side order and in
    /// the interface reference direction. Constrained nodes give zero.
    pub fn side_values(&self, side: &SideModel, coords: &[f64], u: &[ComplexVector]) -> Vec<Complex64> {
        match side.kind {
            SideKind::Beam => {
                let (_, beam) = self.beam.as_ref().expect("beam side without a beam");
                let full = beam.expand(&u[side.subdomain]);
                coords.iter().map(|&s| beam.deflection_at(&full, s) * side.dofs.sign).collect()
            }
            SideKind::Fluid => side
                .dofs
                .dofs
                .iter()
                .map(|d| d.map_or(Complex64::new(0.0, 0.0), |d| u[side.subdomain][d] * side.dofs.sign))
                .collect(),
        }
    }

    /// Fluid-side nodal displacements on interface `i` (side B).
    pub fn fluid_interface_values(&self, i: usize, u: &[ComplexVector]) -> Vec<Complex64> {
        let iface = &self.interfaces[i];
        self.side_values(&iface.b, &iface.descriptor.side_b.coords, u)
    }

    /// Samples every interface at the union of its side and frame nodes.
    pub fn interface_samples(&self, u: &[ComplexVector], u_frame: &[Complex64]) -> Vec<InterfaceSample> {
        let mut out = Vec::new();
        for (k, iface) in self.interfaces.iter().enumerate() {
            let d = &iface.descriptor;
            let va = self.side_values(&iface.a, &d.side_a.coords, u);
            let vb = self.side_values(&iface.b, &d.side_b.coords, u);
            let mut s_all: Vec<f64> = d.side_a.coords.iter().chain(&d.side_b.coords).copied().collect();
            if let Some(f) = &iface.frame {
                s_all.extend_from_slice(f.coords());
            }
            s_all.sort_by(f64::total_cmp);
            s_all.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * d.length());
            let beam = self.beam.as_ref().map(|(_, b)| b);
            for &s in &s_all {
                let eval = |side: &SideModel, coords: &[f64], vals: &[Complex64]| match side.kind {
                    SideKind::Beam => {
                        let b = beam.expect("beam side without a beam");
                        b.deflection_at(&b.expand(&u[side.subdomain]), s) * side.dofs.sign
                    }
                    SideKind::Fluid => interpolate(coords, vals, s),
                };
                let frame = iface.frame.as_ref().map(|f| {
                    let free = f.free_nodes();
                    let mut col = vec![None; f.node_count()];
                    for (c, &n) in free.iter().enumerate() {
                        col[n] = Some(iface.frame_offset + c);
                    }
                    f.shape_values(s.clamp(0.0, f.span()))
                        .map(|sv| {
                            sv.iter()
                                .filter_map(|&(n, v)| col[n].map(|c| u_frame.get(c).copied().unwrap_or_default() * v))
                                .sum()
                        })
                        .unwrap_or_default()
                });
                out.push(InterfaceSample {
                    interface: k,
                    s,
                    side_a: eval(&iface.a, &d.side_a.coords, &va),
                    side_b: eval(&iface.b, &d.side_b.coords, &vb),
                    frame,
                });
            }
        }
        out
    }

    /// Boundary pressure and flux of every fluid region.
    pub fn boundary_states(&self, u: &[ComplexVector]) -> Result<Vec<BoundaryState>> {
        self.fluids
            .iter()
            .map(|f| f.condensed.boundary_state(&u[f.subdomain]))
            .collect()
    }

    /// Total pressure at field points. Each point is evaluated in the first
    /// fluid region that contains it; points outside every region give `None`.
    pub fn field(&self, points: &[Point2D], u: &[ComplexVector]) -> Result<Vec<Option<Complex64>>> {
        let mut out = vec![None; points.len()];
        for (f, state) in self.fluids.iter().zip(self.boundary_states(u)?) {
            let idx: Vec<usize> = (0..points.len())
                .filter(|&i| out[i].is_none() && contains(f, points[i]))
                .collect();
            if idx.is_empty() {
                continue;
            }
            let pts: Vec<Point2D> = idx.iter().map(|&i| points[i]).collect();
            let vals = f.condensed.field(&f.bem, &state, &pts)?;
            for (i, v) in idx.into_iter().zip(vals) {
                out[i] = Some(v);
            }
        }
        Ok(out)
    }

    /// Beam rotation at node `node` (full numbering).
    pub fn beam_rotation(&self, u: &[ComplexVector], node: usize) -> Option<Complex64> {
        let (sub, beam) = self.beam.as_ref()?;
        let full = beam.expand(&u[*sub]);
        full.get(2 * node + THETA).copied()
    }

    /// Beam deflection at every beam node.
    pub fn beam_deflection(&self, u: &[ComplexVector]) -> Option<Vec<Complex64>> {
        let (sub, beam) = self.beam.as_ref()?;
        let full = beam.expand(&u[*sub]);
        Some((0..beam.node_count()).map(|n| full[2 * n + W]).collect())
    }
}

fn interpolate(coords: &[f64], vals: &[Complex64], s: f64) -> Complex64 {
    let n = coords.len();
    if s <= coords[0] {
        return vals[0];
    }
    if s >= coords[n - 1] {
        return vals[n - 1];
    }
    let i = coords.partition_point(|&c| c <= s).clamp(1, n - 1);
    let t = (s - coords[i - 1]) / (coords[i] - coords[i - 1]);
    vals[i - 1] * (1.0 - t) + vals[i] * t
}

/// Even-odd test against the polygon of the region's boundary loops.
fn contains(f: &FluidPart, p: Point2D) -> bool {
    let mesh = &f.bem.mesh;
    let mut inside = false;
    for e in 0..mesh.element_count() {
        let [i, j] = mesh.element(e);
        let (a, b) = (mesh.node(i), mesh.node(j));
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
    }
    match f.region {
        Region::Interior => inside,
        Region::Exterior => !inside,
    }
}

/// Couples a beam (subdomain 0) to the flexible wall of a fluid region
/// (subdomain 1). `wall_nodes` lists the fluid nodes on the wall in order of
/// increasing arc length from the beam start; the fluid normal displacement
/// has sign `fluid_sign` relative to the beam deflection direction.
pub(crate) fn couple_beam_fluid(
    name: &str,
    beam: BeamModel,
    bem: FluidSubdomain,
    region: Region,
    wall_nodes: &[usize],
    bc_extra: FluidBoundaryConditions,
    fluid_sign: f64,
    choice: &CouplingChoice,
) -> Result<BenchmarkModel> {
    let flux = &bem.flux;
    let n_wall = wall_nodes.len();
    if n_wall < 2 {
        return Err(FsiError::DegenerateInterface("flexible wall needs at least two fluid nodes".into()));
    }
    // Ends touch the simply supported beam supports and stay rigid.
    let coupled: Vec<usize> = wall_nodes[1..n_wall - 1]
        .iter()
        .map(|&n| {
            let d = flux.dofs_of_node(n);
            if d.len() == 1 {
                Ok(d[0])
            } else {
                Err(FsiError::InvalidMesh(format!("flexible wall node {n} is a corner")))
            }
        })
        .collect::<Result<_>>()?;
    let mut bc = bc_extra;
    bc.coupled = coupled;
    let condensed = bem.condense(&bc)?;

    let beam_ids: Vec<usize> = (0..beam.node_count()).collect();
    let beam_pts: Vec<Point2D> = beam_ids.iter().map(|&n| beam.node_position(n)).collect();
    let wall_pts: Vec<Point2D> = wall_nodes.iter().map(|&n| bem.mesh.node(n)).collect();
    let descriptor = InterfaceDescriptor::new(beam.start, beam.end, (&beam_ids, &beam_pts), (wall_nodes, &wall_pts))?;

    let side_a = InterfaceDofs {
        dofs: beam_ids.iter().map(|&n| beam.free_index(2 * n + W)).collect(),
        sign: 1.0,
        ndofs: beam.free_dofs().len(),
    };
    let mut fdofs = vec![None; n_wall];
    for (i, d) in fdofs.iter_mut().enumerate().take(n_wall - 1).skip(1) {
        *d = Some(i - 1);
    }
    let side_b = InterfaceDofs {
        dofs: fdofs,
        sign: fluid_sign,
        ndofs: condensed.dofs(),
    };
    let fixed_start = beam.is_fixed(W);
    let fixed_end = beam.is_fixed(2 * (beam.node_count() - 1) + W);

    let structure = Subdomain::structure("beam", &beam)?;
    let fluid = Subdomain::fluid("fluid", &condensed)?;
    let (system, frame) = match choice.method {
        CouplingMethod::Mortar => {
            let ansatz = mortar_ansatz(&descriptor, fixed_start, fixed_end)?;
            let c = assemble_mortar(&descriptor, &beam, side_a.sign, &side_b, &ansatz, choice.trace)?;
            (assemble_mortar_system(structure, fluid, &c)?, None)
        }
        CouplingMethod::Llm => {
            let frame = build_frame(&descriptor, &choice.frame)?.with_fixed_ends(fixed_start, fixed_end);
            let coupling = assemble_llm(&descriptor, &side_a, &side_b, &frame)?;
            let sys = assemble_llm_system(vec![structure, fluid], &[LlmInterface { a: 0, b: 1, coupling }])?;
            (sys, Some(frame))
        }
    };
    let omega = bem.omega;
    let rho = bem.props.rho;
    Ok(BenchmarkModel {
        name: name.to_string(),
        omega,
        system,
        fluids: vec![FluidPart {
            subdomain: 1,
            bem,
            condensed,
            region,
        }],
        beam: Some((0, beam)),
        interfaces: vec![InterfaceModel {
            descriptor,
            a: SideModel {
                subdomain: 0,
                kind: SideKind::Beam,
                dofs: side_a,
            },
            b: SideModel {
                subdomain: 1,
                kind: SideKind::Fluid,
                dofs: side_b,
            },
            frame,
            frame_offset: 0,
        }],
        rho,
    })
}
