use num_complex::Complex64;
use rayon::prelude::*;

use super::model::{couple_beam_fluid, BenchmarkModel, Region, Solution, SolverChoice};
use super::CouplingChoice;
use crate::bem::{FluidBoundaryConditions, FluidProperties, FluidSubdomain, QuadratureOrders};
use crate::error::{FsiError, Result};
use crate::fem::{apply_end_moment, assemble_beam, BeamModel, BeamProperties};
use crate::mesh::{rectangle_with_counts, side, Orientation, Point2D};
use crate::solver::SolverOptions;

/// 10 m x 4 m water-filled cavity whose bottom wall is a simply supported
/// steel beam driven by a harmonic moment at its left end.
#[derive(Clone, Debug, PartialEq)]
pub struct CavityParams {
    pub length: f64,
    pub height: f64,
    /// Fluid elements along the flexible wall; the side walls get half as many.
    pub lh_fluid: usize,
    pub lh_struct: usize,
    pub freq: f64,
    pub moment: Complex64,
    pub beam: BeamProperties,
    pub fluid: FluidProperties,
    pub coupling: CouplingChoice,
    pub orders: QuadratureOrders,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self {
            length: 10.0,
            height: 4.0,
            lh_fluid: 64,
            lh_struct: 64,
            freq: 5.0,
            moment: Complex64::new(1.0, 0.0),
            beam: BeamProperties::steel_wall(),
            fluid: FluidProperties::water(),
            coupling: CouplingChoice::default(),
            orders: QuadratureOrders::default(),
        }
    }
}

impl CavityParams {
    pub fn new(lh_fluid: usize, lh_struct: usize, freq: f64) -> Self {
        Self {
            lh_fluid,
            lh_struct,
            freq,
            ..Self::default()
        }
    }
}

pub fn build_cavity(p: &CavityParams) -> Result<BenchmarkModel> {
    if p.lh_fluid < 4 || p.lh_struct < 4 {
        return Err(FsiError::InvalidArgument(format!(
            "cavity mesh densities must be at least 4, got fluid {} / structure {}",
            p.lh_fluid, p.lh_struct
        )));
    }
    if !(p.freq > 0.0) {
        return Err(FsiError::InvalidArgument(format!("frequency must be positive, got {}", p.freq)));
    }
    let omega = 2.0 * std::f64::consts::PI * p.freq;
    let side_count = (p.lh_fluid / 2).max(1);
    let mesh = rectangle_with_counts(
        Point2D::new(0.0, 0.0),
        p.length,
        p.height,
        [p.lh_fluid, side_count, p.lh_fluid, side_count],
        Orientation::Interior,
    )?;
    // Counterclockwise: the bottom wall runs from node 0 to node lh_fluid.
    let wall: Vec<usize> = (0..=p.lh_fluid).collect();
    debug_assert!(mesh.group_nodes(side::BOTTOM).iter().all(|n| wall.contains(n)));
    let bem = FluidSubdomain::new(mesh, p.fluid, omega, p.orders)?;

    let mut beam = BeamModel::new(
        Point2D::new(0.0, 0.0),
        Point2D::new(p.length, 0.0),
        p.lh_struct,
        p.beam,
        (0.0, 1.0),
    )?
    .simply_supported();
    beam.set_load(apply_end_moment(&beam, 0, p.moment)?)?;
    let beam = assemble_beam(beam, omega)?;
    // The fluid's outward normal on the bottom wall is -y, against the deflection.
    couple_beam_fluid("cavity", beam, bem, Region::Interior, &wall, FluidBoundaryConditions::default(), -1.0, &p.coupling)
}

/// Rotation at the right end of the beam.
pub fn end_rotation(model: &BenchmarkModel, sol: &Solution) -> Result<Complex64> {
    let (_, beam) = model
        .beam
        .as_ref()
        .ok_or_else(|| FsiError::InvalidArgument("model has no beam".into()))?;
    model
        .beam_rotation(&sol.u, beam.node_count() - 1)
        .ok_or_else(|| FsiError::InvalidArgument("rotation DOF missing".into()))
}

/// One frequency of a transfer-function sweep; `rotation` carries the error
/// for frequencies that could not be solved.
#[derive(Debug)]
pub struct SweepPoint {
    pub freq: f64,
    pub rotation: Result<Complex64>,
    pub iterations: usize,
}

/// Solves the cavity at every frequency (concurrently) and records the beam
/// rotation at the right end.
pub fn transfer_function_sweep(
    base: &CavityParams,
    freqs: &[f64],
    solver: SolverChoice,
    opts: &SolverOptions,
    nu: f64,
) -> Vec<SweepPoint> {
    freqs
        .par_iter()
        .map(|&freq| {
            let run = || -> Result<(Complex64, usize)> {
                let mut p = base.clone();
                p.freq = freq;
                let model = build_cavity(&p)?;
                let mut o = *opts;
                if o.scaling.is_none() {
                    o.scaling = model.scaling(nu)?;
                }
                let sol = model.solve(solver, &o)?;
                if !sol.converged {
                    return Err(FsiError::Breakdown {
                        iteration: sol.iterations,
                        reason: "no convergence".into(),
                    });
                }
                Ok((end_rotation(&model, &sol)?, sol.iterations))
            };
            match run() {
                Ok((r, it)) => SweepPoint {
                    freq,
                    rotation: Ok(r),
                    iterations: it,
                },
                Err(e) => SweepPoint {
                    freq,
                    rotation: Err(e),
                    iterations: 0,
                },
            }
        })
        .collect()
}
